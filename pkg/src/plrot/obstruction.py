"""Detection of witness points where the induced circle map has an
exactly-certified irrational rotation number.

A pair (f, g) admits such a witness s in the forward orientation when
s < sf <= sg < s(fg) = s(gf) and the rotation number of f modulo g at s is
irrational; in the mirrored orientation the inequalities reverse and the
pair (f^-1, g^-1) is tested at s(fg).  Groups containing such a pair cannot
embed into Thompson's group F, so a certified witness is a non-embeddability
certificate.  A not-found verdict is only the outcome of a bounded search.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .field import FieldElement
from .plmap import PLMap, commutator, group_support
from .circle import (
    CircleMap,
    CirclePreconditionError,
    IntervalRotation,
    RationalRotation,
    RotationResult,
    SymbolicRotation,
    build_circle_map,
    rotation_number,
)


@dataclass(frozen=True)
class Budget:
    """Resource bounds shared by rotation computations and searches."""

    q_max: int = 64
    n_max: int = 10**6
    node_budget: int = 10**4

    def rotation(self, cm: CircleMap) -> RotationResult:
        return rotation_number(
            cm, q_max=self.q_max, n_max=self.n_max, node_budget=self.node_budget
        )


_SANDWICH_CHECKPOINTS = (10, 100, 1000, 10**4)


@dataclass(frozen=True)
class ObstructionWitness:
    """A certified witness point with an irrational rotation number."""

    f: PLMap
    g: PLMap
    s: FieldElement
    orientation: str  # 'forward' | 'mirrored'
    rotation: SymbolicRotation
    circle: CircleMap
    budget: Budget

    def verify(self, checkpoints: tuple[int, ...] = _SANDWICH_CHECKPOINTS) -> bool:
        """Re-derive everything from scratch through an independent path.

        Rebuilds the circle map, re-checks the orientation inequalities and
        the non-commuting requirement, and checks the symbolic value against
        exact wrap counts: wraps <= n*rho <= wraps + 1 at each checkpoint.
        """
        f, g, s = self.f, self.g, self.s
        if self.orientation == "forward":
            sf, sg = f(s), g(s)
            if not (s < sf and sf <= sg and sg < g(sf) and g(sf) == f(sg)):
                return False
            cm = build_circle_map(f, g, s)
        else:
            sf, sg, sfg = f(s), g(s), g(f(s))
            if not (s > sf and sf >= sg and sg > sfg and sfg == f(sg)):
                return False
            cm = build_circle_map(~f, ~g, sfg)
        if commutator(f, g).is_identity():
            return False
        for n in checkpoints:
            _, wraps = cm.iterate(cm.s, n)
            if not self.rotation.sandwich_holds(wraps, n):
                return False
        return True

    def to_record(self) -> dict:
        return {
            "s": str(self.s),
            "orientation": self.orientation,
            "rotation": self.rotation.to_record(),
            "f": str(self.f),
            "g": str(self.g),
            "budget": {
                "q_max": self.budget.q_max,
                "n_max": self.budget.n_max,
                "node_budget": self.budget.node_budget,
            },
        }


@dataclass(frozen=True)
class PointOutcome:
    """What happened at one candidate point (one or both orientations)."""

    s: FieldElement
    status: str  # 'witness' | 'rational' | 'undecided' | 'invalid'
    orientation: Optional[str] = None
    rotation: Optional[RotationResult] = None
    reason: str = ""
    witness: Optional[ObstructionWitness] = None

    def to_record(self) -> dict:
        return {
            "s": str(self.s),
            "status": self.status,
            "orientation": self.orientation,
            "rotation": None if self.rotation is None else self.rotation.to_record(),
            "reason": self.reason,
        }


def check_obstruction_at(
    f: PLMap, g: PLMap, s: FieldElement, budget: Budget = Budget()
) -> PointOutcome:
    """Decide the witness question at one point, trying both orientations.

    Forward first; if its ordering fails, the mirrored ordering reduces to
    the forward test of (f^-1, g^-1) at s(fg).  A witness is returned only
    when the rotation number resolves to a certified irrational; rational or
    interval outcomes are reported with the result attached.
    """
    if isinstance(s, (int, Fraction)):
        s = FieldElement(s)
    orientation = None
    cm: Optional[CircleMap] = None
    forward_fail = ""
    sf, sg = f(s), g(s)
    try:
        cm = build_circle_map(f, g, s)
        orientation = "forward"
    except CirclePreconditionError as exc:
        forward_fail = exc.failed
    if cm is None:
        # mirrored ordering: s > sf >= sg > s(fg) = s(gf)
        sfg, sgf = g(sf), f(sg)
        if s > sf and sf >= sg and sg > sfg and sfg == sgf:
            cm = build_circle_map(~f, ~g, sfg)
            orientation = "mirrored"
        else:
            return PointOutcome(
                s=s,
                status="invalid",
                reason=f"forward ordering fails at '{forward_fail}'; "
                "mirrored ordering fails as well",
            )
    rot = budget.rotation(cm)
    if isinstance(rot, SymbolicRotation):
        witness = ObstructionWitness(
            f=f, g=g, s=s, orientation=orientation, rotation=rot,
            circle=cm, budget=budget,
        )
        return PointOutcome(
            s=s, status="witness", orientation=orientation, rotation=rot,
            reason="rotation number certified irrational", witness=witness,
        )
    if isinstance(rot, RationalRotation):
        return PointOutcome(
            s=s, status="rational", orientation=orientation, rotation=rot,
            reason="rotation number is rational here",
        )
    assert isinstance(rot, IntervalRotation)
    return PointOutcome(
        s=s, status="undecided", orientation=orientation, rotation=rot,
        reason="rotation number undecided within the budget "
        "(raise q_max / n_max and re-run)",
    )


def candidate_witness_points(f: PLMap, g: PLMap) -> tuple[FieldElement, ...]:
    """Deterministic grid of candidate witness points, ascending.

    Breakpoints of f, g, fg and gf, their images under f, f^-1, g and g^-1,
    the orbital endpoints of the generated group, and the midpoints of
    consecutive candidates.
    """
    base: set[FieldElement] = set()
    for m in (f, g, f * g, g * f):
        base.update(m.breakpoints())
    images: set[FieldElement] = set(base)
    for m in (f, ~f, g, ~g):
        for x in base:
            images.add(m(x))
    for u, v in group_support([f, g]).intervals:
        images.add(u)
        images.add(v)
    lo, hi = f.ambient
    pts = sorted(x for x in images if lo <= x <= hi)
    grid: list[FieldElement] = []
    for left, right in zip(pts, pts[1:]):
        grid.append(left)
        grid.append((left + right) / 2)
    if pts:
        grid.append(pts[-1])
    return tuple(grid)


@dataclass(frozen=True)
class ObstructionSearch:
    """Result of scanning the candidate grid in ascending order."""

    witness: Optional[ObstructionWitness]
    outcomes: tuple[PointOutcome, ...]

    @property
    def found(self) -> bool:
        return self.witness is not None

    def __bool__(self) -> bool:
        return self.found

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for oc in self.outcomes:
            out[oc.status] = out.get(oc.status, 0) + 1
        return out

    def to_record(self) -> dict:
        return {
            "found": self.found,
            "witness": None if self.witness is None else self.witness.to_record(),
            "outcomes": [oc.to_record() for oc in self.outcomes],
        }


def search_obstruction(
    f: PLMap, g: PLMap, budget: Budget = Budget()
) -> ObstructionSearch:
    """Scan candidate points in ascending order; first witness wins.

    Not-found reports the per-candidate outcomes so the caller can raise
    the budget and re-run; it is a bounded verdict, not a proof that no
    witness exists.
    """
    outcomes: list[PointOutcome] = []
    for s in candidate_witness_points(f, g):
        outcome = check_obstruction_at(f, g, s, budget)
        outcomes.append(outcome)
        if outcome.status == "witness":
            return ObstructionSearch(witness=outcome.witness, outcomes=tuple(outcomes))
    return ObstructionSearch(witness=None, outcomes=tuple(outcomes))
