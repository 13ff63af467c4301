"""Circle maps induced by a pair of interval homeomorphisms, and their
rotation numbers.

Given f, g and a point s with s < sf <= sg < s(fg) = s(gf), the arc
C = [s, sg) becomes a circle of circumference sg - s, and

    x  |->  xf          if xf < sg
    x  |->  (xf)g^-1    otherwise

is an orientation-preserving homeomorphism of C.  Everything here is exact:
the map is stored as a piecewise-linear lift with FieldElement nodes, and a
rotation number is reported either as an exact rational with a periodic-point
certificate, as a certified irrational in symbolic form, or as a rational
interval of width 1/n.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .field import FieldElement, multiplicative_dependence
from .plmap import PLMap, commutator

Q = Fraction


class CirclePreconditionError(ValueError):
    """The ordering s < sf <= sg < s(fg) = s(gf) fails; carries which part."""

    def __init__(self, message: str, failed: str) -> None:
        super().__init__(message)
        self.failed = failed


class ResourceBudgetError(RuntimeError):
    """A node or iteration budget ran out before any branch finished."""


def _collinear(p, q, r) -> bool:
    return (r[1] - p[1]) * (q[0] - p[0]) == (q[1] - p[1]) * (r[0] - p[0])


@dataclass(frozen=True)
class CircleLift:
    """Lift of a circle homeomorphism of [s, sg) to the line.

    Nodes run over the fundamental domain [s, sg]; values increase strictly
    and satisfy value(sg) = value(s) + circumference.  The lift is extended
    to all reals by equivariance under translation by the circumference.
    """

    s: FieldElement
    sg: FieldElement
    nodes: tuple[tuple[FieldElement, FieldElement], ...]

    def __post_init__(self) -> None:
        ns = self.nodes
        if len(ns) < 2 or ns[0][0] != self.s or ns[-1][0] != self.sg:
            raise ValueError("lift nodes must cover [s, sg]")
        for (x0, y0), (x1, y1) in zip(ns, ns[1:]):
            if not (x0 < x1 and y0 < y1):
                raise ValueError("lift nodes must increase strictly")
        if ns[-1][1] != ns[0][1] + (self.sg - self.s):
            raise ValueError("lift must shift the seam by one circumference")

    @property
    def circumference(self) -> FieldElement:
        return self.sg - self.s

    @staticmethod
    def _sweep(nodes: list) -> list:
        out = [nodes[0]]
        for i in range(1, len(nodes) - 1):
            if _collinear(nodes[i - 1], nodes[i], nodes[i + 1]):
                continue
            out.append(nodes[i])
        out.append(nodes[-1])
        return out

    @classmethod
    def build(cls, s, sg, nodes) -> CircleLift:
        return cls(s, sg, tuple(cls._sweep(sorted(nodes))))

    def value(self, x: FieldElement) -> FieldElement:
        """Lift value on the fundamental domain [s, sg]."""
        ns = self.nodes
        lo, hi = 0, len(ns) - 1
        if x == ns[0][0]:
            return ns[0][1]
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ns[mid][0] <= x:
                lo = mid
            else:
                hi = mid
        (x0, y0), (x1, y1) = ns[lo], ns[lo + 1]
        if x == x0:
            return y0
        return y0 + (x - x0) * (y1 - y0) / (x1 - x0)

    def value_ext(self, x: FieldElement) -> FieldElement:
        """Lift value anywhere, via equivariance."""
        length = self.circumference
        k = math.floor((x - self.s) / length)
        return self.value(x - k * length) + k * length

    def compose(self, then: CircleLift) -> CircleLift:
        """Lift of (self followed by then)."""
        if self.s != then.s or self.sg != then.sg:
            raise ValueError("lifts live on different circles")
        length = self.circumference
        xs = {x for x, _ in self.nodes}
        break_vals = [x for x, _ in then.nodes[:-1]]
        for (u, yu), (v, yv) in zip(self.nodes, self.nodes[1:]):
            slope = (yv - yu) / (v - u)
            for bx in break_vals:
                k_lo = math.floor((yu - bx) / length)
                k_hi = math.floor((yv - bx) / length) + 1
                for k in range(k_lo, k_hi + 1):
                    t = bx + k * length
                    if yu < t < yv:
                        xs.add(u + (t - yu) / slope)
        nodes = [(x, then.value_ext(self.value(x))) for x in sorted(xs)]
        return CircleLift(self.s, self.sg, tuple(self._sweep(nodes)))

    def displacement_bounds(self) -> tuple[FieldElement, FieldElement]:
        """Exact min and max of value(x) - x (attained at nodes)."""
        ds = [y - x for x, y in self.nodes]
        lo = hi = ds[0]
        for d in ds[1:]:
            if d < lo:
                lo = d
            if d > hi:
                hi = d
        return lo, hi

    def periodic_point(self) -> Optional[tuple[FieldElement, int]]:
        """First (x0, wrap) with value(x0) = x0 + wrap * circumference."""
        length = self.circumference
        for (u, yu), (v, yv) in zip(self.nodes, self.nodes[1:]):
            du, dv = yu - u, yv - v
            lo, hi = (du, dv) if du < dv else (dv, du)
            k_lo = math.ceil(lo / length)
            k_hi = math.floor(hi / length)
            for p in range(k_lo, k_hi + 1):
                target = p * length
                if du == dv:
                    if du == target:
                        return u, p
                    continue
                slope = (yv - yu) / (v - u)
                # solve slope*x + (yu - slope*u) = x + target
                x_star = (target - yu + slope * u) / (slope - 1)
                if u <= x_star <= v:
                    if x_star == self.sg:
                        continue  # same circle point as the seam, seen first
                    return x_star, p
        return None


# -- rotation results ---------------------------------------------------------


@dataclass(frozen=True)
class RationalRotation:
    """Exact rotation number p/q certified by a periodic point.

    The certificate point satisfies gamma^q(x0) = x0 with total lift
    displacement p * circumference.  p/q is in lowest terms and lies in
    [0, 1]; the value 1 can only occur when the seam itself wraps on every
    step and equals 0 modulo one.
    """

    p: int
    q: int
    certificate_x: FieldElement

    @property
    def kind(self) -> str:
        return "rational"

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    def to_record(self) -> dict:
        return {
            "kind": "rational",
            "p": self.p,
            "q": self.q,
            "certificate_x": str(self.certificate_x),
            "value_literal": f"{self.p}/{self.q}",
            "proof_tag": None,
            "lo": None,
            "hi": None,
            "n": None,
        }

    def __str__(self) -> str:
        return f"rational: {self.p}/{self.q} (certificate x0 = {self.certificate_x})"


@dataclass(frozen=True)
class SymbolicRotation:
    """Certified irrational rotation number in closed form.

    Either a quadratic irrational (an exact FieldElement) or log_base(arg)
    for multiplicatively independent positive rationals arg, base.
    """

    proof: str  # 'quadratic-irrational' | 'multiplicatively-independent'
    value: Optional[FieldElement] = None
    log_arg: Optional[Fraction] = None
    log_base: Optional[Fraction] = None

    @property
    def kind(self) -> str:
        return "irrational"

    def value_literal(self) -> str:
        if self.value is not None:
            return str(self.value)
        return f"log_{self.log_base}({self.log_arg})"

    def to_record(self) -> dict:
        return {
            "kind": "irrational",
            "p": None,
            "q": None,
            "certificate_x": None,
            "value_literal": self.value_literal(),
            "proof_tag": self.proof,
            "lo": None,
            "hi": None,
            "n": None,
        }

    def sandwich_holds(self, wraps: int, n: int) -> bool:
        """Exact check of wraps <= n * rho <= wraps + 1."""
        if self.value is not None:
            rho = self.value
            return wraps <= n * rho and n * rho <= wraps + 1
        a, b = self.log_arg, self.log_base
        assert a is not None and b is not None and a > 1 and b > 1
        # wraps <= n log_b a  <=>  b^wraps <= a^n   (b > 1)
        return b**wraps <= a**n and a**n <= b ** (wraps + 1)

    def __str__(self) -> str:
        tag = "quadratic" if self.proof == "quadratic-irrational" else self.proof
        return f"irrational: {self.value_literal()} ({tag})"


@dataclass(frozen=True)
class IntervalRotation:
    """Certified enclosure of the rotation number from wrap counts."""

    lo: Fraction
    hi: Fraction
    iterations: int

    @property
    def kind(self) -> str:
        return "interval"

    def to_record(self) -> dict:
        return {
            "kind": "interval",
            "p": None,
            "q": None,
            "certificate_x": None,
            "value_literal": None,
            "proof_tag": None,
            "lo": str(self.lo),
            "hi": str(self.hi),
            "n": self.iterations,
        }

    def __str__(self) -> str:
        return f"interval: [{self.lo}, {self.hi}] after {self.iterations} iterations"


RotationResult = Union[RationalRotation, SymbolicRotation, IntervalRotation]


# -- the circle map -----------------------------------------------------------


class CircleMap:
    """The circle map of f modulo g at s, with exact dynamics."""

    __slots__ = ("f", "g", "s", "sf", "sg", "lift", "_g_inv")

    def __init__(self, f: PLMap, g: PLMap, s: FieldElement) -> None:
        f._require_same_ambient(g)
        if isinstance(s, (int, Fraction)):
            s = FieldElement(s)
        sf = f(s)
        sg = g(s)
        sfg = g(sf)
        sgf = f(sg)
        if not s < sf:
            raise CirclePreconditionError(
                f"need s < sf: s = {s}, sf = {sf}", "s < sf"
            )
        if not sf <= sg:
            raise CirclePreconditionError(
                f"need sf <= sg: sf = {sf}, sg = {sg}", "sf <= sg"
            )
        if not sg < sfg:
            raise CirclePreconditionError(
                f"need sg < s(fg): sg = {sg}, s(fg) = {sfg}", "sg < s(fg)"
            )
        if sfg != sgf:
            raise CirclePreconditionError(
                f"need s(fg) = s(gf): s(fg) = {sfg}, s(gf) = {sgf}", "s(fg) = s(gf)"
            )
        g_inv = ~g
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "sf", sf)
        object.__setattr__(self, "sg", sg)
        object.__setattr__(self, "_g_inv", g_inv)
        object.__setattr__(self, "lift", self._build_lift())

    def __setattr__(self, name, value) -> None:
        raise AttributeError("CircleMap is immutable")

    @property
    def circumference(self) -> FieldElement:
        return self.sg - self.s

    def _build_lift(self) -> CircleLift:
        s, sg = self.s, self.sg
        length = sg - s
        x_star = self.f.preimage(sg)  # seam of the case split; lies in [s, sg)
        xs = {s, sg, x_star}
        for x in self.f.breakpoints():
            if s < x < sg:
                xs.add(x)
        for _, gy in self.g.nodes:
            # breakpoints of g^-1 pulled back through f (wrap branch only,
            # but redundant points are swept away)
            if self.f(s) <= gy <= self.f(sg):
                xb = self.f.preimage(gy)
                if s < xb < sg:
                    xs.add(xb)
        nodes = []
        for x in sorted(xs):
            y = self.f(x)
            if x < x_star:
                nodes.append((x, y))
            else:
                nodes.append((x, self._g_inv(y) + length))
        return CircleLift(s, sg, tuple(CircleLift._sweep(nodes)))

    def apply(self, x: FieldElement) -> tuple[FieldElement, int]:
        """One forward step: (image point in [s, sg), wrap increment)."""
        y = self.f(x)
        if y < self.sg:
            return y, 0
        return self._g_inv(y), 1

    def apply_inverse(self, y: FieldElement) -> tuple[FieldElement, int]:
        if y >= self.sf:
            return self.f.preimage(y), 0
        return self.f.preimage(self.g(y)), -1

    def iterate(self, x: FieldElement, n: int) -> tuple[FieldElement, int]:
        """n-fold image of x with the signed total wrap count.

        The lift displacement over the orbit is
        wraps * circumference + (point - x).
        """
        if isinstance(x, (int, Fraction)):
            x = FieldElement(x)
        if not (self.s <= x < self.sg):
            raise ValueError(f"base point {x} outside the circle [{self.s}, {self.sg})")
        wraps = 0
        step = self.apply if n >= 0 else self.apply_inverse
        for _ in range(abs(n)):
            x, w = step(x)
            wraps += w
        return x, wraps

    def orbit(self, x: FieldElement, n: int):
        """Yield the first n forward images of x (excluding x itself)."""
        for _ in range(n):
            x, _ = self.apply(x)
            yield x

    # -- symbolic detectors ----------------------------------------------------

    def translation_form(self) -> Optional[tuple[FieldElement, FieldElement]]:
        """(xi, eta) when f, g act as translations by xi < eta on [s, sg].

        In that case the circle map is a rigid rotation and the rotation
        number equals xi/eta exactly.
        """
        s, sg = self.s, self.sg
        lf = self.f.linear_on(s, sg)
        lg = self.g.linear_on(s, sg)
        if lf is None or lg is None:
            return None
        one = FieldElement(1, 0, s.d)
        if lf[0] != one or lg[0] != one:
            return None
        xi = self.sf - s
        eta = sg - s
        if not xi < eta:
            return None
        return xi, eta

    def scaling_form(self) -> Optional[tuple[FieldElement, FieldElement, FieldElement]]:
        """(a, b, s0) when f, g scale by 1 < a < b about a shared fixed point.

        Both maps must be linear on [s0, sg] with the common fixed point
        s0 <= s; the rotation number is then log_b(a) exactly.
        """
        s, sg = self.s, self.sg
        lf = self.f.linear_on(s, sg)
        lg = self.g.linear_on(s, sg)
        if lf is None or lg is None:
            return None
        a, cf = lf
        b, cg = lg
        one = FieldElement(1, 0, s.d)
        if not (one < a and a < b):
            return None
        s0 = cf / (one - a)
        if cg / (one - b) != s0 or not s0 < s:
            return None
        # require genuine linearity all the way down to the fixed point
        if self.f.linear_on(s0, sg) is None or self.g.linear_on(s0, sg) is None:
            return None
        return a, b, s0

    def __repr__(self) -> str:
        return f"CircleMap(s={self.s}, sg={self.sg}, pieces={len(self.lift.nodes) - 1})"


def build_circle_map(f: PLMap, g: PLMap, s) -> CircleMap:
    """Construct the circle map of f modulo g at s (exact preconditions)."""
    return CircleMap(f, g, s)


# -- rotation number ----------------------------------------------------------

_BASE_POINT_RNG_SEED = 0x5EED
_DEPENDENCE_EXPONENT_BOUND = 64


def _verified_rational(cm: CircleMap, x0: FieldElement, p: int, q: int) -> RationalRotation:
    pt, wraps = cm.iterate(x0, q)
    if pt != x0 or wraps != p:
        raise AssertionError(
            f"certificate failed to re-verify: {q}-fold image of {x0} is {pt}, wraps {wraps}"
        )
    if math.gcd(p, q) != 1:
        raise AssertionError(f"non-reduced certificate {p}/{q}")
    return RationalRotation(p=p, q=q, certificate_x=x0)


def _unit_power_dependence(
    a: FieldElement, b: FieldElement, bound: int
) -> Optional[tuple[int, int]]:
    """(k, l) with a**l = b**k for possibly irrational slopes, small exponents."""
    one = FieldElement(1, 0, a.d)
    pa, pb = a, b
    l, k = 1, 1
    while l <= bound and k <= bound:
        if pa == pb:
            return k, l
        if pa < pb:
            l += 1
            pa = pa * a
        else:
            k += 1
            pb = pb * b
    return None


def rotation_number(
    cm: CircleMap,
    q_max: int = 64,
    n_max: int = 10**6,
    node_budget: int = 10**4,
) -> RotationResult:
    """Rotation number of the circle map: exact, symbolic, or an interval.

    Strategy: (1) symbolic shortcut when the pair acts by translations or by
    scalings about a shared fixed point, with exact rationality decisions;
    (2) otherwise search gamma^q, q <= q_max, for a periodic point, solving
    each linear piece of the exact lift in closed form; (3) otherwise an
    interval [wraps/n, (wraps+1)/n] from exact wrap counts, intersected over
    the seam and three deterministic sample base points.
    """
    if q_max < 1 or n_max < 1:
        raise ValueError("budgets must be at least 1")

    tf = cm.translation_form()
    if tf is not None:
        xi, eta = tf
        ratio = xi / eta
        if ratio.is_rational():
            fr = ratio.as_fraction()
            return _verified_rational(cm, cm.s, fr.numerator, fr.denominator)
        return SymbolicRotation(proof="quadratic-irrational", value=ratio)

    sc = cm.scaling_form()
    if sc is not None:
        a, b, _ = sc
        if a.is_rational() and b.is_rational():
            dep = multiplicative_dependence(a.as_fraction(), b.as_fraction())
            if dep is None:
                return SymbolicRotation(
                    proof="multiplicatively-independent",
                    log_arg=a.as_fraction(),
                    log_base=b.as_fraction(),
                )
            return _verified_rational(cm, cm.s, dep.numerator, dep.denominator)
        hit = _unit_power_dependence(a, b, _DEPENDENCE_EXPONENT_BOUND)
        if hit is not None:
            k, l = hit
            g = math.gcd(k, l)
            return _verified_rational(cm, cm.s, k // g, l // g)
        # rationality of log_b(a) undecided for these slopes: fall through

    # periodic-orbit search on exact powers of the lift
    lift_pow: Optional[CircleLift] = None
    for q in range(1, q_max + 1):
        lift_pow = cm.lift if lift_pow is None else lift_pow.compose(cm.lift)
        if len(lift_pow.nodes) > node_budget:
            break  # node budget reached; fall back to the interval branch
        hit = lift_pow.periodic_point()
        if hit is not None:
            x0, p = hit
            return _verified_rational(cm, x0, p, q)

    # interval from exact wrap counts: for each base point x the integer
    # part of the lift displacement (gamma^n(x) - x) / circumference
    # sandwiches n*rho whenever the map has no periodic orbit, which is the
    # only way this branch is reached below the q_max bound; all base points
    # then agree and the intersection is sound
    n = n_max
    rng = random.Random(_BASE_POINT_RNG_SEED)
    length = cm.circumference
    bases = [cm.s]
    for _ in range(3):
        r = Fraction(rng.randrange(1, 64), 64)
        bases.append(cm.s + length * r)
    intervals = []
    for x0 in bases:
        pt, wraps = cm.iterate(x0, n)
        if pt < x0:
            wraps -= 1  # floor of the displacement in circumference units
        intervals.append((Fraction(wraps, n), Fraction(wraps + 1, n)))
    lo = max(iv[0] for iv in intervals)
    hi = min(iv[1] for iv in intervals)
    if lo > hi:
        # only possible for a rational rotation number whose period exceeds
        # q_max; keep the seam-based window, reported as undecided anyway
        lo, hi = intervals[0]
    return IntervalRotation(lo=lo, hi=hi, iterations=n)


def conjugated_pair(f: PLMap, g: PLMap, h: PLMap) -> tuple[PLMap, PLMap]:
    """(f^h, g^h): conjugating both maps conjugates the induced circle map."""
    return f.conjugate_by(h), g.conjugate_by(h)


def noncommuting_witness_holds(f: PLMap, g: PLMap) -> bool:
    """Maps inducing an irrational rotation number can never commute."""
    return not commutator(f, g).is_identity()
