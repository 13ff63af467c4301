"""Exact constructions of the classical generator families.

Four entries: the standard two-generator model of Thompson's group F,
Cleary's golden-ratio group F_tau, Stein's groups F_{p,q}, and the group
generated by F together with an irrational translate of F.  Every node and
slope is an exact FieldElement, and each entry records where a witness point
with an exactly known rotation number lives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .field import (
    TAU,
    FieldContext,
    FieldElement,
    RingSpec,
    ring_member,
)
from .plmap import PLMap
from .words import GeneratorSystem

Q = Fraction


class CatalogError(ValueError):
    """Unknown entry or invalid entry parameters."""


@dataclass(frozen=True)
class ExpectedWitness:
    """Where an obstruction witness is known to sit, and its rotation value."""

    s: FieldElement
    orientation: str  # 'forward'
    kind: str  # 'quadratic' | 'log-ratio'
    value: Optional[FieldElement] = None
    log_arg: Optional[Fraction] = None
    log_base: Optional[Fraction] = None

    def value_literal(self) -> str:
        if self.value is not None:
            return str(self.value)
        return f"log_{self.log_base}({self.log_arg})"


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    parameters: tuple
    generators: tuple[tuple[str, PLMap], ...]
    ring: RingSpec
    pair_names: Optional[tuple[str, str]]
    expected: Optional[ExpectedWitness]
    notes: str = ""

    def map(self, name: str) -> PLMap:
        for n, m in self.generators:
            if n == name:
                return m
        raise CatalogError(f"entry {self.name!r} has no generator {name!r}")

    def system(self) -> GeneratorSystem:
        return GeneratorSystem(self.generators)

    def pair(self) -> tuple[PLMap, PLMap]:
        if self.pair_names is None:
            raise CatalogError(f"entry {self.name!r} has no distinguished pair")
        return self.map(self.pair_names[0]), self.map(self.pair_names[1])

    def ring_violations(self) -> list[str]:
        """Breakpoint data or slopes outside the entry's coefficient ring.

        Interior nodes carry the singularity data; ambient endpoints are
        only bookkeeping.  Generators listed in the shifted-membership table
        are instead checked by translated_ring_violations.
        """
        out = []
        for name, m in self.generators:
            if name in _SHIFTED_MEMBERSHIP.get(self.name, ()):
                continue  # dyadic only after shifting by xi; checked separately
            out.extend(_map_ring_violations(name, m, self.ring))
        return out

    def __str__(self) -> str:
        gens = ", ".join(n for n, _ in self.generators)
        params = "" if not self.parameters else f"({', '.join(map(str, self.parameters))})"
        return f"{self.name}{params}: generators {gens}, ring {self.ring}"


# generator names whose ring data only becomes dyadic after shifting by xi
_SHIFTED_MEMBERSHIP: dict[str, tuple[str, ...]] = {"translated_F": ("f", "g1", "g")}


def _map_ring_violations(name: str, m: PLMap, ring: RingSpec) -> list[str]:
    out = []
    for x, y in m.nodes[1:-1]:
        for v, which in ((x, "x"), (y, "y")):
            if not ring_member(v, ring, "breakpoint"):
                out.append(f"{name}: node {which}-coordinate {v}")
    for sl in m.slopes():
        if not ring_member(sl, ring, "slope"):
            out.append(f"{name}: slope {sl}")
    return out


def translated_ring_violations(entry: CatalogEntry) -> list[str]:
    """Membership checks for the translated family.

    g0 must have dyadic data as it stands; f and g1 must have dyadic data
    after conjugating by t -> t + xi, which places them in the translated
    copy of F.
    """
    if entry.name != "translated_F":
        raise CatalogError("only meaningful for translated_F entries")
    xi = entry.parameters[0]
    dyadic = RingSpec.dyadic()
    out = _map_ring_violations("g0", entry.map("g0"), dyadic)
    for name in ("f", "g1"):
        out.extend(
            _map_ring_violations(
                f"{name} shifted by xi", shifted_by(entry.map(name), xi), dyadic
            )
        )
    return out


def standard_F() -> CatalogEntry:
    """The standard model of Thompson's group F on [0, 1].

    Generators x0, x1 with dyadic breakpoints and power-of-two slopes; x1 is
    the half-scale copy of x0 living on [1/2, 1].
    """
    x0 = PLMap([(0, 0), (Q(1, 4), Q(1, 2)), (Q(1, 2), Q(3, 4)), (1, 1)])
    x1 = PLMap(
        [
            (0, 0),
            (Q(1, 2), Q(1, 2)),
            (Q(5, 8), Q(3, 4)),
            (Q(3, 4), Q(7, 8)),
            (1, 1),
        ]
    )
    return CatalogEntry(
        name="standard_F",
        parameters=(),
        generators=(("x0", x0), ("x1", x1)),
        ring=RingSpec.dyadic(),
        pair_names=None,
        expected=None,
        notes="dyadic breakpoints, power-of-two slopes; no obstruction exists",
    )


def cleary_Ftau() -> CatalogEntry:
    """Cleary's golden-ratio group F_tau: breakpoints in Z[tau], slopes
    powers of tau, where tau is the golden ratio (tau^2 = tau + 1).

    The distinguished pair (f, g) admits a witness at s = tau^-3 whose
    rotation number is exactly tau^-1.
    """
    t1 = TAU ** -1
    t2 = TAU ** -2
    t3 = TAU ** -3
    t4 = TAU ** -4
    one = FieldElement(1, 0, 5)
    zero = FieldElement(0, 0, 5)
    f = PLMap([(zero, zero), (t3, t2), (t1, t1 + t4), (one, one)])
    g = PLMap([(zero, zero), (t4, t2), (t1, t1 + t3), (one, one)])
    return CatalogEntry(
        name="cleary_Ftau",
        parameters=(),
        generators=(("f", f), ("g", g)),
        ring=RingSpec.golden(),
        pair_names=("f", "g"),
        expected=ExpectedWitness(
            s=t3, orientation="forward", kind="quadratic", value=t1
        ),
        notes="f scales by tau below tau^-3, g by tau^2 below tau^-4; both "
        "translate on the middle piece",
    )


def stein_Fpq(p: int, q: int) -> CatalogEntry:
    """Generators of Stein's group F_{p,q} with slopes p and q at the origin.

    Requires 1 < p < q coprime.  Each generator has a single interior
    breakpoint: slope p (resp. q) on the initial piece, then the
    compensating power of p (resp. q).  Near the origin the pair scales by
    (p, q) about 0, so the rotation number at a small witness point is
    log_q(p), irrational because p and q are multiplicatively independent.
    """
    ring = RingSpec.stein(p, q)  # validates the parameters
    f = PLMap([(0, 0), (Q(1, p + 1), Q(p, p + 1)), (1, 1)])
    g = PLMap([(0, 0), (Q(1, q + 1), Q(q, q + 1)), (1, 1)])
    # witness: the largest power of two with s*q*(q+1) <= 1, so that the
    # whole circle [s, sg] sits inside both initial linear pieces
    k = 1
    while (1 << k) < q * (q + 1):
        k += 1
    s = FieldElement(Q(1, 1 << k))
    return CatalogEntry(
        name="stein_Fpq",
        parameters=(p, q),
        generators=(("f", f), ("g", g)),
        ring=ring,
        pair_names=("f", "g"),
        expected=ExpectedWitness(
            s=s,
            orientation="forward",
            kind="log-ratio",
            log_arg=Q(p),
            log_base=Q(q),
        ),
        notes="one interior breakpoint per generator; any realization with "
        "slopes p, q near 0 works equally well",
    )


def translated_F(xi: FieldElement) -> CatalogEntry:
    """The group generated by F and its conjugate under t -> t - xi.

    Takes an irrational 0 < xi < 1.  The ambient interval is [-1, 1]; all
    three generators extend by the identity.  n is the smallest integer with
    2^-n < xi < 1 - 2^-n+2.  On [0, (1-xi)/2] the maps f and g = g0 g1 act
    as translations by 2^-n and (1-xi)/2, so the rotation number at s = 0 is
    2^(-n+1)/(1-xi), irrational exactly when xi is.
    """
    if not isinstance(xi, FieldElement):
        raise CatalogError("xi must be a FieldElement")
    if xi.is_rational():
        raise CatalogError(f"xi must be irrational, got {xi}")
    zero = FieldElement(0, 0, xi.d)
    one = FieldElement(1, 0, xi.d)
    if not (zero < xi < one):
        raise CatalogError(f"xi must lie strictly between 0 and 1, got {xi}")
    n = doubling_depth(xi)
    half = Q(1, 2)
    pn = Q(1, 2**n)  # 2^-n
    f = PLMap(
        [
            (-one, -one),
            (-xi, -xi),
            (pn - xi, 2 * pn - xi),
            (1 - 2 * pn - xi, 1 - pn - xi),
            (one - xi, one - xi),
            (one, one),
        ]
    )
    g0 = PLMap(
        [
            (-one, -one),
            (zero, zero),
            (half - pn / 2, 1 - pn),
            (half, 1 - pn / 2),
            (one, one),
        ]
    )
    g1 = PLMap(
        [
            (-one, -one),
            (-xi, -xi),
            (pn / 2 - xi, half - xi),
            (pn - xi, pn / 2 + half - xi),
            (one - xi, one - xi),
            (one, one),
        ]
    )
    g = g0 * g1
    rotation = (2 * pn) / (one - xi)
    return CatalogEntry(
        name="translated_F",
        parameters=(xi,),
        generators=(("f", f), ("g0", g0), ("g1", g1), ("g", g)),
        ring=RingSpec.dyadic(),
        pair_names=("f", "g"),
        expected=ExpectedWitness(
            s=zero,
            orientation="forward",
            kind="quadratic",
            value=rotation,
        ),
        notes=f"doubling depth n = {n}; g0 lies in F while f and g1 are "
        "conjugates of F elements under t -> t - xi",
    )


def doubling_depth(xi: FieldElement) -> int:
    """Smallest n with 2^-n < xi < 1 - 2^-n+2 (both checked exactly)."""
    n = 1
    while not (Q(1, 2**n) < xi and xi < 1 - Q(4, 2**n)):
        n += 1
        if n > 1024:  # unreachable for 0 < xi < 1; guards a bad argument
            raise CatalogError(f"no valid doubling depth for xi = {xi}")
    return n


def shifted_by(m: PLMap, delta: FieldElement) -> PLMap:
    """Conjugate of m under t -> t + delta (nodes shift in both coordinates)."""
    return PLMap([(x + delta, y + delta) for x, y in m.nodes])


_BUILDERS: dict[str, Callable] = {
    "standard_F": standard_F,
    "cleary_Ftau": cleary_Ftau,
    "stein_Fpq": stein_Fpq,
    "translated_F": translated_F,
}

ENTRY_NAMES = tuple(_BUILDERS)

ENTRY_SIGNATURES = {
    "standard_F": "",
    "cleary_Ftau": "",
    "stein_Fpq": "(p, q) coprime integers with 1 < p < q",
    "translated_F": "(xi) irrational field element with 0 < xi < 1",
}


def get_entry(name: str, args: Sequence = ()) -> CatalogEntry:
    """Build a catalog entry by name, e.g. get_entry('stein_Fpq', (2, 3))."""
    if name not in _BUILDERS:
        raise CatalogError(f"unknown catalog entry {name!r}; know {ENTRY_NAMES}")
    try:
        return _BUILDERS[name](*args)
    except TypeError as exc:
        raise CatalogError(
            f"bad parameters for {name}{ENTRY_SIGNATURES[name]}: {exc}"
        ) from None
