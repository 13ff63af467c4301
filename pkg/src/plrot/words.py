"""Free-group words over named generators, and bounded searches in the
transformation group they generate.

Words are freely reduced tuples of (name, exponent) pairs and evaluate left
to right under the right action, so the word "f g" sends x to (x f) g.
Searches are breadth-first in shortlex order over a fixed generator
ordering; a returned witness is always re-verified exactly, while a miss is
only a bounded-search verdict and never a proof of non-existence.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .field import FieldElement
from .plmap import IntervalSet, PLMap, commutator, group_support

Word = tuple[tuple[str, int], ...]

EMPTY_WORD: Word = ()


class WordError(ValueError):
    """Malformed word expression or unbound generator name."""


def reduce_pairs(pairs: Iterable[tuple[str, int]]) -> Word:
    out: list[tuple[str, int]] = []
    for name, exp in pairs:
        if exp == 0:
            continue
        if out and out[-1][0] == name:
            merged = out[-1][1] + exp
            out.pop()
            if merged != 0:
                out.append((name, merged))
        else:
            out.append((name, exp))
    return tuple(out)


def word_concat(*words: Word) -> Word:
    pairs: list[tuple[str, int]] = []
    for w in words:
        pairs.extend(w)
    return reduce_pairs(pairs)


def word_inverse(w: Word) -> Word:
    return tuple((name, -exp) for name, exp in reversed(w))


def word_power(w: Word, n: int) -> Word:
    if n == 0:
        return EMPTY_WORD
    if n < 0:
        return word_power(word_inverse(w), -n)
    return word_concat(*([w] * n))


def word_conjugate(w: Word, by: Word) -> Word:
    """w^by = by^-1 w by."""
    return word_concat(word_inverse(by), w, by)


def word_commutator(u: Word, v: Word) -> Word:
    """[u, v] = u^-1 v^-1 u v."""
    return word_concat(word_inverse(u), word_inverse(v), u, v)


def word_length(w: Word) -> int:
    return sum(abs(e) for _, e in w)


def word_str(w: Word) -> str:
    if not w:
        return "1"
    parts = []
    for name, exp in w:
        parts.append(name if exp == 1 else f"{name}^{exp}")
    return " ".join(parts)


# -- word expression parser ----------------------------------------------------

_WORD_TOKEN_RE = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<int>-?\d+)"
    r"|(?P<op>\^|\[|\]|\(|\)|,))"
)


def _tokenize_word(text: str) -> list[tuple[str, str]]:
    tokens: list[tuple[str, str]] = []
    pos = 0
    while pos < len(text):
        m = _WORD_TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].strip()
            if not rest:
                break
            raise WordError(f"unexpected character {rest[0]!r} in word {text!r}")
        if m.group("name"):
            tokens.append(("name", m.group("name")))
        elif m.group("int"):
            tokens.append(("int", m.group("int")))
        else:
            tokens.append(("op", m.group("op")))
        pos = m.end()
    return tokens


class _WordParser:
    """Grammar:  seq := item+ ; item := atom ('^' (int | atom))* ;
    atom := name | '(' seq ')' | '[' seq ',' seq ']'.

    The sugar w^v (conjugation) and [u, v] (commutator) is expanded before
    free reduction.
    """

    def __init__(self, tokens: list[tuple[str, str]]) -> None:
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Optional[tuple[str, str]]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> tuple[str, str]:
        tok = self.peek()
        if tok is None:
            raise WordError("unexpected end of word expression")
        self.i += 1
        return tok

    def expect(self, op: str) -> None:
        tok = self.take()
        if tok != ("op", op):
            raise WordError(f"expected {op!r}, found {tok[1]!r}")

    def parse(self) -> Word:
        w = self.seq()
        if self.peek() is not None:
            raise WordError(f"trailing tokens in word: {self.tokens[self.i:]}")
        return w

    def seq(self, stoppers: tuple[str, ...] = ()) -> Word:
        items: list[Word] = []
        while True:
            tok = self.peek()
            if tok is None or (tok[0] == "op" and tok[1] in stoppers):
                break
            if tok[0] == "int":
                raise WordError("an integer may only follow '^'")
            items.append(self.item())
        if not items:
            return EMPTY_WORD
        return word_concat(*items)

    def item(self) -> Word:
        w = self.atom()
        while self.peek() == ("op", "^"):
            self.take()
            tok = self.peek()
            if tok is None:
                raise WordError("dangling '^'")
            if tok[0] == "int":
                self.take()
                w = word_power(w, int(tok[1]))
            else:
                w = word_conjugate(w, self.atom())
        return w

    def atom(self) -> Word:
        tok = self.take()
        if tok[0] == "name":
            return ((tok[1], 1),)
        if tok == ("op", "("):
            w = self.seq(stoppers=(")",))
            self.expect(")")
            return w
        if tok == ("op", "["):
            u = self.seq(stoppers=(",",))
            self.expect(",")
            v = self.seq(stoppers=("]",))
            self.expect("]")
            return word_commutator(u, v)
        raise WordError(f"unexpected token {tok[1]!r} in word")


def parse_word(text: str, names: Optional[Iterable[str]] = None) -> Word:
    """Parse a word like 'f g^-1 [f,g] (f^g)' into reduced (name, exp) pairs."""
    w = _WordParser(_tokenize_word(text)).parse()
    if names is not None:
        known = set(names)
        for name, _ in w:
            if name not in known:
                raise WordError(f"unbound generator {name!r}")
    return w


# -- generator systems ---------------------------------------------------------


class GeneratorSystem:
    """Named PL maps with a common ambient interval, evaluated as words."""

    def __init__(self, bindings: Union[Mapping[str, PLMap], Sequence[tuple[str, PLMap]]]):
        items = list(bindings.items()) if isinstance(bindings, Mapping) else list(bindings)
        if not items:
            raise WordError("a generator system needs at least one generator")
        self.names: tuple[str, ...] = tuple(name for name, _ in items)
        if len(set(self.names)) != len(self.names):
            raise WordError("duplicate generator names")
        self.maps: dict[str, PLMap] = dict(items)
        first = items[0][1]
        for _, m in items[1:]:
            first._require_same_ambient(m)
        self.ambient = first.ambient
        self._identity = PLMap.identity(*self.ambient)

    def __getitem__(self, name: str) -> PLMap:
        try:
            return self.maps[name]
        except KeyError:
            raise WordError(f"unbound generator {name!r}") from None

    def identity_map(self) -> PLMap:
        return self._identity

    def evaluate(self, w: Union[Word, str]) -> PLMap:
        """Exact composite of the word, left to right (right action)."""
        if isinstance(w, str):
            w = parse_word(w, self.names)
        out = self._identity
        for name, exp in w:
            out = out * (self[name] ** exp)
        return out

    def support(self) -> IntervalSet:
        return group_support([self.maps[n] for n in self.names])

    def orbitals(self) -> tuple[tuple[FieldElement, FieldElement], ...]:
        return self.support().intervals

    def reduced_words(self, max_len: int) -> Iterator[Word]:
        """Freely reduced words in shortlex order, lengths 1..max_len.

        Letter order: first generator, its inverse, second generator, ...
        """
        letters = [(n, e) for n in self.names for e in (1, -1)]
        frontier: list[tuple[tuple[str, int], ...]] = [()]
        for _ in range(max_len):
            nxt = []
            for w in frontier:
                for name, e in letters:
                    if w and w[-1] == (name, -e):
                        continue
                    nw = w + ((name, e),)
                    nxt.append(nw)
                    yield reduce_pairs(nw)
            frontier = nxt


# -- search records -------------------------------------------------------------


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a bounded BFS; a miss never refutes existence."""

    word: Optional[Word]
    plmap: Optional[PLMap]
    reason: str
    words_checked: int = 0
    pruned: int = 0
    max_len: int = 0
    detail: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.word is not None

    def __bool__(self) -> bool:
        return self.found

    def __str__(self) -> str:
        if self.found:
            return f"found: {word_str(self.word)} ({self.reason})"
        return f"not-found: {self.reason} (checked {self.words_checked} words)"


def _bfs_maps(
    sys: GeneratorSystem, max_len: int, node_budget: int
) -> Iterator[tuple[Word, PLMap, list]]:
    """BFS over reduced words with incrementally composed maps.

    Yields (word, map, prune-counter) where the shared single-cell counter
    records words skipped by the node budget.
    """
    pruned = [0]
    letters = [(n, e) for n in sys.names for e in (1, -1)]
    letter_maps = {
        (n, e): (sys[n] if e == 1 else ~sys[n]) for n, e in letters
    }
    frontier: list[tuple[tuple[tuple[str, int], ...], PLMap]] = [((), sys.identity_map())]
    for _ in range(max_len):
        nxt = []
        for w, m in frontier:
            for let in letters:
                if w and w[-1] == (let[0], -let[1]):
                    continue
                nm = m * letter_maps[let]
                if len(nm.nodes) > node_budget:
                    pruned[0] += 1
                    continue
                nw = w + (let,)
                nxt.append((nw, nm))
                yield reduce_pairs(nw), nm, pruned
        frontier = nxt


def search_support_avoider(
    sys: GeneratorSystem,
    target: tuple[FieldElement, FieldElement],
    avoided: Sequence[tuple[FieldElement, FieldElement]],
    max_len: int = 8,
    node_budget: int = 10**4,
) -> SearchResult:
    """First word whose support meets `target` but misses every avoided orbital.

    `target` and each avoided interval must be orbitals of the system.
    """
    orbs = set(sys.orbitals())
    if tuple(target) not in orbs:
        raise WordError(f"({target[0]}, {target[1]}) is not an orbital of the system")
    for k in avoided:
        if tuple(k) not in orbs:
            raise WordError(f"({k[0]}, {k[1]}) is not an orbital of the system")
    a, b = target
    for u, v in avoided:
        if u <= a and b <= v:
            return SearchResult(
                None,
                None,
                "impossible: the target orbital lies inside an avoided orbital",
                max_len=max_len,
            )
    checked = 0
    for w, m, pruned in _bfs_maps(sys, max_len, node_budget):
        checked += 1
        supp = m.support()
        if not supp.meets_interval(a, b):
            continue
        if any(supp.meets_interval(u, v) for u, v in avoided):
            continue
        return SearchResult(
            w, m, "support meets the target orbital and avoids the rest",
            words_checked=checked, pruned=pruned[0], max_len=max_len,
            detail={"support": supp},
        )
    return SearchResult(
        None, None, "no witness within the word-length bound",
        words_checked=checked, max_len=max_len,
    )


def search_move_off(
    sys: GeneratorSystem,
    x_lo: FieldElement,
    x_hi: FieldElement,
    max_len: int = 8,
    node_budget: int = 10**4,
    shift_bound: int = 32,
) -> SearchResult:
    """First word g with [x_lo, x_hi] g^k disjoint from [x_lo, x_hi].

    The disjointness is verified exactly for all 0 < |k| <= shift_bound; the
    full for-all-k claim holds whenever g has no fixed points between the
    interval and its images, which the bounded verification evidences but
    does not prove.
    """
    if x_hi < x_lo:
        return SearchResult(
            EMPTY_WORD, sys.identity_map(), "empty set moves off trivially",
            detail={"verified_shift_bound": shift_bound},
        )
    if not any(u < x_lo and x_hi < v for u, v in sys.orbitals()):
        raise WordError(
            f"[{x_lo}, {x_hi}] is not a compact subset of the group support"
        )
    checked = 0
    for w, m, pruned in _bfs_maps(sys, max_len, node_budget):
        checked += 1
        ok = True
        for direction in (m, ~m):
            u, v = direction(x_lo), direction(x_hi)
            if not (v < x_lo or x_hi < u):
                ok = False
                break
        if not ok:
            continue
        # exact verification of the powers within the bound
        lo_pt, hi_pt = x_lo, x_hi
        verified = True
        for _ in range(shift_bound):
            lo_pt, hi_pt = m(lo_pt), m(hi_pt)
            if not (hi_pt < x_lo or x_hi < lo_pt):
                verified = False
                break
        if verified:
            lo_pt, hi_pt = x_lo, x_hi
            inv = ~m
            for _ in range(shift_bound):
                lo_pt, hi_pt = inv(lo_pt), inv(hi_pt)
                if not (hi_pt < x_lo or x_hi < lo_pt):
                    verified = False
                    break
        if not verified:
            continue
        return SearchResult(
            w, m, "all verified powers move the interval off itself",
            words_checked=checked, pruned=pruned[0], max_len=max_len,
            detail={"verified_shift_bound": shift_bound},
        )
    return SearchResult(
        None, None, "no witness within the word-length bound",
        words_checked=checked, max_len=max_len,
    )


def search_bump(
    sys: GeneratorSystem,
    a: FieldElement,
    b: FieldElement,
    max_len: int = 8,
    node_budget: int = 10**4,
) -> SearchResult:
    """First word whose support is exactly the open interval (a, b)."""
    if not a < b:
        raise WordError("need a < b for a bump support")
    if not any(u <= a and b <= v for u, v in sys.orbitals()):
        return SearchResult(
            None, None,
            "impossible: (a, b) is not contained in a single orbital",
        )
    target = IntervalSet([(a, b)])
    checked = 0
    for w, m, pruned in _bfs_maps(sys, max_len, node_budget):
        checked += 1
        if m.support() == target:
            return SearchResult(
                w, m, "support equals (a, b) exactly",
                words_checked=checked, pruned=pruned[0], max_len=max_len,
            )
    return SearchResult(
        None, None, "no witness within the word-length bound",
        words_checked=checked, max_len=max_len,
    )


# -- recognizing pairs that generate Thompson's group F -------------------------


@dataclass(frozen=True)
class ThompsonPairReport:
    """Outcome of the two-generator test for Thompson's group F.

    A pair (a, b) with [a^b, b^a] trivial but ab != ba generates a group
    isomorphic to F.  When both maps are single bumps the geometric
    sufficient condition (nested supports whose overlap is pushed past
    itself) is evaluated as well.
    """

    is_f_pair: bool
    relation_holds: bool
    commute: bool
    geometric_applicable: bool
    geometric_holds: Optional[bool]

    @property
    def criteria_fired(self) -> tuple[str, ...]:
        fired = []
        if self.relation_holds and not self.commute:
            fired.append("algebraic")
        if self.geometric_holds:
            fired.append("geometric")
        return tuple(fired)


def check_thompson_pair(a: PLMap, b: PLMap) -> ThompsonPairReport:
    """Test whether (a, b) generates a copy of Thompson's group F, exactly."""
    a._require_same_ambient(b)
    ab = a * b
    ba = b * a
    commute = ab == ba
    rel = commutator(a.conjugate_by(b), b.conjugate_by(a)).is_identity()
    geo_applicable = False
    geo_holds: Optional[bool] = None
    supp_a, supp_b = a.orbitals(), b.orbitals()
    if len(supp_a) == 1 and len(supp_b) == 1:
        geo_applicable = True
        (s0, t0), (s1, t1) = supp_a[0], supp_b[0]
        geo_holds = s0 < s1 < t0 < t1 and b(t0) <= a(s1)
    return ThompsonPairReport(
        is_f_pair=rel and not commute,
        relation_holds=rel,
        commute=commute,
        geometric_applicable=geo_applicable,
        geometric_holds=geo_holds,
    )
