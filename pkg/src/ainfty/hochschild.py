"""Hochschild chains of a finite A-infinity category and the shifted action.

A Hochschild word is a tuple ``(g_d, ..., g_1)`` of generator indices that is
composable and closes up: the source of ``g_1`` is the target of ``g_d``.
Its degree is ``sum deg(g_i) + 1 - d`` and the differential raises it by one.
Chains are dicts ``{word: 1}`` (sets with XOR semantics).
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import mpmath

from . import f2linalg as f2
from .category import AInftyStructure, Violation, Word
from .complexes import FiniteComplex, TableEntry, stability_table
from .errors import NotACycle, NotRepresentableAtLengthK

HHChain = dict[Word, int]


def is_cyclic_word(C: AInftyStructure, word: Sequence[int]) -> bool:
    if not word or not C.is_composable(word):
        return False
    return C.generators[word[-1]].source == C.generators[word[0]].target


def hochschild_degree(C: AInftyStructure, word: Sequence[int]) -> int:
    return sum(C.generators[i].degree for i in word) + 1 - len(word)


def cyclic_words(C: AInftyStructure, max_length: int) -> list[Word]:
    """All cyclically composable words of length ``1..max_length``."""
    out = []
    for d in range(1, max_length + 1):
        for w in C.composable_words(d):
            if C.generators[w[-1]].source == C.generators[w[0]].target:
                out.append(w)
    return out


def _xor_into(acc: HHChain, word: Word) -> None:
    if word in acc:
        del acc[word]
    else:
        acc[word] = 1


def hochschild_differential(C: AInftyStructure, word: Sequence[int]) -> HHChain:
    """Insert ``mu`` on every cyclically contiguous block.

    Blocks containing the first entry ``g_d`` may wrap around through
    ``g_1``; the output then becomes the new first entry and the untouched
    entries follow in order.  Blocks away from ``g_d`` are contracted in
    place.  A block covering the whole word is taken once per rotation.
    """
    w = tuple(word)
    d = len(w)
    acc: HHChain = {}
    mu = C.mu
    for i in range(d):
        for j in range(d - i):
            if i + j + 1 > C.max_arity:
                continue
            out = mu.get(w[d - i:] + w[: j + 1], 0)
            rest = w[j + 1: d - i]
            for o in f2.bits(out):
                _xor_into(acc, (o,) + rest)
    for a in range(1, d):
        for b in range(a + 1, min(d, a + C.max_arity) + 1):
            out = mu.get(w[a:b], 0)
            for o in f2.bits(out):
                _xor_into(acc, w[:a] + (o,) + w[b:])
    return acc


def differential_of_chain(C: AInftyStructure, chain: Iterable[Word]) -> HHChain:
    acc: HHChain = {}
    for w in chain:
        for v in hochschild_differential(C, w):
            _xor_into(acc, v)
    return acc


@dataclass
class HochschildComplex:
    category: AInftyStructure
    max_length: int
    words: list[Word]
    index: dict[Word, int]
    complex: FiniteComplex

    def to_mask(self, chain: Iterable[Word]) -> int:
        mask = 0
        for w in chain:
            mask ^= 1 << self.index[w]
        return mask

    def to_chain(self, mask: int) -> HHChain:
        return {self.words[i]: 1 for i in f2.bits(mask)}


def hochschild_complex(C: AInftyStructure, max_length: int) -> HochschildComplex:
    words = cyclic_words(C, max_length)
    index = {w: i for i, w in enumerate(words)}
    diff = []
    for w in words:
        mask = 0
        for v in hochschild_differential(C, w):
            mask |= 1 << index[v]
        diff.append(mask)
    cx = FiniteComplex(
        degrees=[hochschild_degree(C, w) for w in words],
        differential=diff,
        lengths=[len(w) for w in words],
        labels=[word_label(C, w) for w in words],
    )
    return HochschildComplex(C, max_length, words, index, cx)


def word_label(C: AInftyStructure, word: Sequence[int]) -> str:
    return ",".join(C.generators[i].name for i in word)


def hochschild_homology(
    C: AInftyStructure, max_length: int, degree_window: Iterable[int]
) -> dict[int, TableEntry]:
    """Per-degree dimensions on the length truncation, with stability flags.

    A degree is STABLE when its value is the same at ``max_length - 1`` and
    ``max_length``.
    """
    hc = hochschild_complex(C, max_length)
    hc.complex.check_square_zero()
    return stability_table(hc.complex, list(degree_window), max_length)


# -- shifted action ------------------------------------------------------------


@functools.total_ordering
class ShiftedActionValue:
    """``e^(d-1) * s`` for a word length ``d`` and exact rational ``s``; ``d = 0`` is minus infinity."""

    __slots__ = ("length", "raw_sum")

    def __init__(self, length: int, raw_sum: Fraction | None):
        self.length = length
        self.raw_sum = None if length == 0 else Fraction(raw_sum)

    @classmethod
    def neg_inf(cls) -> ShiftedActionValue:
        return cls(0, None)

    @property
    def is_neg_inf(self) -> bool:
        return self.length == 0

    def __float__(self) -> float:
        if self.is_neg_inf:
            return -math.inf
        return math.exp(self.length - 1) * float(self.raw_sum)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ShiftedActionValue):
            return NotImplemented
        return _compare(self, other) == 0

    def __lt__(self, other: ShiftedActionValue) -> bool:
        return _compare(self, other) < 0

    def __hash__(self) -> int:
        if self.is_neg_inf:
            return hash(None)
        if self.raw_sum == 0:
            return hash(0)
        return hash((self.length, self.raw_sum))

    def __repr__(self) -> str:
        if self.is_neg_inf:
            return "ShiftedActionValue(-inf)"
        return f"ShiftedActionValue(d={self.length}, s={self.raw_sum})"

    def to_json(self) -> dict:
        if self.is_neg_inf:
            return {"length": 0, "raw_sum": None, "value": "-inf"}
        return {"length": self.length, "raw_sum": str(self.raw_sum), "value": float(self)}


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _compare(a: ShiftedActionValue, b: ShiftedActionValue) -> int:
    if a.is_neg_inf or b.is_neg_inf:
        return (not a.is_neg_inf) - (not b.is_neg_inf)
    if a.length == b.length:
        return _sign(a.raw_sum - b.raw_sum)
    sa, sb = _sign(a.raw_sum), _sign(b.raw_sum)
    if sa != sb:
        return (sa > sb) - (sa < sb)
    if sa == 0:
        return 0
    # same sign, different lengths: compare (d - 1) + ln|s| in interval arithmetic;
    # e^n is irrational for n != 0, so the two values are never equal
    mag = _compare_log_magnitude(a.length - 1, abs(a.raw_sum), b.length - 1, abs(b.raw_sum))
    return mag if sa > 0 else -mag


@functools.lru_cache(maxsize=1 << 16)
def _compare_log_magnitude(n1: int, s1: Fraction, n2: int, s2: Fraction) -> int:
    prec = 64
    while True:
        with mpmath.workprec(prec):
            iv = mpmath.iv
            x = iv.mpf(n1) + iv.log(iv.mpf(s1.numerator)) - iv.log(iv.mpf(s1.denominator))
            y = iv.mpf(n2) + iv.log(iv.mpf(s2.numerator)) - iv.log(iv.mpf(s2.denominator))
            if x.b < y.a:
                return -1
            if y.b < x.a:
                return 1
        prec *= 2
        if prec > 1 << 16:
            raise ArithmeticError("interval comparison failed to separate")


def shifted_action(
    C: AInftyStructure,
    word: Sequence[int],
    epsilon: Fraction,
    actions: Mapping[int, Fraction] | None = None,
) -> ShiftedActionValue:
    """``e^(d-1) * sum(A(g_i) + 8 epsilon)``; ``actions`` overrides the generator field."""
    epsilon = Fraction(epsilon)
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    if not word:
        return ShiftedActionValue.neg_inf()
    total = Fraction(0)
    for i in word:
        a = actions[i] if actions is not None and i in actions else C.generators[i].action
        total += Fraction(a) + 8 * epsilon
    return ShiftedActionValue(len(word), total)


def chain_action(
    C: AInftyStructure, chain: Iterable[Word], epsilon: Fraction, actions=None
) -> ShiftedActionValue:
    """Max over the words of a chain; the empty chain is minus infinity."""
    best = ShiftedActionValue.neg_inf()
    for w in chain:
        v = shifted_action(C, w, epsilon, actions)
        if v > best:
            best = v
    return best


def verify_action_filtration(
    C: AInftyStructure, epsilon: Fraction, actions=None, max_length: int = 4
) -> list[Violation]:
    """Words with a differential term whose shifted action is not strictly smaller."""
    out = []
    for w in cyclic_words(C, max_length):
        a = shifted_action(C, w, epsilon, actions)
        for v in sorted(hochschild_differential(C, w)):
            b = shifted_action(C, v, epsilon, actions)
            if not b < a:
                out.append(
                    Violation(
                        word_label(C, w),
                        f"term {word_label(C, v)} has action {float(b):.6g} >= {float(a):.6g}",
                    )
                )
    return out


# -- length-k class action -----------------------------------------------------


@dataclass
class _CosetData:
    order: list[Word]  # bit position -> word, increasing priority
    start: int  # representative of the class as a bitmask in ``order``
    images: list[int]  # boundaries of length <= k+1 chains, same encoding
    k: int


def _coset_data(
    C: AInftyStructure, cycle: Iterable[Word], k: int, epsilon: Fraction, actions
) -> _CosetData:
    cycle = [tuple(w) for w in cycle]
    for w in cycle:
        if not is_cyclic_word(C, w):
            raise ValueError(f"{w} is not a cyclic word")
    if differential_of_chain(C, cycle):
        raise NotACycle("the chain is not closed under the Hochschild differential")
    if not cycle:
        return _CosetData([], 0, [], k)
    degrees = {hochschild_degree(C, w) for w in cycle}
    if len(degrees) != 1:
        raise ValueError("chain is not homogeneous")
    (deg,) = degrees
    top = max(k + 1, max(len(w) for w in cycle))
    hc = hochschild_complex(C, top)
    sources = [w for w in hc.words if len(w) <= k + 1 and hochschild_degree(C, w) == deg - 1]
    targets = [w for w in hc.words if hochschild_degree(C, w) == deg]

    vals = {w: shifted_action(C, w, epsilon, actions) for w in targets}

    def key(w: Word):
        return (len(w) > k, vals[w])

    def cmp(u: Word, v: Word) -> int:
        ku, kv = key(u), key(v)
        if ku != kv:
            return -1 if ku < kv else 1
        return (hc.index[u] > hc.index[v]) - (hc.index[u] < hc.index[v])

    order = sorted(targets, key=functools.cmp_to_key(cmp))
    pos = {w: i for i, w in enumerate(order)}

    def encode(chain: Iterable[Word]) -> int:
        m = 0
        for w in chain:
            m ^= 1 << pos[w]
        return m

    images = [encode(hochschild_differential(C, w)) for w in sources]
    return _CosetData(order, encode(cycle), images, k)


def _mask_action(C, data: _CosetData, mask: int, epsilon, actions) -> ShiftedActionValue:
    return chain_action(C, (data.order[i] for i in f2.bits(mask)), epsilon, actions)


def length_k_class_action(
    C: AInftyStructure,
    cycle: Iterable[Word],
    k: int,
    epsilon: Fraction,
    actions: Mapping[int, Fraction] | None = None,
) -> tuple[ShiftedActionValue, HHChain]:
    """Least shifted action over length-``<= k`` representatives of the class.

    Representatives range over ``cycle + boundaries of length <= k+1 chains``
    that involve only words of length ``<= k``.  Target words are ordered by
    (longer than ``k``, action, index) and the cycle is reduced against the
    boundaries in that order; a reduced vector's top term is minimal over the
    coset, which gives both representability and the minimum.  Returns the
    value and a minimizing representative.
    """
    data = _coset_data(C, cycle, k, epsilon, actions)
    basis = f2.echelon(data.images)
    rep = f2.reduce(data.start, basis)
    if any(len(data.order[i]) > k for i in f2.bits(rep)):
        raise NotRepresentableAtLengthK(f"class has no representative of length <= {k}")
    chain = {data.order[i]: 1 for i in f2.bits(rep)}
    return _mask_action(C, data, rep, epsilon, actions), chain


def exhaustive_class_action(
    C: AInftyStructure,
    cycle: Iterable[Word],
    k: int,
    epsilon: Fraction,
    actions: Mapping[int, Fraction] | None = None,
    max_dim: int = 20,
) -> ShiftedActionValue:
    """Brute-force minimum over every element of the coset (oracle)."""
    data = _coset_data(C, cycle, k, epsilon, actions)
    span = list(f2.echelon(data.images).values())
    if len(span) > max_dim:
        raise ValueError(f"coset has dimension {len(span)} > {max_dim}")
    long_mask = sum(1 << i for i, w in enumerate(data.order) if len(w) > k)
    vals = [shifted_action(C, w, epsilon, actions) for w in data.order]
    distinct = sorted(set(vals))
    rank = [distinct.index(v) for v in vals]  # compare small ints in the loop
    best = None
    for r in range(len(span) + 1):
        for combo in itertools.combinations(span, r):
            v = data.start
            for b in combo:
                v ^= b
            if v & long_mask:
                continue
            val = max((rank[i] for i in f2.bits(v)), default=-1)
            if best is None or val < best:
                best = val
    if best is None:
        raise NotRepresentableAtLengthK(f"class has no representative of length <= {k}")
    return ShiftedActionValue.neg_inf() if best < 0 else distinct[best]


def coset_dimension(C, cycle, k, epsilon=Fraction(0), actions=None) -> int:
    data = _coset_data(C, cycle, k, epsilon, actions)
    return f2.span_rank(data.images)
