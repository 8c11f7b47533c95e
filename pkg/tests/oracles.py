"""Independent brute-force references used to freeze expected values."""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping

from ainfty.category import AInftyStructure

Word = tuple[int, ...]
Combo = frozenset  # a GF(2) combination of words


def _xor(acc: set, items: Iterable) -> None:
    for w in items:
        acc ^= {w}


def _splits(word: Word):
    """All ways to cut ``word`` into consecutive nonempty blocks."""
    n = len(word)
    for r in range(n):
        for cuts in itertools.combinations(range(1, n), r):
            b = (0,) + cuts + (n,)
            yield [word[b[i]: b[i + 1]] for i in range(len(b) - 1)]


def _bits(m: int):
    i = 0
    while m:
        if m & 1:
            yield i
        m >>= 1
        i += 1


def bar_differential(mu: Mapping[Word, int], word: Word) -> set:
    out: set = set()
    for i in range(len(word)):
        for j in range(i + 1, len(word) + 1):
            for o in _bits(mu.get(word[i:j], 0)):
                _xor(out, [word[:i] + (o,) + word[j:]])
    return out


def coalgebra_map(g: Mapping[Word, int], word: Word) -> set:
    """Coalgebra map with identity linear part and higher components ``g``."""
    out: set = set()
    for blocks in _splits(word):
        imgs = []
        for b in blocks:
            imgs.append([b[0]] if len(b) == 1 else list(_bits(g.get(b, 0))))
        _xor(out, itertools.product(*imgs))
    return out


def apply_linear(f, combo: Iterable[Word]) -> set:
    out: set = set()
    for w in combo:
        out ^= f(w)
    return out


def inverse_coalgebra_map(g: Mapping[Word, int], word: Word) -> set:
    # (1 + G) strictly shortens words, so G^{-1} = sum_k (1 + G)^k
    total: set = {word}
    y: set = {word}
    while y:
        y = apply_linear(lambda w: coalgebra_map(g, w) ^ {w}, y)
        total ^= y
    return total


def conjugated_mu(C: AInftyStructure, g: Mapping[Word, int], word: Word) -> int:
    """Length-one part of ``G b G^{-1}`` on ``word``."""
    pre = inverse_coalgebra_map(g, word)
    mid = apply_linear(lambda w: bar_differential(C.mu, w), pre)
    post = apply_linear(lambda w: coalgebra_map(g, w), mid)
    out = 0
    for w in post:
        if len(w) == 1:
            out ^= 1 << w[0]
    return out


def span_size_rank(vectors: Iterable[int]) -> int:
    span = {0}
    for v in vectors:
        span |= {s ^ v for s in span}
    return len(span).bit_length() - 1


def brute_homology(C: AInftyStructure, x: str, y: str, degree: int) -> int:
    """``dim ker - dim im`` by span counting, straight from the mu^1 table."""
    basis = C.hom_basis(x, y)
    here = [i for i in basis if C.generators[i].degree == degree]
    below = [i for i in basis if C.generators[i].degree == degree - 1]
    d_here = [C.mu.get((i,), 0) for i in here]
    d_below = [C.mu.get((i,), 0) for i in below]
    rank_here = span_size_rank(d_here)
    return len(here) - rank_here - span_size_rank(d_below)


def mu2_homotopy_target(C: AInftyStructure, T: Mapping[Word, int], max_d: int) -> dict[Word, int]:
    """``F_b`` with ``F_b - id = dT`` when ``mu^1 = 0`` and only ``mu^2`` is nonzero.

    Expands ``F_b^d(w) = sum T(.., mu^2(pair), ..) + sum_{w = L R} mu^2(F_b(L), T(R)) + mu^2(T(L), R)``
    arity by arity (``F_a = id`` has only a linear part).
    """
    Fb: dict[Word, int] = {(i,): 1 << i for i in range(len(C.generators))}

    def mu2(a: int, b: int) -> int:
        out = 0
        for x in _bits(a):
            for y in _bits(b):
                out ^= C.mu.get((x, y), 0)
        return out

    for d in range(2, max_d + 1):
        for w in C.composable_words(d):
            acc = 0
            for p in range(d - 1):
                for o in _bits(C.mu.get(w[p:p + 2], 0)):
                    acc ^= T.get(w[:p] + (o,) + w[p + 2:], 0)
            for cut in range(1, d):
                L, R = w[:cut], w[cut:]
                acc ^= mu2(Fb.get(L, 0), T.get(R, 0))
                if len(R) == 1:
                    acc ^= mu2(T.get(L, 0), 1 << R[0])
            if acc:
                Fb[w] = acc
    return Fb


def cyclic_words_oracle(C: AInftyStructure, max_length: int) -> list[Word]:
    n = len(C.generators)
    out = []
    for d in range(1, max_length + 1):
        for w in itertools.product(range(n), repeat=d):
            gs = [C.generators[i] for i in w]
            # w = (g_d, ..., g_1): g_{i+1} starts where g_i ends, cyclically
            if all(gs[t].source == gs[(t + 1) % d].target for t in range(d)):
                out.append(w)
    return out


def cyclic_differential(C: AInftyStructure, word: Word) -> set:
    """Contract every cyclic block; blocks through the first entry put the output first."""
    d = len(word)
    out: set = set()
    for s in range(d):
        for ln in range(1, d + 1):
            block = tuple(word[(s + t) % d] for t in range(ln))
            wraps = s == 0 or s + ln > d
            if wraps:
                rest = tuple(word[(s + ln + t) % d] for t in range(d - ln))
            for o in _bits(C.mu.get(block, 0)):
                if wraps:
                    _xor(out, [(o,) + rest])
                else:
                    _xor(out, [word[:s] + (o,) + word[s + ln:]])
    return out


def _kernel_span(vectors: list[int], images: list[int]) -> list[int]:
    """Every combination of ``vectors`` whose image combination vanishes."""
    ker = []
    for r in range(1, len(vectors) + 1):
        for combo in itertools.combinations(range(len(vectors)), r):
            img = 0
            v = 0
            for c in combo:
                img ^= images[c]
                v ^= vectors[c]
            if not img:
                ker.append(v)
    return ker


def brute_cyclic_homology(C: AInftyStructure, max_length: int, degree: int) -> int:
    """``rank(H(F_{L-1}) -> H(F_L))`` of the cyclic complex by subset enumeration."""
    words = cyclic_words_oracle(C, max_length)
    pos = {w: i for i, w in enumerate(words)}

    def deg(w: Word) -> int:
        return sum(C.generators[i].degree for i in w) + 1 - len(w)

    def image(w: Word) -> int:
        m = 0
        for v in cyclic_differential(C, w):
            m ^= 1 << pos[v]
        return m

    here = [w for w in words if deg(w) == degree and len(w) < max_length]
    below = [w for w in words if deg(w) == degree - 1]
    cycles = _kernel_span([1 << pos[w] for w in here], [image(w) for w in here])
    bounds = [image(w) for w in below]
    return span_size_rank(cycles + bounds) - span_size_rank(bounds)
