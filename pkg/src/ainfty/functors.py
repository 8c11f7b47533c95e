"""A-infinity functors, homotopies between them, and the homotopy-limit category.

Functor and homotopy components are sparse maps from source words
``(g_d, ..., g_1)`` to target chains, exactly like ``mu``.  The checkers only
visit words on which some term of the relevant equation can be nonzero: every
such word is assembled from a structure-constant entry together with
component entries that produce its inputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence

from . import f2linalg as f2
from .category import (
    AInftyStructure,
    MorphismGenerator,
    Violation,
    Word,
    compositions,
    gauge_transform,
    hom_complex,
    invert_gauge,
    to_global,
    to_local,
)
from .complexes import induced_map_report
from .errors import DegreeMismatch, NotComposable, SourceTargetMismatch
from .filtration import restrict_to_generators


@dataclass
class AInftyFunctor:
    source: AInftyStructure
    target: AInftyStructure
    object_map: dict[str, str]
    components: dict[Word, int]
    max_arity: int = field(default=0)

    def __post_init__(self) -> None:
        self.components = {tuple(w): v for w, v in self.components.items() if v}
        self.object_map = dict(self.object_map)
        missing = set(self.source.objects) - set(self.object_map)
        if missing:
            raise SourceTargetMismatch(f"object map misses {sorted(missing)}")
        if not self.max_arity:
            self.max_arity = max((len(w) for w in self.components), default=1)
        S, T = self.source, self.target
        for word, out in self.components.items():
            if not S.is_composable(word):
                raise NotComposable(f"functor component on non-composable word {S.word_name(word)}")
            src, tgt = S.word_endpoints(word)
            want = (self.object_map[src], self.object_map[tgt])
            for o in f2.bits(out):
                g = T.generators[o]
                if (g.source, g.target) != want:
                    raise NotComposable(f"F{S.word_name(word)} has output {g.name} outside hom{want}")

    def apply(self, word: Sequence[int]) -> int:
        return self.components.get(tuple(word), 0)

    def apply_chain(self, mask: int) -> int:
        out = 0
        for i in f2.bits(mask):
            out ^= self.components.get((i,), 0)
        return out

    def producers(self) -> dict[int, list[Word]]:
        """Target generator -> source words whose image contains it."""
        idx: dict[int, list[Word]] = {}
        for word, out in self.components.items():
            for o in f2.bits(out):
                idx.setdefault(o, []).append(word)
        return idx


@dataclass
class PreNaturalTransformation:
    from_functor: AInftyFunctor
    to_functor: AInftyFunctor
    components: dict[Word, int]

    def __post_init__(self) -> None:
        fa, fb = self.from_functor, self.to_functor
        if fa.source is not fb.source and fa.source != fb.source:
            raise SourceTargetMismatch("homotopy endpoints have different sources")
        if fa.target is not fb.target and fa.target != fb.target:
            raise SourceTargetMismatch("homotopy endpoints have different targets")
        self.components = {tuple(w): v for w, v in self.components.items() if v}

    def producers(self) -> dict[int, list[Word]]:
        idx: dict[int, list[Word]] = {}
        for word, out in self.components.items():
            for o in f2.bits(out):
                idx.setdefault(o, []).append(word)
        return idx


# -- constructors --------------------------------------------------------------


def identity_functor(C: AInftyStructure) -> AInftyFunctor:
    return AInftyFunctor(C, C, {o: o for o in C.objects}, {(i,): 1 << i for i in range(len(C.generators))})


def gauge_functor(
    C: AInftyStructure, g: Mapping[Word, int], max_arity: int | None = None
) -> AInftyFunctor:
    """The functor ``C -> gauge_transform(C, g)`` with ``F^1 = id`` and ``F^d = g^d``."""
    target = gauge_transform(C, g, max_arity)
    comps = {(i,): 1 << i for i in range(len(C.generators))}
    comps.update({w: v for w, v in g.items() if v})
    return AInftyFunctor(C, target, {o: o for o in C.objects}, comps)


def inverse_gauge_functor(F: AInftyFunctor, max_arity: int) -> AInftyFunctor:
    """Inverse of a gauge functor, as a functor from its target back to its source."""
    C = F.source
    g = {w: v for w, v in F.components.items() if len(w) >= 2}
    h = invert_gauge(C, g, max_arity)
    comps = {(i,): 1 << i for i in range(len(C.generators))}
    comps.update(h)
    return AInftyFunctor(F.target, C, {o: o for o in C.objects}, comps)


def strict_functor(
    source: AInftyStructure, target: AInftyStructure, linear: Mapping[int, int], object_map=None
) -> AInftyFunctor:
    object_map = object_map or {o: o for o in source.objects}
    return AInftyFunctor(source, target, object_map, {(i,): v for i, v in linear.items()})


# -- degree checks -------------------------------------------------------------


def _degree_violations(S, T, comps, shift: int, label: str) -> list[Violation]:
    out = []
    for word, mask in sorted(comps.items(), key=lambda kv: (len(kv[0]), kv[0])):
        expected = sum(S.generators[i].degree for i in word) + shift - len(word)
        for o in f2.bits(mask):
            if T.generators[o].degree != expected:
                out.append(
                    Violation(
                        f"{label}^{len(word)}{S.word_name(word)}",
                        f"output {T.generators[o].name} has degree {T.generators[o].degree}, expected {expected}",
                    )
                )
    return out


def verify_functor_degrees(F: AInftyFunctor) -> list[Violation]:
    return _degree_violations(F.source, F.target, F.components, 1, "F")


def verify_homotopy_degrees(T: PreNaturalTransformation) -> list[Violation]:
    fa = T.from_functor
    return _degree_violations(fa.source, fa.target, T.components, 0, "T")


# -- equation checkers ---------------------------------------------------------


def _choose(
    targets: Sequence[int], producers: Sequence[Mapping[int, list[Word]]], budget: int
) -> Iterator[Word]:
    """Concatenations ``b_k + ... + b_1`` with ``b_i`` producing ``targets[i]``."""
    pools = []
    for t, prod in zip(targets, producers):
        pool = prod.get(t)
        if not pool:
            return
        pools.append(pool)
    for blocks in itertools.product(*pools):
        if sum(len(b) for b in blocks) <= budget:
            yield tuple(itertools.chain.from_iterable(blocks))


def _insertions(S: AInftyStructure, outer: Mapping[Word, int], max_d: int) -> Iterator[tuple[Word, int]]:
    """Terms ``X(.., mu_S(block), ..)`` for the sparse map ``X``: (source word, X-output)."""
    by_out = S.outputs_index()
    for word, out in outer.items():
        for p, g in enumerate(word):
            for inner in by_out.get(g, ()):
                if len(word) + len(inner) - 1 <= max_d:
                    yield word[:p] + inner + word[p + 1:], out


def _accumulate(acc: dict[Word, int], word: Word, value: int) -> None:
    acc[word] = acc.get(word, 0) ^ value


def functor_equation_sums(F: AInftyFunctor, max_d: int) -> dict[Word, int]:
    S, T = F.source, F.target
    acc: dict[Word, int] = {}
    for word, out in _insertions(S, F.components, max_d):
        _accumulate(acc, word, out)
    prod = F.producers()
    for ys, out in T.mu.items():
        for word in _choose(ys, [prod] * len(ys), max_d):
            if S.is_composable(word):
                _accumulate(acc, word, out)
    if S.truncation is not None:
        acc = {w: v for w, v in acc.items() if S.word_length(w) <= S.truncation}
    return acc


def _report(S: AInftyStructure, T: AInftyStructure, sums: Mapping[Word, int]) -> list[Violation]:
    bad = sorted(((w, v) for w, v in sums.items() if v), key=lambda wv: (len(wv[0]), wv[0]))
    return [Violation(S.word_name(w), "equation sum = " + " + ".join(T.names(v))) for w, v in bad]


def verify_functor_equations(F: AInftyFunctor, max_d: int) -> list[Violation]:
    """Words of length ``<= max_d`` where ``sum F(..mu..) + sum mu(F, .., F)`` is nonzero."""
    return _report(F.source, F.target, functor_equation_sums(F, max_d))


def homotopy_equation_sums(H: PreNaturalTransformation, max_d: int) -> dict[Word, int]:
    """``F_b^d + F_a^d + sum T(..mu..) + sum mu(F_b, .., F_b, T, F_a, .., F_a)`` per word.

    The displayed identity is read with ``d`` inputs on both sides, so that
    ``F^d`` and ``T^m`` act on the same word.
    """
    fa, fb = H.from_functor, H.to_functor
    S, T = fa.source, fa.target
    acc: dict[Word, int] = {}
    for comps in (fa.components, fb.components):
        for word, out in comps.items():
            if len(word) <= max_d:
                _accumulate(acc, word, out)
    for word, out in _insertions(S, H.components, max_d):
        _accumulate(acc, word, out)
    pa, pb, pt = fa.producers(), fb.producers(), H.producers()
    for ys, out in T.mu.items():
        k = len(ys)
        for r in range(k):
            # position r (0 = leftmost) carries T; left of it F_b, right of it F_a
            prods = [pb] * r + [pt] + [pa] * (k - r - 1)
            for word in _choose(ys, prods, max_d):
                if S.is_composable(word):
                    _accumulate(acc, word, out)
    if S.truncation is not None:
        acc = {w: v for w, v in acc.items() if S.word_length(w) <= S.truncation}
    return acc


def verify_homotopy(H: PreNaturalTransformation, max_d: int) -> list[Violation]:
    return _report(H.from_functor.source, H.from_functor.target, homotopy_equation_sums(H, max_d))


# -- composition ---------------------------------------------------------------


def compose_functors(G: AInftyFunctor, F: AInftyFunctor, max_arity: int | None = None) -> AInftyFunctor:
    """``G o F`` with components ``sum G^k(F(b_k), ..., F(b_1))`` over block partitions."""
    if F.target is not G.source and F.target != G.source:
        raise SourceTargetMismatch("target of F is not the source of G")
    if max_arity is None:
        max_arity = F.max_arity * G.max_arity
    prod = F.producers()
    comps: dict[Word, int] = {}
    for ys, out in G.components.items():
        for word in _choose(ys, [prod] * len(ys), max_arity):
            if F.source.is_composable(word):
                _accumulate(comps, word, out)
    object_map = {o: G.object_map[F.object_map[o]] for o in F.source.objects}
    return AInftyFunctor(F.source, G.target, object_map, comps)


# -- Hochschild pushforward ----------------------------------------------------


def induced_map_on_hochschild(F: AInftyFunctor) -> Callable[[Word], dict[Word, int]]:
    """The chain map on cyclic words: apply ``F`` to a cyclic block decomposition.

    The distinguished block contains the first entry ``g_d`` and may wrap
    around through ``g_1``; the remaining entries are cut into consecutive
    blocks.  Returns a function from a word to its image as ``{word: 1}``.
    """

    def image(word: Word) -> dict[Word, int]:
        d = len(word)
        acc: dict[Word, int] = {}
        for i in range(d):
            for j in range(d - i):
                first = word[d - i:] + word[: j + 1]
                head = F.apply(first)
                if not head:
                    continue
                middle = word[j + 1: d - i]
                parts = [()] if not middle else compositions(middle)
                for blocks in parts:
                    imgs = [head] + [F.apply(b) for b in blocks]
                    if not all(imgs):
                        continue
                    for terms in itertools.product(*(list(f2.bits(c)) for c in imgs)):
                        acc[terms] = acc.get(terms, 0) ^ 1
        return {w: 1 for w, v in acc.items() if v}

    return image


# -- homotopy-limit category ---------------------------------------------------


@dataclass
class LimitCategory:
    """``build_wlim`` output: the category plus bookkeeping for its basis."""

    category: AInftyStructure
    base: AInftyStructure
    stabilization_bound: int
    # generator index -> ("g", n, x) | ("h", n, x) | ("t", None, x)
    kinds: list[tuple[str, int | None, int]]

    def index(self, kind: str, n: int | None, x: int) -> int:
        return self._lookup[(kind, n, x)]

    def __post_init__(self) -> None:
        self._lookup = {k: i for i, k in enumerate(self.kinds)}

    def sequence(self, mask: int) -> dict[int, tuple[int, int]]:
        """Levels ``1..N`` of the element as ``{n: (gamma^n, eta^n)}``; level ``N`` is the tail."""
        N = self.stabilization_bound
        seq = {n: (0, 0) for n in range(1, N + 1)}
        for i in f2.bits(mask):
            kind, n, x = self.kinds[i]
            if kind == "g":
                g, h = seq[n]
                seq[n] = (g ^ (1 << x), h)
            elif kind == "h":
                g, h = seq[n]
                seq[n] = (g, h ^ (1 << x))
            else:
                g, h = seq[N]
                seq[N] = (g ^ (1 << x), h)
        return seq


def build_wlim(C: AInftyStructure, stabilization_bound: int) -> LimitCategory:
    """Homotopy limit of the identity tower, on eventually-constant sequences.

    Basis: ``g{n}:x`` (``gamma^n = x`` at the single level ``n < N``),
    ``h{n}:x`` (``eta^n = x``, ``n < N``) and ``t:x`` (``gamma^n = x`` for all
    ``n >= N``).  Since ``eta`` vanishes from level ``N`` on, these span the
    sequences that are constant with zero ``eta`` past ``N``.
    """
    N = stabilization_bound
    if N < 1:
        raise ValueError("stabilization_bound must be at least 1")
    gens: list[MorphismGenerator] = []
    kinds: list[tuple[str, int | None, int]] = []

    def add(kind: str, n: int | None, x: int) -> None:
        g = C.generators[x]
        label = f"{kind}{n}:{g.name}" if n is not None else f"t:{g.name}"
        gens.append(
            MorphismGenerator(
                name=label,
                source=g.source,
                target=g.target,
                degree=g.degree + (1 if kind == "h" else 0),
                weights=g.weights,
                action=g.action,
                length=g.length,
            )
        )
        kinds.append((kind, n, x))

    for x in range(len(C.generators)):
        for n in range(1, N):
            add("g", n, x)
        for n in range(1, N):
            add("h", n, x)
        add("t", None, x)
    look = {k: i for i, k in enumerate(kinds)}

    def lift(kind: str, n: int | None, mask: int) -> int:
        out = 0
        for x in f2.bits(mask):
            out |= 1 << look[(kind, n, x)]
        return out

    def level_gamma(n: int) -> tuple[str, int | None]:
        return ("t", None) if n >= N else ("g", n)

    mu: dict[Word, int] = {}
    for word, out in C.mu.items():
        d = len(word)
        if d == 1:
            (x,) = word
            for n in range(1, N):
                mu[(look[("g", n, x)],)] = lift("g", n, out)
                mu[(look[("h", n, x)],)] = lift("h", n, out)
            mu[(look[("t", None, x)],)] = lift("t", None, out)
            continue
        for n in range(1, N):
            key = tuple(look[("g", n, x)] for x in word)
            mu[key] = mu.get(key, 0) ^ lift("g", n, out)
        key = tuple(look[("t", None, x)] for x in word)
        mu[key] = mu.get(key, 0) ^ lift("t", None, out)
        for n in range(1, N):
            left_kind, left_n = level_gamma(n + 1)
            for pos in range(d):
                key = tuple(
                    look[(left_kind, left_n, x)] if t < pos
                    else look[("h", n, x)] if t == pos
                    else look[("g", n, x)]
                    for t, x in enumerate(word)
                )
                mu[key] = mu.get(key, 0) ^ lift("h", n, out)
    # the identity-map part of the differential
    for x in range(len(C.generators)):
        for m in range(1, N):
            key = (look[("g", m, x)],)
            extra = 1 << look[("h", m, x)]
            if m >= 2:
                extra |= 1 << look[("h", m - 1, x)]
            mu[key] = mu.get(key, 0) ^ extra
        if N >= 2:
            key = (look[("t", None, x)],)
            mu[key] = mu.get(key, 0) ^ (1 << look[("h", N - 1, x)])
    cat = AInftyStructure(
        C.objects,
        gens,
        mu,
        C.max_arity,
        stops=C.stops,
        truncation=C.truncation,
    )
    return LimitCategory(cat, C, N, kinds)


def strict_inclusion(W: LimitCategory) -> AInftyFunctor:
    """``x -> ((x, 0), (x, 0), ...)``."""
    C, N = W.base, W.stabilization_bound
    linear = {}
    for x in range(len(C.generators)):
        mask = 1 << W.index("t", None, x)
        for n in range(1, N):
            mask |= 1 << W.index("g", n, x)
        linear[x] = mask
    return strict_functor(C, W.category, linear)


def finite_intersection_sub_wlim(W: LimitCategory) -> AInftyStructure:
    """Sequences whose entries past the stabilization index have zero weight."""
    keep = [
        i
        for i, (kind, _, x) in enumerate(W.kinds)
        if kind != "t" or not any(W.base.generators[x].weights)
    ]
    return restrict_to_generators(W.category, keep)


def inclusion_homology_report(
    F: AInftyFunctor, window: Sequence[int]
) -> dict[tuple[str, str], dict[int, dict[str, int | bool]]]:
    """Per hom: homology dims of both sides and rank of ``H(F^1)`` in the window."""
    S, T = F.source, F.target
    out = {}
    for x in S.objects:
        for y in S.objects:
            src, s_idx = hom_complex(S, x, y)
            tgt, t_idx = hom_complex(T, F.object_map[x], F.object_map[y])
            t_mask = sum(1 << i for i in t_idx)

            def chain_map(local: int, s_idx=s_idx, t_idx=t_idx, t_mask=t_mask) -> int:
                img = F.apply_chain(to_global(local, s_idx))
                if img & ~t_mask:
                    raise DegreeMismatch("functor image leaves the target hom")
                return to_local(img, t_idx)

            out[(x, y)] = induced_map_report(src, tgt, chain_map, window)
    return out
