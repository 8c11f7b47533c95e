"""Finite A-infinity categories over GF(2) given by sparse structure constants.

Generators are indexed by position; a chain is an int bitmask over generator
indices.  ``mu`` maps an input word ``(g_d, ..., g_1)`` (leftmost is the last
morphism applied, as in ``mu^d(g_d, ..., g_1)``) to the bitmask of its output.
Words absent from ``mu`` evaluate to zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from . import f2linalg as f2
from .complexes import FiniteComplex
from .errors import ArityExceeded, DegreeMismatch, NotACycle, NotComposable

Word = tuple[int, ...]


@dataclass(frozen=True)
class MorphismGenerator:
    name: str
    source: str
    target: str
    degree: int
    weights: tuple[int, ...] = ()
    action: Fraction = Fraction(0)
    # number of intermediate objects for bar-type words; 0 for plain generators
    length: int = 0


@dataclass(frozen=True)
class Violation:
    location: str
    detail: str


def compositions(word: Sequence[int]) -> Iterator[tuple[Word, ...]]:
    """All ways to cut ``word`` into consecutive nonempty blocks, left to right."""
    n = len(word)
    for cuts in itertools.product((False, True), repeat=n - 1):
        blocks, start = [], 0
        for i, cut in enumerate(cuts, start=1):
            if cut:
                blocks.append(tuple(word[start:i]))
                start = i
        blocks.append(tuple(word[start:]))
        yield tuple(blocks)


class AInftyStructure:
    def __init__(
        self,
        objects: Sequence[str],
        generators: Sequence[MorphismGenerator],
        mu: Mapping[Word, int],
        max_arity: int,
        stops: Sequence[str] = (),
        units: Mapping[str, int] | None = None,
        truncation: int | None = None,
    ):
        self.objects = tuple(objects)
        self.stops = tuple(stops)
        self.generators = tuple(generators)
        self.max_arity = max_arity
        self.units = dict(units or {})
        self.truncation = truncation
        self.index = {g.name: i for i, g in enumerate(self.generators)}
        if len(self.index) != len(self.generators):
            raise ValueError("generator names must be unique")
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("object names must be unique")
        objs = set(self.objects)
        self.hom: dict[tuple[str, str], list[int]] = {}
        for i, g in enumerate(self.generators):
            if g.source not in objs or g.target not in objs:
                raise ValueError(f"generator {g.name} has unknown endpoint")
            if len(g.weights) != len(self.stops):
                raise ValueError(f"generator {g.name} has {len(g.weights)} weights, expected {len(self.stops)}")
            self.hom.setdefault((g.source, g.target), []).append(i)
        self.hom_mask = {key: sum(1 << i for i in idx) for key, idx in self.hom.items()}
        self.mu: dict[Word, int] = {}
        for word, out in mu.items():
            if not out:
                continue
            word = tuple(word)
            self._check_entry(word, out)
            self.mu[word] = out
        for obj, u in self.units.items():
            g = self.generators[u]
            if g.source != obj or g.target != obj:
                raise ValueError(f"unit {g.name} is not an endomorphism of {obj}")

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_names(
        cls,
        objects: Sequence[str],
        generators: Sequence[MorphismGenerator],
        mu: Iterable[tuple[Sequence[str], Iterable[str]]],
        max_arity: int,
        stops: Sequence[str] = (),
        units: Mapping[str, str] | None = None,
        truncation: int | None = None,
    ) -> AInftyStructure:
        index = {g.name: i for i, g in enumerate(generators)}
        table: dict[Word, int] = {}
        for inputs, outputs in mu:
            key = tuple(index[n] for n in inputs)
            mask = 0
            for n in outputs:
                mask ^= 1 << index[n]
            table[key] = table.get(key, 0) ^ mask
        return cls(
            objects,
            generators,
            table,
            max_arity,
            stops=stops,
            units={k: index[v] for k, v in (units or {}).items()},
            truncation=truncation,
        )

    def replace(self, **changes) -> AInftyStructure:
        kw = dict(
            objects=self.objects,
            generators=self.generators,
            mu=self.mu,
            max_arity=self.max_arity,
            stops=self.stops,
            units=self.units,
            truncation=self.truncation,
        )
        kw.update(changes)
        return AInftyStructure(**kw)

    def _check_entry(self, word: Word, out: int) -> None:
        if not word:
            raise ValueError("mu entries need at least one input")
        if not self.is_composable(word):
            raise NotComposable(f"mu entry on non-composable word {self.word_name(word)}")
        src, tgt = self.word_endpoints(word)
        for o in f2.bits(out):
            g = self.generators[o]
            if (g.source, g.target) != (src, tgt):
                raise NotComposable(
                    f"mu({self.word_name(word)}) has output {g.name} outside hom({src},{tgt})"
                )

    # -- basic queries --------------------------------------------------------

    def gen(self, name: str) -> int:
        return self.index[name]

    def chain(self, *names: str) -> int:
        mask = 0
        for n in names:
            mask ^= 1 << self.index[n]
        return mask

    def names(self, mask: int) -> list[str]:
        return [self.generators[i].name for i in f2.bits(mask)]

    def word_name(self, word: Sequence[int]) -> str:
        return "(" + ", ".join(self.generators[i].name for i in word) + ")"

    def is_composable(self, word: Sequence[int]) -> bool:
        gens = self.generators
        return all(gens[word[t]].source == gens[word[t + 1]].target for t in range(len(word) - 1))

    def word_endpoints(self, word: Sequence[int]) -> tuple[str, str]:
        return self.generators[word[-1]].source, self.generators[word[0]].target

    def hom_basis(self, x: str, y: str) -> list[int]:
        return self.hom.get((x, y), [])

    def word_length(self, word: Sequence[int]) -> int:
        return sum(self.generators[i].length for i in word)

    def composable_words(self, length: int, source: str | None = None) -> Iterator[Word]:
        """Composable words of the given length, listed as ``(g_d, ..., g_1)``."""
        from_obj: dict[str, list[int]] = {}
        for i, g in enumerate(self.generators):
            from_obj.setdefault(g.source, []).append(i)
        starts = [source] if source is not None else list(self.objects)

        def extend(prefix: list[int], obj: str) -> Iterator[Word]:
            if len(prefix) == length:
                yield tuple(reversed(prefix))
                return
            for i in from_obj.get(obj, []):
                prefix.append(i)
                yield from extend(prefix, self.generators[i].target)
                prefix.pop()

        if length <= 0:
            return
        for obj in starts:
            yield from extend([], obj)

    def outputs_index(self) -> dict[int, list[Word]]:
        """Map each generator to the mu-words whose output contains it."""
        by_out: dict[int, list[Word]] = {}
        for word, out in self.mu.items():
            for o in f2.bits(out):
                by_out.setdefault(o, []).append(word)
        return by_out

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AInftyStructure)
            and self.objects == other.objects
            and self.stops == other.stops
            and self.generators == other.generators
            and self.mu == other.mu
            and self.max_arity == other.max_arity
            and self.units == other.units
            and self.truncation == other.truncation
        )

    def __repr__(self) -> str:
        return (
            f"AInftyStructure({len(self.objects)} objects, {len(self.generators)} generators, "
            f"{len(self.mu)} mu entries, max_arity={self.max_arity})"
        )


# -- evaluation ---------------------------------------------------------------


def evaluate_mu(C: AInftyStructure, word: Sequence[int | str], strict: bool = False) -> int:
    """``mu^d`` on a word of generators (indices or names)."""
    word = tuple(C.index[w] if isinstance(w, str) else w for w in word)
    if not word:
        raise ValueError("mu needs a nonempty word")
    if not C.is_composable(word):
        raise NotComposable(f"word {C.word_name(word)} is not composable")
    if len(word) > C.max_arity:
        if strict:
            raise ArityExceeded(f"arity {len(word)} > max_arity {C.max_arity}")
        return 0
    return C.mu.get(word, 0)


def evaluate_mu_chains(C: AInftyStructure, chains: Sequence[int]) -> int:
    """Multilinear extension of ``mu`` to chains; non-composable term choices vanish."""
    if len(chains) > C.max_arity:
        return 0
    out = 0
    for word in itertools.product(*(list(f2.bits(c)) for c in chains)):
        out ^= C.mu.get(word, 0)
    return out


def mu1(C: AInftyStructure, mask: int) -> int:
    out = 0
    for i in f2.bits(mask):
        out ^= C.mu.get((i,), 0)
    return out


# -- verification -------------------------------------------------------------


def relation_sums(C: AInftyStructure, max_d: int) -> dict[Word, int]:
    """Left-hand sides of the associativity relations on every word of length ``<= max_d``.

    Only words on which some composite ``mu(.., mu(..), ..)`` is nonzero are
    generated; all other words satisfy the relation trivially.  Words whose
    total bar length exceeds ``C.truncation`` are skipped, since operations
    there may have been cut off.
    """
    by_out = C.outputs_index()
    acc: dict[Word, int] = {}
    for outer, out_mask in C.mu.items():
        k = len(outer)
        for p, g in enumerate(outer):
            for inner in by_out.get(g, ()):
                if k + len(inner) - 1 > max_d:
                    continue
                word = outer[:p] + inner + outer[p + 1:]
                acc[word] = acc.get(word, 0) ^ out_mask
    if C.truncation is not None:
        acc = {w: v for w, v in acc.items() if C.word_length(w) <= C.truncation}
    return acc


def verify_ainfty_relations(C: AInftyStructure, max_d: int) -> list[Violation]:
    if max_d < 1:
        raise ValueError("max_d must be at least 1")
    bad = [(w, v) for w, v in relation_sums(C, max_d).items() if v]
    bad.sort(key=lambda wv: (len(wv[0]), wv[0]))
    return [
        Violation(C.word_name(w), "relation sum = " + " + ".join(C.names(v)))
        for w, v in bad
    ]


def verify_degree_convention(C: AInftyStructure) -> list[Violation]:
    out = []
    for word, mask in sorted(C.mu.items(), key=lambda kv: (len(kv[0]), kv[0])):
        expected = sum(C.generators[i].degree for i in word) + 2 - len(word)
        for o in f2.bits(mask):
            g = C.generators[o]
            if g.degree != expected:
                out.append(
                    Violation(
                        f"mu^{len(word)}{C.word_name(word)}",
                        f"output {g.name} has degree {g.degree}, expected {expected}",
                    )
                )
    return out


def hom_complex(C: AInftyStructure, x: str, y: str) -> tuple[FiniteComplex, list[int]]:
    """``(hom(x, y), mu^1)`` as a complex on local indices, plus the global index list."""
    idx = C.hom_basis(x, y)
    local = {g: j for j, g in enumerate(idx)}
    diff = []
    for g in idx:
        img = 0
        for o in f2.bits(C.mu.get((g,), 0)):
            img |= 1 << local[o]
        diff.append(img)
    gens = [C.generators[g] for g in idx]
    cx = FiniteComplex(
        degrees=[g.degree for g in gens],
        differential=diff,
        lengths=[g.length for g in gens],
        labels=[g.name for g in gens],
    )
    return cx, idx


def to_local(mask: int, idx: Sequence[int]) -> int:
    local = {g: j for j, g in enumerate(idx)}
    out = 0
    for g in f2.bits(mask):
        out |= 1 << local[g]
    return out


def to_global(mask: int, idx: Sequence[int]) -> int:
    out = 0
    for j in f2.bits(mask):
        out |= 1 << idx[j]
    return out


def hom_homology(C: AInftyStructure, x: str, y: str, degree_window: Iterable[int]) -> dict[int, int]:
    cx, _ = hom_complex(C, x, y)
    cx.check_square_zero()
    return cx.homology(list(degree_window))


def is_homology_unit(C: AInftyStructure, e: int | str, obj: str) -> bool:
    e = C.index[e] if isinstance(e, str) else e
    g = C.generators[e]
    if (g.source, g.target) != (obj, obj) or g.degree != 0:
        raise ValueError(f"{g.name} is not a degree-0 endomorphism of {obj}")
    if C.mu.get((e,), 0):
        raise NotACycle(f"mu^1({g.name}) != 0")
    for other in C.objects:
        for x, y, side in ((obj, other, "right"), (other, obj, "left")):
            cx, idx = hom_complex(C, x, y)
            for k in sorted(set(cx.degrees)):
                for z in cx.cycles(k):
                    z_global = to_global(z, idx)
                    if side == "right":
                        prod = evaluate_mu_chains(C, [z_global, 1 << e])
                    else:
                        prod = evaluate_mu_chains(C, [1 << e, z_global])
                    if not cx.is_boundary(to_local(prod ^ z_global, idx), k):
                        return False
    return True


# -- gauge transformations ----------------------------------------------------


def _check_gauge(C: AInftyStructure, g: Mapping[Word, int]) -> None:
    for word, out in g.items():
        if len(word) < 2:
            raise DegreeMismatch("gauge data must have arity >= 2 (g^1 is the identity)")
        if not C.is_composable(word):
            raise NotComposable(f"gauge entry on non-composable word {C.word_name(word)}")
        src, tgt = C.word_endpoints(word)
        expected = sum(C.generators[i].degree for i in word) + 1 - len(word)
        for o in f2.bits(out):
            h = C.generators[o]
            if (h.source, h.target) != (src, tgt):
                raise NotComposable(f"g{C.word_name(word)} has output {h.name} in the wrong hom")
            if h.degree != expected:
                raise DegreeMismatch(
                    f"g{C.word_name(word)} -> {h.name}: degree {h.degree}, expected {expected}"
                )


def _apply_blocks(maps: Mapping[Word, int], blocks: Sequence[Word]) -> list[int] | None:
    """Images of each block under a map with identity linear part; None if any vanishes."""
    out = []
    for b in blocks:
        img = (1 << b[0]) if len(b) == 1 else maps.get(b, 0)
        if not img:
            return None
        out.append(img)
    return out


def _expand(mu: Mapping[Word, int], chains: Sequence[int]) -> int:
    out = 0
    for word in itertools.product(*(list(f2.bits(c)) for c in chains)):
        out ^= mu.get(word, 0)
    return out


def invert_gauge(C: AInftyStructure, g: Mapping[Word, int], max_arity: int) -> dict[Word, int]:
    """Components of the inverse coalgebra automorphism, up to ``max_arity``."""
    _check_gauge(C, g)
    h: dict[Word, int] = {}
    for d in range(2, max_arity + 1):
        for word in C.composable_words(d):
            acc = 0
            for blocks in compositions(word):
                if len(blocks) < 2:
                    continue
                imgs = _apply_blocks(h, blocks)
                if imgs is not None:
                    acc ^= _expand(g, imgs)
            if acc:
                h[word] = acc
    return h


def gauge_transform(
    C: AInftyStructure, g: Mapping[Word, int], max_arity: int | None = None
) -> AInftyStructure:
    """Conjugate the bar coderivation of ``C`` by the automorphism with components ``g``.

    ``mu'`` is solved arity by arity from the functor equation for ``G: C -> C'``;
    the identity linear part makes the all-singletons term exactly ``mu'^d``.
    """
    _check_gauge(C, g)
    g = {w: v for w, v in g.items() if v}
    if max_arity is None:
        g_arity = max((len(w) for w in g), default=1)
        max_arity = C.max_arity + 2 * (g_arity - 1)
    new: dict[Word, int] = {}
    for d in range(1, max_arity + 1):
        for word in C.composable_words(d):
            acc = 0
            # G(..., mu_C(block), ...)
            for i in range(d):
                for j in range(i + 1, min(d, i + C.max_arity) + 1):
                    inner = C.mu.get(word[i:j], 0)
                    if not inner:
                        continue
                    for o in f2.bits(inner):
                        w2 = word[:i] + (o,) + word[j:]
                        acc ^= (1 << o) if len(w2) == 1 else g.get(w2, 0)
            # mu'(G(b_k), ..., G(b_1)) with at least one block longer than 1
            for blocks in compositions(word):
                if len(blocks) == d:
                    continue
                imgs = _apply_blocks(g, blocks)
                if imgs is not None:
                    acc ^= _expand(new, imgs)
            if acc:
                new[word] = acc
    return C.replace(mu=new, max_arity=max_arity)


def check_arity_bound(C: AInftyStructure, horizon: int | None = None) -> None:
    """Raise if a degree count allows a nonzero ``mu^d`` with ``d > max_arity``.

    ``mu^d`` on a word can only hit a generator of degree ``sum + 2 - d`` whose
    stop weights are bounded by the summed input weights.  For each pair of
    objects the achievable (degree sum, weight sum) pairs of composable words
    are propagated arity by arity, with weight sums capped at the largest
    weight any generator carries, so the state space stays finite.  The scan
    covers arities up to ``horizon`` (by default past the point where the
    degree pattern must repeat).
    """
    if not C.generators:
        return
    nstops = len(C.stops)
    cap = tuple(max(g.weights[s] for g in C.generators) for s in range(nstops))
    targets: dict[tuple[str, str], list[tuple[int, tuple[int, ...]]]] = {}
    for g in C.generators:
        targets.setdefault((g.source, g.target), []).append((g.degree, g.weights))
    steps = {key: {(k, w) for k, w in v} for key, v in targets.items()}
    degs = [g.degree for g in C.generators]
    if horizon is None:
        horizon = C.max_arity + len(C.objects) * (max(degs) - min(degs) + 1) + 2

    def add(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(min(x + y, c) for x, y, c in zip(a, b, cap))

    reach = {key: set(v) for key, v in steps.items()}
    for d in range(2, horizon + 1):
        nxt: dict[tuple[str, str], set] = {}
        for (x, y), states in reach.items():
            for (y2, z), st in steps.items():
                if y2 != y:
                    continue
                bucket = nxt.setdefault((x, z), set())
                bucket.update((k + k2, add(w, w2)) for k, w in states for k2, w2 in st)
        # q = k + 2 - d moves by (degree - 1) per extra input; drop states that
        # can no longer reach the lowest generator degree before the horizon
        floor = min(degs) - max(0, max(degs) - 1) * (horizon - d)
        reach = {key: {(k, w) for k, w in st if k + 2 - d >= floor} for key, st in nxt.items()}
        if d <= C.max_arity:
            continue
        for key, states in reach.items():
            for k, w in states:
                for k_out, w_out in targets.get(key, ()):
                    if k_out == k + 2 - d and all(a <= b for a, b in zip(w_out, w)):
                        raise ArityExceeded(
                            f"a nonzero mu^{d} into hom{key} is allowed by degree {k_out} "
                            f"but max_arity is {C.max_arity}"
                        )
