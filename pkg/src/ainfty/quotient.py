"""Quotient of an A-infinity category by a full subcategory, with bar-type homs.

A morphism of ``A/B`` from ``X`` to ``Y`` is a word ``g^k | ... | g^0`` of
composable morphisms of ``A`` whose ``k`` intermediate objects all lie in
``B``; ``k`` is the word length and the degree is ``sum deg(g^i) - k``.
Length-0 words are the morphisms of ``A`` and keep their names.

Every operation of ``A/B`` comes from one operation of ``A``: its input block
is cut into ``d`` consecutive pieces, one per input word, with the word
boundaries at the cuts and every other junction a ``B`` object; each input
word may carry extra untouched entries on its free side (the leftmost word on
the left, the rightmost word on the right), and these reappear around the
output.  For ``d = 1`` there is no cut and this is the bar differential.
Homs are truncated at word length ``K``; operations whose inputs or output
would be longer are dropped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import f2linalg as f2
from .category import AInftyStructure, MorphismGenerator, Word, hom_complex, is_homology_unit
from .complexes import TableEntry, stability_table
from .errors import UnitNotFound
from .functors import AInftyFunctor, strict_functor


def quotient_word_name(A: AInftyStructure, entries: Sequence[int]) -> str:
    if len(entries) == 1:
        return A.generators[entries[0]].name
    return "w:" + "|".join(A.generators[i].name for i in entries)


def _through(A: AInftyStructure, B: set[str], max_k: int) -> list[list[Word]]:
    """``words[k]``: composable words of ``k + 1`` generators with interior objects in ``B``."""
    from_obj: dict[str, list[int]] = {}
    for i, g in enumerate(A.generators):
        from_obj.setdefault(g.source, []).append(i)
    words: list[list[Word]] = [[(i,) for i in range(len(A.generators))]]
    for _ in range(max_k):
        nxt = []
        for w in words[-1]:
            end = A.generators[w[0]].target
            if end not in B:
                continue
            for i in from_obj.get(end, ()):
                nxt.append((i,) + w)
        words.append(nxt)
    return words


@dataclass
class QuotientData:
    category: AInftyStructure
    base: AInftyStructure
    subcategory: tuple[str, ...]
    entries: list[Word]  # Q generator index -> word of A-generators (g^k, ..., g^0)


def build_quotient(A: AInftyStructure, B: Iterable[str], max_word_length: int) -> QuotientData:
    B = set(B)
    unknown = B - set(A.objects)
    if unknown:
        raise ValueError(f"unknown objects {sorted(unknown)}")
    K = max_word_length if B else 0
    layers = _through(A, B, K)
    entries = [w for layer in layers for w in layer]
    index = {w: i for i, w in enumerate(entries)}
    gens = []
    for w in entries:
        parts = [A.generators[i] for i in w]
        weights = tuple(sum(p.weights[s] for p in parts) for s in range(len(A.stops)))
        gens.append(
            MorphismGenerator(
                name=quotient_word_name(A, w),
                source=parts[-1].source,
                target=parts[0].target,
                degree=sum(p.degree for p in parts) - (len(w) - 1),
                weights=weights,
                action=sum((p.action for p in parts), start=parts[0].action * 0),
                length=len(w) - 1,
            )
        )

    # chains of extra entries: left side starts at a B object, right side ends at one
    prefixes: dict[str, list[Word]] = {b: [()] for b in A.objects}
    suffixes: dict[str, list[Word]] = {b: [()] for b in A.objects}
    if B:
        for layer in layers:
            for w in layer:
                src, tgt = A.generators[w[-1]].source, A.generators[w[0]].target
                if src in B:
                    prefixes[src].append(w)
                if tgt in B:
                    suffixes[tgt].append(w)

    mu: dict[Word, int] = {}
    for xs, out in A.mu.items():
        n = len(xs)
        junction_obj = [A.generators[xs[t]].source for t in range(n - 1)]  # between xs[t] and xs[t+1]
        for d in range(1, n + 1):
            for cuts in itertools.combinations(range(n - 1), d - 1):
                if any(junction_obj[t] not in B for t in range(n - 1) if t not in cuts):
                    continue
                bounds = [0] + [t + 1 for t in cuts] + [n]
                pieces = [xs[bounds[s]: bounds[s + 1]] for s in range(d)]
                if any(len(p) - 1 > K for p in pieces):
                    continue
                left_obj = A.generators[xs[0]].target
                right_obj = A.generators[xs[-1]].source
                for pre in prefixes[left_obj]:
                    first_len = len(pre) + len(pieces[0]) - 1
                    if first_len > K or len(pre) > K:
                        continue
                    for suf in suffixes[right_obj]:
                        if len(pre) + len(suf) > K:
                            continue
                        inputs = list(pieces)
                        inputs[0] = pre + inputs[0]
                        inputs[-1] = inputs[-1] + suf
                        if any(len(w) - 1 > K for w in inputs):
                            continue
                        key = tuple(index[w] for w in inputs)
                        val = 0
                        for o in f2.bits(out):
                            val ^= 1 << index[pre + (o,) + suf]
                        mu[key] = mu.get(key, 0) ^ val
    units = {obj: index[(u,)] for obj, u in A.units.items()}
    Q = AInftyStructure(
        A.objects,
        gens,
        mu,
        A.max_arity,
        stops=A.stops,
        units=units,
        truncation=K if B else A.truncation,
    )
    return QuotientData(Q, A, tuple(sorted(B)), entries)


def canonical_functor(data: QuotientData) -> AInftyFunctor:
    """The strict inclusion of ``A`` as the length-0 words of ``A/B``."""
    index = {w: i for i, w in enumerate(data.entries)}
    linear = {i: 1 << index[(i,)] for i in range(len(data.base.generators))}
    return strict_functor(data.base, data.category, linear)


def quotient_hom_homology(
    Q: AInftyStructure, X: str, Y: str, degree_window: Iterable[int]
) -> dict[int, TableEntry]:
    """Homology of ``hom_Q(X, Y)`` with stability across the last word-length step."""
    cx, _ = hom_complex(Q, X, Y)
    cx.check_square_zero()
    return stability_table(cx, list(degree_window), Q.truncation)


@dataclass(frozen=True)
class ContractibilityEntry:
    object: str
    unit: str
    contractible: bool


def find_homology_unit(A: AInftyStructure, L: str) -> int:
    if L in A.units:
        return A.units[L]
    for i in A.hom_basis(L, L):
        g = A.generators[i]
        if g.degree == 0 and not A.mu.get((i,), 0) and is_homology_unit(A, i, L):
            return i
    raise UnitNotFound(f"no homology unit generator found for {L}")


def check_contractible_subcategory(A: AInftyStructure, B: Iterable[str]) -> list[ContractibilityEntry]:
    """Per object of ``B``: does the unit class vanish in ``H^0(hom(L, L))``?"""
    out = []
    for L in sorted(set(B)):
        u = find_homology_unit(A, L)
        cx, idx = hom_complex(A, L, L)
        local = 1 << idx.index(u)
        out.append(ContractibilityEntry(L, A.generators[u].name, cx.is_boundary(local, 0)))
    return out
