"""Stop-weight filtrations: subadditivity checks and zero-filtered subcategories."""

from __future__ import annotations

from typing import Iterable, Sequence

from . import f2linalg as f2
from .category import AInftyStructure, MorphismGenerator, Violation
from .errors import NotComposable, SubadditivityViolated

WeightVector = tuple[int, ...]


def word_weight(word: Sequence[MorphismGenerator], nstops: int | None = None) -> WeightVector:
    """Componentwise sum of generator weights; the empty word has weight zero."""
    if not word:
        return (0,) * (nstops or 0)
    out = [0] * len(word[0].weights)
    for g in word:
        for s, w in enumerate(g.weights):
            out[s] += w
    return tuple(out)


def chain_weight(C: AInftyStructure, mask: int) -> WeightVector:
    """Componentwise max over the terms of a chain."""
    out = [0] * len(C.stops)
    for i in f2.bits(mask):
        for s, w in enumerate(C.generators[i].weights):
            out[s] = max(out[s], w)
    return tuple(out)


def dominated(w: Sequence[int], bound: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(w, bound))


def verify_filtration_subadditivity(C: AInftyStructure, max_d: int | None = None) -> list[Violation]:
    out = []
    for word, mask in sorted(C.mu.items(), key=lambda kv: (len(kv[0]), kv[0])):
        if max_d is not None and len(word) > max_d:
            continue
        bound = word_weight([C.generators[i] for i in word], len(C.stops))
        for o in f2.bits(mask):
            g = C.generators[o]
            if not dominated(g.weights, bound):
                out.append(
                    Violation(
                        f"mu^{len(word)}{C.word_name(word)}",
                        f"output {g.name} has weight {list(g.weights)} > input weight {list(bound)}",
                    )
                )
    return out


def restrict_to_generators(C: AInftyStructure, keep: Iterable[int], **changes) -> AInftyStructure:
    """Full subcategory spanned by the kept generators; mu must not leave the span."""
    keep = sorted(set(keep))
    new_index = {old: new for new, old in enumerate(keep)}
    mask_keep = sum(1 << i for i in keep)
    mu = {}
    for word, out in C.mu.items():
        if all(i in new_index for i in word):
            if out & ~mask_keep:
                raise NotComposable(
                    f"mu{C.word_name(word)} leaves the kept generators: {C.names(out & ~mask_keep)}"
                )
            mu[tuple(new_index[i] for i in word)] = sum(1 << new_index[o] for o in f2.bits(out))
    units = {obj: new_index[u] for obj, u in C.units.items() if u in new_index}
    kw = dict(generators=[C.generators[i] for i in keep], mu=mu, units=units)
    kw.update(changes)
    return C.replace(**kw)


def zero_filtered_subcategory(C: AInftyStructure, kept_stops: Iterable[str]) -> AInftyStructure:
    """Generators of weight zero at every kept stop, with mu restricted."""
    bad = verify_filtration_subadditivity(C)
    if bad:
        raise SubadditivityViolated(f"{bad[0].location}: {bad[0].detail}")
    kept = set(kept_stops)
    unknown = kept - set(C.stops)
    if unknown:
        raise ValueError(f"unknown stops {sorted(unknown)}")
    cols = [s for s, name in enumerate(C.stops) if name in kept]
    keep = [i for i, g in enumerate(C.generators) if all(g.weights[s] == 0 for s in cols)]
    return restrict_to_generators(C, keep)
