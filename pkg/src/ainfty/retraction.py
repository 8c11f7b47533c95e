"""Main filtration on quotient homs and the retraction built from a homotopy ``Delta``.

The main weight of a quotient word ``g^k | ... | g^0`` at a stop is the pair
``(sum of the entries' weights at that stop, k)``, ordered lexicographically.
The partially wrapped part (the subcomplex the retraction lands in) consists
of the words of total weight zero at the stop, whatever their length.  A
chain's weight is the max over its terms; the zero chain has no weight.

``Delta`` is a sparse map generator index -> chain of degree one less.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from . import f2linalg as f2
from .category import AInftyStructure, Violation, hom_complex, mu1, to_global, to_local
from .complexes import FiniteComplex, induced_map_report, stability_table
from .errors import DegreeMismatch, NonTerminating, NotASubcomplex

Delta = Mapping[int, int]


class MainWeight(NamedTuple):
    stop_weight: int
    word_length: int


def _stop_index(Q: AInftyStructure, sigma: str | int) -> int:
    if isinstance(sigma, int):
        return sigma
    return Q.stops.index(sigma)


def main_weight(Q: AInftyStructure, gen: int, sigma: str | int) -> MainWeight:
    g = Q.generators[gen]
    return MainWeight(g.weights[_stop_index(Q, sigma)], g.length)


def chain_main_weight(Q: AInftyStructure, mask: int, sigma: str | int) -> MainWeight | None:
    """Max over terms; ``None`` for the zero chain."""
    s = _stop_index(Q, sigma)
    best = None
    for i in f2.bits(mask):
        w = MainWeight(Q.generators[i].weights[s], Q.generators[i].length)
        if best is None or w > best:
            best = w
    return best


def in_partially_wrapped(Q: AInftyStructure, mask: int, sigma: str | int) -> bool:
    s = _stop_index(Q, sigma)
    return all(Q.generators[i].weights[s] == 0 for i in f2.bits(mask))


def apply_delta(delta: Delta, mask: int) -> int:
    out = 0
    for i in f2.bits(mask):
        out ^= delta.get(i, 0)
    return out


def basic_retraction(Q: AInftyStructure, delta: Delta, x: int) -> int:
    """``R(x) = x + mu^1 Delta x + Delta mu^1 x``."""
    return x ^ mu1(Q, apply_delta(delta, x)) ^ apply_delta(delta, mu1(Q, x))


def check_delta_degrees(Q: AInftyStructure, delta: Delta) -> None:
    for i, out in delta.items():
        g = Q.generators[i]
        for o in f2.bits(out):
            h = Q.generators[o]
            if h.degree != g.degree - 1 or (h.source, h.target) != (g.source, g.target):
                raise DegreeMismatch(f"Delta({g.name}) contains {h.name}, not of degree {g.degree - 1} in the same hom")


def verify_retraction_hypotheses(
    Q: AInftyStructure, delta: Delta, basis: Iterable[int], sigma: str | int
) -> list[Violation]:
    """Check ``R = id`` on the weight-zero part and strict weight descent elsewhere."""
    out = []
    for x in basis:
        name = Q.generators[x].name
        w = main_weight(Q, x, sigma)
        r = basic_retraction(Q, delta, 1 << x)
        if w.stop_weight == 0:
            if delta.get(x, 0):
                out.append(Violation(name, "Delta is nonzero on a weight-zero generator"))
            if r != 1 << x:
                out.append(Violation(name, "R does not fix this weight-zero generator: " + " + ".join(Q.names(r))))
        else:
            wr = chain_main_weight(Q, r, sigma)
            if wr is not None and not wr < w:
                out.append(Violation(name, f"R has weight {tuple(wr)} not below {tuple(w)}"))
    return out


@dataclass
class RetractionResult:
    result: int
    iterations: int
    witness: int  # H(x) for the telescoped homotopy H = sum_{t < n} Delta R^t
    orbit: list[int] = field(default_factory=list)


def telescoped_homotopy(Q: AInftyStructure, delta: Delta, n: int) -> Callable[[int], int]:
    """``H = sum_{t<n} Delta R^t``, so that ``x + R^n x = mu^1 H x + H mu^1 x``."""

    def H(x: int) -> int:
        acc, y = 0, x
        for _ in range(n):
            acc ^= apply_delta(delta, y)
            y = basic_retraction(Q, delta, y)
        return acc

    return H


def iterate_retraction(
    Q: AInftyStructure, delta: Delta, x: int, sigma: str | int, max_steps: int = 10_000
) -> RetractionResult:
    """Apply ``R`` until the chain stops changing; the weight must drop at every move."""
    y, orbit, witness = x, [x], 0
    for step in range(max_steps + 1):
        ry = basic_retraction(Q, delta, y)
        if ry == y:
            if not in_partially_wrapped(Q, y, sigma):
                raise NonTerminating(f"step {step}: R fixes a chain of positive weight ({' + '.join(Q.names(y))})")
            return RetractionResult(y, step, witness, orbit)
        w_before, w_after = chain_main_weight(Q, y, sigma), chain_main_weight(Q, ry, sigma)
        if in_partially_wrapped(Q, y, sigma) or (w_after is not None and not w_after < w_before):
            raise NonTerminating(
                f"step {step}: weight {w_before} -> {w_after} does not descend ("
                + " + ".join(Q.names(y)) + ")"
            )
        witness ^= apply_delta(delta, y)
        y = ry
        orbit.append(y)
    raise NonTerminating(f"no fixed point after {max_steps} steps")


def homotopy_identity_holds(Q: AInftyStructure, delta: Delta, x: int, n: int) -> bool:
    """``x + R^n x == mu^1 H x + H mu^1 x`` for ``H`` the telescoped homotopy."""
    H = telescoped_homotopy(Q, delta, n)
    y = x
    for _ in range(n):
        y = basic_retraction(Q, delta, y)
    return x ^ y == mu1(Q, H(x)) ^ H(mu1(Q, x))


@dataclass
class DeformationReport:
    iterations: int
    passed: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.passed.values())


def verify_compact_deformation_property(
    Q: AInftyStructure, delta: Delta, basis: Sequence[int], sigma: str | int
) -> DeformationReport:
    """Find ``n`` with ``R^n`` stable on the span and check the homotopy identity there."""
    span = f2.echelon(1 << i for i in basis)
    for i in basis:
        if f2.reduce(mu1(Q, 1 << i), span):
            raise NotASubcomplex(f"mu^1({Q.generators[i].name}) leaves the span")
    n = max((iterate_retraction(Q, delta, 1 << i, sigma).iterations for i in basis), default=0)
    passed = {}
    for i in basis:
        y = 1 << i
        for _ in range(n):
            y = basic_retraction(Q, delta, y)
        ok = (
            basic_retraction(Q, delta, y) == y
            and in_partially_wrapped(Q, y, sigma)
            and homotopy_identity_holds(Q, delta, 1 << i, n)
        )
        passed[Q.generators[i].name] = ok
    return DeformationReport(n, passed)


def partially_wrapped_inclusion_report(
    Q: AInftyStructure, X: str, Y: str, sigma: str | int, window: Sequence[int]
) -> dict[int, dict]:
    """Homology of the weight-zero subcomplex against the whole hom, per degree.

    Each row carries the induced-map data and whether the hom's homology is
    stable at the word-length cutoff.
    """
    full, idx = hom_complex(Q, X, Y)
    s = _stop_index(Q, sigma)
    keep = [j for j, g in enumerate(idx) if Q.generators[g].weights[s] == 0]
    pos = {j: t for t, j in enumerate(keep)}
    diff = []
    for j in keep:
        img = full.differential[j]
        if any(b not in pos for b in f2.bits(img)):
            raise NotASubcomplex("weight-zero words are not closed under mu^1")
        diff.append(sum(1 << pos[b] for b in f2.bits(img)))
    sub = FiniteComplex(
        degrees=[full.degrees[j] for j in keep],
        differential=diff,
        lengths=[full.lengths[j] for j in keep],
    )

    def incl(mask: int) -> int:
        return sum(1 << keep[t] for t in f2.bits(mask))

    rows = induced_map_report(sub, full, incl, window)
    table = stability_table(full, list(window), Q.truncation)
    return {k: dict(rows[k], stable=table[k].stable) for k in window}
