"""Deterministic test categories with known answers.

* directed path categories of the linear quiver ``L0 -> L1 -> ... -> L{n-1}``;
* small one-object categories (strict unit, acyclic pair, dual numbers);
* "doubled" quivers (paths tensored with an exterior class of degree -1)
  twisted by gauge data, which carry genuine ``mu^3``;
* the disk with stops on its boundary and arcs between marked points, whose
  morphisms are counterclockwise boundary paths filtered by stop crossings;
* a three-object toy for the retraction machinery.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Any, Iterable, Mapping, Sequence

from . import f2linalg as f2
from .category import AInftyStructure, MorphismGenerator, Word, gauge_transform, mu1
from .errors import InvalidModel, MissingCoveringArc
from .filtration import zero_filtered_subcategory
from .quotient import QuotientData, build_quotient

# -- quivers -------------------------------------------------------------------


def linear_quiver_category(n: int) -> AInftyStructure:
    """Path category of ``L0 -> ... -> L{n-1}``: units ``e{i}``, paths ``p{i}{j}`` (``i < j``).

    All generators sit in degree 0; a path's action is its number of arrows.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    objs = [f"L{i}" for i in range(n)]
    gens, name = [], {}
    for i in range(n):
        for j in range(i, n):
            label = f"e{i}" if i == j else f"p{i}{j}"
            name[(i, j)] = label
            gens.append(MorphismGenerator(label, objs[i], objs[j], 0, (), Fraction(j - i)))
    mu = [
        ((name[(j, k)], name[(i, j)]), [name[(i, k)]])
        for i in range(n)
        for j in range(i, n)
        for k in range(j, n)
    ]
    return AInftyStructure.from_names(
        objs, gens, mu, 2, units={objs[i]: name[(i, i)] for i in range(n)}
    )


def unit_category(action: Fraction = Fraction(1)) -> AInftyStructure:
    """One object ``P`` whose only morphism is the strict unit ``e``."""
    e = MorphismGenerator("e", "P", "P", 0, (), Fraction(action))
    return AInftyStructure.from_names(["P"], [e], [(("e", "e"), ["e"])], 2, units={"P": "e"})


def acyclic_category() -> AInftyStructure:
    """One object, ``u`` in degree 0 and ``w`` in degree 1 with ``mu^1 u = w``; no unit."""
    gens = [
        MorphismGenerator("u", "P", "P", 0, (), Fraction(1)),
        MorphismGenerator("w", "P", "P", 1, (), Fraction(1)),
    ]
    return AInftyStructure.from_names(["P"], gens, [(("u",), ["w"])], 2)


def dual_numbers_category() -> AInftyStructure:
    """One object, strict unit ``e`` and a closed ``x`` of degree 1 with ``x x = 0``."""
    gens = [
        MorphismGenerator("e", "P", "P", 0, (), Fraction(1)),
        MorphismGenerator("x", "P", "P", 1, (), Fraction(1)),
    ]
    mu = [(("e", "e"), ["e"]), (("e", "x"), ["x"]), (("x", "e"), ["x"])]
    return AInftyStructure.from_names(["P"], gens, mu, 2, units={"P": "e"})


def doubled_quiver_category(n: int) -> AInftyStructure:
    """Paths of the linear quiver tensored with ``{1, t}``, ``deg t = -1``, ``t t = 0``.

    The ``t``-copy of a path ``p`` is named ``p'``.
    """
    base = linear_quiver_category(n)
    gens = []
    for g in base.generators:
        gens.append(g)
    for g in base.generators:
        gens.append(MorphismGenerator(g.name + "'", g.source, g.target, -1, (), g.action))
    mu = []
    for (q, p), out in base.mu.items():
        qn, pn = base.generators[q].name, base.generators[p].name
        (o,) = base.names(out)
        mu.append(((qn, pn), [o]))
        mu.append(((qn + "'", pn), [o + "'"]))
        mu.append(((qn, pn + "'"), [o + "'"]))
    return AInftyStructure.from_names(
        base.objects, gens, mu, 2, units={obj: base.generators[u].name for obj, u in base.units.items()}
    )


def _product_gauge(C: AInftyStructure, pairs: Iterable[tuple[str, str]]) -> dict[Word, int]:
    """``g^2(x, y) = (x y)'`` on the listed pairs of untwisted generators."""
    g = {}
    for x, y in pairs:
        prod = C.mu.get((C.gen(x), C.gen(y)), 0)
        (o,) = C.names(prod)
        g[(C.gen(x), C.gen(y))] = C.chain(o + "'")
    return g


def _degree_zero_pairs(C: AInftyStructure, keep) -> list[tuple[str, str]]:
    out = []
    for x, y in itertools.product(C.generators, repeat=2):
        if x.degree or y.degree or y.target != x.source:
            continue
        if keep(x.name.startswith("e"), y.name.startswith("e")):
            out.append((x.name, y.name))
    return out


def gauge_variants() -> dict[str, tuple[AInftyStructure, dict[Word, int]]]:
    """Named (doubled quiver, gauge data) pairs used to build twisted fixtures.

    ``g^2(x, y) = (x y)'`` on a chosen set of composable untwisted pairs.
    Twisting every pair gives ``mu^3 = 0`` again; the selections below do not.
    """
    out = {}
    A3 = doubled_quiver_category(3)
    out["gauge_a3_single"] = (A3, _product_gauge(A3, [("p12", "p01")]))
    # pairs whose right input is an arrow, not a unit
    out["gauge_a3_arrow_right"] = (A3, _product_gauge(A3, _degree_zero_pairs(A3, lambda ux, uy: not uy)))
    A4 = doubled_quiver_category(4)
    out["gauge_a4_arrow_right"] = (A4, _product_gauge(A4, _degree_zero_pairs(A4, lambda ux, uy: not uy)))
    out["gauge_a4_left_unit"] = (A4, _product_gauge(A4, _degree_zero_pairs(A4, lambda ux, uy: ux and not uy)))
    return out


def gauge_twisted_fixtures() -> dict[str, AInftyStructure]:
    return {name: gauge_transform(C, g) for name, (C, g) in gauge_variants().items()}


# -- disk with stops -------------------------------------------------------------


@dataclass(frozen=True)
class DiskModel:
    """Stops at ``t/s`` on the circle ``[0, 1)``; interval ``t`` runs from stop ``t`` to stop ``t+1``.

    Interval ``t`` carries ``points_per_interval[t]`` marked points, evenly
    spaced inside it.  Each arc joins two unused marked points on distinct
    intervals; an endpoint is ``(interval, index)``.
    """

    stop_count: int
    points_per_interval: tuple[int, ...]
    arcs: tuple[tuple[str, tuple[int, int], tuple[int, int]], ...]
    winding_bound: int

    @property
    def stops(self) -> tuple[str, ...]:
        return tuple(f"s{t}" for t in range(self.stop_count))

    def point_position(self, interval: int, index: int) -> Fraction:
        s, m = self.stop_count, self.points_per_interval[interval]
        return Fraction(interval, s) + Fraction(index + 1, s * (m + 1))

    def validate(self) -> None:
        s = self.stop_count
        if s < 1:
            raise InvalidModel("need at least one stop")
        if len(self.points_per_interval) != s:
            raise InvalidModel("points_per_interval must have one entry per interval")
        if self.winding_bound < 1:
            raise InvalidModel("winding_bound must be at least 1")
        used, names = set(), set()
        for name, a, b in self.arcs:
            if name in names:
                raise InvalidModel(f"duplicate arc name {name}")
            names.add(name)
            for t, j in (a, b):
                if not (0 <= t < s and 0 <= j < self.points_per_interval[t]):
                    raise InvalidModel(f"arc {name} has endpoint {(t, j)} outside the model")
            if a[0] == b[0]:
                raise InvalidModel(f"arc {name} has both endpoints on interval {a[0]}")
            for p in (a, b):
                if p in used:
                    raise InvalidModel(f"marked point {p} is used twice")
                used.add(p)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> DiskModel:
        try:
            stops = data["stops"]
            s = stops if isinstance(stops, int) else len(stops)
            arcs = tuple(
                (a["name"], tuple(a["ends"][0]), tuple(a["ends"][1])) for a in data["arcs"]
            )
            m = cls(s, tuple(data["points_per_interval"]), arcs, data["winding_bound"])
        except (KeyError, TypeError, IndexError) as exc:
            raise InvalidModel(f"bad model description: {exc}") from exc
        m.validate()
        return m

    def to_dict(self) -> dict:
        return {
            "stops": self.stop_count,
            "points_per_interval": list(self.points_per_interval),
            "arcs": [{"name": n, "ends": [list(a), list(b)]} for n, a, b in self.arcs],
            "winding_bound": self.winding_bound,
        }

    def with_winding(self, W: int) -> DiskModel:
        return DiskModel(self.stop_count, self.points_per_interval, self.arcs, W)


def _path_name(X: str, a: int, Y: str, b: int, n: int) -> str:
    return f"{X}{a}.{Y}{b}.w{n}"


def disk_with_stops_category(m: DiskModel) -> AInftyStructure:
    """Boundary paths between arc endpoints, filtered by stop crossings.

    A generator from ``X`` to ``Y`` is a counterclockwise path from endpoint
    ``a`` of ``X`` to endpoint ``b`` of ``Y`` of total length below the
    winding bound (length 1 is a full turn); it is named ``X{a}.Y{b}.w{n}``
    with ``n`` the number of full turns beyond the first arrival.  The empty
    paths at the two ends of an arc are one strict unit ``e_X``.  The weight
    at a stop counts crossings, the degree is minus the total crossing count,
    the action is the length, and ``mu^2`` concatenates head to tail.
    """
    m.validate()
    s, W = m.stop_count, m.winding_bound
    ends = {name: (m.point_position(*a), m.point_position(*b)) for name, a, b in m.arcs}
    stops_at = [Fraction(t, s) for t in range(s)]

    def crossings(x: Fraction, length: Fraction) -> tuple[int, ...]:
        # integers k with x < p + k < x + length; no endpoint sits on a stop
        return tuple((x + length - p) // 1 - (x - p) // 1 for p in stops_at)

    gens: list[MorphismGenerator] = []
    # per generator: (X, a, Y, b, length)
    data: list[tuple[str, int, str, int, Fraction]] = []
    units = {}
    for X, _, _ in m.arcs:
        units[X] = len(gens)
        gens.append(MorphismGenerator(f"e_{X}", X, X, 0, (0,) * s, Fraction(0)))
        data.append((X, -1, X, -1, Fraction(0)))
    for X, _, _ in m.arcs:
        for Y, _, _ in m.arcs:
            for a in (0, 1):
                for b in (0, 1):
                    x, y = ends[X][a], ends[Y][b]
                    base = (y - x) % 1
                    n = 0 if base > 0 else 1
                    while base + n < W:
                        length = base + n
                        w = crossings(x, length)
                        gens.append(
                            MorphismGenerator(_path_name(X, a, Y, b, n), X, Y, -sum(w), w, length)
                        )
                        data.append((X, a, Y, b, length))
                        n += 1
    lookup = {(X, a, Y, b, L): i for i, (X, a, Y, b, L) in enumerate(data) if a >= 0}
    mu: dict[Word, int] = {}
    for i, (X, a, Y, b, L) in enumerate(data):
        for j, (Y2, b2, Z, c, L2) in enumerate(data):
            if Y2 != Y:
                continue
            if a < 0:  # unit on the right
                mu[(j, i)] = mu.get((j, i), 0) ^ (1 << j)
                continue
            if b2 < 0:  # unit on the left
                mu[(j, i)] = mu.get((j, i), 0) ^ (1 << i)
                continue
            if b2 != b or L + L2 >= W:
                continue
            k = lookup[(X, a, Z, c, L + L2)]
            mu[(j, i)] = 1 << k
    return AInftyStructure(
        [n for n, _, _ in m.arcs], gens, mu, 2, stops=m.stops, units=units
    )


def path_count_oracle(
    m: DiskModel,
    X: str,
    Y: str,
    zero_at: Iterable[str] | None = None,
    degree: int | None = None,
) -> int:
    """Count boundary paths from ``X`` to ``Y`` by walking the circle event by event.

    ``zero_at`` lists stops the path may not cross; ``degree`` keeps only
    paths crossing exactly ``-degree`` stops.  Empty paths count once when
    ``X == Y``.
    """
    m.validate()
    s = m.stop_count
    # events in counterclockwise order within one turn: ("stop", t) or ("pt", arc, end)
    events = []
    for t in range(s):
        events.append((Fraction(t, s), ("stop", f"s{t}")))
    for name, a, b in m.arcs:
        events.append((m.point_position(*a), ("pt", name, 0)))
        events.append((m.point_position(*b), ("pt", name, 1)))
    events.sort()
    forbidden = set(zero_at or ())
    count = 1 if X == Y and (degree is None or degree == 0) else 0
    nev = len(events)
    for start, (pos, ev) in enumerate(events):
        if ev[0] != "pt" or ev[1] != X:
            continue
        crossed, step = 0, 0
        while True:
            step += 1
            turns, idx = divmod(start + step, nev)
            p, e = events[idx]
            dist = p + turns - pos
            if dist >= m.winding_bound:
                break
            if e[0] == "stop":
                crossed += 1
                if e[1] in forbidden:
                    break
                continue
            if e[1] == Y and (degree is None or degree == -crossed):
                count += 1
    return count


def covering_arc(m: DiskModel, stop: str) -> str:
    """The arc joining the two marked points next to ``stop`` on either side."""
    t = int(stop[1:])
    before = ((t - 1) % m.stop_count, m.points_per_interval[(t - 1) % m.stop_count] - 1)
    after = (t, 0)
    for name, a, b in m.arcs:
        if {a, b} == {before, after}:
            return name
    raise MissingCoveringArc(f"no arc joins the marked points flanking {stop}")


@dataclass
class StopRemovalCase:
    full: AInftyStructure
    stopped: AInftyStructure  # zero-filtered at every stop
    subcategory: tuple[str, ...]
    reference: AInftyStructure  # zero-filtered at every stop but the removed one
    removed_stop: str


def stop_removal_testcase(m: DiskModel, removed_stop: str, with_subcategory: bool = True) -> StopRemovalCase:
    full = disk_with_stops_category(m)
    if removed_stop not in full.stops:
        raise InvalidModel(f"unknown stop {removed_stop}")
    D = covering_arc(m, removed_stop)
    stopped = zero_filtered_subcategory(full, full.stops)
    reference = zero_filtered_subcategory(full, [s for s in full.stops if s != removed_stop])
    return StopRemovalCase(full, stopped, (D,) if with_subcategory else (), reference, removed_stop)


def standard_disk_models() -> dict[str, DiskModel]:
    """Disk models with ``s = 2, 3, 4`` stops; arc ``D`` covers stop ``s0``."""
    out = {}
    s2 = (("D", (1, 1), (0, 0)), ("X", (0, 1), (1, 0)))
    s3 = (("D", (2, 1), (0, 0)), ("X", (0, 1), (1, 0)), ("Y", (1, 1), (2, 0)))
    s4 = (
        ("D", (3, 1), (0, 0)),
        ("X", (0, 1), (1, 0)),
        ("Y", (1, 1), (2, 0)),
        ("Z", (2, 1), (3, 0)),
    )
    for s, arcs in ((2, s2), (3, s3), (4, s4)):
        for W in (1, 2):
            out[f"disk_s{s}_w{W}"] = DiskModel(s, (2,) * s, arcs, W)
    return out


def golden_disk_model() -> DiskModel:
    """Smallest documented case: two stops, two arcs, winding bound 1."""
    return standard_disk_models()["disk_s2_w1"]


# -- toy retraction fixture ------------------------------------------------------


def retraction_toy_category() -> AInftyStructure:
    """Objects ``X, D, Y`` and one stop ``s``; ``D`` becomes contractible once ``s`` is crossed.

    ``u`` (degree -1, weight 1) has ``mu^1 u = e_D``; ``a' = u a`` and
    ``b' = b u`` are weight-1 partners of ``a`` and ``b`` with ``mu^1 a' = a``,
    ``mu^1 b' = b``; ``c = b a' = b' a`` is the weight-1 morphism ``X -> Y``.
    """

    def gen(name, src, tgt, deg, w):
        return MorphismGenerator(name, src, tgt, deg, (w,), Fraction(w))

    gens = [
        gen("e_X", "X", "X", 0, 0),
        gen("e_D", "D", "D", 0, 0),
        gen("e_Y", "Y", "Y", 0, 0),
        gen("u", "D", "D", -1, 1),
        gen("a", "X", "D", 0, 0),
        gen("a'", "X", "D", -1, 1),
        gen("b", "D", "Y", 0, 0),
        gen("b'", "D", "Y", -1, 1),
        gen("c", "X", "Y", -1, 1),
    ]
    mu = [
        (("u",), ["e_D"]),
        (("a'",), ["a"]),
        (("b'",), ["b"]),
        (("u", "a"), ["a'"]),
        (("b", "u"), ["b'"]),
        (("b", "a'"), ["c"]),
        (("b'", "a"), ["c"]),
    ]
    units = {"X": "e_X", "D": "e_D", "Y": "e_Y"}
    for g in gens:
        for obj, e in units.items():
            if g.source == obj:
                mu.append(((g.name, e), [g.name]))
            if g.target == obj and g.name != e:
                mu.append(((e, g.name), [g.name]))
    return AInftyStructure.from_names(["X", "D", "Y"], gens, mu, 2, stops=["s"], units=units)


TOY_WORD_LENGTH = 5


def retraction_toy_quotient(max_word_length: int = TOY_WORD_LENGTH) -> QuotientData:
    return build_quotient(retraction_toy_category(), ["D"], max_word_length)


def solve_weight_dropping_homotopy(
    Q: AInftyStructure,
    sigma: str,
    basis: Sequence[int],
) -> dict[int, int]:
    """Find ``Delta`` of degree -1 with ``R = id + mu^1 Delta + Delta mu^1`` dropping weight on ``basis``.

    ``Delta`` vanishes on weight-zero generators; on each positive-weight
    basis element ``x`` the coefficients of ``R(x)`` on generators of main
    weight ``>=`` that of ``x`` must vanish.  This is an affine system over
    GF(2) in the entries of ``Delta``; a particular solution is returned.
    Raises ``ValueError`` when the system is inconsistent.
    """
    s = Q.stops.index(sigma)

    def weight(i: int) -> tuple[int, int]:
        g = Q.generators[i]
        return (g.weights[s], g.length)

    domain = sorted({i for i in basis if weight(i)[0] > 0} | {
        o for i in basis for o in f2.bits(mu1(Q, 1 << i)) if weight(o)[0] > 0
    })
    var: dict[tuple[int, int], int] = {}
    for x in domain:
        g = Q.generators[x]
        for t in Q.hom_basis(g.source, g.target):
            if Q.generators[t].degree == g.degree - 1:
                var[(x, t)] = len(var)
    rows: list[int] = []  # bit per variable, plus the constant at bit len(var)
    const_bit = len(var)
    for x in basis:
        wx = weight(x)
        if wx[0] == 0:
            continue
        g = Q.generators[x]
        eqs: dict[int, int] = {}
        for beta in Q.hom_basis(g.source, g.target):
            if Q.generators[beta].degree != g.degree or weight(beta) < wx:
                continue
            eqs[beta] = (1 << const_bit) if beta == x else 0
        for (src, t), v in var.items():
            if src == x:
                for beta in f2.bits(mu1(Q, 1 << t)):
                    if beta in eqs:
                        eqs[beta] ^= 1 << v
        for sx in f2.bits(mu1(Q, 1 << x)):
            for beta in eqs:
                v = var.get((sx, beta))
                if v is not None:
                    eqs[beta] ^= 1 << v
        rows.extend(eqs.values())
    # Gaussian elimination keyed on the lowest variable bit
    pivots: dict[int, int] = {}
    for r in rows:
        for p, prow in pivots.items():
            if r >> p & 1:
                r ^= prow
        low = r & ((1 << const_bit) - 1)
        if not low:
            if r:
                raise ValueError("no weight-dropping homotopy exists on this basis")
            continue
        p = (low & -low).bit_length() - 1
        for q in list(pivots):
            if pivots[q] >> p & 1:
                pivots[q] ^= r
        pivots[p] = r
    inv = {v: key for key, v in var.items()}
    delta: dict[int, int] = {}
    for p, r in pivots.items():
        if r >> const_bit & 1:
            x, t = inv[p]
            delta[x] = delta.get(x, 0) ^ (1 << t)
    return {x: v for x, v in delta.items() if v}


def toy_hom_basis(Q: AInftyStructure, max_length: int | None = None) -> list[int]:
    """Generators of ``hom(X, Y)`` in the toy quotient, optionally capped in word length."""
    idx = Q.hom_basis("X", "Y")
    if max_length is None:
        return list(idx)
    return [i for i in idx if Q.generators[i].length <= max_length]


def load_toy_delta(Q: AInftyStructure) -> dict[int, int]:
    from .io import delta_from_list

    raw = json.loads(resources.files("ainfty.data").joinpath("toy_delta.json").read_text("utf-8"))
    return delta_from_list(raw, Q)


# -- registry --------------------------------------------------------------------


def shipped_fixtures() -> dict[str, AInftyStructure]:
    out: dict[str, AInftyStructure] = {}
    for n in range(1, 6):
        out[f"quiver_a{n}"] = linear_quiver_category(n)
    out["unit"] = unit_category()
    out["acyclic"] = acyclic_category()
    out["dual_numbers"] = dual_numbers_category()
    for name, m in standard_disk_models().items():
        out[name] = disk_with_stops_category(m)
    out.update(gauge_twisted_fixtures())
    out["retraction_toy"] = retraction_toy_category()
    return out
