"""JSON interchange files for categories, functors, homotopies and retraction data.

Serialization is canonical: generators keep their stored order, mu entries
are sorted by arity then by input generator indices, and outputs are listed in
generator order.  Loading and re-dumping a file therefore reproduces it byte
for byte.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from . import f2linalg as f2
from .category import AInftyStructure, MorphismGenerator, Word, check_arity_bound
from .errors import FormatError

CATEGORY_FIELDS = {"objects", "stops", "generators", "mu", "max_arity", "units", "truncation"}
GENERATOR_FIELDS = {"name", "source", "target", "degree", "weights", "action", "length"}
ENTRY_FIELDS = {"arity", "inputs", "outputs"}


def parse_rational(text: str) -> Fraction:
    if not isinstance(text, str) or "." in text or "e" in text.lower():
        raise FormatError(f"action must be a 'p/q' string, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {text!r}") from exc


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise FormatError(msg)


def _check_fields(obj: Any, allowed: set[str], required: set[str], what: str) -> None:
    _require(isinstance(obj, dict), f"{what} must be an object")
    unknown = set(obj) - allowed
    _require(not unknown, f"unknown field(s) in {what}: {sorted(unknown)}")
    missing = required - set(obj)
    _require(not missing, f"missing field(s) in {what}: {sorted(missing)}")


def _entries(raw: Any, index: Mapping[str, int], what: str) -> dict[Word, int]:
    _require(isinstance(raw, list), f"{what} must be a list")
    table: dict[Word, int] = {}
    for e in raw:
        _check_fields(e, ENTRY_FIELDS, ENTRY_FIELDS, f"{what} entry")
        inputs, outputs = e["inputs"], e["outputs"]
        _require(isinstance(inputs, list) and len(inputs) == e["arity"], f"{what} arity mismatch")
        for n in inputs + outputs:
            _require(n in index, f"{what} refers to unknown generator {n!r}")
        key = tuple(index[n] for n in inputs)
        mask = 0
        for n in outputs:
            mask ^= 1 << index[n]
        table[key] = table.get(key, 0) ^ mask
    return table


def category_from_dict(data: Any) -> AInftyStructure:
    _check_fields(data, CATEGORY_FIELDS, {"objects", "stops", "generators", "mu", "max_arity"}, "category")
    stops = data["stops"]
    gens = []
    for g in data["generators"]:
        _check_fields(g, GENERATOR_FIELDS, GENERATOR_FIELDS - {"length"}, "generator")
        _require(isinstance(g["degree"], int), f"degree of {g['name']} must be an integer")
        _require(
            isinstance(g["weights"], list) and all(isinstance(w, int) and w >= 0 for w in g["weights"]),
            f"weights of {g['name']} must be nonnegative integers",
        )
        gens.append(
            MorphismGenerator(
                name=g["name"],
                source=g["source"],
                target=g["target"],
                degree=g["degree"],
                weights=tuple(g["weights"]),
                action=parse_rational(g["action"]),
                length=g.get("length", 0),
            )
        )
    index = {g.name: i for i, g in enumerate(gens)}
    _require(len(index) == len(gens), "generator names must be unique")
    units = data.get("units") or {}
    for obj, name in units.items():
        _require(name in index, f"unit {name!r} is not a generator")
    try:
        return AInftyStructure(
            data["objects"],
            gens,
            _entries(data["mu"], index, "mu"),
            data["max_arity"],
            stops=stops,
            units={k: index[v] for k, v in units.items()},
            truncation=data.get("truncation"),
        )
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def _entry_list(C_in: AInftyStructure, C_out: AInftyStructure, table: Mapping[Word, int]) -> list[dict]:
    return [
        {
            "arity": len(word),
            "inputs": [C_in.generators[i].name for i in word],
            "outputs": C_out.names(table[word]),
        }
        for word in sorted(table, key=lambda w: (len(w), w))
        if table[word]
    ]


def category_to_dict(C: AInftyStructure) -> dict:
    gens = []
    for g in C.generators:
        row = {
            "name": g.name,
            "source": g.source,
            "target": g.target,
            "degree": g.degree,
            "weights": list(g.weights),
            "action": format_rational(g.action),
        }
        if g.length:
            row["length"] = g.length
        gens.append(row)
    out = {
        "objects": list(C.objects),
        "stops": list(C.stops),
        "generators": gens,
        "mu": _entry_list(C, C, C.mu),
        "max_arity": C.max_arity,
    }
    if C.units:
        out["units"] = {obj: C.generators[i].name for obj, i in sorted(C.units.items())}
    if C.truncation is not None:
        out["truncation"] = C.truncation
    return out


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def dump_category(C: AInftyStructure) -> str:
    return dumps(category_to_dict(C))


def read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def load_category(path: str | Path, waive_arity_check: bool = False) -> AInftyStructure:
    C = category_from_dict(read_json(path))
    if not waive_arity_check:
        check_arity_bound(C)
    return C


def load_functor(path: str | Path):
    path = Path(path)
    data = read_json(path)
    _check_fields(
        data,
        {"source_file", "target_file", "object_map", "components"},
        {"source_file", "target_file", "components"},
        "functor",
    )
    src = load_category(path.parent / data["source_file"], waive_arity_check=True)
    tgt = load_category(path.parent / data["target_file"], waive_arity_check=True)
    return functor_from_dict(data, src, tgt)


def functor_from_dict(data: Mapping, src: AInftyStructure, tgt: AInftyStructure):
    from .functors import AInftyFunctor

    comps: dict[Word, int] = {}
    for e in data["components"]:
        _check_fields(e, ENTRY_FIELDS, ENTRY_FIELDS, "component")
        _require(len(e["inputs"]) == e["arity"], "component arity mismatch")
        for n in e["inputs"]:
            _require(n in src.index, f"unknown source generator {n!r}")
        for n in e["outputs"]:
            _require(n in tgt.index, f"unknown target generator {n!r}")
        key = tuple(src.index[n] for n in e["inputs"])
        comps[key] = comps.get(key, 0) ^ tgt.chain(*e["outputs"])
    object_map = data.get("object_map") or {o: o for o in src.objects}
    return AInftyFunctor(src, tgt, object_map, comps)


def functor_to_dict(F, source_file: str, target_file: str) -> dict:
    return {
        "source_file": source_file,
        "target_file": target_file,
        "object_map": dict(sorted(F.object_map.items())),
        "components": _entry_list(F.source, F.target, F.components),
    }


def load_homotopy(path: str | Path):
    from .functors import PreNaturalTransformation

    path = Path(path)
    data = read_json(path)
    _check_fields(data, {"from_functor", "to_functor", "components"}, {"from_functor", "to_functor", "components"}, "homotopy")
    fa = load_functor(path.parent / data["from_functor"])
    fb = load_functor(path.parent / data["to_functor"])
    comps = _entries_between(data["components"], fa.source, fa.target, "homotopy component")
    return PreNaturalTransformation(fa, fb, comps)


def _entries_between(raw: Any, src: AInftyStructure, tgt: AInftyStructure, what: str) -> dict[Word, int]:
    _require(isinstance(raw, list), f"{what} list expected")
    table: dict[Word, int] = {}
    for e in raw:
        _check_fields(e, ENTRY_FIELDS, ENTRY_FIELDS, what)
        _require(len(e["inputs"]) == e["arity"], f"{what} arity mismatch")
        for n in e["inputs"]:
            _require(n in src.index, f"unknown source generator {n!r}")
        for n in e["outputs"]:
            _require(n in tgt.index, f"unknown target generator {n!r}")
        key = tuple(src.index[n] for n in e["inputs"])
        table[key] = table.get(key, 0) ^ tgt.chain(*e["outputs"])
    return table


def delta_from_list(raw: Any, Q: AInftyStructure) -> dict[int, int]:
    _require(isinstance(raw, list), "delta file must be a list")
    delta: dict[int, int] = {}
    for e in raw:
        _check_fields(e, {"input", "outputs"}, {"input", "outputs"}, "delta entry")
        _require(e["input"] in Q.index, f"unknown generator {e['input']!r}")
        for n in e["outputs"]:
            _require(n in Q.index, f"unknown generator {n!r}")
        delta[Q.index[e["input"]]] = Q.chain(*e["outputs"])
    return delta


def delta_to_list(delta: Mapping[int, int], Q: AInftyStructure) -> list[dict]:
    return [
        {"input": Q.generators[i].name, "outputs": Q.names(delta[i])}
        for i in sorted(delta)
        if delta[i]
    ]


def parse_chain(expr: str, C: AInftyStructure) -> int:
    """Parse ``"a + b + c"`` into a chain bitmask."""
    mask = 0
    for term in expr.split("+"):
        term = term.strip()
        if not term:
            continue
        _require(term in C.index, f"unknown generator {term!r}")
        mask ^= 1 << C.index[term]
    return mask


def mask_names(C: AInftyStructure, mask: int) -> list[str]:
    return [C.generators[i].name for i in f2.bits(mask)]
