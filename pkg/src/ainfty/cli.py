"""Command-line interface.

Every subcommand builds a report ``{command, argv, pass, violations, tables,
timing, details}``.  Exit status is 0 when the report passes and no table
entry in the requested window is UNSTABLE (unless ``--allow-unstable``), 1 on
a property violation or an UNSTABLE entry, and 2 on malformed input.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import f2linalg as f2
from . import io
from .category import (
    AInftyStructure,
    Violation,
    hom_complex,
    is_homology_unit,
    verify_ainfty_relations,
    verify_degree_convention,
)
from .complexes import TableEntry, stability_table
from .errors import AInftyError, NonTerminating, NotRepresentableAtLengthK

DEFAULT_MAX_ARITY = 6


class Report:
    def __init__(self, command: str, argv: Sequence[str]):
        self.command = command
        self.argv = list(argv)
        self.violations: list[Violation] = []
        self.tables: dict[str, dict[int, TableEntry]] = {}
        self.details: dict[str, Any] = {}
        self.failed = False
        self._start = time.perf_counter()

    def add(self, violations: Sequence[Violation]) -> None:
        self.violations.extend(violations)

    def unstable(self) -> list[str]:
        return [f"{name}[{k}]" for name, t in self.tables.items() for k, e in t.items() if not e.stable]

    def passed(self) -> bool:
        return not self.failed and not self.violations

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "argv": self.argv,
            "pass": self.passed(),
            "violations": [{"location": v.location, "detail": v.detail} for v in self.violations],
            "tables": {
                name: {str(k): {"dim": e.dim, "stable": e.stable} for k, e in sorted(t.items())}
                for name, t in self.tables.items()
            },
            "timing": {"seconds": round(time.perf_counter() - self._start, 6)},
            "details": self.details,
        }

    def to_text(self) -> str:
        lines = [f"{'PASS' if self.passed() else 'FAIL'} {self.command}"]
        for v in self.violations:
            lines.append(f"  violation at {v.location}: {v.detail}")
        for name, t in self.tables.items():
            lines.append(f"  {name}")
            for k, e in sorted(t.items()):
                lines.append(f"    {k:>4}: {e.dim}  {'STABLE' if e.stable else 'UNSTABLE'}")
        for key, val in self.details.items():
            if isinstance(val, dict):
                lines.append(f"  {key}:")
                lines.extend(f"    {a}: {b}" for a, b in val.items())
            elif isinstance(val, list):
                lines.append(f"  {key}: {' + '.join(map(str, val)) or '0'}")
            else:
                lines.append(f"  {key}: {val}")
        return "\n".join(lines)


# -- argument helpers ---------------------------------------------------------


def parse_degrees(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi if sep else lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from None
    if a > b:
        raise argparse.ArgumentTypeError(f"empty degree range {text!r}")
    return list(range(a, b + 1))


def parse_epsilon(text: str) -> Fraction:
    try:
        eps = io.parse_rational(text)
    except AInftyError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if eps < 0:
        raise argparse.ArgumentTypeError("epsilon must be nonnegative")
    return eps


def _names(values: Sequence[str] | None) -> list[str]:
    out: list[str] = []
    for v in values or ():
        out.extend(p.strip() for p in v.split(",") if p.strip())
    return out


def _load(args: argparse.Namespace, path: str, higher_ops: bool = True) -> AInftyStructure:
    # the arity bound only matters to commands that evaluate mu^d for d >= 2
    return io.load_category(path, waive_arity_check=args.waive_arity_check or not higher_ops)


def _hom_pairs(C: AInftyStructure, objects: Sequence[str]) -> list[tuple[str, str]]:
    if len(objects) == 2:
        for o in objects:
            if o not in C.objects:
                raise AInftyError(f"unknown object {o!r}")
        return [(objects[0], objects[1])]
    if objects:
        raise AInftyError("give a source and a target object, or none for every hom")
    return [(x, y) for x in C.objects for y in C.objects]


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


# -- subcommands --------------------------------------------------------------


def cmd_verify(args, rep: Report) -> None:
    from .filtration import verify_filtration_subadditivity

    C = _load(args, args.category)
    max_d = args.max_arity or max(2, min(2 * C.max_arity - 1, DEFAULT_MAX_ARITY))
    rep.add(verify_ainfty_relations(C, max_d))
    rep.add(verify_degree_convention(C))
    rep.add(verify_filtration_subadditivity(C, max_d))
    for obj, u in sorted(C.units.items()):
        if not is_homology_unit(C, u, obj):
            rep.add([Violation(C.generators[u].name, f"not a homology unit for {obj}")])
    rep.details["max_arity"] = max_d


def cmd_homology(args, rep: Report) -> None:
    C = _load(args, args.category, higher_ops=False)
    for x, y in _hom_pairs(C, args.objects):
        cx, _ = hom_complex(C, x, y)
        cx.check_square_zero()
        rep.tables[f"hom({x},{y})"] = stability_table(cx, args.degrees, C.truncation)


def cmd_hochschild(args, rep: Report) -> None:
    from .hochschild import hochschild_homology

    C = _load(args, args.category)
    rep.tables["HH"] = hochschild_homology(C, args.max_length, args.degrees)
    rep.details["max_length"] = args.max_length


def _parse_hh_chain(C: AInftyStructure, expr: str) -> list[tuple[int, ...]]:
    words: dict[tuple[int, ...], int] = {}
    for term in expr.split("+"):
        term = term.strip()
        if not term:
            continue
        word = []
        for name in term.split(","):
            name = name.strip()
            if name not in C.index:
                raise AInftyError(f"unknown generator {name!r}")
            word.append(C.index[name])
        w = tuple(word)
        words[w] = words.get(w, 0) ^ 1
    return [w for w, c in words.items() if c]


def cmd_action(args, rep: Report) -> None:
    from .hochschild import length_k_class_action, verify_action_filtration, word_label

    C = _load(args, args.category)
    if args.cycle is None:
        rep.add(verify_action_filtration(C, args.epsilon, max_length=args.max_length))
        rep.details["max_length"] = args.max_length
        return
    cycle = _parse_hh_chain(C, args.cycle)
    try:
        value, chain = length_k_class_action(C, cycle, args.k, args.epsilon)
    except NotRepresentableAtLengthK as exc:
        rep.add([Violation(args.cycle, str(exc))])
        return
    rep.details["action"] = value.to_json()
    rep.details["representative"] = sorted(word_label(C, w) for w in chain)


def cmd_quotient(args, rep: Report) -> None:
    from .quotient import build_quotient, check_contractible_subcategory

    A = _load(args, args.category)
    B = _names(args.subcat)
    data = build_quotient(A, B, args.max_word_length)
    _write(args.output, io.dump_category(data.category))
    rep.details["generators"] = len(data.category.generators)
    if B:
        rep.details["contractible"] = {e.object: e.contractible for e in check_contractible_subcategory(A, B)}


def cmd_retract(args, rep: Report) -> None:
    from .retraction import homotopy_identity_holds, iterate_retraction, verify_retraction_hypotheses

    Q = _load(args, args.category, higher_ops=False)
    delta = io.delta_from_list(io.read_json(args.delta), Q)
    sigma = args.stop or (Q.stops[0] if Q.stops else None)
    if sigma is None or sigma not in Q.stops:
        raise AInftyError(f"unknown stop {sigma!r}")
    x = io.parse_chain(args.element, Q)
    rep.add(verify_retraction_hypotheses(Q, delta, list(f2.bits(x)), sigma))
    try:
        res = iterate_retraction(Q, delta, x, sigma)
    except NonTerminating as exc:
        rep.add([Violation(args.element, str(exc))])
        return
    if not homotopy_identity_holds(Q, delta, x, res.iterations):
        rep.add([Violation(args.element, "x + R^n x != mu^1 H x + H mu^1 x")])
    rep.details["result"] = io.mask_names(Q, res.result)
    rep.details["iterations"] = res.iterations
    rep.details["witness"] = io.mask_names(Q, res.witness)


def cmd_wlim(args, rep: Report) -> None:
    from .functors import build_wlim, inclusion_homology_report, strict_inclusion, verify_functor_equations

    C = _load(args, args.category)
    W = build_wlim(C, args.stabilization_bound)
    F = strict_inclusion(W)
    rep.add(verify_functor_equations(F, args.max_arity or 4))
    report = inclusion_homology_report(F, args.degrees)
    for (x, y), rows in report.items():
        name = f"hom({x},{y})"
        rep.tables[name] = {k: TableEntry(r["target"], True) for k, r in rows.items()}
        for k, r in rows.items():
            if not r["iso"]:
                rep.add([Violation(f"{name}[{k}]", f"induced map rank {r['rank']}, dims {r['source']} -> {r['target']}")])
    if args.output:
        _write(args.output, io.dump_category(W.category))
    rep.details["generators"] = len(W.category.generators)


def cmd_fixture(args, rep: Report) -> None:
    from . import fixtures

    if args.model:
        model = fixtures.DiskModel.from_dict(io.read_json(args.model))
        C = fixtures.disk_with_stops_category(model)
    elif args.name == "retraction_toy_quotient":
        Q = fixtures.retraction_toy_quotient().category
        if args.delta_output:
            Path(args.delta_output).write_text(io.dumps(io.delta_to_list(fixtures.load_toy_delta(Q), Q)), encoding="utf-8")
        C = Q
    else:
        table = fixtures.shipped_fixtures()
        if args.name not in table:
            raise AInftyError(f"unknown fixture {args.name!r}; known: {', '.join(sorted(table))}, retraction_toy_quotient")
        C = table[args.name]
    _write(args.output, io.dump_category(C))
    rep.details["generators"] = len(C.generators)


def cmd_functor_check(args, rep: Report) -> None:
    from .functors import verify_functor_degrees, verify_functor_equations

    F = io.load_functor(args.functor)
    rep.add(verify_functor_degrees(F))
    rep.add(verify_functor_equations(F, args.max_arity or F.max_arity + 1))


def cmd_homotopy_check(args, rep: Report) -> None:
    from .functors import verify_homotopy, verify_homotopy_degrees

    H = io.load_homotopy(args.homotopy)
    rep.add(verify_homotopy_degrees(H))
    rep.add(verify_homotopy(H, args.max_arity or 4))


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--allow-unstable", action="store_true", help="do not fail on UNSTABLE entries")
    common.add_argument(
        "--waive-arity-check", action="store_true", help="load categories without the finite-arity degree check"
    )

    p = argparse.ArgumentParser(prog="ainfty", description="Finite filtered A-infinity categories over GF(2).")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(func=fn)
        return sp

    sp = add("verify", cmd_verify, "A-infinity relations, degrees, filtration and units")
    sp.add_argument("category")
    sp.add_argument("--max-arity", type=int)

    sp = add("homology", cmd_homology, "hom homology with stability flags")
    sp.add_argument("category")
    sp.add_argument("objects", nargs="*", help="source and target object (default: every hom)")
    sp.add_argument("--degrees", type=parse_degrees, default=parse_degrees("-5..0"))

    sp = add("hochschild", cmd_hochschild, "Hochschild homology of the length truncation")
    sp.add_argument("category")
    sp.add_argument("--max-length", type=int, default=6)
    sp.add_argument("--degrees", type=parse_degrees, default=parse_degrees("-5..0"))

    sp = add("action", cmd_action, "action filtration check or length-k class action")
    sp.add_argument("category")
    sp.add_argument("--cycle", help='Hochschild chain such as "b,a + c"')
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--epsilon", type=parse_epsilon, default=Fraction(0))
    sp.add_argument("--max-length", type=int, default=4)

    sp = add("quotient", cmd_quotient, "quotient category file")
    sp.add_argument("category")
    sp.add_argument("--subcat", action="append", help="objects of the subcategory (comma separated)")
    sp.add_argument("--max-word-length", type=int, default=4)
    sp.add_argument("-o", "--output")

    sp = add("retract", cmd_retract, "iterate the basic retraction on an element")
    sp.add_argument("category")
    sp.add_argument("--delta", required=True, help="JSON list of {input, outputs}")
    sp.add_argument("--element", required=True, help='chain such as "a + b"')
    sp.add_argument("--stop")

    sp = add("wlim", cmd_wlim, "homotopy-limit category and its strict inclusion")
    sp.add_argument("category")
    sp.add_argument("--stabilization-bound", type=int, default=4)
    sp.add_argument("--max-arity", type=int)
    sp.add_argument("--degrees", type=parse_degrees, default=parse_degrees("-5..0"))
    sp.add_argument("-o", "--output")

    sp = add("fixture", cmd_fixture, "emit a shipped fixture or a disk model category")
    sp.add_argument("name", nargs="?", default="")
    sp.add_argument("--model", help="disk model JSON {stops, points_per_interval, arcs, winding_bound}")
    sp.add_argument("--delta-output", help="with retraction_toy_quotient, also write its Delta")
    sp.add_argument("-o", "--output")

    sp = add("functor-check", cmd_functor_check, "A-infinity functor equations")
    sp.add_argument("functor")
    sp.add_argument("--max-arity", type=int)

    sp = add("homotopy-check", cmd_homotopy_check, "homotopy equations between two functors")
    sp.add_argument("homotopy")
    sp.add_argument("--max-arity", type=int)
    return p


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    # argparse reads "-5..0" as an option; attach it to its flag
    out, it = [], iter(argv)
    for tok in it:
        if tok in ("--degrees", "--epsilon"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def _emit(rep: Report, as_json: bool, to_stderr: bool) -> None:
    text = io.dumps(rep.to_dict()) if as_json else rep.to_text() + "\n"
    (sys.stderr if to_stderr else sys.stdout).write(text)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(_glue_negative_values(argv))
    rep = Report(args.command, argv)
    # the category itself goes to stdout when no output file is given
    to_stderr = args.command in ("quotient", "fixture") and not getattr(args, "output", None)
    try:
        args.func(args, rep)
    except (AInftyError, ValueError, OSError) as exc:
        rep.failed = True
        rep.add([Violation("input", f"{type(exc).__name__}: {exc}")])
        _emit(rep, args.json, to_stderr)
        return 2
    _emit(rep, args.json, to_stderr)
    if not rep.passed():
        return 1
    if rep.unstable() and not args.allow_unstable:
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
