"""Command-line frontend.

    holpoisson kb --builtin iwasawa6 --poisson "1 X1^X3"
    holpoisson lemma dpidbar --builtin nakamura_case2 --poisson pi23 --expect
    holpoisson report --model my.model --json

Exit codes: 0 success, 1 negative verdict under ``--expect``, 2 usage error,
3 model validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, List, Optional

from . import __version__
from .cohomology import (
    HodgeDiamond,
    aeppli,
    bott_chern,
    delpi_cohomology,
    dolbeault,
    kb_from_hodge,
    kb_homology,
    kunneth,
    lp_cohomology,
    ss_e_infinity,
    ss_page,
    CohomologyTable,
)
from .complexes import InvalidPage
from .lemmas import LemmaUnavailable
from .mc import (
    DEFAULT_ORDER,
    METHODS,
    MCSeries,
    NotClosed,
    PreconditionViolated,
    delpi_close,
    ks_residuals,
    residuals_vanish,
    solve_mc,
    tangent,
)
from .model import ModelError, builtin, builtin_names, load_model, parse_form
from .model.builtins import presets_for, resolve_poisson
from .model.core import Model
from .model.validation import validate
from .operators import CalibrationError, Op, apply, iota_order
from . import report as rep

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser, model: bool = True) -> None:
    if model:
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--model", metavar="FILE", help="model file")
        src.add_argument("--builtin", metavar="NAME", help="built-in model (see list-builtin)")
        p.add_argument("--poisson", metavar="EXPR", help='bivector such as "1 X1^X3", or a preset name')
        p.add_argument("--basis", action="store_true", help="include cohomology representatives")
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.add_argument("--expect", action="store_true", help="exit 1 when the verdict is negative")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="holpoisson", description="Cohomology of holomorphic Poisson models.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, text in [
        ("validate", "check the model axioms"),
        ("hodge", "Dolbeault cohomology h^{p,q}"),
        ("kb", "Koszul-Brylinski homology H_k"),
        ("bc", "Bott-Chern cohomology"),
        ("aeppli", "Aeppli cohomology"),
        ("lp", "Lichnerowicz-Poisson cohomology H^k"),
        ("degeneracy", "E_1-degeneration of the spectral sequence"),
        ("unimodular", "unimodularity and duality"),
        ("formality", "quasi-isomorphism ranks of the formality diagram"),
        ("report", "every analysis"),
    ]:
        _common(sub.add_parser(name, help=text))
    p = sub.add_parser("ss", help="a page of the spectral sequence")
    _common(p)
    p.add_argument("--page", required=True, help="page index r, or 'inf'")
    p = sub.add_parser("lemma", help="ddbar- or dpidbar-lemma with witness")
    p.add_argument("which", choices=["ddbar", "dpidbar"])
    _common(p)
    p = sub.add_parser("mc", help="order-by-order Maurer-Cartan solver")
    _common(p)
    p.add_argument("--alpha", required=True, metavar="EXPR", help='(1,1)-form such as "1 w1^wb1"')
    p.add_argument("--order", type=int, default=DEFAULT_ORDER)
    p.add_argument("--method", choices=METHODS, default="dpidbar")
    p = sub.add_parser("formula", help="KB dimensions from a Hodge diamond")
    _common(p, model=False)
    p.add_argument("--hodge", required=True, metavar="FILE", help='JSON {"n": n, "rows": [[...], ...]}')
    p.add_argument("--kunneth", metavar="FILE2", help="second diamond for a product")
    p = sub.add_parser("list-builtin", help="list built-in models and Poisson presets")
    _common(p, model=False)
    return ap


def load(args) -> Model:
    try:
        if args.builtin:
            return builtin(args.builtin, args.poisson)
        model = load_model(args.model)
        if args.poisson:
            model = model.with_poisson(resolve_poisson(model, args.poisson))
        return model
    except OSError as exc:
        raise UsageError(f"cannot read model: {exc}") from exc
    except ModelError as exc:
        raise UsageError(str(exc)) from exc


def _mc_section(model: Model, args) -> dict:
    try:
        alpha = parse_form(model, args.alpha)
        if args.method == "dpidbar" and apply(Op.DELPI, alpha).terms or \
                args.method == "deldbar" and apply(Op.DEL, alpha).terms:
            alpha = delpi_close(model, alpha, args.method)
        result = solve_mc(model, alpha, args.order, args.method)
    except (ModelError, NotClosed, PreconditionViolated, LemmaUnavailable, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    if not isinstance(result, MCSeries):
        sec = result.to_dict()
        sec["type"] = "mc"
        return sec
    sec = result.to_dict()
    sec["type"] = "mc"
    sec["residuals_zero"] = residuals_vanish(model, result)
    t = tangent(model, alpha)
    sec.update(t.to_dict())
    sec["ks_residuals_zero"] = all(not r.terms for r in ks_residuals(result).values())
    return sec


def _page_section(model: Model, page: str) -> dict:
    if page in ("inf", "infinity"):
        return rep.table_section(ss_e_infinity(model))
    try:
        r = int(page)
        return rep.table_section(ss_page(model, r))
    except (ValueError, InvalidPage) as exc:
        raise UsageError(f"invalid page {page!r}: {exc}") from exc


def _load_diamond(path: str) -> HodgeDiamond:
    try:
        return HodgeDiamond.load(path)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read Hodge diamond {path}: {exc}") from exc


def _formula_report(args) -> dict:
    h = _load_diamond(args.hodge)
    jobs = []
    if args.kunneth:
        h = kunneth(h, _load_diamond(args.kunneth))
        prod = CohomologyTable("Hodge-product", dict(h.h), None, h.n, ("p", "q"))
        jobs.append(("hodge_product", lambda: rep.table_section(prod)))
    jobs.append(("kb_formula", lambda: rep.table_section(kb_from_hodge(h))))
    return rep.build_report(None, jobs, args.timings)


def _builtins_report(args) -> dict:
    models = []
    for name in builtin_names():
        models.append({"name": name, "presets": sorted(presets_for(name))})
    return rep.build_report(None, [("builtins", lambda: {"type": "builtins", "models": models})], args.timings)


def _negative(section: dict) -> bool:
    t = section["type"]
    if t == "lemma":
        return not section["holds"]
    if t == "degeneracy":
        return not section["degenerate"]
    if t == "unimodular":
        return section["unimodular"] is not True
    if t == "formality":
        return not section["all_quasi_isomorphisms"]
    if t == "mc":
        return bool(section.get("obstruction")) or not section.get("residuals_zero", True)
    if t == "bc_aeppli":
        return not section["equality"]
    return False


def _jobs(command: str, model: Model, args) -> List[tuple]:
    b = args.basis
    simple: dict = {
        "hodge": lambda: rep.table_section(dolbeault(model, b)),
        "kb": lambda: rep.table_section(kb_homology(model, b)),
        "bc": lambda: rep.table_section(bott_chern(model, b)),
        "aeppli": lambda: rep.table_section(aeppli(model, b)),
        "lp": lambda: rep.table_section(lp_cohomology(model, b)),
        "degeneracy": lambda: rep.degeneracy_section(model),
        "unimodular": lambda: rep.unimodular_section(model),
        "formality": lambda: rep.formality_section(model),
    }
    if command in simple:
        return [(command, simple[command])]
    if command == "ss":
        return [("ss", lambda: _page_section(model, args.page))]
    if command == "lemma":
        return [(f"lemma_{args.which}", lambda: rep.lemma_section(model, args.which))]
    if command == "mc":
        return [("mc", lambda: _mc_section(model, args))]
    raise UsageError(f"unknown command {command}")


def run(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        iota_order()
    except CalibrationError as exc:
        print(f"sign calibration failed: {exc}", file=err)
        return EXIT_INVALID
    try:
        if args.command == "formula":
            report = _formula_report(args)
        elif args.command == "list-builtin":
            report = _builtins_report(args)
        else:
            model = load(args)
            check = validate(model)
            if args.command == "validate" or not check.ok:
                if not check.ok:
                    for c in check.failures():
                        print(f"validation failed: {c.name} (witness {c.witness})", file=err)
                report = rep.build_report(model, [("validate", lambda: rep.validation_section(model))], args.timings)
                _emit(report, args.json, out)
                return EXIT_OK if check.ok else EXIT_INVALID
            if args.command == "report":
                report = rep.full_report(model, args.basis, args.timings)
            else:
                report = rep.build_report(model, _jobs(args.command, model, args), args.timings)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    _emit(report, args.json, out)
    if args.expect and any(_negative(s) for s in report["sections"]):
        return EXIT_NEGATIVE
    return EXIT_OK


def _emit(report: dict, as_json: bool, out) -> None:
    if as_json:
        out.write(json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(rep.render(report))


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
