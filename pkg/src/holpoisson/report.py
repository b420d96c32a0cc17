"""Report payloads and their human-readable rendering.

Every analysis produces a JSON-compatible section dict; the human text is
rendered from that dict alone, so ``render(json.loads(json.dumps(r)))``
reproduces the table exactly.
"""

from __future__ import annotations

import time
from typing import Callable, Dict, List, Optional

from . import __version__
from .cohomology import (
    CohomologyTable,
    Unsupported,
    aeppli,
    bott_chern,
    delpi_cohomology,
    dolbeault,
    kb_homology,
    lp_cohomology,
    ss_e_infinity,
    ss_page,
)
from .lemmas import (
    check_bc_aeppli_equality,
    check_deldbar,
    check_degeneracy,
    check_dpidbar,
    check_unimodular,
    formality_diagram,
)
from .model.core import Model
from .model.validation import validate

SCHEMA = "holpoisson-report/1"

Section = Dict[str, object]


def model_info(model: Model) -> Dict[str, object]:
    return {
        "name": model.name,
        "kind": model.kind,
        "n": model.n,
        "poisson": model.poisson.format() if not model.poisson.is_zero() else "0",
        "metadata": {k: str(v) for k, v in sorted(model.metadata.items())},
    }


# ---------------------------------------------------------------------------
# section builders

def table_section(table: CohomologyTable) -> Section:
    return {"type": "table", "table": table.to_dict()}


def validation_section(model: Model) -> Section:
    d = validate(model).to_dict()
    d["type"] = "validation"
    return d


def lemma_section(model: Model, which: str) -> Section:
    verdict = check_deldbar(model) if which == "ddbar" else check_dpidbar(model)
    d = verdict.to_dict()
    d["type"] = "lemma"
    d["scope"] = "model-level"
    return d


def degeneracy_section(model: Model) -> Section:
    d = check_degeneracy(model).to_dict()
    d["type"] = "degeneracy"
    return d


def bc_aeppli_section(model: Model) -> Section:
    d = check_bc_aeppli_equality(model).to_dict()
    d["type"] = "bc_aeppli"
    return d


def unimodular_section(model: Model) -> Section:
    try:
        d = check_unimodular(model).to_dict()
    except Unsupported as exc:
        return {"type": "unimodular", "unimodular": None, "delpi_omega": None, "unsupported": str(exc)}
    d["type"] = "unimodular"
    return d


def formality_section(model: Model) -> Section:
    diag = formality_diagram(model)
    return {
        "type": "formality",
        "all_quasi_isomorphisms": diag["all_quasi_isomorphisms"],
        "all_morphisms_isomorphisms": diag["all_morphisms_isomorphisms"],
        "maps": [m.to_dict() for m in diag["maps"]],
        "morphisms": [m.to_dict() for m in diag["morphisms"]],
    }


def full_report(model: Model, basis: bool = False, timings: bool = False) -> Dict[str, object]:
    """Every analysis on ``model``; deterministic unless ``timings`` is set."""
    jobs: List[tuple] = [
        ("validate", lambda: validation_section(model)),
        ("hodge", lambda: table_section(dolbeault(model, basis))),
        ("delpi", lambda: table_section(delpi_cohomology(model, basis))),
        ("kb", lambda: table_section(kb_homology(model, basis))),
        ("ss_e1", lambda: table_section(ss_page(model, 1))),
        ("ss_einf", lambda: table_section(ss_e_infinity(model))),
        ("bc", lambda: table_section(bott_chern(model, basis))),
        ("aeppli", lambda: table_section(aeppli(model, basis))),
        ("lp", lambda: table_section(lp_cohomology(model, basis))),
        ("lemma_ddbar", lambda: lemma_section(model, "ddbar")),
        ("lemma_dpidbar", lambda: lemma_section(model, "dpidbar")),
        ("degeneracy", lambda: degeneracy_section(model)),
        ("bc_aeppli", lambda: bc_aeppli_section(model)),
        ("unimodular", lambda: unimodular_section(model)),
        ("formality", lambda: formality_section(model)),
    ]
    return build_report(model, jobs, timings)


def build_report(model: Optional[Model], jobs, timings: bool = False) -> Dict[str, object]:
    sections = []
    clock = {}
    for name, job in jobs:
        t0 = time.perf_counter()
        sec = job()
        clock[name] = round(time.perf_counter() - t0, 3)
        sec["name"] = name
        sections.append(sec)
    out: Dict[str, object] = {"schema": SCHEMA, "version": __version__}
    if model is not None:
        out["model"] = model_info(model)
    out["sections"] = sections
    if timings:
        out["timings"] = clock
    return out


# ---------------------------------------------------------------------------
# rendering

def _yes(flag) -> str:
    return "yes" if flag else "no"


def _render_table(sec: Section) -> str:
    return CohomologyTable.from_dict(sec["table"]).format()


def _render_validation(sec: Section) -> str:
    lines = [f"# validation {'OK' if sec['ok'] else 'FAILED'}"]
    for c in sec["checks"]:
        line = f"{'pass' if c['passed'] else 'FAIL'}  {c['name']}"
        if c["witness"]:
            line += f"  witness: {c['witness']}"
        if c["detail"]:
            line += f"  ({c['detail']})"
        lines.append(line)
    return "\n".join(lines) + "\n"


def _render_lemma(sec: Section) -> str:
    lines = [f"# lemma {sec['lemma']} ({sec['scope']}): {'HOLDS' if sec['holds'] else 'FAILS'}"]
    w = sec["witness"]
    if w:
        lines.append(f"witness {w['element']} = D({w['preimage']}) at bidegree ({w['bidegree'][0]},{w['bidegree'][1]})")
    for key in ("condition_2", "condition_3"):
        if key in sec["details"]:
            lines.append(f"{key.replace('_', ' ')}: {_yes(sec['details'][key])}")
    lines.append("p  q  left  right")
    for row in sec["breakdown"]:
        mark = "" if row["left"] == row["right"] else "  *"
        lines.append(f"{row['p']}  {row['q']}  {row['left']}  {row['right']}{mark}")
    return "\n".join(lines) + "\n"


def _render_degeneracy(sec: Section) -> str:
    lines = [f"# degeneracy: {'DEGENERATE' if sec['degenerate'] else 'NOT DEGENERATE'}"]
    lines.append(f"E1 = Einf: {_yes(sec['page_test'])}")
    lines.append("k  hodge_sum  kb")
    for k, v in sec["kb"].items():
        hs = sec["hodge_sums"].get(k, 0)
        mark = "" if hs == v else f"  * {hs} vs {v}"
        lines.append(f"{k}  {hs}  {v}{mark}")
    return "\n".join(lines) + "\n"


def _render_bc_aeppli(sec: Section) -> str:
    lines = [f"# bc+aeppli = 2 kb: {'EQUALITY' if sec['equality'] else 'STRICT SOMEWHERE'}",
             f"inequality holds: {_yes(sec['inequality_holds'])}", "k  bc+aeppli  2kb"]
    for row in sec["rows"]:
        lines.append(f"{row['k']}  {row['bc_plus_aeppli']}  {row['twice_kb']}")
    return "\n".join(lines) + "\n"


def _render_unimodular(sec: Section) -> str:
    if sec["unimodular"] is None:
        return f"# unimodular: UNSUPPORTED\n{sec['unsupported']}\n"
    lines = [f"# unimodular: {'YES' if sec['unimodular'] else 'NO'}", f"delpi(omega) = {sec['delpi_omega']}"]
    if "duality" in sec:
        lines.append(f"duality H_k = H^(2n-k): {_yes(sec['duality_holds'])}")
        for row in sec["duality"]:
            lines.append(f"{row['k']}  {row['kb']}  {row['lp_2n_minus_k']}")
    return "\n".join(lines) + "\n"


def _render_map(m) -> List[str]:
    lines = [f"{m['map']}: {m['source']} -> {m['target']}  well-defined: {_yes(m['well_defined'])}"
             f"  iso: {_yes(m['isomorphism'])}"]
    bad = [r for r in m["ranks"] if not r["rank"] == r["source"] == r["target"]]
    for r in bad:
        lines.append(f"    at {r['index']}: rank {r['rank']}, source {r['source']}, target {r['target']}")
    return lines


def _render_formality(sec: Section) -> str:
    lines = [f"# formality diagram: all quasi-isomorphisms: {_yes(sec['all_quasi_isomorphisms'])}"]
    for m in sec["maps"]:
        lines += _render_map(m)
    lines.append(f"# comparison morphisms: all isomorphisms: {_yes(sec['all_morphisms_isomorphisms'])}")
    for m in sec["morphisms"]:
        lines += _render_map(m)
    return "\n".join(lines) + "\n"


def _render_mc(sec: Section) -> str:
    if sec.get("obstruction"):
        return (f"# mc: OBSTRUCTED at order {sec['order']} ({sec['failed_property']})\n"
                f"gamma = {sec['gamma']}\n")
    lines = [f"# mc: series to order {sec['order']} ({sec['method']})"]
    for k, a in sec["alpha"].items():
        lines.append(f"alpha_{k} = {a}")
    for k, b in sec["beta"].items():
        lines.append(f"beta_{k} = {b}")
    lines.append(f"residuals zero: {_yes(sec['residuals_zero'])}")
    if "tangent" in sec:
        lines.append(f"tangent = {sec['tangent']}  dbar-closed: {_yes(sec['dbar_closed'])}")
    if "ks_residuals_zero" in sec:
        lines.append(f"push-forward MC residuals zero: {_yes(sec['ks_residuals_zero'])}")
    return "\n".join(lines) + "\n"


def _render_builtins(sec: Section) -> str:
    lines = ["# built-in models"]
    for b in sec["models"]:
        lines.append(f"{b['name']}  presets: {', '.join(b['presets'])}")
    return "\n".join(lines) + "\n"


RENDERERS: Dict[str, Callable[[Section], str]] = {
    "table": _render_table,
    "validation": _render_validation,
    "lemma": _render_lemma,
    "degeneracy": _render_degeneracy,
    "bc_aeppli": _render_bc_aeppli,
    "unimodular": _render_unimodular,
    "formality": _render_formality,
    "mc": _render_mc,
    "builtins": _render_builtins,
}


def render(report: Dict[str, object]) -> str:
    parts = []
    if "model" in report:
        m = report["model"]
        parts.append(f"model {m['name']} ({m['kind']}, n={m['n']}), poisson: {m['poisson']}\n")
    for sec in report["sections"]:
        parts.append(RENDERERS[sec["type"]](sec))
    if "timings" in report:
        parts.append("# timings (s)\n" + "".join(f"{k}  {v}\n" for k, v in report["timings"].items()))
    return "\n".join(parts)
