"""Acceptance gate: one PASS/FAIL line per criterion, exact comparisons only.

Run ``python tests/test_acceptance.py`` for the summary alone, or through pytest.
"""

import io
import itertools
import json
import time

import pytest

from holpoisson.cli import run
from holpoisson.cohomology import HodgeDiamond, dolbeault, kb_from_hodge, kb_homology, kunneth, ss_e_infinity, ss_page
from holpoisson.complexes import dims_by_total
from holpoisson.exactfield import kernel_basis, vstack
from holpoisson.lemmas import (
    check_bc_aeppli_equality,
    check_degeneracy,
    check_deldbar,
    check_dpidbar,
    formality_diagram,
)
from holpoisson.mc import MCSeries, residuals_vanish, solve_mc, verify_mc
from holpoisson.model import builtin, parse_form, validate
from holpoisson.model.core import FormExpr
from holpoisson.model.validation import _identities, identity_residual
from holpoisson.operators import (
    Op,
    bracket_delpi,
    calibration_report,
    d,
    del_,
    delpi,
    exp_iota,
    form_of,
    iota_order,
    iota_pi,
    matrix,
    pi_sharp,
    schouten,
)

import corpus
from test_cohomology import I6_DRAWN, _drawn_to_pq
from test_operators import _derivation_ok, _jacobi

LIMIT = 120.0


def _cli(*argv):
    out = io.StringIO()
    rc = run(list(argv), out, io.StringIO())
    return rc, out.getvalue()


def _json(*argv):
    rc, out = _cli(*argv, "--json")
    return rc, json.loads(out)["sections"][-1]


def criterion_1():
    t0 = time.perf_counter()
    rc, sec = _json("hodge", "--builtin", "iwasawa6")
    elapsed = time.perf_counter() - t0
    got = {(r["p"], r["q"]): r["dim"] for r in sec["table"]["entries"]}
    expect = {_drawn_to_pq(x, y): v for x, y, v in I6_DRAWN}
    ok = rc == 0 and got == expect and elapsed < LIMIT
    return ok, f"{len(expect)} diamond entries match, {elapsed:.1f}s"


def criterion_2():
    t0 = time.perf_counter()
    m = builtin("iwasawa6", "1 X1^X3")
    kb = kb_homology(m)
    deg = check_degeneracy(m)
    elapsed = time.perf_counter() - t0
    ok = (kb[0], kb[1]) == (1, 8) and not deg.degenerate and deg.failing[0] == 1 \
        and (deg.hodge_sums[1], deg.kb_dims[1]) == (9, 8) and elapsed < LIMIT
    return ok, f"H_0={kb[0]} H_1={kb[1]}, k=1: {deg.hodge_sums[1]} vs {deg.kb_dims[1]}, {elapsed:.1f}s"


def criterion_3():
    m = builtin("iwasawa6", "1 X2^X3")
    zero = all(matrix(Op.DELPI, m, p, q).is_zero() for p, q in m.bidegrees())
    return zero and check_degeneracy(m).degenerate, "∂_π = 0, DEGENERATE"


def criterion_4():
    t0 = time.perf_counter()
    coeffs = ["0", "1", "-1", "i", "1/2"]
    ok = True
    for c1, c2, c3 in itertools.product(coeffs, repeat=3):
        m = builtin("iwasawa3", f"{c1} X1^X2 + {c2} X1^X3 + {c3} X2^X3")
        ok &= validate(m).ok == (c2 == "0")
    for c1, c3 in [("1", "0"), ("0", "1"), ("1/2", "i")]:
        m = builtin("iwasawa3", f"{c1} X1^X2 + {c3} X2^X3")
        ok &= all(matrix(Op.DELPI, m, p, q).is_zero() for p, q in m.bidegrees())
        ok &= check_degeneracy(m).degenerate
        dd, dp = check_deldbar(m), check_dpidbar(m)
        target = parse_form(m, "-1 w1^wb1^wb3")
        ok &= not dd.holds and dd.witness.element in (target, -target)
        ok &= not dp.holds and dp.witness.element == parse_form(m, "-1 wb1^wb3")
    elapsed = time.perf_counter() - t0
    return ok and elapsed < LIMIT, f"125 bivectors classified, witnesses match, {elapsed:.1f}s"


def criterion_5():
    ok = True
    for case in ("nakamura_case1", "nakamura_case2"):
        m12 = builtin(case, "pi12")
        v = check_dpidbar(m12)
        ok &= not v.holds and str(v.witness.element) == "-1" and str(v.witness.preimage) == "1 w2"
        m23 = builtin(case, "pi23")
        ok &= check_dpidbar(m23).holds
        ok &= formality_diagram(m23)["all_quasi_isomorphisms"]
        dd = check_deldbar(m23)
        ok &= not dd.holds and (2, 1) in dd.failing()
    dd = check_deldbar(builtin("nakamura_case2", "pi23"))
    ok &= str(dd.witness.element) == "-1 w1^w2^b1"
    return ok, "π12 witness -1 = D(w2), π23 lemma holds, ∂∂̄ witness -w1^w2^b1, formality quasi-isos"


def criterion_6():
    ok = True
    for n in range(6):
        ok &= kb_from_hodge(HodgeDiamond.delta(n)).entries == {k: (n + 1 if k == n else 0) for k in range(2 * n + 1)}
    for m, n in itertools.product(range(4), repeat=2):
        kb = kb_from_hodge(kunneth(HodgeDiamond.delta(m), HodgeDiamond.delta(n)))
        ok &= kb[m + n] == (m + 1) * (n + 1) and sum(kb.entries.values()) == (m + 1) * (n + 1)
    return ok, "δ-diamonds n ≤ 5, products m, n ≤ 3"


def criterion_7():
    report = calibration_report()
    winners = [r["order"] for r in report["candidates"] if all(r["anchors_reproduced"])]
    a = builtin("iwasawa6", "pi2")
    ok = winners == [iota_order()]
    ok &= str(delpi(parse_form(a, "1 w1^w2^w3^w5^w6"))) == "-1 w1^w4^w5^w6"
    for case in ("nakamura_case1", "nakamura_case2"):
        m = builtin(case, "pi12")
        ok &= str(delpi(parse_form(m, "1 w2"))) == "-1"
    return ok, f"convention {iota_order()} is the unique match"


def _properties(m):
    n = m.n
    for _, combo in _identities():
        for p, q in m.bidegrees():
            if m.dim(p, q) and not identity_residual(m, combo, p, q)[0].is_zero():
                return False
    for f in corpus.forms(m):
        for k in range(1, n + 1):
            lhs, right, corr = del_(f), f, delpi(f)
            for _ in range(k):
                lhs, right = iota_pi(lhs), iota_pi(right)
            for _ in range(k - 1):
                corr = iota_pi(corr)
            if lhs != del_(right) + corr * k:
                return False
        e = exp_iota(f)
        if exp_iota(del_(f)) != del_(e) + delpi(e) or exp_iota(d(f)) != d(e) + delpi(e):
            return False
    kb = kb_homology(m)
    if any(kb[k] != kb[2 * n - k] for k in range(2 * n + 1)):
        return False
    h = dolbeault(m)
    e1 = ss_page(m, 1)
    if any(e1[(n - p, q)] != v for (p, q), v in h.entries.items()):
        return False
    einf = dims_by_total(ss_e_infinity(m).entries)
    if any(einf.get(k, 0) != kb[k] for k in range(2 * n + 1)):
        return False
    dp, dd = check_dpidbar(m), check_deldbar(m)
    bca = check_bc_aeppli_equality(m)
    if not bca.inequality_holds or bca.equality != dp.holds:
        return False
    deg = check_degeneracy(m).degenerate
    if (dp.holds or dd.holds) and not deg:
        return False
    ones = [m.monomial_form(x) for x in m.basis(1, 0)]
    return all(pi_sharp(bracket_delpi(a, b)) == schouten(pi_sharp(a), pi_sharp(b))
               for a, b in itertools.product(ones, repeat=2))


def criterion_8():
    failed = [f"{n}/{p}" for n, p in corpus.CASES if not _properties(corpus.get(n, p))]
    for poisson in ("default", "c1"):
        m = builtin("iwasawa3", poisson)
        forms = list(corpus.forms(m))
        if not all(_derivation_ok(a, b) for a, b in itertools.product(forms, repeat=2)):
            failed.append(f"iwasawa3/{poisson} derivation")
        low = [f for f in forms if f.total_degree() in (1, 2)]
        if any(_jacobi(a, b, c).terms for a, b, c in itertools.product(low, repeat=3)):
            failed.append(f"iwasawa3/{poisson} jacobi")
    return not failed, f"{len(corpus.CASES)} model/Poisson pairs" + (f"; failed {failed}" if failed else "")


def criterion_9():
    ok = True
    m = builtin("nakamura_case1", "pi23")
    s = solve_mc(m, parse_form(m, "1 w1^mu1"), 10)
    ok &= isinstance(s, MCSeries) and all(not a.terms for a in s.alphas[1:]) and residuals_vanish(m, s)
    seeds = 0
    for case in ("nakamura_case1", "nakamura_case2"):
        m = builtin(case, "pi23")
        ker = kernel_basis(vstack([matrix(Op.DBAR, m, 1, 1), matrix(Op.DELPI, m, 1, 1)]))
        for v in ker.vectors:
            r = solve_mc(m, form_of(m, v, 1, 1), 5)
            seeds += 1
            ok &= isinstance(r, MCSeries) and residuals_vanish(m, r)
    m = builtin("iwasawa6", "pi2")
    s = solve_mc(m, parse_form(m, "1 w2^wb1 + 1 w3^wb4"), 4)
    caught = total = 0
    for k, a in enumerate(s.alphas, 1):
        for mono in a.terms:
            terms = dict(a.terms)
            terms[mono] = -terms[mono]
            alphas = list(s.alphas)
            alphas[k - 1] = FormExpr._wrap(m, terms)
            total += 1
            caught += any(r.terms for r in verify_mc(m, MCSeries(m, s.order, alphas, s.betas)).values())
    ok &= total > 0 and caught == total
    return ok, f"N=10 series zero, {seeds} (1,1) classes unobstructed, {caught}/{total} corruptions caught"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


def _line(i, fn):
    ok, detail = fn()
    return ok, f"ACCEPTANCE {i}: {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.mark.parametrize("i", range(1, len(CRITERIA) + 1))
def test_acceptance(i, capsys):
    ok, line = _line(i, CRITERIA[i - 1])
    with capsys.disabled():
        print(f"\n{line}")
    assert ok, line


if __name__ == "__main__":
    results = [_line(i, fn) for i, fn in enumerate(CRITERIA, 1)]
    for _, line in results:
        print(line)
    raise SystemExit(0 if all(ok for ok, _ in results) else 1)
