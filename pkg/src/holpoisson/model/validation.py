"""Axiom checks for models: integrability, Poisson conditions and operator identities."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, List, Optional, Tuple

from ..exactfield import ONE, SparseMatrix
from .core import FreeModel, Model, Monomial, TensorModel, terms_add


@dataclass
class Check:
    name: str
    passed: bool
    witness: Optional[str] = None
    detail: str = ""


@dataclass
class ValidationReport:
    model_name: str
    checks: List[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {
            "model": self.model_name,
            "ok": self.ok,
            "checks": [
                {"name": c.name, "passed": c.passed, "witness": c.witness, "detail": c.detail} for c in self.checks
            ],
        }


# each identity is a list of (sign, [op, ...]) products applied right to left,
# every product mapping (p, q) to the same target bidegree
def _identities():
    from ..operators import Op

    return [
        ("d_squared", [(1, [Op.DEL, Op.DEL])]),
        ("dbar_squared", [(1, [Op.DBAR, Op.DBAR])]),
        ("anticommute", [(1, [Op.DEL, Op.DBAR]), (1, [Op.DBAR, Op.DEL])]),
        ("dbar_holomorphic", [(1, [Op.DBAR, Op.IOTA]), (-1, [Op.IOTA, Op.DBAR])]),
        ("identity_dbar_delpi", [(1, [Op.DBAR, Op.DELPI]), (1, [Op.DELPI, Op.DBAR])]),
        ("identity_del_delpi", [(1, [Op.DEL, Op.DELPI]), (1, [Op.DELPI, Op.DEL])]),
        ("identity_delpi_iota", [(1, [Op.DELPI, Op.IOTA]), (-1, [Op.IOTA, Op.DELPI])]),
        ("delpi_squared", [(1, [Op.DELPI, Op.DELPI])]),
    ]


def composite_matrix(model: Model, ops, p: int, q: int) -> Tuple[SparseMatrix, Tuple[int, int]]:
    """Matrix of ``ops[0] ∘ ops[1] ∘ ...`` on bidegree ``(p, q)`` and its target bidegree."""
    from ..operators import SHIFT, matrix

    mat = SparseMatrix.identity(model.dim(p, q))
    bp, bq = p, q
    for op in reversed(ops):
        mat = matrix(op, model, bp, bq) @ mat
        dp, dq = SHIFT[op]
        bp, bq = bp + dp, bq + dq
    return mat, (bp, bq)


def identity_residual(model: Model, combo, p: int, q: int) -> Tuple[SparseMatrix, Tuple[int, int]]:
    total = None
    target = None
    for sign, ops in combo:
        mat, target = composite_matrix(model, ops, p, q)
        if sign < 0:
            mat = -mat
        total = mat if total is None else total + mat
    return total, target


def _first_bad_column(mat: SparseMatrix) -> Optional[int]:
    cols = [c for (_, c) in mat.entries]
    return min(cols) if cols else None


def _check_identity(model: Model, name: str, combo) -> Check:
    for p, q in model.bidegrees():
        if not model.dim(p, q):
            continue
        res, target = identity_residual(model, combo, p, q)
        col = _first_bad_column(res)
        if col is not None:
            m = model.basis(p, q)[col]
            return Check(name, False, model.format_monomial(m), f"nonzero on bidegree {(p, q)}")
    return Check(name, True)


def _check_schouten(model: Model) -> Check:
    from ..operators import pi_polyvector, schouten

    pi = pi_polyvector(model)
    br = schouten(pi, pi)
    if br.terms:
        return Check("schouten_pi", False, str(br), "[π,π] ≠ 0")
    return Check("schouten_pi", True)


def _check_coefficients(model: TensorModel) -> List[Check]:
    cc = model.coeff
    names = [b for b, _ in cc.basis]
    checks = []
    bad = None
    for (a, b), (c, t) in cc.product_table.items():
        if cc.degree[a] + cc.degree[b] != cc.degree[t]:
            bad = f"{a}*{b}"
            break
        rev = cc.product_table.get((b, a))
        if rev is not None:
            sign = -1 if (cc.degree[a] * cc.degree[b]) % 2 else 1
            if rev != (c * sign, t):
                bad = f"{a}*{b}"
                break
    checks.append(Check("coeff_degrees", bad is None, bad))

    def mul(x, y):
        if x is None or y is None:
            return None
        (cx, nx), (cy, ny) = x, y
        r = cc.product(nx, ny)
        if r is None:
            return None
        return cx * cy * r[0], r[1]

    bad = None
    for a, b, c in product(names, repeat=3):
        left = mul(mul((ONE, a), (ONE, b)), (ONE, c))
        right = mul((ONE, a), mul((ONE, b), (ONE, c)))
        if left != right:
            bad = f"({a}*{b})*{c}"
            break
    checks.append(Check("coeff_associative", bad is None, bad))

    bad = None
    for which, image in (("del", model.del_monomial), ("dbar", model.dbar_monomial)):
        for a, b in product(names, repeat=2):
            ma, mb = Monomial((), a), Monomial((), b)
            prod_ = model.wedge_monomials(ma, mb)
            lhs = {} if prod_ is None else {m: prod_[0] * c for m, c in image(prod_[1]).items()}
            rhs = model.wedge_terms(image(ma), {mb: ONE})
            sign = -ONE if cc.degree[a] % 2 else ONE
            terms_add(rhs, sign, model.wedge_terms({ma: ONE}, image(mb)))
            if lhs != rhs:
                bad = f"{which}({a}*{b})"
                break
        if bad:
            break
    checks.append(Check("coeff_leibniz", bad is None, bad))
    return checks


def validate(model: Model) -> ValidationReport:
    """Check every axiom; failures are report entries with a witness monomial."""
    report = ValidationReport(model.name)
    if isinstance(model, TensorModel):
        report.checks.extend(_check_coefficients(model))
    identities = _identities()
    for name, combo in identities[:3]:
        report.checks.append(_check_identity(model, name, combo))
    report.checks.append(_check_schouten(model))
    for name, combo in identities[3:]:
        report.checks.append(_check_identity(model, name, combo))
    return report
