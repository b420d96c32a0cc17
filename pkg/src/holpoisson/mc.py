"""Order-by-order Maurer–Cartan solver for ``∂̄α + ½[α,α]_{∂_π} = 0`` with obstruction reporting,
exact verification, and push-forward to the Kodaira–Spencer side via ``π^♯``."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from .exactfield import NoSolution, SparseMatrix, image_basis, solve
from .lemmas import LemmaUnavailable, check_deldbar, check_dpidbar
from .model.core import FormExpr, Model, PolyvectorExpr
from .operators import Op, apply, bracket_delpi, form_of, matrix, pi_sharp, schouten, vector_of

DEFAULT_ORDER = 10
HALF = Fraction(1, 2)

METHODS = ("dpidbar", "deldbar")


class NotClosed(ValueError):
    """The input form is not ∂̄-closed."""


class PreconditionViolated(ValueError):
    pass


# primary operator X of each method and the bidegree of a potential β producing a (1,1) form
_X = {"dpidbar": Op.DELPI, "deldbar": Op.DEL}
_BETA_BIDEGREE = {"dpidbar": (2, 1), "deldbar": (0, 1)}


def _zero(model: Model, p: int, q: int) -> FormExpr:
    return FormExpr._wrap(model, {}, (p, q))


def _component(f: FormExpr, p: int, q: int) -> FormExpr:
    """``f`` viewed in bidegree ``(p, q)``; raises if it has other components."""
    if not f.terms:
        return _zero(f.model, p, q)
    comps = f.components()
    if set(comps) != {(p, q)}:
        raise PreconditionViolated(f"expected bidegree {(p, q)}, got {sorted(comps)}")
    return comps[(p, q)]


def _composite(model: Model, ops: List[Op], p: int, q: int) -> SparseMatrix:
    from .model.validation import composite_matrix

    return composite_matrix(model, ops, p, q)[0]


def _ensure_method(method: str) -> None:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")


def _lemma_holds(model: Model, method: str) -> bool:
    verdict = check_dpidbar(model) if method == "dpidbar" else check_deldbar(model)
    return verdict.holds


def delpi_close(model: Model, alpha: FormExpr, method: str = "dpidbar") -> FormExpr:
    """Return ``α - ∂̄γ`` with ``Xα̃ = 0`` (``X = ∂_π`` or ``∂``), ``γ`` the least-index solution."""
    _ensure_method(method)
    alpha = _component(alpha, 1, 1)
    if apply(Op.DBAR, alpha).terms:
        raise NotClosed(f"∂̄α ≠ 0 for α = {alpha}")
    if not _lemma_holds(model, method):
        raise LemmaUnavailable(f"the {method} lemma fails on {model.name}")
    X = _X[method]
    xa = apply(X, alpha)
    if not xa.terms:
        return alpha
    gp, gq = (1, 0) if method == "dpidbar" else (0, 0)
    tp, tq = xa.bidegree
    mat = _composite(model, [X, Op.DBAR], gp, gq)
    gamma = solve(mat, vector_of(_component(xa, tp, tq), tp, tq))
    g = form_of(model, gamma, gp, gq)
    return alpha - apply(Op.DBAR, g)


@dataclass
class MCSeries:
    model: Model
    order: int
    alphas: List[FormExpr]
    betas: Dict[int, FormExpr] = field(default_factory=dict)
    method: str = "dpidbar"

    def alpha(self, k: int) -> FormExpr:
        return self.alphas[k - 1]

    def to_dict(self):
        return {
            "order": self.order,
            "method": self.method,
            "alpha": {str(k): str(a) for k, a in enumerate(self.alphas, 1)},
            "beta": {str(k): str(b) for k, b in sorted(self.betas.items())},
        }


@dataclass
class Obstruction:
    order: int
    gamma: FormExpr
    bidegree: Optional[Tuple[int, int]]
    failed_property: str  # NotDbarClosed | NotDelPiExact | NoZeta
    prefix: Optional[MCSeries] = None

    def to_dict(self):
        return {
            "obstruction": True,
            "order": self.order,
            "gamma": str(self.gamma),
            "bidegree": None if self.bidegree is None else list(self.bidegree),
            "failed_property": self.failed_property,
        }


def bracket_sum(alphas: List[FormExpr], k: int) -> FormExpr:
    """``γ_k = Σ_{i=1}^{k} [α_i, α_{k+1-i}]``."""
    model = alphas[0].model
    out = _zero(model, 1, 2)
    for i in range(1, k + 1):
        out = out + bracket_delpi(alphas[i - 1], alphas[k - i])
    return out


def solve_mc(model: Model, alpha1: FormExpr, order: int = DEFAULT_ORDER,
             method: str = "dpidbar") -> Union[MCSeries, Obstruction]:
    """Build ``α_1 .. α_N`` with ``α_{k+1} = X β_{k+1}``, ``β_{k+1} = ζ/2``, ``γ_k = X∂̄ζ``."""
    _ensure_method(method)
    if order < 1:
        raise PreconditionViolated("order must be at least 1")
    alpha1 = _component(alpha1, 1, 1)
    X = _X[method]
    if apply(Op.DBAR, alpha1).terms:
        raise PreconditionViolated("∂̄α₁ ≠ 0")
    if apply(X, alpha1).terms:
        raise PreconditionViolated(f"{'∂_π' if method == 'dpidbar' else '∂'}α₁ ≠ 0; apply delpi_close first")
    series = MCSeries(model, order, [alpha1], {}, method)
    bp, bq = _BETA_BIDEGREE[method]
    zx = _composite(model, [X, Op.DBAR], bp, bq)
    xm = matrix(X, model, bp, bq + 1)
    for k in range(1, order):
        gamma = _component(bracket_sum(series.alphas, k), 1, 2)
        if apply(Op.DBAR, gamma).terms:
            return Obstruction(k, gamma, (1, 2), "NotDbarClosed", series)
        g = vector_of(gamma, 1, 2)
        if g and not image_basis(xm).contains(g):
            return Obstruction(k, gamma, (1, 2), "NotDelPiExact", series)
        try:
            zeta = solve(zx, g)
        except NoSolution:
            return Obstruction(k, gamma, (1, 2), "NoZeta", series)
        beta = form_of(model, {i: c * HALF for i, c in zeta.items()}, bp, bq)
        series.betas[k + 1] = beta
        series.alphas.append(_component(apply(X, beta), 1, 1))
    return series


def verify_mc(model: Model, series: MCSeries) -> Dict[int, FormExpr]:
    """Residual ``∂̄α_k + ½Σ_{i=1}^{k-1}[α_i, α_{k-i}]`` of each order ``k ≤ N``."""
    out: Dict[int, FormExpr] = {}
    a = series.alphas
    for k in range(1, len(a) + 1):
        r = apply(Op.DBAR, a[k - 1])
        for i in range(1, k):
            r = r + bracket_delpi(a[i - 1], a[k - i - 1]) * HALF
        out[k] = r
    return out


def residuals_vanish(model: Model, series: MCSeries) -> bool:
    return all(not r.terms for r in verify_mc(model, series).values())


def gamma_potential(series: MCSeries, k: int) -> FormExpr:
    """``-[α_1, β_k] + Σ_{i=2}^{k} [β_i, α_{k+1-i}]``, a ∂_π-primitive of ``γ_k`` for ``k ≥ 2``."""
    a, b = series.alphas, series.betas
    out = -bracket_delpi(a[0], b[k])
    for i in range(2, k + 1):
        out = out + bracket_delpi(b[i], a[k - i])
    return out


@dataclass
class Tangent:
    vector: PolyvectorExpr
    dbar_closed: bool

    def to_dict(self):
        return {"tangent": str(self.vector), "dbar_closed": self.dbar_closed}


def tangent(model: Model, alpha1: FormExpr) -> Tangent:
    """``π^♯α_1`` in the polyvector model together with its ∂̄-closedness."""
    alpha1 = _component(alpha1, 1, 1)
    if apply(Op.DBAR, alpha1).terms:
        raise NotClosed("∂̄α₁ ≠ 0")
    v = pi_sharp(alpha1)
    return Tangent(v, not apply(Op.DBAR, v).terms)


def push_forward(series: MCSeries) -> List[PolyvectorExpr]:
    return [pi_sharp(a) for a in series.alphas]


def ks_residuals(series: MCSeries, sign: int = 1) -> Dict[int, PolyvectorExpr]:
    """Kodaira–Spencer residuals ``∂̄φ_k + ½Σ[φ_i, φ_{k-i}]`` of ``φ = sign·π^♯α``."""
    phis = [p * sign for p in push_forward(series)]
    out: Dict[int, PolyvectorExpr] = {}
    for k in range(1, len(phis) + 1):
        r = apply(Op.DBAR, phis[k - 1])
        for i in range(1, k):
            r = r + schouten(phis[i - 1], phis[k - i - 1]) * HALF
        out[k] = r
    return out
