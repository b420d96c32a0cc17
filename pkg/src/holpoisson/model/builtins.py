"""Built-in models: complex tori, the Iwasawa manifold, a six-dimensional
complex nilmanifold and the holomorphically parallelizable Nakamura manifold."""

from __future__ import annotations

import re
from typing import Callable, Dict, List, Optional, Union

from ..exactfield import ONE
from .core import CoeffComplex, FreeModel, Model, ModelError, Monomial, PoissonBivector, TensorModel, Terms
from .parser import parse_bivector


class UnknownBuiltin(ModelError):
    pass


def _free(name: str, n: int, del_eqs: Dict[int, List[tuple]], metadata: Dict[str, str],
          anti_prefix: str = "wb") -> FreeModel:
    """Holomorphically parallelizable model: ``∂̄ w = 0`` and ``∂̄ w̄`` conjugate to ``∂ w``.

    ``del_eqs`` maps a 1-based generator index to terms ``(coeff, i, j)``
    meaning ``coeff * w_i ∧ w_j`` with ``i < j``.
    """
    holo = [f"w{k}" for k in range(1, n + 1)]
    anti = [f"{anti_prefix}{k}" for k in range(1, n + 1)]
    del_rules: Dict[str, Terms] = {}
    dbar_rules: Dict[str, Terms] = {}
    for k, terms in del_eqs.items():
        del_rules[holo[k - 1]] = {Monomial((i - 1, j - 1), ()): c for c, i, j in terms}
        # structure constants are real, so conjugation keeps the coefficients
        dbar_rules[anti[k - 1]] = {Monomial((), (i - 1, j - 1)): c for c, i, j in terms}
    return FreeModel(name, n, holo, anti, del_rules, dbar_rules, metadata=metadata)


def torus(n: int) -> FreeModel:
    return _free(f"torus_{n}", n, {}, {"family": "complex torus"})


def iwasawa3() -> FreeModel:
    return _free("iwasawa3", 3, {2: [(-1, 1, 3)]}, {"family": "Iwasawa manifold"})


def iwasawa6() -> FreeModel:
    eqs = {
        2: [(-1, 1, 4)],
        3: [(-1, 1, 5), (-1, 2, 6)],
        5: [(-1, 4, 6)],
    }
    return _free("iwasawa6", 6, eqs, {"family": "six-dimensional complex nilmanifold"})


def nakamura_case1() -> FreeModel:
    """Lattice case with ``B^•`` free on ``dz̄1, e^{-z1}dz̄2, e^{z1}dz̄3`` (named mu1..mu3)."""
    holo = ["w1", "w2", "w3"]
    anti = ["mu1", "mu2", "mu3"]
    del_rules = {
        "w2": {Monomial((0, 1), ()): -ONE},
        "w3": {Monomial((0, 2), ()): ONE},
        "mu2": {Monomial((0,), (1,)): -ONE},
        "mu3": {Monomial((0,), (2,)): ONE},
    }
    return FreeModel("nakamura_case1", 3, holo, anti, del_rules, {}, metadata={"case": "1", "family": "Nakamura manifold"})


def nakamura_case2() -> TensorModel:
    """Lattice case with ``B^•`` spanned by ``1, dz̄1, dz̄2∧dz̄3, dz̄1∧dz̄2∧dz̄3``."""
    cc = CoeffComplex(
        basis=[("b0", 0), ("b1", 1), ("b2", 2), ("b3", 3)],
        product_table={("b1", "b2"): (ONE, "b3")},
    )
    del_rules = {
        "w2": {Monomial((0, 1), "b0"): -ONE},
        "w3": {Monomial((0, 2), "b0"): ONE},
    }
    return TensorModel("nakamura_case2", 3, ["w1", "w2", "w3"], cc, del_rules,
                       metadata={"case": "2", "family": "Nakamura manifold", "volume": "holo"})


PRESETS: Dict[str, Dict[str, str]] = {
    "torus": {"default": "0", "zero": "0", "std": "1 X1^X2"},
    "iwasawa3": {"default": "1 X1^X2 + 1 X2^X3", "zero": "0", "c1": "1 X1^X2", "c3": "1 X2^X3",
                 "bad": "1 X1^X2 + 1 X1^X3 + 1 X2^X3"},
    "iwasawa6": {"default": "1 X2^X3", "zero": "0", "pi1": "1 X2^X3", "pi2": "1 X1^X3"},
    "nakamura_case1": {"default": "1 X2^X3", "zero": "0", "pi12": "1 X1^X2", "pi23": "1 X2^X3"},
    "nakamura_case2": {"default": "1 X2^X3", "zero": "0", "pi12": "1 X1^X2", "pi23": "1 X2^X3"},
}

_FACTORIES: Dict[str, Callable[[], Model]] = {
    "iwasawa3": iwasawa3,
    "iwasawa6": iwasawa6,
    "nakamura_case1": nakamura_case1,
    "nakamura_case2": nakamura_case2,
}


def builtin_names() -> List[str]:
    return ["torus_<n>"] + list(_FACTORIES)


def presets_for(name: str) -> Dict[str, str]:
    return PRESETS["torus" if name.startswith("torus_") else name]


def resolve_poisson(model: Model, poisson: Union[None, str, PoissonBivector], family: Optional[str] = None) -> PoissonBivector:
    """A bivector from ``None`` (preset ``default``), a preset name, or an expression."""
    if isinstance(poisson, PoissonBivector):
        return poisson
    presets = PRESETS.get(family or "", {})
    text = presets.get(poisson or "default", poisson)
    if text is None:
        return PoissonBivector()
    if text.strip() == "0":
        return PoissonBivector()
    return parse_bivector(text, model.n)


def builtin(name: str, poisson: Union[None, str, PoissonBivector] = None) -> Model:
    """Construct a built-in model with the chosen Poisson bivector (preset name or expression)."""
    m = re.fullmatch(r"torus_([1-9][0-9]*)", name)
    if m:
        base: Model = torus(int(m.group(1)))
        family = "torus"
    elif name in _FACTORIES:
        base = _FACTORIES[name]()
        family = name
    else:
        raise UnknownBuiltin(f"unknown built-in model {name!r}; choose from {', '.join(builtin_names())}")
    return base.with_poisson(resolve_poisson(base, poisson, family))
