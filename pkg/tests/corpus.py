"""The model corpus used by the property suites: every built-in with at least two Poisson choices."""

import os
from functools import lru_cache

from holpoisson.model import builtin, load_model

DOCS = os.path.join(os.path.dirname(__file__), os.pardir, "docs", "models")

# torus_1 carries no nonzero bivector, so it appears once
CASES = [
    ("torus_1", "zero"),
    ("torus_2", "zero"),
    ("torus_2", "std"),
    ("iwasawa3", "default"),
    ("iwasawa3", "c1"),
    ("iwasawa3", "zero"),
    ("iwasawa6", "pi1"),
    ("iwasawa6", "pi2"),
    ("nakamura_case1", "pi12"),
    ("nakamura_case1", "pi23"),
    ("nakamura_case2", "pi12"),
    ("nakamura_case2", "pi23"),
    ("kodaira_thurston", "file"),
]

SMALL = [c for c in CASES if c[0] != "iwasawa6"]


@lru_cache(maxsize=None)
def get(name, poisson):
    if poisson == "file":
        return load_model(os.path.join(DOCS, f"{name}.model"))
    return builtin(name, poisson)


def ids(cases):
    return [f"{a}-{b}" for a, b in cases]


def forms(model, max_total=None):
    for p, q in model.bidegrees():
        if max_total is not None and p + q > max_total:
            continue
        for x in model.basis(p, q):
            yield model.monomial_form(x)
