"""Reader and writer for the line-oriented model file format.

The grammar is documented in ``docs/model-format.md``.  Parsing happens in
two steps: text is turned into raw sections of ``(coefficient, [names])``
term lists, then the terms are evaluated against the generators of the
model being built (so wedge signs and self-wedges are resolved once).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from ..exactfield import ONE, GaussianRational
from .core import (
    CoeffComplex,
    FormExpr,
    FreeModel,
    Model,
    ModelError,
    Monomial,
    PoissonBivector,
    TensorModel,
    Terms,
    UnknownGenerator,
    terms_add,
)


class ModelSyntaxError(ModelError):
    """Malformed model text; ``line`` and ``col`` are 1-based."""

    def __init__(self, line: int, col: int, expected: str, found: str = ""):
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found
        msg = f"line {line}, col {col}: expected {expected}"
        if found:
            msg += f", found {found!r}"
        super().__init__(msg)


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_REAL = r"\d+(?:/\d+)?"
_NOT_ID = r"(?![A-Za-z0-9_])"
# a + b i | b i | a ; the imaginary unit may carry an optional coefficient
_COEFF = re.compile(
    rf"(?:(?:{_REAL})?i{_NOT_ID}|{_REAL}(?:[+-](?:{_REAL})?i{_NOT_ID})?)"
)
_PAREN_COEFF = re.compile(r"\(([^()]*)\)")

SECTIONS = ("model", "del", "dbar", "poisson", "coeff")
RawTerm = Tuple[GaussianRational, List[str]]


@dataclass
class _Cursor:
    text: str
    line: int
    offset: int  # column of text[0] in the source line, 0-based
    pos: int = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def col(self) -> int:
        return self.offset + self.pos + 1

    def error(self, expected: str) -> ModelSyntaxError:
        found = self.text[self.pos:self.pos + 10] or "end of line"
        return ModelSyntaxError(self.line, self.col(), expected, found)


def _parse_coefficient(cur: _Cursor) -> Optional[GaussianRational]:
    """Optional sign and Gaussian rational; returns None if no coefficient is present."""
    cur.skip_ws()
    sign = 1
    start = cur.pos
    if cur.pos < len(cur.text) and cur.text[cur.pos] in "+-":
        sign = -1 if cur.text[cur.pos] == "-" else 1
        cur.pos += 1
        cur.skip_ws()
    m = _PAREN_COEFF.match(cur.text, cur.pos)
    if m:
        inner = m.group(1).replace(" ", "")
        try:
            value = GaussianRational.parse(inner)
        except ValueError:
            raise cur.error("Gaussian rational inside parentheses") from None
        cur.pos = m.end()
        return value * sign
    m = _COEFF.match(cur.text, cur.pos)
    if m and m.group(0):
        cur.pos = m.end()
        return GaussianRational.parse(m.group(0)) * sign
    if cur.pos != start:
        return GaussianRational(sign)
    return None


def _parse_names(cur: _Cursor, sep: str = "^") -> List[str]:
    names = []
    while True:
        cur.skip_ws()
        m = _IDENT.match(cur.text, cur.pos)
        if not m:
            raise cur.error("generator name")
        names.append(m.group(0))
        cur.pos = m.end()
        cur.skip_ws()
        if cur.pos < len(cur.text) and cur.text[cur.pos] == sep:
            cur.pos += 1
            continue
        return names


def parse_expression(text: str, line: int = 1, offset: int = 0) -> List[RawTerm]:
    """Parse ``[coeff] [g1^g2^...] (+ [coeff] [monomial])*`` into raw terms.

    A term without a monomial is a scalar; a term without a coefficient has
    coefficient 1.  ``-`` between terms is accepted as subtraction.
    """
    cur = _Cursor(text, line, offset)
    terms: List[RawTerm] = []
    if cur.at_end():
        raise cur.error("expression")
    sign = 1
    while True:
        c = _parse_coefficient(cur)
        cur.skip_ws()
        names: List[str] = []
        if cur.pos < len(cur.text) and _IDENT.match(cur.text, cur.pos):
            names = _parse_names(cur)
        elif c is None:
            raise cur.error("coefficient or monomial")
        coeff = (c if c is not None else ONE) * sign
        terms.append((coeff, names))
        if cur.at_end():
            return terms
        ch = cur.text[cur.pos]
        if ch not in "+-":
            raise cur.error("'+' or end of line")
        sign = 1
        if ch == "-":
            sign = -1
        cur.pos += 1


def evaluate_terms(model: Model, raw: List[RawTerm]) -> Terms:
    """Multiply out raw terms in ``model`` (wedge in the written order)."""
    out: Terms = {}
    for c, names in raw:
        mono = model.unit()
        coef = c
        for name in names:
            hit = model.wedge_monomials(mono, model.generator_monomial(name))
            if hit is None:
                coef = None
                break
            s, mono = hit
            coef = coef * s
        if coef:
            terms_add(out, coef, {mono: ONE})
    return out


def parse_form(model: Model, text: str) -> FormExpr:
    """Parse ``"1 w1^wb1 - 1/2 w2^wb3"`` into a form of ``model``."""
    return model.form(evaluate_terms(model, parse_expression(text)))


def _bivector_from_raw(raw: List[RawTerm], n: int, line: int) -> PoissonBivector:
    coeffs: Dict[Tuple[int, int], GaussianRational] = {}
    for c, names in raw:
        if not names:
            if c:
                raise ModelSyntaxError(line, 1, "bivector term X_i^X_j", str(c))
            continue
        if len(names) != 2:
            raise ModelSyntaxError(line, 1, "bivector term X_i^X_j", "^".join(names))
        idx = []
        for name in names:
            m = re.fullmatch(r"X([1-9][0-9]*)", name)
            if not m:
                raise UnknownGenerator(name)
            k = int(m.group(1)) - 1
            if k >= n:
                raise UnknownGenerator(name)
            idx.append(k)
        i, j = idx
        if i == j:
            continue
        if i > j:
            i, j, c = j, i, -c
        coeffs[(i, j)] = coeffs.get((i, j), GaussianRational(0)) + c
    return PoissonBivector(coeffs)


def parse_bivector(text: str, n: int) -> PoissonBivector:
    """Parse ``"1 X1^X2 + -2 X2^X3"`` (1-based vector indices)."""
    return _bivector_from_raw(parse_expression(text.strip()), n, 1)


@dataclass
class _Line:
    number: int
    text: str
    offset: int


def _split_sections(text: str) -> Dict[str, List[_Line]]:
    sections: Dict[str, List[_Line]] = {}
    current: Optional[str] = None
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        offset = len(body) - len(body.lstrip())
        if stripped.startswith("["):
            m = re.fullmatch(r"\[\s*([A-Za-z]+)\s*\]", stripped)
            if not m:
                raise ModelSyntaxError(number, offset + 1, "section header like [model]", stripped)
            name = m.group(1)
            if name not in SECTIONS:
                raise ModelSyntaxError(number, offset + 2, "one of " + ", ".join(SECTIONS), name)
            if name in sections:
                raise ModelSyntaxError(number, offset + 1, "each section at most once", stripped)
            sections[name] = []
            current = name
            continue
        if current is None:
            raise ModelSyntaxError(number, offset + 1, "section header [model]", stripped)
        sections[current].append(_Line(number, stripped, offset))
    if "model" not in sections:
        raise ModelSyntaxError(1, 1, "[model] section", "")
    return sections


def _split_assignment(line: _Line, lhs_pattern: str, expected: str):
    m = re.match(rf"({lhs_pattern})\s*=\s*", line.text)
    if not m:
        raise ModelSyntaxError(line.number, line.offset + 1, expected, line.text)
    return m.group(1), line.text[m.end():], line.offset + m.end()


def parse_model(text: str) -> Model:
    """Parse model file text into an (unvalidated) model."""
    sections = _split_sections(text)
    header: Dict[str, str] = {}
    header_lines: Dict[str, _Line] = {}
    for line in sections["model"]:
        key, value, _ = _split_assignment(line, r"[A-Za-z_][A-Za-z0-9_]*", "key = value")
        if key in header:
            raise ModelSyntaxError(line.number, line.offset + 1, f"a single '{key}' entry", key)
        header[key] = value.strip()
        header_lines[key] = line
    for key in ("name", "kind", "dim", "holo"):
        if key not in header:
            raise ModelSyntaxError(sections["model"][-1].number if sections["model"] else 1, 1, f"'{key} = ...' in [model]")
    kind = header["kind"]
    if kind not in ("free", "tensor"):
        ln = header_lines["kind"]
        raise ModelSyntaxError(ln.number, ln.offset + 1, "kind = free | tensor", kind)
    try:
        n = int(header["dim"])
    except ValueError:
        ln = header_lines["dim"]
        raise ModelSyntaxError(ln.number, ln.offset + 1, "integer dimension", header["dim"]) from None
    holo = header["holo"].split()
    for name in holo:
        if not _IDENT.fullmatch(name):
            ln = header_lines["holo"]
            raise ModelSyntaxError(ln.number, ln.offset + 1, "generator names", name)
    metadata = {k: v for k, v in header.items() if k not in ("name", "kind", "dim", "holo", "anti")}

    poisson = PoissonBivector()
    for line in sections.get("poisson", []):
        _, rhs, off = _split_assignment(line, "pi", "pi = <bivector>")
        poisson = _bivector_from_raw(parse_expression(rhs, line.number, off), n, line.number)

    if kind == "free":
        if "coeff" in sections:
            ln = sections["coeff"][0] if sections["coeff"] else _Line(1, "", 0)
            raise ModelSyntaxError(ln.number, 1, "no [coeff] section in a free model")
        anti = header.get("anti", "").split()
        skeleton = FreeModel(header["name"], n, holo, anti, metadata=metadata)
        rules = {}
        for sec in ("del", "dbar"):
            rules[sec] = {}
            for line in sections.get(sec, []):
                g, rhs, off = _split_assignment(line, r"[A-Za-z_][A-Za-z0-9_]*", "generator = expression")
                if g not in skeleton.holo_names and g not in skeleton.anti_names:
                    raise UnknownGenerator(g)
                rules[sec][g] = evaluate_terms(skeleton, parse_expression(rhs, line.number, off))
        return FreeModel(header["name"], n, holo, anti, rules["del"], rules["dbar"], poisson, metadata)

    if "anti" in header:
        ln = header_lines["anti"]
        raise ModelSyntaxError(ln.number, ln.offset + 1, "no 'anti' entry in a tensor model")
    if "dbar" in sections and sections["dbar"]:
        ln = sections["dbar"][0]
        raise ModelSyntaxError(ln.number, 1, "∂̄ of coefficients inside [coeff] as 'dbar name = ...'")
    coeff_lines = sections.get("coeff", [])
    if not coeff_lines:
        raise ModelSyntaxError(1, 1, "[coeff] section in a tensor model")
    basis: List[Tuple[str, int]] = []
    products: List[Tuple[_Line, str, str, str, int]] = []
    actions: List[Tuple[_Line, str, str, str, int]] = []
    for line in coeff_lines:
        text_ = line.text
        m = re.match(r"(del|dbar)\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*", text_)
        if m:
            actions.append((line, m.group(1), m.group(2), text_[m.end():], line.offset + m.end()))
            continue
        m = re.match(r"([A-Za-z_][A-Za-z0-9_]*)\s*\*\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*", text_)
        if m:
            products.append((line, m.group(1), m.group(2), text_[m.end():], line.offset + m.end()))
            continue
        for chunk in text_.split(";"):
            cm = re.fullmatch(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*:\s*(\d+)\s*", chunk)
            if not cm:
                raise ModelSyntaxError(line.number, line.offset + 1, "'name : degree' entries, a product 'a*b = ...', or 'del|dbar name = ...'", chunk.strip())
            basis.append((cm.group(1), int(cm.group(2))))
    names = {b for b, _ in basis}
    table: Dict[Tuple[str, str], Tuple[GaussianRational, str]] = {}
    for line, a, b, rhs, off in products:
        for nm in (a, b):
            if nm not in names:
                raise UnknownGenerator(nm)
        raw = parse_expression(rhs, line.number, off)
        nonzero = [(c, t) for c, t in raw if c]
        if not nonzero:
            continue
        if len(nonzero) != 1 or len(nonzero[0][1]) != 1:
            raise ModelSyntaxError(line.number, off + 1, "a single signed basis name or 0", rhs)
        c, (target,) = nonzero[0]
        if target not in names:
            raise UnknownGenerator(target)
        table[(a, b)] = (c, target)
    cc = CoeffComplex(basis, table)
    skeleton = TensorModel(header["name"], n, holo, cc, metadata=metadata)
    for line, which, b, rhs, off in actions:
        if b not in names:
            raise UnknownGenerator(b)
        terms = evaluate_terms(skeleton, parse_expression(rhs, line.number, off))
        if terms:
            (cc.del_action if which == "del" else cc.dbar_action)[b] = terms
    del_rules = {}
    for line in sections.get("del", []):
        g, rhs, off = _split_assignment(line, r"[A-Za-z_][A-Za-z0-9_]*", "generator = expression")
        if g not in holo:
            raise UnknownGenerator(g)
        del_rules[g] = evaluate_terms(skeleton, parse_expression(rhs, line.number, off))
    return TensorModel(header["name"], n, holo, cc, del_rules, poisson, metadata)


def _format_terms_file(model: Model, terms: Terms) -> str:
    return model.format_terms(terms) if terms else "0"


def print_model(model: Model) -> str:
    """Canonical model file text; ``parse_model(print_model(m))`` rebuilds ``m``."""
    out = ["[model]", f"name = {model.name}", f"kind = {model.kind}", f"dim = {model.n}",
           "holo = " + " ".join(model.holo_names)]
    if isinstance(model, FreeModel):
        out.append("anti = " + " ".join(model.anti_names))
    for k, v in sorted(model.metadata.items()):
        out.append(f"{k} = {v}")
    del_rules = model.del_rules
    if del_rules:
        out.append("[del]")
        order = model.holo_names + (model.anti_names if isinstance(model, FreeModel) else [])
        for g in order:
            if g in del_rules:
                out.append(f"{g} = {_format_terms_file(model, del_rules[g])}")
    if isinstance(model, FreeModel) and model.dbar_rules:
        out.append("[dbar]")
        for g in model.holo_names + model.anti_names:
            if g in model.dbar_rules:
                out.append(f"{g} = {_format_terms_file(model, model.dbar_rules[g])}")
    if not model.poisson.is_zero():
        out.append("[poisson]")
        out.append(f"pi = {model.poisson.format()}")
    if isinstance(model, TensorModel):
        cc = model.coeff
        out.append("[coeff]")
        out.append(" ; ".join(f"{b} : {d}" for b, d in cc.basis))
        for (a, b), (c, t) in sorted(cc.product_table.items(), key=lambda kv: (cc.order[kv[0][0]], cc.order[kv[0][1]])):
            out.append(f"{a}*{b} = {c} {t}")
        for which, action in (("del", cc.del_action), ("dbar", cc.dbar_action)):
            for b, _ in cc.basis:
                if b in action:
                    out.append(f"{which} {b} = {_format_terms_file(model, action[b])}")
    return "\n".join(out) + "\n"


def load_model(path: str) -> Model:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())
