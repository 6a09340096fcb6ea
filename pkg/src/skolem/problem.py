"""Problem files: JSON in, validated LRS out, and back again.

A problem names an optional field polynomial f (integer coefficients,
constant term first) and a root selector ``root`` choosing the generator g
among the roots of f.  Roots are ordered by real part ascending, then
imaginary part descending, so for x^2 + 1 root 0 is +i and for x^2 - 2
root 1 is +sqrt(2).  Literals are "p/q" strings, integers, or lists of
those read as a polynomial in g.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from typing import Any, Optional

import jsonschema

from .algebraic import AlgebraicNumber, FieldElement, NumberField
from .errors import DomainError, ParseError
from .lrs import LRS, _root_order_key, coerce
from .numerics import IntPolynomial, factor_over_q

SCHEMA_VERSION = "1"


def load_schema(name: str) -> dict:
    text = resources.files("skolem").joinpath("schemas", f"{name}.schema.json").read_text("utf-8")
    return json.loads(text)


# ---------------------------------------------------------------------------
# byte offsets of JSON values


def _ws(text: str, i: int) -> int:
    while i < len(text) and text[i] in " \t\r\n":
        i += 1
    return i


def value_offsets(text: str) -> dict:
    """Map from JSON path (tuple of keys/indices) to the character offset
    where that value starts."""
    dec = json.JSONDecoder()
    out: dict = {}

    def walk(i: int, path: tuple) -> int:
        i = _ws(text, i)
        out[path] = i
        if text[i] == "{":
            i = _ws(text, i + 1)
            if text[i] == "}":
                return i + 1
            while True:
                key, i = json.decoder.scanstring(text, _ws(text, i) + 1)
                i = _ws(text, i) + 1  # colon
                i = walk(i, path + (key,))
                i = _ws(text, i)
                if text[i] == "}":
                    return i + 1
                i += 1
        if text[i] == "[":
            i = _ws(text, i + 1)
            if text[i] == "]":
                return i + 1
            k = 0
            while True:
                i = walk(i, path + (k,))
                k += 1
                i = _ws(text, i)
                if text[i] == "]":
                    return i + 1
                i += 1
        _, end = dec.raw_decode(text, i)
        return end

    walk(0, ())
    return out


def _byte_offset(text: str, char_offset: int) -> int:
    return len(text[:char_offset].encode("utf-8"))


class _Locator:
    def __init__(self, text: str):
        self.text = text
        self._offsets: Optional[dict] = None

    def __call__(self, path) -> Optional[int]:
        if self._offsets is None:
            try:
                self._offsets = value_offsets(self.text)
            except (ValueError, IndexError):
                self._offsets = {}
        path = tuple(path)
        while path not in self._offsets and path:
            path = path[:-1]
        off = self._offsets.get(path)
        return None if off is None else _byte_offset(self.text, off)


# ---------------------------------------------------------------------------
# parsing


def _rational(x, where, loc) -> Fraction:
    if isinstance(x, bool):
        raise ParseError(f"{_fmt(where)}: booleans are not numbers", loc(where))
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"{_fmt(where)}: {x!r} is not a rational literal", loc(where)) from None
    raise ParseError(f"{_fmt(where)}: expected a rational literal", loc(where))


def _fmt(path) -> str:
    return "/" + "/".join(str(p) for p in path)


def _build_field(fpoly: list, selector: int, loc) -> tuple[NumberField, Fraction]:
    """Field Q(g) and the scale c with g = theta / c."""
    if len(fpoly) < 2 or fpoly[-1] == 0:
        raise ParseError("field_poly must have positive degree and nonzero leading coefficient",
                         loc(("field_poly",)))
    facs = factor_over_q(fpoly)
    n = len(fpoly) - 1
    if len(facs) != 1 or facs[0][1] != 1 or facs[0][0].degree != n:
        raise ParseError("field_poly is reducible over Q", loc(("field_poly",)))
    f = facs[0][0]
    if n == 1:
        if selector != 0:
            raise ParseError("root selector out of range", loc(("root",)))
        return NumberField.rationals(), Fraction(-f.coeffs[0], f.coeffs[1])
    lc = f.coeffs[-1]
    monic = IntPolynomial(tuple(f.coeffs[k] * lc ** (n - 1 - k) for k in range(n)) + (1,))
    roots = sorted((AlgebraicNumber(monic, i) for i in range(n)), key=_root_order_key)
    if not 0 <= selector < n:
        raise ParseError(f"root selector {selector} out of range 0..{n - 1}", loc(("root",)))
    return NumberField(monic, roots[selector].index), Fraction(lc)


def _literal(x, K: NumberField, scale, where, loc) -> FieldElement:
    if isinstance(x, list):
        if K.D == 1 and not isinstance(scale, Fraction):
            raise ParseError(f"{_fmt(where)}: polynomial literal without field_poly", loc(where))
        cs = [_rational(c, where + (k,), loc) for k, c in enumerate(x)]
        if K.D == 1:
            # g is a rational number
            g = scale
            return K(sum((c * g ** k for k, c in enumerate(cs)), Fraction(0)))
        acc = K.zero
        g = K.theta * Fraction(1, int(scale))
        for c in reversed(cs):
            acc = acc * g + c
        return acc
    return K(_rational(x, where, loc))


def parse_text(text: str) -> LRS:
    loc = _Locator(text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", _byte_offset(text, e.pos)) from None
    schema = load_schema("problem")
    errors = sorted(jsonschema.Draft202012Validator(schema).iter_errors(data), key=lambda e: list(e.path))
    if errors:
        e = errors[0]
        raise ParseError(f"schema violation at {_fmt(e.path)}: {e.message}", loc(e.path))
    coeffs, initial = data["coeffs"], data["initial"]
    if len(coeffs) != len(initial):
        raise ParseError(f"coeffs has {len(coeffs)} entries but initial has {len(initial)}",
                         loc(("initial",)))
    selector = data.get("root", 0)
    if "field_poly" in data:
        K, scale = _build_field(data["field_poly"], selector, loc)
    else:
        if selector != 0:
            raise ParseError("root selector given without field_poly", loc(("root",)))
        K, scale = NumberField.rationals(), None
    co = tuple(_literal(x, K, scale, ("coeffs", k), loc) for k, x in enumerate(coeffs))
    ini = tuple(_literal(x, K, scale, ("initial", k), loc) for k, x in enumerate(initial))
    return LRS(K, co, ini)


def parse(path) -> LRS:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError("file is not valid UTF-8", e.start) from None
    return parse_text(text)


# ---------------------------------------------------------------------------
# serialization


def frac_str(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def element_json(x: FieldElement) -> Any:
    """A rational as "p/q", otherwise the list of coefficients in theta."""
    if x.is_rational:
        return frac_str(x.rational_value)
    return [frac_str(c) for c in x.c]


def serialize(lrs: LRS) -> dict:
    """Problem dictionary with parse(serialize(lrs)) structurally equal to
    ``lrs.core()`` preceded by its prefix (the field is written through its
    monic defining polynomial and the selector of theta)."""
    K = lrs.field
    out: dict = {"schema_version": SCHEMA_VERSION}
    if K.D > 1:
        n = K.D
        roots = sorted((AlgebraicNumber(K.modulus, i) for i in range(n)), key=_root_order_key)
        out["field_poly"] = list(K.mod)
        out["root"] = next(k for k, r in enumerate(roots) if r.index == K.theta_index)
    if lrs.shift:
        raise DomainError("serialize: shifted recurrence; serialize the raw recurrence instead")
    out["coeffs"] = [element_json(a) for a in lrs.coeffs]
    out["initial"] = [element_json(u) for u in lrs.initial]
    return out


def same_lrs(a: LRS, b: LRS) -> bool:
    """Structural equality across distinct field objects."""
    if a.field.mod != b.field.mod or a.field.theta_index != b.field.theta_index:
        return False
    key = lambda L: ([x.c for x in L.coeffs], [x.c for x in L.initial], L.shift, [x.c for x in L.prefix])
    return key(a) == key(b)
