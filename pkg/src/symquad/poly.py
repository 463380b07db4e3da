"""Sparse multivariate polynomials with exact rational coefficients.

A monomial is a tuple of ``(variable, exponent)`` pairs sorted by
:func:`var_key`; a polynomial maps monomials to nonzero ``Fraction``
coefficients. Instances are treated as immutable values.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Union

from .errors import ValidationError

Rat = Fraction
Scalar = Union[int, Fraction]
Monomial = tuple

_ZPAIR = re.compile(r"^([A-Za-z]+)(\d+)_(\d+)$")
_ZTWO = re.compile(r"^(z)(\d)(\d)$")
_INDEXED = re.compile(r"^([A-Za-z]+)(\d+)$")


def var_key(name: str) -> tuple:
    """Sort key for variable names.

    ``z12`` and ``z1_2`` both mean the pair (1, 2); other names sort by
    alphabetic prefix and then numerically by their index.
    """
    m = _ZPAIR.match(name) or _ZTWO.match(name)
    if m:
        return (m.group(1), int(m.group(2)), int(m.group(3)))
    m = _INDEXED.match(name)
    if m:
        return (m.group(1), int(m.group(2)))
    return (name,)


def zvar(i: int, j: int) -> str:
    """Name of the symmetric-matrix coordinate at (min, max) of (i, j)."""
    i, j = min(i, j), max(i, j)
    if i < 10 and j < 10:
        return f"z{i}{j}"
    return f"z{i}_{j}"


def to_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ValidationError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational number: {x!r}") from exc
    raise ValidationError(f"cannot convert {type(x).__name__} to a rational")


def rat_str(q: Fraction) -> str:
    """Serialize as ``p`` or ``p/q``."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items(), key=lambda ve: var_key(ve[0])))


def _mono_deg(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_sort_key(m: Monomial):
    # graded, then lexicographic in the variable order (earlier variable first)
    return (-_mono_deg(m), [(var_key(v), -e) for v, e in m])


class MPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                c = to_rat(c)
                if c:
                    clean[mono] = clean.get(mono, Fraction(0)) + c
                    if not clean[mono]:
                        del clean[mono]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "MPoly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def var(cls, name: str) -> "MPoly":
        return cls._raw({((name, 1),): Fraction(1)})

    @classmethod
    def const(cls, c: Scalar) -> "MPoly":
        c = to_rat(c)
        return cls._raw({(): c} if c else {})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def variables(self) -> list[str]:
        vs = {v for mono in self._terms for v, _ in mono}
        return sorted(vs, key=var_key)

    def degree(self) -> int:
        if not self._terms:
            raise ValidationError("degree of the zero polynomial is undefined")
        return max(_mono_deg(m) for m in self._terms)

    def min_degree(self) -> int:
        if not self._terms:
            raise ValidationError("degree of the zero polynomial is undefined")
        return min(_mono_deg(m) for m in self._terms)

    def is_homogeneous(self) -> bool:
        return len({_mono_deg(m) for m in self._terms}) <= 1

    def homogeneous_part(self, d: int) -> "MPoly":
        return MPoly._raw({m: c for m, c in self._terms.items() if _mono_deg(m) == d})

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    # arithmetic

    @staticmethod
    def _coerce(other) -> "MPoly":
        if isinstance(other, MPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return MPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return MPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return MPoly._raw({})
            return MPoly._raw({m: c * other for m, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return MPoly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                raise ZeroDivisionError("polynomial division by zero")
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValidationError("exponent must be a non-negative integer")
        result = MPoly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # evaluation and substitution

    def eval(self, values: Mapping[str, object] | Callable[[str], object]):
        """Evaluate with every variable replaced by a value.

        ``values`` may be a mapping or a callable. Values can be anything
        supporting ``+``, ``*`` and ``**`` with rationals.
        """
        get = values if callable(values) else values.__getitem__
        total = 0
        for mono, c in self._terms.items():
            t = c
            for v, e in mono:
                x = get(v)
                t = t * (x if e == 1 else x ** e)
            total = total + t
        return total

    def subs(self, mapping: Mapping[str, object]) -> "MPoly":
        """Substitute polynomials or scalars for some of the variables."""
        cache: dict[tuple[str, int], MPoly] = {}
        out = MPoly._raw({})
        for mono, c in self._terms.items():
            keep = []
            term = MPoly.const(c)
            for v, e in mono:
                if v in mapping:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = MPoly._coerce(mapping[v]) ** e
                    term = term * cache[key]
                else:
                    keep.append((v, e))
            if keep:
                term = term * MPoly._raw({tuple(keep): Fraction(1)})
            out = out + term
        return out

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda mc: _mono_sort_key(mc[0]))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for idx, (mono, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            body = "*".join(v if e == 1 else f"{v}^{e}" for v, e in mono)
            if not body:
                text = rat_str(a)
            elif a == 1:
                text = body
            else:
                text = f"{rat_str(a)}*{body}"
            if idx == 0:
                pieces.append(("-" if sign == "-" else "") + text)
            else:
                pieces.append(f" {sign} {text}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"MPoly({str(self)!r})"


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_poly(text: str) -> MPoly:
    """Inverse of ``str(MPoly)``; accepts ``2/3*x^2*y - z + 1`` style input."""
    text = text.strip()
    if not text:
        raise ValidationError("empty polynomial string")
    # a leading sign belongs to the first term; split on binary +/- only
    parts: list[tuple[str, str]] = []
    buf = ""
    sign = "+"
    for i, ch in enumerate(text):
        if ch in "+-" and buf.strip() and not buf.rstrip().endswith(("*", "^", "/")):
            parts.append((sign, buf))
            sign, buf = ch, ""
        elif ch in "+-" and not buf.strip():
            sign = "-" if (sign == "-") != (ch == "-") else "+"
        else:
            buf += ch
    if buf.strip():
        parts.append((sign, buf))
    total = MPoly()
    for sgn, body in parts:
        coeff = Fraction(1)
        mono: dict[str, int] = {}
        for factor in body.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValidationError(f"malformed term in {text!r}")
            if re.fullmatch(r"\d+(/\d+)?", factor):
                coeff *= Fraction(factor)
                continue
            m = re.fullmatch(r"([A-Za-z][A-Za-z0-9_]*)(?:\^(\d+))?", factor)
            if not m:
                raise ValidationError(f"cannot parse factor {factor!r}")
            e = int(m.group(2) or 1)
            mono[m.group(1)] = mono.get(m.group(1), 0) + e
        key = tuple(sorted(((v, e) for v, e in mono.items() if e), key=lambda ve: var_key(ve[0])))
        total = total + MPoly._raw({key: -coeff if sgn == "-" else coeff} if coeff else {})
    return total


def lowest_degree_part(p: MPoly) -> MPoly:
    """Homogeneous component of minimal total degree."""
    if p.is_zero():
        raise ValidationError("lowest degree part of the zero polynomial")
    return p.homogeneous_part(p.min_degree())


def monomials_of_degree(variables: Iterable[str], d: int) -> list[Monomial]:
    """All monomials of total degree d in the given variables, in sorted order."""
    vs = sorted(variables, key=var_key)
    out: list[Monomial] = []

    def rec(start: int, left: int, acc: list):
        if left == 0:
            out.append(tuple(acc))
            return
        for i in range(start, len(vs)):
            for e in range(left, 0, -1):
                rec(i + 1, left - e, acc + [(vs[i], e)])

    rec(0, d, [])
    return sorted(out, key=_mono_sort_key)
