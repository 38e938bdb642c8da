"""Exact arithmetic kernel: complex rationals and polynomials in (z, zbar).

A :class:`Poly` in ``n`` complex variables is a finite sparse map

    (alpha, beta) -> coefficient

where ``alpha`` and ``beta`` are exponent tuples of length ``n`` for
``z_1..z_n`` and ``zbar_1..zbar_n``.  The conjugate variables are formally
independent symbols; conjugation swaps the two exponent tuples and conjugates
the coefficient.  Zero coefficients are never stored, so equality is
structural.

Variable indices in the public API (``Poly.z``, ``d_z`` ...) are 1-based, to
match the usual mathematical notation; exponent tuples are ordinary 0-based
Python tuples.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import DimensionError, ParseError

Exponent = tuple[int, ...]
Monomial = tuple[Exponent, Exponent]

_F0 = Fraction(0)
_F1 = Fraction(1)
_RATIONAL_RE = re.compile(r"[+-]?\d+(/\d+)?")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; decimal and float literals are rejected."""
    if not isinstance(text, str) or not _RATIONAL_RE.fullmatch(text.strip()):
        raise ParseError(f"not an exact rational literal: {text!r}")
    try:
        return Fraction(text.strip())
    except ZeroDivisionError as exc:
        raise ParseError(f"zero denominator in {text!r}") from exc


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class ComplexRational:
    """Exact complex number with rational real and imaginary parts.

    Instances are treated as immutable values.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "ComplexRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @staticmethod
    def coerce(x) -> "ComplexRational":
        if isinstance(x, ComplexRational):
            return x
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return ComplexRational._raw(Fraction(x), _F0)
        if isinstance(x, (tuple, list)) and len(x) == 2:
            return ComplexRational(x[0], x[1])
        raise TypeError(f"cannot convert {x!r} to ComplexRational")

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, ComplexRational):
            if isinstance(other, (int, Fraction)):
                return ComplexRational._raw(self.re + other, self.im)
            return NotImplemented
        return ComplexRational._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, ComplexRational):
            if isinstance(other, (int, Fraction)):
                return ComplexRational._raw(self.re - other, self.im)
            return NotImplemented
        return ComplexRational._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return ComplexRational._raw(-self.re, -self.im)

    def __mul__(self, other):
        if not isinstance(other, ComplexRational):
            if isinstance(other, (int, Fraction)):
                return ComplexRational._raw(self.re * other, self.im * other)
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return ComplexRational._raw(a * c, _F0)
        return ComplexRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = ComplexRational.coerce(other)
        den = other.re * other.re + other.im * other.im
        if not den:
            raise ZeroDivisionError("division by zero ComplexRational")
        num = self * other.conj()
        return ComplexRational._raw(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        return ComplexRational.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return ComplexRational._raw(_F1, _F0) / (self ** (-k))
        out = ComplexRational._raw(_F1, _F0)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "ComplexRational":
        return ComplexRational._raw(self.re, -self.im)

    def abs2(self) -> Fraction:
        """|x|^2 as an exact rational."""
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, ComplexRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ComplexRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{_fmt_imag(self.im)}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re} {sign} {_fmt_imag(abs(self.im))}i)"

    def to_json(self) -> list[str]:
        return [format_rational(self.re), format_rational(self.im)]

    @classmethod
    def from_json(cls, data) -> "ComplexRational":
        if isinstance(data, str):
            return cls(parse_rational(data))
        if not isinstance(data, (list, tuple)) or len(data) != 2:
            raise ParseError(f"complex rational must be [re, im], got {data!r}")
        return cls(parse_rational(data[0]), parse_rational(data[1]))


def _fmt_imag(x: Fraction) -> str:
    if x == 1:
        return ""
    if x == -1:
        return "-"
    return str(x)


ZERO = ComplexRational(0)
ONE = ComplexRational(1)
I = ComplexRational(0, 1)

Scalar = Union[ComplexRational, int, Fraction]


def _add_into(acc: dict, key, value: ComplexRational) -> None:
    old = acc.get(key)
    if old is None:
        acc[key] = value
    else:
        s = old + value
        if s:
            acc[key] = s
        else:
            del acc[key]


def _addexp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


class Poly:
    """Polynomial in ``z_1..z_n, zbar_1..zbar_n`` with ComplexRational coefficients."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Monomial, Scalar] | None = None):
        if not isinstance(n, int) or n < 1:
            raise DimensionError(f"dimension must be a positive integer, got {n!r}")
        clean: dict[Monomial, ComplexRational] = {}
        for key, value in (terms or {}).items():
            alpha, beta = key
            alpha, beta = tuple(alpha), tuple(beta)
            if len(alpha) != n or len(beta) != n:
                raise DimensionError(f"monomial {key} does not have length {n}")
            if any((not isinstance(e, int)) or e < 0 for e in alpha + beta):
                raise ValueError(f"exponents must be non-negative integers: {key}")
            coef = ComplexRational.coerce(value)
            if coef:
                _add_into(clean, (alpha, beta), coef)
        self.n = n
        self._terms = clean
        self._hash = None

    @classmethod
    def _clean(cls, n: int, terms: dict) -> "Poly":
        # terms already validated and zero-free
        obj = object.__new__(cls)
        obj.n = n
        obj._terms = terms
        obj._hash = None
        return obj

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls._clean(n, {})

    @classmethod
    def const(cls, n: int, value: Scalar) -> "Poly":
        value = ComplexRational.coerce(value)
        if not value:
            return cls.zero(n)
        zero = (0,) * n
        return cls._clean(n, {(zero, zero): value})

    @classmethod
    def one(cls, n: int) -> "Poly":
        return cls.const(n, ONE)

    @classmethod
    def monomial(cls, n: int, alpha: Sequence[int], beta: Sequence[int], coef: Scalar = 1) -> "Poly":
        return cls(n, {(tuple(alpha), tuple(beta)): coef})

    @classmethod
    def z(cls, n: int, j: int) -> "Poly":
        """The coordinate ``z_j`` (1-based)."""
        _check_index(n, j)
        e = tuple(1 if k == j - 1 else 0 for k in range(n))
        return cls._clean(n, {(e, (0,) * n): ONE})

    @classmethod
    def zbar(cls, n: int, j: int) -> "Poly":
        """The conjugate coordinate ``zbar_j`` (1-based)."""
        _check_index(n, j)
        e = tuple(1 if k == j - 1 else 0 for k in range(n))
        return cls._clean(n, {((0,) * n, e): ONE})

    # inspection -------------------------------------------------------
    @property
    def terms(self) -> Mapping[Monomial, ComplexRational]:
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[tuple[Monomial, ComplexRational]]:
        """Terms in a deterministic order: by total degree, then exponents."""
        return iter(sorted(self._terms.items(), key=lambda kv: (sum(kv[0][0]) + sum(kv[0][1]), kv[0])))

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(a) + sum(b) for a, b in self._terms)

    def coefficient(self, alpha: Sequence[int], beta: Sequence[int]) -> ComplexRational:
        return self._terms.get((tuple(alpha), tuple(beta)), ZERO)

    def constant_term(self) -> ComplexRational:
        zero = (0,) * self.n
        return self._terms.get((zero, zero), ZERO)

    def homogeneous_part(self, k: int) -> "Poly":
        return Poly._clean(self.n, {m: c for m, c in self._terms.items() if sum(m[0]) + sum(m[1]) == k})

    def truncate(self, k: int | None) -> "Poly":
        """Drop every term of total degree > k (``None`` keeps everything)."""
        if k is None:
            return self
        return Poly._clean(self.n, {m: c for m, c in self._terms.items() if sum(m[0]) + sum(m[1]) <= k})

    def is_real(self) -> bool:
        return self.conj() == self

    def is_holomorphic(self) -> bool:
        return all(not any(b) for _, b in self._terms)

    def is_antiholomorphic(self) -> bool:
        return all(not any(a) for a, _ in self._terms)

    # ring operations --------------------------------------------------
    def _check_same(self, other: "Poly") -> None:
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check_same(other)
            return other
        return Poly.const(self.n, other)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        acc = dict(self._terms)
        for m, c in other._terms.items():
            _add_into(acc, m, c)
        return Poly._clean(self.n, acc)

    __radd__ = __add__

    def __neg__(self):
        return Poly._clean(self.n, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s: Scalar) -> "Poly":
        s = ComplexRational.coerce(s)
        if not s:
            return Poly.zero(self.n)
        return Poly._clean(self.n, {m: c * s for m, c in self._terms.items()})

    def mul(self, other: "Poly", order: int | None = None) -> "Poly":
        """Product, optionally dropping terms of total degree > ``order``."""
        self._check_same(other)
        acc: dict = {}
        for (a1, b1), c1 in self._terms.items():
            d1 = sum(a1) + sum(b1)
            for (a2, b2), c2 in other._terms.items():
                if order is not None and d1 + sum(a2) + sum(b2) > order:
                    continue
                _add_into(acc, (_addexp(a1, a2), _addexp(b1, b2)), c1 * c2)
        return Poly._clean(self.n, acc)

    def __mul__(self, other):
        if isinstance(other, Poly):
            return self.mul(other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = Poly.one(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self._terms == other._terms
        if isinstance(other, (ComplexRational, int, Fraction)) and not isinstance(other, bool):
            return self == Poly.const(self.n, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    # calculus ---------------------------------------------------------
    def conj(self) -> "Poly":
        return Poly._clean(self.n, {(b, a): c.conj() for (a, b), c in self._terms.items()})

    def d_z(self, j: int) -> "Poly":
        """Formal partial derivative in ``z_j`` (1-based), zbar held fixed."""
        _check_index(self.n, j)
        k = j - 1
        acc = {}
        for (a, b), c in self._terms.items():
            e = a[k]
            if e:
                a2 = a[:k] + (e - 1,) + a[k + 1:]
                acc[(a2, b)] = c * e
        return Poly._clean(self.n, acc)

    def d_zbar(self, j: int) -> "Poly":
        """Formal partial derivative in ``zbar_j`` (1-based), z held fixed."""
        _check_index(self.n, j)
        k = j - 1
        acc = {}
        for (a, b), c in self._terms.items():
            e = b[k]
            if e:
                b2 = b[:k] + (e - 1,) + b[k + 1:]
                acc[(a, b2)] = c * e
        return Poly._clean(self.n, acc)

    # evaluation -------------------------------------------------------
    def evaluate(self, point: Sequence[Scalar]) -> ComplexRational:
        """Exact value at ``point`` (zbar_j takes the value conj(point_j))."""
        if len(point) != self.n:
            raise DimensionError(f"point has length {len(point)}, expected {self.n}")
        pt = [ComplexRational.coerce(x) for x in point]
        cj = [x.conj() for x in pt]
        total = ZERO
        for (a, b), c in self._terms.items():
            v = c
            for x, e in zip(pt, a):
                if e:
                    v = v * x ** e
            for x, e in zip(cj, b):
                if e:
                    v = v * x ** e
            total = total + v
        return total

    def evaluate_float(self, point: Sequence[complex]) -> complex:
        """Floating evaluation, for sampling oracles only."""
        if len(point) != self.n:
            raise DimensionError(f"point has length {len(point)}, expected {self.n}")
        pt = [complex(x) for x in point]
        cj = [x.conjugate() for x in pt]
        total = 0j
        for (a, b), c in self._terms.items():
            v = complex(c)
            for x, e in zip(pt, a):
                if e:
                    v *= x ** e
            for x, e in zip(cj, b):
                if e:
                    v *= x ** e
            total += v
        return total

    def substitute(self, images: Sequence["Poly"], order: int | None = None) -> "Poly":
        return substitute(self, images, order)

    # display / serialization -----------------------------------------
    def __repr__(self):
        return f"Poly({self.n}, {str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (a, b), c in self.items():
            mono = []
            for j, e in enumerate(a, 1):
                if e:
                    mono.append(f"z{j}" + (f"^{e}" if e > 1 else ""))
            for j, e in enumerate(b, 1):
                if e:
                    mono.append(f"zb{j}" + (f"^{e}" if e > 1 else ""))
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(mono))
            elif c == -1:
                parts.append("-" + "*".join(mono))
            else:
                parts.append(f"{c}*" + "*".join(mono))
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list[dict]:
        return [
            {"alpha": list(a), "beta": list(b), "re": format_rational(c.re), "im": format_rational(c.im)}
            for (a, b), c in self.items()
        ]

    @classmethod
    def from_json(cls, records, n: int | None = None) -> "Poly":
        if not isinstance(records, list):
            raise ParseError("a polynomial must be a list of term records")
        terms: dict = {}
        for rec in records:
            if not isinstance(rec, dict) or not {"alpha", "beta", "re", "im"} <= rec.keys():
                raise ParseError(f"bad term record: {rec!r}")
            alpha, beta = rec["alpha"], rec["beta"]
            if not (isinstance(alpha, list) and isinstance(beta, list)):
                raise ParseError(f"exponents must be lists: {rec!r}")
            if any(not isinstance(e, int) or isinstance(e, bool) or e < 0 for e in alpha + beta):
                raise ParseError(f"exponents must be non-negative integers: {rec!r}")
            if n is None:
                n = len(alpha)
            if len(alpha) != n or len(beta) != n:
                raise ParseError(f"term {rec!r} does not match dimension {n}")
            key = (tuple(alpha), tuple(beta))
            if key in terms:
                raise ParseError(f"duplicate monomial {key}")
            terms[key] = ComplexRational(parse_rational(rec["re"]), parse_rational(rec["im"]))
        if n is None:
            raise ParseError("cannot infer the dimension of an empty polynomial")
        return cls(n, terms)


def _check_index(n: int, j: int) -> None:
    if not isinstance(j, int) or not 1 <= j <= n:
        raise IndexError(f"variable index {j} out of range 1..{n}")


# functional interface ---------------------------------------------------

def add(p: Poly, q: Poly) -> Poly:
    p._check_same(q)
    return p + q


def mul(p: Poly, q: Poly) -> Poly:
    return p.mul(q)


def scale(p: Poly, s: Scalar) -> Poly:
    return p.scale(s)


def conj(p: Poly) -> Poly:
    return p.conj()


def d_z(p: Poly, j: int) -> Poly:
    return p.d_z(j)


def d_zbar(p: Poly, j: int) -> Poly:
    return p.d_zbar(j)


def coefficient(p: Poly, alpha: Sequence[int], beta: Sequence[int]) -> ComplexRational:
    return p.coefficient(alpha, beta)


def substitute(p: Poly, images: Sequence[Poly], order: int | None = None) -> Poly:
    """Compose ``p`` with ``z_j -> images[j]`` and ``zbar_j -> conj(images[j])``.

    With ``order`` set, every intermediate product is truncated at that total
    degree; the result is then exact up to degree ``order``.
    """
    images = list(images)
    if len(images) != p.n:
        raise DimensionError(f"need {p.n} images, got {len(images)}")
    if not images:
        raise DimensionError("empty image list")
    m = images[0].n
    for q in images:
        if not isinstance(q, Poly) or q.n != m:
            raise DimensionError("all images must be polynomials of the same dimension")
    conj_images = [q.conj() for q in images]
    cache: dict = {}

    def power(bar: bool, k: int, e: int) -> Poly:
        key = (bar, k, e)
        hit = cache.get(key)
        if hit is None:
            base = (conj_images if bar else images)[k]
            hit = base if e == 1 else power(bar, k, e - 1).mul(base, order)
            cache[key] = hit
        return hit

    acc: dict = {}
    for (a, b), c in p._terms.items():
        term = Poly.const(m, c)
        for k, e in enumerate(a):
            if e:
                term = term.mul(power(False, k, e), order)
        for k, e in enumerate(b):
            if e:
                term = term.mul(power(True, k, e), order)
        for mono, v in term._terms.items():
            _add_into(acc, mono, v)
    return Poly._clean(m, acc)


def variables(n: int) -> list[Poly]:
    """``[z_1, ..., z_n]``."""
    return [Poly.z(n, j) for j in range(1, n + 1)]


def rho(n: int) -> Poly:
    """Defining function of the Siegel half-plane: Re z_n + |z'|^2."""
    half = ComplexRational(Fraction(1, 2))
    out = (Poly.z(n, n) + Poly.zbar(n, n)).scale(half)
    for j in range(1, n):
        out = out + Poly.z(n, j) * Poly.zbar(n, j)
    return out


@dataclass(frozen=True)
class BoundaryPoly:
    """Normal form of a polynomial restricted to the boundary ``rho = 0``.

    ``representative`` is obtained by replacing Re z_n with -|z'|^2, so it
    depends on z_n, zbar_n only through z_n - zbar_n.  Two polynomials agree
    on the boundary iff their normal forms are equal.
    """

    n: int
    representative: Poly

    def is_zero(self) -> bool:
        return self.representative.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def coefficient(self, alpha: Sequence[int], beta: Sequence[int]) -> ComplexRational:
        return self.representative.coefficient(alpha, beta)

    def truncate(self, k: int | None) -> "BoundaryPoly":
        return BoundaryPoly(self.n, self.representative.truncate(k))

    def __str__(self):
        return str(self.representative)


def _boundary_images(n: int) -> list[Poly]:
    half = ComplexRational(Fraction(1, 2))
    imag_part = (Poly.z(n, n) - Poly.zbar(n, n)).scale(half)
    norm2 = Poly.zero(n)
    for j in range(1, n):
        norm2 = norm2 + Poly.z(n, j) * Poly.zbar(n, j)
    return [Poly.z(n, j) for j in range(1, n)] + [imag_part - norm2]


def reduce_mod_boundary(p: Poly, order: int | None = None) -> BoundaryPoly:
    """Rewrite ``z_n + zbar_n -> -2|z'|^2`` to the canonical boundary normal form.

    The substitution z_n -> -|z'|^2 + (z_n - zbar_n)/2 is idempotent, so a
    single pass reaches the normal form.  The rewriting never lowers total
    degree, hence with ``order`` set the result is exact up to that degree.
    """
    return BoundaryPoly(p.n, substitute(p, _boundary_images(p.n), order).truncate(order))


def iter_monomials(n: int, max_degree: int) -> Iterator[Monomial]:
    """All monomials in (z, zbar) of total degree <= max_degree, ordered by degree."""

    def compositions(slots: int, total: int):
        if slots == 1:
            yield (total,)
            return
        for first in range(total, -1, -1):
            for rest in compositions(slots - 1, total - first):
                yield (first,) + rest

    for d in range(max_degree + 1):
        for exps in compositions(2 * n, d):
            yield exps[:n], exps[n:]
