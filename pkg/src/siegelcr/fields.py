"""Polynomial vector fields on C^n in the complexified coordinate frame.

A field is stored by its 2n coefficients along
d/dz_1 .. d/dz_n, d/dzbar_1 .. d/dzbar_n (the z-block, then the zbar-block).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .algebra import ComplexRational, Poly, Scalar
from .errors import DimensionError


@dataclass(frozen=True)
class VectorField:
    n: int
    components: tuple[Poly, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) != 2 * self.n:
            raise DimensionError(f"a field on C^{self.n} needs {2 * self.n} components, got {len(comps)}")
        if any(p.n != self.n for p in comps):
            raise DimensionError("component dimension mismatch")
        object.__setattr__(self, "components", comps)

    @classmethod
    def zero(cls, n: int) -> "VectorField":
        return cls(n, tuple(Poly.zero(n) for _ in range(2 * n)))

    @classmethod
    def coordinate(cls, n: int, j: int, bar: bool = False) -> "VectorField":
        """d/dz_j, or d/dzbar_j when ``bar`` (j is 1-based)."""
        if not 1 <= j <= n:
            raise IndexError(f"index {j} out of range 1..{n}")
        comps = [Poly.zero(n)] * (2 * n)
        comps[(n if bar else 0) + j - 1] = Poly.one(n)
        return cls(n, tuple(comps))

    @classmethod
    def from_blocks(cls, zpart: Sequence[Poly], zbarpart: Sequence[Poly]) -> "VectorField":
        return cls(len(zpart), tuple(zpart) + tuple(zbarpart))

    @property
    def zpart(self) -> tuple[Poly, ...]:
        return self.components[: self.n]

    @property
    def zbarpart(self) -> tuple[Poly, ...]:
        return self.components[self.n:]

    def __call__(self, f: Poly) -> Poly:
        """Apply the field as a derivation."""
        if f.n != self.n:
            raise DimensionError("field and function live in different dimensions")
        out = Poly.zero(self.n)
        for j in range(1, self.n + 1):
            a = self.components[j - 1]
            if a:
                out = out + a * f.d_z(j)
            b = self.components[self.n + j - 1]
            if b:
                out = out + b * f.d_zbar(j)
        return out

    def conj(self) -> "VectorField":
        return VectorField.from_blocks([p.conj() for p in self.zbarpart], [p.conj() for p in self.zpart])

    @cached_property
    def is_real(self) -> bool:
        return all(b == a.conj() for a, b in zip(self.zpart, self.zbarpart))

    def real_field(self) -> "VectorField":
        """X + conj(X)."""
        return self + self.conj()

    def __add__(self, other: "VectorField") -> "VectorField":
        if not isinstance(other, VectorField):
            return NotImplemented
        if other.n != self.n:
            raise DimensionError("dimension mismatch")
        return VectorField(self.n, tuple(a + b for a, b in zip(self.components, other.components)))

    def __neg__(self):
        return VectorField(self.n, tuple(-a for a in self.components))

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + (-other)

    def __mul__(self, s) -> "VectorField":
        """Multiply by a scalar or by a polynomial function."""
        if isinstance(s, Poly):
            return VectorField(self.n, tuple(s * a for a in self.components))
        try:
            s = ComplexRational.coerce(s)
        except TypeError:
            return NotImplemented
        return VectorField(self.n, tuple(a.scale(s) for a in self.components))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.components)

    def at(self, point: Sequence[Scalar]) -> tuple[ComplexRational, ...]:
        return tuple(p.evaluate(point) for p in self.components)

    def reduce(self, fn) -> "VectorField":
        """Apply ``fn`` (Poly -> Poly) to every component."""
        return VectorField(self.n, tuple(fn(p) for p in self.components))

    def __str__(self):
        names = [f"d/dz{j}" for j in range(1, self.n + 1)] + [f"d/dzb{j}" for j in range(1, self.n + 1)]
        parts = [f"({p}) {name}" for p, name in zip(self.components, names) if p]
        return " + ".join(parts) if parts else "0"


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y]f = X(Yf) - Y(Xf), computed componentwise."""
    if X.n != Y.n:
        raise DimensionError("dimension mismatch in bracket")
    return VectorField(X.n, tuple(X(b) - Y(a) for a, b in zip(X.components, Y.components)))
