"""Levi form of the Siegel boundary Gamma = {rho = 0} under a model structure.

For a real field X with X and JX tangent to Gamma, the Levi value at p is

    dρ(J [X, JX])(p),

and the Hermitian Levi matrix on the frame L_1..L_{n-1} is recovered from
real-field values by polarization.  Positivity is decided with exact leading
principal minors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .algebra import ZERO, ComplexRational, Poly, reduce_mod_boundary, rho
from .errors import BoundaryError, DimensionError, ValidationError
from .fields import VectorField, lie_bracket
from .structures import AnyStructure, act, as_model, tangent_frame

Point = Sequence[ComplexRational]


def apply_J(J: AnyStructure, X: VectorField) -> VectorField:
    return act(J, X)


def on_boundary(p: Point) -> bool:
    p = [ComplexRational.coerce(x) for x in p]
    return rho(len(p)).evaluate(p) == 0


def _require_boundary(p: Point, n: int) -> list[ComplexRational]:
    if len(p) != n:
        raise DimensionError(f"point has length {len(p)}, expected {n}")
    p = [ComplexRational.coerce(x) for x in p]
    if rho(n).evaluate(p) != 0:
        raise BoundaryError(f"point {[str(x) for x in p]} is not on the boundary rho = 0")
    return p


def in_levi_distribution(J: AnyStructure, X: VectorField) -> bool:
    """X real, with X rho and (JX) rho vanishing on the boundary."""
    r = rho(X.n)
    return X.is_real and reduce_mod_boundary(X(r)).is_zero() and reduce_mod_boundary(act(J, X)(r)).is_zero()


def levi_form(J: AnyStructure, X: VectorField, p: Point) -> Fraction:
    """Exact Levi value of the real field X at the boundary point p."""
    J = as_model(J)
    if X.n != J.n:
        raise DimensionError("field and structure dimensions differ")
    p = _require_boundary(p, J.n)
    if not X.is_real:
        raise ValidationError("the Levi form is defined on real fields only")
    r = rho(J.n)
    JX = act(J, X)
    if not reduce_mod_boundary(X(r)).is_zero():
        raise ValidationError("field is not tangent to the boundary")
    if not reduce_mod_boundary(JX(r)).is_zero():
        raise ValidationError("J X is not tangent to the boundary: field not in the J-holomorphic tangent bundle")
    value = act(J, lie_bracket(X, JX))(r).evaluate(p)
    if value.im:
        # cannot happen for real X and real rho; guards the arithmetic
        raise AssertionError(f"Levi value {value} is not real")
    return value.re


@dataclass
class LeviReport:
    point: tuple[ComplexRational, ...]
    matrix: list[list[ComplexRational]]
    minors: list[Fraction]
    positive: bool
    witness: list[ComplexRational] | None = None
    hermitian: bool = True

    def to_json(self) -> dict:
        from .algebra import format_rational

        return {
            "point": [x.to_json() for x in self.point],
            "matrix": [[x.to_json() for x in row] for row in self.matrix],
            "leading_minors": [format_rational(m) for m in self.minors],
            "verdict": "positive" if self.positive else "not-positive",
            "hermitian": self.hermitian,
            "witness": None if self.witness is None else [x.to_json() for x in self.witness],
        }


def levi_matrix(J: AnyStructure, p: Point) -> LeviReport:
    """Hermitian Levi matrix on the frame L_1..L_{n-1} at p, with an exact positivity verdict.

    Entry (j, k) is H(e_j, e_k) for the Hermitian form H with
    H(v, v) = levi value of the real part of sum_j v_j L_j:

        Re H_jk = (Q(X_j + X_k) - Q(X_j) - Q(X_k)) / 2
        Im H_jk = (Q(X_j + J X_k) - Q(X_j) - Q(X_k)) / 2

    where X_j = L_j + conj(L_j).  Every entry is computed independently, so
    the Hermitian symmetry of the result is a genuine check.
    """
    J = as_model(J)
    p = _require_boundary(p, J.n)
    frame = tangent_frame(J)
    X = [L.real_field() for L in frame.L]
    JX = [act(J, x) for x in X]
    m = J.n - 1
    diag = [levi_form(J, X[j], p) for j in range(m)]
    H = [[ZERO] * m for _ in range(m)]
    for j in range(m):
        for k in range(m):
            if j == k:
                H[j][k] = ComplexRational(diag[j])
                continue
            re = (levi_form(J, X[j] + X[k], p) - diag[j] - diag[k]) / 2
            im = (levi_form(J, X[j] + JX[k], p) - diag[j] - diag[k]) / 2
            H[j][k] = ComplexRational(re, im)
    hermitian = all(H[j][k] == H[k][j].conj() for j in range(m) for k in range(m))
    if not hermitian:
        raise AssertionError("polarized Levi matrix is not Hermitian")
    minors = [x.re for x in linalg.leading_minors(H)]
    positive = all(x > 0 for x in minors)
    witness = None if positive else _witness(H)
    return LeviReport(tuple(p), H, minors, positive, witness, hermitian)


def hermitian_form(H, v: Sequence[ComplexRational]) -> Fraction:
    """H(v, v) = sum_{j,k} v_j conj(v_k) H_jk."""
    total = ZERO
    for j, row in enumerate(H):
        for k, h in enumerate(row):
            total = total + v[j] * v[k].conj() * h
    return total.re


def is_positive_definite(H) -> bool:
    """Sylvester's criterion with exact minors (H assumed Hermitian)."""
    return all(x.re > 0 for x in linalg.leading_minors(H))


def _witness(H) -> list[ComplexRational]:
    """A vector v with H(v, v) <= 0, by congruence elimination.

    With q(v) = v^* M v (M = transpose of H), each step replaces M by
    P^* M P for an elementary P; E accumulates the P's so that a
    non-positive pivot at k makes column k of E a witness.
    """
    m = len(H)
    A = [list(row) for row in linalg.transpose(H)]
    E = linalg.identity(m)
    for k in range(m):
        d = A[k][k]
        if d.re <= 0:
            v = [E[r][k] for r in range(m)]
            if hermitian_form(H, v) > 0:
                raise AssertionError("witness construction failed")
            return v
        for i in range(k + 1, m):
            g = A[k][i] / d
            if not g:
                continue
            for r in range(m):
                A[r][i] = A[r][i] - g * A[r][k]
                E[r][i] = E[r][i] - g * E[r][k]
            gc = g.conj()
            A[i] = [x - gc * y for x, y in zip(A[i], A[k])]
    raise AssertionError("no witness: matrix is positive definite")
