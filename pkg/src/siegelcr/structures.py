"""Model almost-complex structures on C^n and the tangent frame of the Siegel boundary.

A model structure is stored through the linear forms

    Ltilde_i(z, zbar) = sum_l (alpha[i][l] z_l + beta[i][l] zbar_l),   i = 1..n-1,

which occupy the last row of the complexified matrix; the row above carries
their conjugates.  In the frame d/dz, d/dzbar this reads

    J(d/dz_i)    = i d/dz_i    + Ltilde_i       d/dzbar_n
    J(d/dzbar_i) = -i d/dzbar_i + conj(Ltilde_i) d/dz_n
    J(d/dz_n)    = i d/dz_n,   J(d/dzbar_n) = -i d/dzbar_n.

A simple structure J^B has beta = 0 and alpha = B with B antisymmetric.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence, Union

from .algebra import I, ONE, ZERO, ComplexRational, Poly
from .errors import DimensionError, ValidationError
from .fields import VectorField, lie_bracket

_HALF = Fraction(1, 2)


def _cr_matrix(rows, m: int, name: str) -> tuple[tuple[ComplexRational, ...], ...]:
    rows = tuple(tuple(ComplexRational.coerce(x) for x in row) for row in rows)
    if len(rows) != m or any(len(r) != m for r in rows):
        raise DimensionError(f"{name} must be {m}x{m}")
    return rows


@dataclass(frozen=True)
class ModelStructure:
    """General model structure, given by the coefficients of the Ltilde forms.

    ``alpha[i][l]`` multiplies z_{l+1} and ``beta[i][l]`` multiplies zbar_{l+1}
    in Ltilde_{i+1}.
    """

    n: int
    alpha: tuple[tuple[ComplexRational, ...], ...]
    beta: tuple[tuple[ComplexRational, ...], ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise DimensionError(f"model structures need n >= 2, got {self.n!r}")
        object.__setattr__(self, "alpha", _cr_matrix(self.alpha, self.n - 1, "alpha"))
        object.__setattr__(self, "beta", _cr_matrix(self.beta, self.n - 1, "beta"))

    @classmethod
    def standard(cls, n: int) -> "ModelStructure":
        zero = [[ZERO] * (n - 1) for _ in range(n - 1)]
        return cls(n, zero, zero)

    def ltilde(self, i: int) -> Poly:
        """Ltilde_i as a polynomial (i is 1-based, 1 <= i <= n-1)."""
        return _ltilde(self, i)

    def as_model(self) -> "ModelStructure":
        return self


@dataclass(frozen=True)
class SimpleModelStructure:
    """J^B for an antisymmetric (n-1)x(n-1) complex matrix B."""

    n: int
    B: tuple[tuple[ComplexRational, ...], ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise DimensionError(f"model structures need n >= 2, got {self.n!r}")
        B = _cr_matrix(self.B, self.n - 1, "B")
        bad = [(j + 1, k + 1) for j in range(self.n - 1) for k in range(self.n - 1) if B[j][k] != -B[k][j]]
        if bad:
            raise ValidationError(f"B is not antisymmetric at entries {bad}")
        object.__setattr__(self, "B", B)

    @classmethod
    def standard(cls, n: int) -> "SimpleModelStructure":
        return cls(n, [[ZERO] * (n - 1) for _ in range(n - 1)])

    def as_model(self) -> ModelStructure:
        return _simple_to_model(self)

    def ltilde(self, i: int) -> Poly:
        return _ltilde(self.as_model(), i)

    def is_zero(self) -> bool:
        return all(not x for row in self.B for x in row)

    def bilinear(self, u: Sequence, v: Sequence) -> ComplexRational:
        """B(u, v) = sum_{j,k} b_jk u_j v_k."""
        out = ZERO
        for j, row in enumerate(self.B):
            for k, b in enumerate(row):
                if b:
                    out = out + b * u[j] * v[k]
        return out


AnyStructure = Union[ModelStructure, SimpleModelStructure]


@lru_cache(maxsize=None)
def _simple_to_model(S: SimpleModelStructure) -> ModelStructure:
    m = S.n - 1
    return ModelStructure(S.n, S.B, [[ZERO] * m for _ in range(m)])


@lru_cache(maxsize=None)
def _ltilde(J: ModelStructure, i: int) -> Poly:
    if not 1 <= i <= J.n - 1:
        raise IndexError(f"Ltilde index {i} out of range 1..{J.n - 1}")
    n = J.n
    terms = {}
    for l in range(n - 1):
        e = tuple(1 if k == l else 0 for k in range(n))
        zero = (0,) * n
        if J.alpha[i - 1][l]:
            terms[(e, zero)] = J.alpha[i - 1][l]
        if J.beta[i - 1][l]:
            terms[(zero, e)] = J.beta[i - 1][l]
    return Poly(n, terms)


def as_model(J: AnyStructure) -> ModelStructure:
    if isinstance(J, (ModelStructure, SimpleModelStructure)):
        return J.as_model()
    raise TypeError(f"expected a model structure, got {type(J).__name__}")


# complexified matrix --------------------------------------------------------

@lru_cache(maxsize=None)
def _block_matrix(J: ModelStructure) -> tuple[tuple[Poly, ...], ...]:
    n = J.n
    M = [[Poly.zero(n) for _ in range(2 * n)] for _ in range(2 * n)]
    for k in range(n):
        M[k][k] = Poly.const(n, I)
        M[n + k][n + k] = Poly.const(n, -I)
    for k in range(n - 1):
        L = _ltilde(J, k + 1)
        M[2 * n - 1][k] = L
        M[n - 1][n + k] = L.conj()
    return tuple(tuple(row) for row in M)


def block_matrix(J: AnyStructure) -> list[list[Poly]]:
    """J acting on component vectors ordered (d/dz_1..d/dz_n, d/dzbar_1..d/dzbar_n)."""
    return [list(row) for row in _block_matrix(as_model(J))]


def _interleave_index(n: int, b: int) -> int:
    return 2 * b if b < n else 2 * (b - n) + 1


def complexify(J: AnyStructure) -> list[list[Poly]]:
    """The 2n x 2n complexified matrix in the frame (d/dz_1, d/dzbar_1, ..., d/dz_n, d/dzbar_n).

    Diagonal entries alternate i, -i; the last row holds Ltilde_i in the
    d/dz_i columns and the row above holds conj(Ltilde_i) in the d/dzbar_i
    columns.
    """
    J = as_model(J)
    n = J.n
    B = _block_matrix(J)
    out = [[None] * (2 * n) for _ in range(2 * n)]
    for r in range(2 * n):
        for c in range(2 * n):
            out[_interleave_index(n, r)][_interleave_index(n, c)] = B[r][c]
    return out


def act(J: AnyStructure, X: VectorField) -> VectorField:
    """J applied pointwise to the polynomial field X."""
    J = as_model(J)
    if X.n != J.n:
        raise DimensionError("field and structure dimensions differ")
    M = _block_matrix(J)
    comps = []
    for row in M:
        acc = Poly.zero(J.n)
        for entry, x in zip(row, X.components):
            if entry and x:
                acc = acc + entry * x
        comps.append(acc)
    return VectorField(J.n, tuple(comps))


# verification ---------------------------------------------------------------

@dataclass
class StructureFailure:
    check: str
    row: int
    col: int
    detail: str

    def to_json(self) -> dict:
        return {"check": self.check, "row": self.row, "col": self.col, "detail": self.detail}


@dataclass
class StructureReport:
    ok: bool
    failures: list[StructureFailure] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok, "failures": [f.to_json() for f in self.failures]}


def _allowed_entry(n: int, r: int, c: int) -> str | None:
    """Role of interleaved position (r, c), or None when it must vanish."""
    if r == c:
        return "diag"
    if r == 2 * n - 1 and c < 2 * n - 2 and c % 2 == 0:
        return "lower"
    if r == 2 * n - 2 and c < 2 * n - 2 and c % 2 == 1:
        return "upper"
    return None


def _is_model_linear(p: Poly) -> bool:
    n = p.n
    for (a, b) in p.terms:
        if sum(a) + sum(b) != 1 or a[n - 1] or b[n - 1]:
            return False
    return True


def verify_matrix(M: Sequence[Sequence[Poly]]) -> StructureReport:
    """Check a complexified matrix (interleaved frame) against the model shape.

    Three families of checks, every failure located by a 1-based (row, col):
    the sparsity/diagonal pattern of a model structure, the conjugation
    symmetry between the last two rows, and J^2 = -I exactly.
    """
    size = len(M)
    if size % 2 or any(len(row) != size for row in M):
        raise DimensionError("complexified matrix must be 2n x 2n")
    n = size // 2
    failures: list[StructureFailure] = []
    for r in range(size):
        for c in range(size):
            entry = M[r][c]
            role = _allowed_entry(n, r, c)
            if role == "diag":
                want = Poly.const(n, I if r % 2 == 0 else -I)
                if entry != want:
                    failures.append(StructureFailure("shape", r + 1, c + 1, f"diagonal entry {entry}, expected {want}"))
            elif role is None:
                if entry:
                    failures.append(StructureFailure("shape", r + 1, c + 1, f"entry {entry} must vanish"))
            elif not _is_model_linear(entry):
                failures.append(StructureFailure("shape", r + 1, c + 1, f"entry {entry} is not linear in (z', zbar')"))
    for k in range(n - 1):
        low = M[2 * n - 1][2 * k]
        up = M[2 * n - 2][2 * k + 1]
        if up != low.conj():
            failures.append(StructureFailure("conjugation", 2 * n - 1, 2 * k + 2, f"{up} is not conj({low})"))
    square = _poly_matmul(M, M, n)
    for r in range(size):
        for c in range(size):
            want = Poly.const(n, -1) if r == c else Poly.zero(n)
            if square[r][c] != want:
                failures.append(StructureFailure("J^2=-I", r + 1, c + 1, f"(J^2) entry is {square[r][c]}"))
    return StructureReport(not failures, failures)


def _poly_matmul(A, B, n: int):
    size = len(A)
    out = []
    for r in range(size):
        row = []
        for c in range(len(B[0])):
            acc = Poly.zero(n)
            for k in range(len(B)):
                if A[r][k] and B[k][c]:
                    acc = acc + A[r][k] * B[k][c]
            row.append(acc)
        out.append(row)
    return out


def verify_structure(J: AnyStructure | Sequence[Sequence[Poly]]) -> StructureReport:
    if isinstance(J, (ModelStructure, SimpleModelStructure)):
        return verify_matrix(complexify(J))
    return verify_matrix(J)


def structure_from_matrix(M: Sequence[Sequence[Poly]]) -> ModelStructure:
    """Read a ModelStructure back from a verified complexified matrix."""
    report = verify_matrix(M)
    if not report.ok:
        first = report.failures[0]
        raise ValidationError(f"not a model structure: {first.check} at ({first.row}, {first.col}): {first.detail}")
    n = len(M) // 2
    alpha, beta = [], []
    for k in range(n - 1):
        L = M[2 * n - 1][2 * k]
        alpha.append([L.coefficient(_unit(n, l), (0,) * n) for l in range(n - 1)])
        beta.append([L.coefficient((0,) * n, _unit(n, l)) for l in range(n - 1)])
    return ModelStructure(n, alpha, beta)


def _unit(n: int, l: int) -> tuple[int, ...]:
    return tuple(1 if k == l else 0 for k in range(n))


# simple structures -----------------------------------------------------------

def is_simple(J: AnyStructure) -> bool:
    J = as_model(J)
    return all(not x for row in J.beta for x in row)


def as_simple(J: AnyStructure) -> SimpleModelStructure:
    """Recover J^B; fails when some beta coefficient is nonzero or alpha is not antisymmetric."""
    if isinstance(J, SimpleModelStructure):
        return J
    if not is_simple(J):
        raise ValidationError("structure has nonzero beta coefficients; it is not simple")
    return SimpleModelStructure(J.n, J.alpha)


# tangent frame ---------------------------------------------------------------

@dataclass(frozen=True)
class TangentFrame:
    """Frame L_1..L_{n-1}, T of the complexified tangent space of the boundary.

    ``alpha[j]`` and ``beta[j]`` are the coefficient polynomials of L_{j+1};
    ``a[j][l]``, ``b[j][l]`` the coefficients of z_{l+1}, zbar_{l+1} in beta[j].
    """

    n: int
    L: tuple[VectorField, ...]
    T: VectorField
    alpha: tuple[Poly, ...]
    beta: tuple[Poly, ...]
    a: tuple[tuple[ComplexRational, ...], ...]
    b: tuple[tuple[ComplexRational, ...], ...]

    @property
    def Lbar(self) -> tuple[VectorField, ...]:
        return tuple(X.conj() for X in self.L)

    def fields(self) -> tuple[VectorField, ...]:
        return self.L + self.Lbar + (self.T,)


def tangent_frame(J: AnyStructure) -> TangentFrame:
    J = as_model(J)
    return _tangent_frame(J)


@lru_cache(maxsize=None)
def _tangent_frame(J: ModelStructure) -> TangentFrame:
    n = J.n
    half_i = ComplexRational(0, _HALF)
    Ls, alphas, betas = [], [], []
    for j in range(1, n):
        Lt = _ltilde(J, j)
        beta_j = Lt.scale(-half_i)
        alpha_j = Lt.scale(half_i) - Poly.zbar(n, j).scale(2)
        zpart = [Poly.zero(n)] * n
        zpart[j - 1] = Poly.one(n)
        zpart[n - 1] = alpha_j
        zbarpart = [Poly.zero(n)] * n
        zbarpart[n - 1] = beta_j
        Ls.append(VectorField.from_blocks(zpart, zbarpart))
        alphas.append(alpha_j)
        betas.append(beta_j)
    a = tuple(tuple(-half_i * J.alpha[j][l] for l in range(n - 1)) for j in range(n - 1))
    b = tuple(tuple(-half_i * J.beta[j][l] for l in range(n - 1)) for j in range(n - 1))
    T = (VectorField.coordinate(n, n) - VectorField.coordinate(n, n, bar=True)) * I
    return TangentFrame(n, tuple(Ls), T, tuple(alphas), tuple(betas), a, b)


# integrability ---------------------------------------------------------------

def nijenhuis_tensor(J: AnyStructure) -> dict[tuple[str, str], VectorField]:
    """Nonzero values N(X, Y) on pairs of complexified coordinate fields.

    N(X, Y) = [JX, JY] - J[JX, Y] - J[X, JY] - [X, Y].  Keys name the pair,
    e.g. ("dz1", "dzb3").
    """
    J = as_model(J)
    n = J.n
    coords = [(f"dz{j}", VectorField.coordinate(n, j)) for j in range(1, n + 1)]
    coords += [(f"dzb{j}", VectorField.coordinate(n, j, bar=True)) for j in range(1, n + 1)]
    out = {}
    images = {name: act(J, X) for name, X in coords}
    for (nx, X), (ny, Y) in combinations(coords, 2):
        JX, JY = images[nx], images[ny]
        N = lie_bracket(JX, JY) - act(J, lie_bracket(JX, Y)) - act(J, lie_bracket(X, JY)) - lie_bracket(X, Y)
        if not N.is_zero():
            out[(nx, ny)] = N
    return out


def nijenhuis_vanishes(J: AnyStructure, degree_bound: int | None = None) -> bool:
    """True iff the Nijenhuis tensor vanishes (up to ``degree_bound`` if given)."""
    return _nijenhuis_vanishes(as_model(J), degree_bound)


@lru_cache(maxsize=None)
def _nijenhuis_vanishes(J: ModelStructure, degree_bound: int | None) -> bool:
    for N in nijenhuis_tensor(J).values():
        if any(p.truncate(degree_bound) for p in N.components):
            return False
    return True
