"""Automorphisms of the Siegel half-plane with a simple structure J^B.

Every element is kept in the rational normal form (A, c, zeta) acting by

    G(z) = Psi_zeta(A z', c z_n),
    Psi_zeta(w) = (w' + zeta', w_n + zeta_n - 2<w', zeta'> + i Re B(w', zeta')),

with A^t conj(A) = c I, A^t B A = c B, c > 0 and rho(zeta) = 0.  The linear
part is the isotropy element A/sqrt(c) composed with the dilation of
parameter 1/c; keeping (A, c) instead avoids square roots.

Group law (derived by pushing translations through linear parts):

    (A1, c1, zeta1) o (A2, c2, zeta2) = (A1 A2, c1 c2, G1(zeta2))
    (A, c, zeta)^-1 = (A*/c, 1/c, ((A*/c)(-zeta'), conj(zeta_n)/c))
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .algebra import I, ONE, ZERO, ComplexRational, Poly, rho
from .errors import AutomorphismError, BoundaryError, DimensionError, IntegrableCaseError
from .maps import PolyMap
from .structures import SimpleModelStructure, nijenhuis_vanishes

_HALF = Fraction(1, 2)


def _as_fraction(c) -> Fraction:
    if isinstance(c, ComplexRational):
        if c.im:
            raise AutomorphismError(f"c = {c} is not real", [f"c = {c} must be real"])
        return c.re
    if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
        return Fraction(c)
    if isinstance(c, str):
        return ComplexRational(c).re
    raise TypeError(f"c must be rational, got {c!r}")


def _inner(u: Sequence[ComplexRational], v: Sequence[ComplexRational]) -> ComplexRational:
    """<u, v> = sum u_j conj(v_j)."""
    out = ZERO
    for a, b in zip(u, v):
        out = out + a * b.conj()
    return out


def translation_action(B: SimpleModelStructure, zeta: Sequence[ComplexRational], w: Sequence[ComplexRational]) -> tuple:
    n = B.n
    zp, wp = zeta[: n - 1], w[: n - 1]
    bw = B.bilinear(wp, zp)
    last = w[n - 1] + zeta[n - 1] - 2 * _inner(wp, zp) + I * ComplexRational(bw.re)
    return tuple(a + b for a, b in zip(wp, zp)) + (last,)


def automorphism_failures(B: SimpleModelStructure, A, c, zeta) -> list[str]:
    """Every violated invariant of the normal form, as readable strings."""
    m = B.n - 1
    failures = []
    if len(A) != m or any(len(row) != m for row in A):
        return [f"A must be {m}x{m}"]
    if len(zeta) != B.n:
        return [f"zeta must have {B.n} entries"]
    if c <= 0:
        failures.append(f"c = {c} must be positive")
    AtAbar = linalg.matmul(linalg.transpose(A), linalg.conj(A))
    if not linalg.equal(AtAbar, linalg.scale(linalg.identity(m), ComplexRational(c))):
        failures.append("A^t conj(A) != c I")
    Bm = [list(r) for r in B.B]
    AtBA = linalg.matmul(linalg.matmul(linalg.transpose(A), Bm), A)
    if not linalg.equal(AtBA, linalg.scale(Bm, ComplexRational(c))):
        failures.append("A^t B A != c B")
    if rho(B.n).evaluate(zeta) != 0:
        failures.append("rho(zeta) != 0: translation parameter is off the boundary")
    return failures


@dataclass(frozen=True)
class Automorphism:
    structure: SimpleModelStructure
    A: tuple[tuple[ComplexRational, ...], ...]
    c: Fraction
    zeta: tuple[ComplexRational, ...]

    def __post_init__(self):
        A = tuple(tuple(ComplexRational.coerce(x) for x in row) for row in self.A)
        c = _as_fraction(self.c)
        zeta = tuple(ComplexRational.coerce(x) for x in self.zeta)
        failures = automorphism_failures(self.structure, A, c, zeta)
        if failures:
            raise AutomorphismError("invalid automorphism data: " + "; ".join(failures), failures)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "zeta", zeta)

    @property
    def n(self) -> int:
        return self.structure.n

    def linear_part(self) -> "Automorphism":
        return Automorphism(self.structure, self.A, self.c, (ZERO,) * self.n)

    def __call__(self, z: Sequence) -> tuple[ComplexRational, ...]:
        return apply(self, z)

    def __matmul__(self, other: "Automorphism") -> "Automorphism":
        return compose(self, other)


def identity(B: SimpleModelStructure) -> Automorphism:
    return Automorphism(B, linalg.identity(B.n - 1), Fraction(1), (ZERO,) * B.n)


def make_dilation(s, B: SimpleModelStructure) -> Automorphism:
    """The dilation with parameter tau = s^2: z -> (z'/s, z_n/s^2)."""
    s = _as_fraction(s)
    if s <= 0:
        raise AutomorphismError(f"dilation parameter s = {s} must be positive", ["s > 0"])
    m = B.n - 1
    return Automorphism(B, linalg.scale(linalg.identity(m), ComplexRational(1 / s)), 1 / (s * s), (ZERO,) * B.n)


def make_translation(zeta: Sequence, B: SimpleModelStructure) -> Automorphism:
    zeta = tuple(ComplexRational.coerce(x) for x in zeta)
    if len(zeta) != B.n:
        raise DimensionError(f"zeta must have {B.n} entries")
    if rho(B.n).evaluate(zeta) != 0:
        raise BoundaryError("translation parameter must lie on the boundary rho = 0")
    return Automorphism(B, linalg.identity(B.n - 1), Fraction(1), zeta)


def make_isotropy(A_unit, B: SimpleModelStructure) -> Automorphism:
    """Phi_A(z) = (A z', z_n) for unitary A with A^t B A = B."""
    return Automorphism(B, A_unit, Fraction(1), (ZERO,) * B.n)


def _check_compatible(G1: Automorphism, G2: Automorphism) -> None:
    if G1.structure != G2.structure:
        raise AutomorphismError("automorphisms belong to different structures", ["same B required"])


def apply(G: Automorphism, z: Sequence) -> tuple[ComplexRational, ...]:
    z = [ComplexRational.coerce(x) for x in z]
    n = G.n
    if len(z) != n:
        raise DimensionError(f"point must have {n} entries")
    w = linalg.matvec([list(r) for r in G.A], z[: n - 1]) + [z[n - 1] * G.c]
    return translation_action(G.structure, G.zeta, w)


def compose(G1: Automorphism, G2: Automorphism) -> Automorphism:
    """Normal form of G1 o G2."""
    _check_compatible(G1, G2)
    A = linalg.matmul([list(r) for r in G1.A], [list(r) for r in G2.A])
    return Automorphism(G1.structure, A, G1.c * G2.c, apply(G1, G2.zeta))


def invert(G: Automorphism) -> Automorphism:
    n = G.n
    A_inv = linalg.scale(linalg.adjoint([list(r) for r in G.A]), ComplexRational(1 / G.c))
    xi = [-x for x in G.zeta[: n - 1]]
    zeta = linalg.matvec(A_inv, xi) + [G.zeta[n - 1].conj() * (1 / G.c)]
    return Automorphism(G.structure, A_inv, 1 / G.c, zeta)


def as_polymap(G: Automorphism) -> PolyMap:
    """Components of G as exact polynomials of degree <= 2 in (z, zbar)."""
    n = G.n
    z = [Poly.z(n, j) for j in range(1, n + 1)]
    u = []
    for row in G.A:
        acc = Poly.zero(n)
        for a, zl in zip(row, z):
            if a:
                acc = acc + zl.scale(a)
        u.append(acc)
    zeta = G.zeta
    last = z[n - 1].scale(ComplexRational(G.c)) + Poly.const(n, zeta[n - 1])
    bilinear = Poly.zero(n)
    for j in range(n - 1):
        last = last - u[j].scale(2 * zeta[j].conj())
        for k in range(n - 1):
            b = G.structure.B[j][k]
            if b and zeta[k]:
                bilinear = bilinear + u[j].scale(b * zeta[k])
    # i Re(q) = (i/2)(q + conj q)
    last = last + (bilinear + bilinear.conj()).scale(ComplexRational(0, _HALF))
    comps = tuple(u[j] + Poly.const(n, zeta[j]) for j in range(n - 1)) + (last,)
    return PolyMap(n, comps)


def transitivity_witness(p: Sequence, q: Sequence, B: SimpleModelStructure) -> Automorphism:
    """An element sending the boundary point p to q: Psi_q o Psi_p^-1."""
    return compose(make_translation(q, B), invert(make_translation(p, B)))


def minus_one(n: int) -> tuple[ComplexRational, ...]:
    return (ZERO,) * (n - 1) + (ComplexRational(-1),)


def fixes_minus_one(G: Automorphism) -> bool:
    return apply(G, minus_one(G.n)) == minus_one(G.n)


def is_isotropy(G: Automorphism) -> bool:
    """Membership in the isotropy group of (0, .., 0, -1): c = 1 and zeta = 0.

    The characterization only holds for non-integrable J^B, so integrable
    structures are refused.
    """
    if nijenhuis_vanishes(G.structure):
        raise IntegrableCaseError("isotropy characterization requires a non-integrable J^B")
    return G.c == 1 and not any(G.zeta)


def exact_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    p, q = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if p * p == x.numerator and q * q == x.denominator:
        return Fraction(p, q)
    return None


def factored_view(G: Automorphism) -> dict:
    """Display data for Psi_zeta o Phi_{A'} o Lambda_tau with A' = A/sqrt(c), tau = 1/c.

    A' is exact when sqrt(c) is rational, otherwise given in floating point.
    """
    root = exact_sqrt(G.c)
    if root is not None:
        A_prime = [[(x * (1 / root)).to_json() for x in row] for row in G.A]
        exact = True
    else:
        r = math.sqrt(G.c)
        A_prime = [[[float(x.re) / r, float(x.im) / r] for x in row] for row in G.A]
        exact = False
    return {"A_prime": A_prime, "A_prime_exact": exact, "tau": f"{(1 / G.c).numerator}/{(1 / G.c).denominator}",
            "zeta": [x.to_json() for x in G.zeta]}


# random elements -----------------------------------------------------------------

def stabilizer_algebra(B: SimpleModelStructure) -> list[list[list[ComplexRational]]]:
    """Rational basis of {K : K* = -K, K^t B + B K = 0}, the Lie algebra of the unitary stabilizer of B."""
    m = B.n - 1
    generators = []
    for j in range(m):
        E = linalg.zeros(m, m)
        E[j][j] = I
        generators.append(E)
    for j in range(m):
        for k in range(j + 1, m):
            E = linalg.zeros(m, m)
            E[j][k], E[k][j] = ONE, -ONE
            generators.append(E)
            E = linalg.zeros(m, m)
            E[j][k], E[k][j] = I, I
            generators.append(E)
    Bm = [list(r) for r in B.B]
    images = [linalg.add(linalg.matmul(linalg.transpose(E), Bm), linalg.matmul(Bm, E)) for E in generators]
    rows = []
    for r in range(m):
        for s in range(m):
            rows.append([C[r][s].re for C in images])
            rows.append([C[r][s].im for C in images])
    basis = linalg.nullspace(rows, Fraction(1), Fraction(0))
    out = []
    for coeffs in basis:
        K = linalg.zeros(m, m)
        for t, E in zip(coeffs, generators):
            if t:
                K = linalg.add(K, linalg.scale(E, t))
        out.append(K)
    return out


def cayley(K) -> list[list[ComplexRational]]:
    """(I - K)(I + K)^-1, unitary for skew-Hermitian K and B-preserving when K is in the stabilizer algebra."""
    m = len(K)
    Id = linalg.identity(m)
    return linalg.matmul(linalg.sub(Id, K), linalg.inverse(linalg.add(Id, K)))


def _small_rational(rng: random.Random, bound: int = 3) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_boundary_point(n: int, rng: random.Random, bound: int = 3) -> tuple[ComplexRational, ...]:
    zp = [ComplexRational(_small_rational(rng, bound), _small_rational(rng, bound)) for _ in range(n - 1)]
    norm2 = sum((x.abs2() for x in zp), Fraction(0))
    return tuple(zp) + (ComplexRational(-norm2, _small_rational(rng, bound)),)


_SCALES = [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3, 2), Fraction(2, 3), Fraction(3)]


def random_automorphism(B: SimpleModelStructure, rng: random.Random, translate: bool = True) -> Automorphism:
    """A random element: scaled Cayley image of a random stabilizer-algebra element, then a translation."""
    basis = stabilizer_algebra(B)
    m = B.n - 1
    K = linalg.zeros(m, m)
    for E in basis:
        K = linalg.add(K, linalg.scale(E, _small_rational(rng, 2)))
    r = rng.choice(_SCALES)
    A = linalg.scale(cayley(K), ComplexRational(r))
    zeta = random_boundary_point(B.n, rng) if translate else (ZERO,) * B.n
    return Automorphism(B, A, r * r, zeta)


def random_simple_structure(n: int, rng: random.Random, bound: int = 10, nonzero: bool = True) -> SimpleModelStructure:
    """Random antisymmetric B with entries p/q, |p|, q <= bound."""
    m = n - 1
    while True:
        B = linalg.zeros(m, m)
        for j in range(m):
            for k in range(j + 1, m):
                x = ComplexRational(Fraction(rng.randint(-bound, bound), rng.randint(1, bound)),
                                    Fraction(rng.randint(-bound, bound), rng.randint(1, bound)))
                B[j][k], B[k][j] = x, -x
        S = SimpleModelStructure(n, B)
        if not nonzero or not S.is_zero() or m < 2:
            return S
