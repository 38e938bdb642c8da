"""Shared strategies and independent oracles for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

import sympy
from hypothesis import strategies as st

from siegelcr import autgroup
from siegelcr.algebra import ComplexRational, Poly, rho
from siegelcr.fields import VectorField
from siegelcr.maps import PolyMap
from siegelcr.structures import ModelStructure, SimpleModelStructure

# strategies ------------------------------------------------------------------------

fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
complex_rationals = st.builds(ComplexRational, fractions, fractions)
nonzero_complex = complex_rationals.filter(bool)


@st.composite
def polys(draw, n: int = 2, max_degree: int = 2, max_terms: int = 4) -> Poly:
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = draw(st.lists(st.integers(0, max_degree), min_size=2 * n, max_size=2 * n))
        while sum(exps) > max_degree:
            k = exps.index(max(exps))
            exps[k] -= 1
        terms[(tuple(exps[:n]), tuple(exps[n:]))] = draw(complex_rationals)
    return Poly(n, terms)


@st.composite
def fields(draw, n: int = 2, max_degree: int = 2) -> VectorField:
    return VectorField(n, tuple(draw(polys(n, max_degree, 3)) for _ in range(2 * n)))


@st.composite
def real_fields(draw, n: int = 2, max_degree: int = 2) -> VectorField:
    zpart = [draw(polys(n, max_degree, 3)) for _ in range(n)]
    return VectorField.from_blocks(zpart, [p.conj() for p in zpart])


@st.composite
def simple_structures(draw, n: int | None = None, nonzero: bool = False) -> SimpleModelStructure:
    n = n if n is not None else draw(st.integers(2, 4))
    m = n - 1
    B = [[ComplexRational(0)] * m for _ in range(m)]
    for j in range(m):
        for k in range(j + 1, m):
            x = draw(complex_rationals)
            B[j][k], B[k][j] = x, -x
    if nonzero and m >= 2 and all(not x for row in B for x in row):
        B[0][1], B[1][0] = ComplexRational(1), ComplexRational(-1)
    return SimpleModelStructure(n, B)


@st.composite
def model_structures(draw, n: int | None = None) -> ModelStructure:
    n = n if n is not None else draw(st.integers(2, 4))
    m = n - 1
    mat = lambda: [[draw(complex_rationals) for _ in range(m)] for _ in range(m)]  # noqa: E731
    return ModelStructure(n, mat(), mat())


@st.composite
def automorphisms(draw, B: SimpleModelStructure, translate: bool = True) -> autgroup.Automorphism:
    seed = draw(st.integers(0, 2**32 - 1))
    return autgroup.random_automorphism(B, random.Random(seed), translate=translate)


@st.composite
def boundary_points(draw, n: int):
    zp = [draw(complex_rationals) for _ in range(n - 1)]
    return tuple(zp) + (ComplexRational(-sum((x.abs2() for x in zp), Fraction(0)), draw(fractions)),)


# sympy oracle for polynomial algebra --------------------------------------------------

def sym_vars(n: int):
    z = sympy.symbols(f"z1:{n + 1}")
    zb = sympy.symbols(f"zb1:{n + 1}")
    return z, zb


def to_sympy(p: Poly):
    z, zb = sym_vars(p.n)
    expr = sympy.Integer(0)
    for (a, b), c in p.terms.items():
        coef = sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator)
        mono = sympy.Integer(1)
        for v, e in zip(z + zb, a + b):
            mono *= v ** e
        expr += coef * mono
    return sympy.expand(expr)


def sym_conj(expr, n: int):
    """Conjugation with z_j and zb_j as independent symbols: swap them, conjugate coefficients."""
    z, zb = sym_vars(n)
    gens = z + zb
    swapped = sympy.Poly(expr, *gens).as_dict()
    out = sympy.Integer(0)
    for exps, coef in swapped.items():
        mono = sympy.Integer(1)
        for v, e in zip(zb + z, exps):
            mono *= v ** e
        out += sympy.conjugate(coef) * mono
    return sympy.expand(out)


# brute-force 2-jet oracle -----------------------------------------------------------

def _sym(c: ComplexRational):
    return sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator)


def sym_action(A, c, zeta, B, n: int) -> list:
    """Components of z -> Psi_zeta(A z', c z_n) written out directly in sympy."""
    z, zb = sym_vars(n)
    m = n - 1
    u = [sum(A[j][l] * z[l] for l in range(m)) for j in range(m)]
    ub = [sum(sympy.conjugate(A[j][l]) * zb[l] for l in range(m)) for j in range(m)]
    bil = sum(B[j][k] * u[j] * zeta[k] for j in range(m) for k in range(m))
    bil_bar = sum(sympy.conjugate(B[j][k]) * ub[j] * sympy.conjugate(zeta[k]) for j in range(m) for k in range(m))
    last = c * z[n - 1] + zeta[n - 1] - 2 * sum(u[j] * sympy.conjugate(zeta[j]) for j in range(m)) \
        + sympy.I * (bil + bil_bar) / 2
    return [sympy.expand(e) for e in [u[j] + zeta[j] for j in range(m)] + [last]]


def matching_automorphism(F: PolyMap, B: SimpleModelStructure):
    """Brute-force search for (A, c, zeta) whose action has the same 2-jet at 0 as F.

    The coefficient equations for the constants, for z_l in components j < n
    and for z_n in the last component are linear with unit coefficients in the
    unknowns, so they pin down a single candidate; it is a solution iff the
    group invariants hold and all remaining coefficients of order <= 2 agree.
    Returns the candidate data as sympy objects, or None.
    """
    n, m = F.n, F.n - 1
    zero = (0,) * n
    unit = lambda l: tuple(1 if k == l else 0 for k in range(n))  # noqa: E731
    zeta = [_sym(x) for x in F.constant_term()]
    A = sympy.Matrix(m, m, lambda j, l: _sym(F.components[j].coefficient(unit(l), zero)))
    c = _sym(F.components[n - 1].coefficient(unit(n - 1), zero))
    Bm = sympy.Matrix(m, m, lambda j, k: _sym(B.B[j][k]))
    if sympy.im(c) != 0 or not c > 0:
        return None
    if sympy.expand(A.T * A.conjugate() - c * sympy.eye(m)) != sympy.zeros(m, m):
        return None
    if sympy.expand(A.T * Bm * A - c * Bm) != sympy.zeros(m, m):
        return None
    if sympy.expand(sympy.re(zeta[n - 1]) + sum(sympy.Abs(x) ** 2 for x in zeta[:m])) != 0:
        return None
    action = sym_action(A.tolist(), c, zeta, Bm.tolist(), n)
    target = [to_sympy(p.truncate(2)) for p in F.components]
    if all(sympy.expand(a - t) == 0 for a, t in zip(action, target)):
        return A, c, zeta
    return None


def boundary_translation_breaks(n: int) -> bool:
    """rho(0, .., 0, 1) = 1/2, so (z', z_n + 1) cannot preserve the boundary."""
    return rho(n).evaluate([0] * (n - 1) + [1]) != 0
