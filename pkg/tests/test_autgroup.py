import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from helpers import automorphisms, boundary_points, complex_rationals, simple_structures, sym_action, to_sympy
from siegelcr import linalg
from siegelcr.algebra import ComplexRational, Poly, rho, substitute
from siegelcr.autgroup import (Automorphism, apply, as_polymap, cayley, compose, factored_view, fixes_minus_one, identity,
                               invert, is_isotropy, make_dilation, make_isotropy, make_translation, minus_one,
                               random_automorphism,
                               stabilizer_algebra, transitivity_witness)
from siegelcr.errors import AutomorphismError, BoundaryError, IntegrableCaseError
from siegelcr.maps import PolyMap
from siegelcr.structures import SimpleModelStructure

B12 = SimpleModelStructure(3, [[0, 1], [-1, 0]])
STD2 = SimpleModelStructure.standard(2)
i = ComplexRational(0, 1)


def test_dilation_examples():
    assert make_dilation(1, B12) == identity(B12)
    D = make_dilation(2, B12)
    assert apply(D, [4, 8, 16]) == (2, 4, 4)
    assert compose(make_dilation(2, B12), make_dilation(Fraction(3, 5), B12)) == make_dilation(Fraction(6, 5), B12)
    with pytest.raises(AutomorphismError):
        make_dilation(0, B12)
    with pytest.raises(AutomorphismError):
        make_dilation(-1, B12)


def test_translation_examples():
    assert make_translation([0, 0, 0], B12) == identity(B12)
    T = make_translation([1, -1], STD2)
    a, b = Poly.z(2, 1), Poly.z(2, 2)
    assert as_polymap(T) == PolyMap(2, (a + 1, b - 1 - a.scale(2)))
    assert substitute(rho(2), as_polymap(T).components) == rho(2)
    with pytest.raises(BoundaryError):
        make_translation([1, 1], STD2)


def test_isotropy_examples():
    A = [[i, 0], [0, -i]]
    G = make_isotropy(A, B12)
    assert G.c == 1
    assert make_isotropy(linalg.identity(2), B12) == identity(B12)
    with pytest.raises(AutomorphismError) as exc:
        make_isotropy([[2, 0], [0, 2]], B12)
    assert "A^t conj(A) != c I" in exc.value.failures


def test_invariant_failures_reported_together():
    with pytest.raises(AutomorphismError) as exc:
        Automorphism(B12, [[1, 1], [0, 1]], 1, [0, 0, 1])
    # for a 2x2 antisymmetric B, A^t B A = det(A) B, so only unitarity and the boundary fail here
    assert len(exc.value.failures) == 2
    with pytest.raises(AutomorphismError) as exc:
        Automorphism(B12, [[1, 1], [0, 1]], 2, [0, 0, 1])
    assert len(exc.value.failures) == 3


def test_example_with_c_equal_det():
    A = [[1, 1], [-1, 1]]
    G = Automorphism(B12, A, 2, [0, 0, 0])
    assert G.c == linalg.det([[ComplexRational(x) for x in r] for r in A])


def test_as_polymap_identity():
    assert as_polymap(identity(B12)) == PolyMap.identity(3)


def test_transitivity_examples():
    q = (ComplexRational(1, 1), ComplexRational(0), ComplexRational(-2, 5))
    assert transitivity_witness([0, 0, 0], q, B12) == make_translation(q, B12)
    assert apply(make_translation(q, B12), [0, 0, 0]) == q
    assert apply(transitivity_witness(q, q, B12), q) == q


def test_incompatible_structures():
    other = SimpleModelStructure(3, [[0, 2], [-2, 0]])
    with pytest.raises(AutomorphismError):
        compose(identity(B12), identity(other))


def test_isotropy_refused_for_integrable():
    with pytest.raises(IntegrableCaseError):
        is_isotropy(identity(SimpleModelStructure.standard(3)))


def test_factored_view():
    G = Automorphism(B12, [[2, 0], [0, 2]], 4, [0, 0, 0])
    view = factored_view(G)
    assert view["A_prime_exact"] and view["tau"] == "1/4"
    assert view["A_prime"] == [[["1/1", "0/1"], ["0/1", "0/1"]], [["0/1", "0/1"], ["1/1", "0/1"]]]
    H = Automorphism(B12, [[1, 1], [-1, 1]], 2, [0, 0, 0])
    assert not factored_view(H)["A_prime_exact"]


# properties -------------------------------------------------------------------------

structures = simple_structures(n=3, nonzero=True) | simple_structures(n=4)


@given(st.data())
def test_group_axioms(data):
    B = data.draw(structures)
    F, G, H = (data.draw(automorphisms(B)) for _ in range(3))
    e = identity(B)
    assert compose(compose(F, G), H) == compose(F, compose(G, H))
    assert compose(e, F) == F == compose(F, e)
    assert compose(F, invert(F)) == e == compose(invert(F), F)


@given(st.data())
def test_composition_matches_polynomial_composition(data):
    B = data.draw(structures)
    F, G = data.draw(automorphisms(B)), data.draw(automorphisms(B))
    assert as_polymap(compose(F, G)) == as_polymap(F).compose(as_polymap(G))


@given(st.data())
def test_action_agrees_with_polymap_and_sympy(data):
    B = data.draw(structures)
    G = data.draw(automorphisms(B))
    P = as_polymap(G)
    pt = [data.draw(complex_rationals) for _ in range(B.n)]
    assert apply(G, pt) == P.evaluate(pt)
    import sympy

    sym = lambda x: sympy.Rational(x.re.numerator, x.re.denominator) + sympy.I * sympy.Rational(x.im.numerator, x.im.denominator)  # noqa: E731
    A = [[sym(x) for x in row] for row in G.A]
    Bm = [[sym(x) for x in row] for row in B.B]
    expected = sym_action(A, sym(ComplexRational(G.c)), [sym(x) for x in G.zeta], Bm, B.n)
    assert [to_sympy(p) for p in P.components] == expected


@given(st.data())
def test_rho_scales_by_c(data):
    B = data.draw(structures)
    G = data.draw(automorphisms(B))
    assert substitute(rho(B.n), as_polymap(G).components) == rho(B.n).scale(G.c)


@given(st.data())
def test_translation_law(data):
    B = data.draw(structures)
    zeta, xi = data.draw(boundary_points(B.n)), data.draw(boundary_points(B.n))
    lhs = compose(make_translation(zeta, B), make_translation(xi, B))
    assert lhs == make_translation(apply(make_translation(zeta, B), xi), B)
    assert as_polymap(lhs) == as_polymap(make_translation(zeta, B)).compose(as_polymap(make_translation(xi, B)))


@given(st.data())
def test_linear_part_conjugates_translations(data):
    B = data.draw(structures)
    L = data.draw(automorphisms(B, translate=False))
    zeta = data.draw(boundary_points(B.n))
    moved = tuple(linalg.matvec([list(r) for r in L.A], list(zeta[:-1]))) + (zeta[-1] * L.c,)
    assert compose(L, make_translation(zeta, B)) == compose(make_translation(moved, B), L)


@given(st.data())
def test_transitivity(data):
    B = data.draw(structures)
    p, q = data.draw(boundary_points(B.n)), data.draw(boundary_points(B.n))
    assert apply(transitivity_witness(p, q, B), p) == q


@given(st.data())
def test_isotropy_characterization(data):
    B = data.draw(simple_structures(n=3, nonzero=True))
    G = data.draw(automorphisms(B, translate=data.draw(st.booleans())))
    if data.draw(st.booleans()):
        G = compose(make_isotropy(G.linear_part().A if G.c == 1 else linalg.identity(2), B), make_dilation(1, B))
    assert fixes_minus_one(G) == is_isotropy(G)
    assert is_isotropy(G) == (G.c == 1 and not any(G.zeta))


@given(st.data())
def test_stabilizer_algebra_and_cayley(data):
    B = data.draw(structures)
    m = B.n - 1
    Bm = [list(r) for r in B.B]
    for K in stabilizer_algebra(B):
        assert linalg.equal(linalg.adjoint(K), linalg.scale(K, ComplexRational(-1)))
        assert linalg.is_zero(linalg.add(linalg.matmul(linalg.transpose(K), Bm), linalg.matmul(Bm, K)))
        U = cayley(K)
        assert linalg.equal(linalg.matmul(linalg.transpose(U), linalg.conj(U)), linalg.identity(m))


def test_random_elements_cover_nontrivial_c():
    rng = random.Random(0)
    cs = {random_automorphism(B12, rng).c for _ in range(20)}
    assert len(cs) > 1
    assert minus_one(3) == (0, 0, -1)
