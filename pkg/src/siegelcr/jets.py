"""Recovering an automorphism from the 2-jet of a boundary-preserving pseudo-holomorphic map.

Pipeline for f with f(p) = q, both on the boundary:

    F = Psi_q^-1 o f o Psi_p           (normalize_basepoints, F(0) = 0)
    Jet2 = extract_jet2(F)
    trace = verify_constraints(F, B)   (seven exact checks)
    G = reconstruct(F, B)              (A, c read from the jet, zeta = 0)
    verify_extension(F, G)             (coefficientwise agreement)

Tensor entries follow the symmetric convention: the coefficient of
z_k z_l (k != l) in F_j equals 2 a^j_{kl}; in general a monomial with
exponent e carries multinomial(e) times the tensor entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial
from typing import Sequence

from . import linalg
from .algebra import I, ZERO, ComplexRational, Poly, format_rational, reduce_mod_boundary, rho
from .autgroup import Automorphism, apply, as_polymap, invert, make_translation
from .errors import BoundaryError, ConstraintViolation, DimensionError, IntegrableCaseError, TruncationError, ValidationError
from .maps import PolyMap, boundary_composite, check_form, component_residuals
from .structures import SimpleModelStructure


def _unit(n: int, *idx: int) -> tuple[int, ...]:
    e = [0] * n
    for i in idx:
        e[i] += 1
    return tuple(e)


def _multinomial(e: Sequence[int]) -> int:
    out = factorial(sum(e))
    for x in e:
        out //= factorial(x)
    return out


def _cj(x: ComplexRational) -> list[str]:
    return x.to_json()


def _cmat(M) -> list:
    return [[_cj(x) for x in row] for row in M]


# base-point normalization ----------------------------------------------------------

def normalize_basepoints(f: PolyMap, p: Sequence, q: Sequence, B: SimpleModelStructure) -> PolyMap:
    """F = Psi_q^-1 o f o Psi_p, so that F(0) = 0."""
    n = B.n
    if f.n != n:
        raise DimensionError("map and structure dimensions differ")
    p = tuple(ComplexRational.coerce(x) for x in p)
    q = tuple(ComplexRational.coerce(x) for x in q)
    r = rho(n)
    for name, pt in (("p", p), ("q", q)):
        if len(pt) != n:
            raise DimensionError(f"{name} must have {n} entries")
        if r.evaluate(pt) != 0:
            raise BoundaryError(f"base point {name} is not on the boundary")
    if f.evaluate(p) != q:
        raise ValidationError("f(p) != q")
    Psi_p = as_polymap(make_translation(p, B))
    Psi_q_inv = as_polymap(invert(make_translation(q, B)))
    F = Psi_q_inv.compose(f.compose(Psi_p))
    if any(F.constant_term()):
        raise AssertionError("normalized map does not fix the origin")
    return F


# 2-jets ------------------------------------------------------------------------------

@dataclass
class Jet2:
    n: int
    A: list[list[ComplexRational]]
    c: ComplexRational
    quad_holo: list[list[list[ComplexRational]]]
    antiholo_lin: list[ComplexRational]
    antiholo_quad: list[list[ComplexRational]]
    residual_terms: list[tuple[int, tuple[int, ...], tuple[int, ...], ComplexRational]]
    antiholo_cubic: dict[tuple[int, int, int], ComplexRational] | None = None

    def to_json(self) -> dict:
        out = {
            "A": _cmat(self.A),
            "c": _cj(self.c),
            "quad_holo": [_cmat(T) for T in self.quad_holo],
            "antiholo_lin": [_cj(x) for x in self.antiholo_lin],
            "antiholo_quad": _cmat(self.antiholo_quad),
            "residual_terms": [{"component": j, "alpha": list(a), "beta": list(b), "coefficient": _cj(v)}
                               for j, a, b, v in self.residual_terms],
        }
        if self.antiholo_cubic is not None:
            out["antiholo_cubic"] = [{"indices": [i + 1 for i in k], "value": _cj(v)}
                                     for k, v in sorted(self.antiholo_cubic.items()) if v]
        return out


def extract_jet2(F: PolyMap) -> Jet2:
    """Read the order <= 2 Taylor data of F at 0 (and the antiholomorphic cubic part of F_n when known)."""
    n, m = F.n, F.n - 1
    if any(F.constant_term()):
        raise ValidationError("F(0) != 0: normalize the base points first")
    if F.truncation_order is not None and F.truncation_order < 2:
        raise TruncationError("a 2-jet needs truncation order >= 2")
    zero = (0,) * n
    comps = F.components
    A = [[comps[j].coefficient(_unit(n, l), zero) for l in range(m)] for j in range(m)]
    Fn = comps[n - 1]
    c = Fn.coefficient(_unit(n, n - 1), zero)
    quad = [[[comps[j].coefficient(_unit(n, k, l), zero) * Fraction(1, _multinomial(_unit(n, k, l)))
              for l in range(m)] for k in range(m)] for j in range(m)]
    lin = [Fn.coefficient(zero, _unit(n, k)) for k in range(m)]
    aquad = [[Fn.coefficient(zero, _unit(n, k, l)) * Fraction(1, _multinomial(_unit(n, k, l)))
              for l in range(m)] for k in range(m)]
    accounted = {(j, _unit(n, l), zero) for j in range(m) for l in range(m)}
    accounted |= {(j, _unit(n, k, l), zero) for j in range(m) for k in range(m) for l in range(m)}
    accounted |= {(n - 1, _unit(n, n - 1), zero)}
    accounted |= {(n - 1, zero, _unit(n, k)) for k in range(m)}
    accounted |= {(n - 1, zero, _unit(n, k, l)) for k in range(m) for l in range(m)}
    residual = []
    for j, comp in enumerate(comps):
        for (a, b), v in comp.truncate(2).items():
            if (j, a, b) not in accounted:
                residual.append((j + 1, a, b, v))
    cubic = None
    if F.truncation_order is None or F.truncation_order >= 3:
        cubic = {}
        for idx in combinations_with_replacement(range(m), 3):
            e = _unit(n, *idx)
            cubic[idx] = Fn.coefficient(zero, e) * Fraction(1, _multinomial(e))
    return Jet2(n, A, c, quad, lin, aquad, residual, cubic)


# verification trace -------------------------------------------------------------------

@dataclass
class TraceStep:
    step: int
    name: str
    anchor: str
    passed: bool
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"step": self.step, "name": self.name, "anchor": self.anchor,
                "status": "pass" if self.passed else "fail", "data": self.data}


@dataclass
class ReconstructionTrace:
    steps: list[TraceStep] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return len(self.steps) == len(STEP_ANCHORS) and all(s.passed for s in self.steps)

    @property
    def failed_step(self) -> TraceStep | None:
        return next((s for s in self.steps if not s.passed), None)

    def to_json(self) -> list[dict]:
        return [s.to_json() for s in self.steps]


STEP_ANCHORS = (
    ("form", "F = (F'(z'), c z_n + phi(conj z')) with F' holomorphic, c real, F(0) = 0"),
    ("antiholo-linear", "a^n_{kbar} = 0: constant terms of the component system vanish"),
    ("antiholo-quadratic", "a^n_{kbar,lbar} = 0: conj(z_k) conj(z_l) coefficients of rho(F) vanish on the boundary"),
    ("invertible", "det A != 0 for A = (a^j_l)"),
    ("quadratic-holomorphic", "a^j_{p,l} = 0: sum_j a^j_{p,l} conj(a^j_k) = 0 with conj(A) invertible"),
    ("unitary-scaled", "A^t conj(A) = c I and A^t B A = c B"),
    ("positive", "c = sum_j |a^j_1|^2 > 0"),
)


def _offence_json(label, a, b, v) -> dict:
    return {"component": label, "alpha": list(a), "beta": list(b), "coefficient": _cj(v)}


def verify_constraints(F: PolyMap, B: SimpleModelStructure) -> ReconstructionTrace:
    """Run the seven exact checks on F, stopping at the first failure."""
    n, m = F.n, F.n - 1
    if B.n != n:
        raise DimensionError("map and structure dimensions differ")
    if n < 3 or B.is_zero():
        raise IntegrableCaseError("J^B is integrable (n = 2 or B = 0); this case is handled by the classical theory")
    k = F.truncation_order
    if k is not None and k < 2:
        raise TruncationError("verification needs truncation order >= 2")
    trace = ReconstructionTrace()

    def add(idx: int, passed: bool, data: dict) -> bool:
        name, anchor = STEP_ANCHORS[idx - 1]
        trace.steps.append(TraceStep(idx, name, anchor, passed, data))
        return passed

    # 1. form
    form = check_form(F)
    origin = F.constant_term()
    jet = None
    data = {"F(0)": [_cj(x) for x in origin]}
    if any(origin):
        data["reason"] = "F does not fix the origin"
        add(1, False, data)
        return trace
    if not form.passed:
        data["reason"] = form.reason
        data["offence"] = form.offence.to_json()
        add(1, False, data)
        return trace
    jet = extract_jet2(F)
    data["c"] = _cj(form.c)
    if jet.residual_terms:
        data["reason"] = "2-jet has terms outside the admissible shape"
        data["offence"] = _offence_json(*jet.residual_terms[0])
        add(1, False, data)
        return trace
    add(1, True, data)

    # 2. linear antiholomorphic part of F_n from the constant terms of the component system
    residuals = component_residuals(B, F)
    const = [r.constant_term() for r in residuals]
    # constant term of equation j is -2i conj(a^n_{jbar})
    derived = [(x / (-2 * I)).conj() for x in const]
    ok = not any(derived) and derived == jet.antiholo_lin
    if not add(2, ok, {"constant_terms": [_cj(x) for x in const], "a^n_kbar": [_cj(x) for x in derived]}):
        return trace

    # 3. quadratic antiholomorphic part of F_n from the boundary expansion
    red = reduce_mod_boundary(boundary_composite(F.truncate(2)), 2)
    zero = (0,) * n
    derived_q = [[red.coefficient(zero, _unit(n, a, b)) * Fraction(2, _multinomial(_unit(n, a, b)))
                  for b in range(m)] for a in range(m)]
    ok = linalg.is_zero(derived_q) and linalg.equal(derived_q, jet.antiholo_quad)
    if not add(3, ok, {"a^n_kbar_lbar": _cmat(derived_q)}):
        return trace

    # 4. invertibility
    d = linalg.det(jet.A)
    if not add(4, bool(d), {"A": _cmat(jet.A), "det": _cj(d)}):
        return trace

    # 5. quadratic holomorphic part: sum_j conj(a^j_k) a^j_{p,l} = b_{k;p,l}
    system = linalg.transpose(linalg.conj(jet.A))
    data = {"system": _cmat(system)}
    if k is None or k >= 3:
        red3 = reduce_mod_boundary(boundary_composite(F.truncate(3)), 3)
        solved = [[[ZERO] * m for _ in range(m)] for _ in range(m)]
        inv = linalg.inverse(system)
        for p in range(m):
            for l in range(p, m):
                rhs = []
                for kk in range(m):
                    a = _unit(n, p, l)
                    coef = red3.coefficient(a, _unit(n, kk))
                    rhs.append(coef * Fraction(1, _multinomial(a)))
                x = linalg.matvec(inv, rhs)
                for j in range(m):
                    solved[j][p][l] = solved[j][l][p] = x[j]
        data["source"] = "boundary coefficients of conj(z_k) z_p z_l"
        ok = all(not x for T in solved for row in T for x in row)
        ok = ok and all(solved[j][p][l] == jet.quad_holo[j][p][l] for j in range(m) for p in range(m) for l in range(m))
        data["a^j_pl"] = [_cmat(T) for T in solved]
    else:
        data["source"] = "extracted coefficients (truncation order 2: boundary cubic data unavailable)"
        ok = all(not x for T in jet.quad_holo for row in T for x in row)
        data["a^j_pl"] = [_cmat(T) for T in jet.quad_holo]
    if not add(5, ok, data):
        return trace

    # 6. scaled unitarity and compatibility with B
    c = jet.c
    AtAbar = linalg.matmul(linalg.transpose(jet.A), linalg.conj(jet.A))
    Bm = [list(r) for r in B.B]
    AtBA = linalg.matmul(linalg.matmul(linalg.transpose(jet.A), Bm), jet.A)
    u_ok = linalg.equal(AtAbar, linalg.scale(linalg.identity(m), c))
    b_ok = linalg.equal(AtBA, linalg.scale(Bm, c))
    if not add(6, u_ok and b_ok, {"AtAbar": _cmat(AtAbar), "AtBA": _cmat(AtBA), "c": _cj(c),
                                  "AtAbar=cI": u_ok, "AtBA=cB": b_ok}):
        return trace

    # 7. positivity
    s = sum((jet.A[j][0].abs2() for j in range(m)), Fraction(0))
    add(7, c.is_real() and c.re > 0 and c.re == s, {"c": format_rational(c.re), "sum_j |a^j_1|^2": format_rational(s)})
    return trace


def reconstruct(F: PolyMap, B: SimpleModelStructure) -> tuple[Automorphism, ReconstructionTrace]:
    trace = verify_constraints(F, B)
    if not trace.passed:
        s = trace.failed_step
        raise ConstraintViolation(f"step {s.step} ({s.name}) failed: {s.anchor}", trace)
    jet = extract_jet2(F)
    G = Automorphism(B, jet.A, jet.c.re, (ZERO,) * B.n)
    if as_polymap(G).truncate(2).components != F.truncate(2).components:
        raise AssertionError("reconstructed 2-jet differs from the input 2-jet")
    return G, trace


# extension check --------------------------------------------------------------------

@dataclass
class ExtensionReport:
    verdict: str
    agrees: bool
    order: int | None
    disagreement: dict | None = None

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "agrees": self.agrees, "order": self.order, "disagreement": self.disagreement}


def verify_extension(F: PolyMap, G: Automorphism) -> ExtensionReport:
    """Compare every coefficient of F with those of G (up to the truncation order of F)."""
    if F.n != G.n:
        raise DimensionError("map and automorphism dimensions differ")
    k = F.truncation_order
    H = as_polymap(G)
    worst = None
    for j, (f, g) in enumerate(zip(F.components, H.components), 1):
        diff = (f - g).truncate(k)
        for (a, b), _ in diff.items():
            deg = sum(a) + sum(b)
            if worst is None or deg < worst[0]:
                worst = (deg, j, a, b, f.coefficient(a, b), g.coefficient(a, b))
            break
    if worst is not None:
        deg, j, a, b, fv, gv = worst
        return ExtensionReport("disagrees", False, k, {
            "component": j, "alpha": list(a), "beta": list(b), "degree": deg,
            "F": _cj(fv), "G": _cj(gv)})
    if k is None:
        return ExtensionReport("extends", True, None)
    return ExtensionReport(f"agrees to order {k}", True, k)
