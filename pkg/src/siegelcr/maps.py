"""Polynomial maps and symbolic checks of pseudo-holomorphy, boundary invariance and CR behaviour.

A :class:`PolyMap` F = (F_1, .., F_n) has components in (z, zbar).  An
optional ``truncation_order`` k means the components are only known modulo
terms of total degree > k; every check then reports the degree range it can
actually decide.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebra import I, ComplexRational, Poly, BoundaryPoly, format_rational, reduce_mod_boundary, rho, substitute
from .errors import DimensionError, TruncationError, ValidationError
from .fields import VectorField
from .structures import AnyStructure, SimpleModelStructure, as_model, block_matrix, tangent_frame


def _min_order(*orders: int | None) -> int | None:
    vals = [k for k in orders if k is not None]
    return min(vals) if vals else None


@dataclass(frozen=True)
class PolyMap:
    n: int
    components: tuple[Poly, ...]
    truncation_order: int | None = None

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) != self.n or any(p.n != self.n for p in comps):
            raise DimensionError(f"a map of C^{self.n} needs {self.n} components in dimension {self.n}")
        k = self.truncation_order
        if k is not None:
            if not isinstance(k, int) or k < 0:
                raise ValueError(f"truncation order must be a non-negative integer, got {k!r}")
            comps = tuple(p.truncate(k) for p in comps)
        object.__setattr__(self, "components", comps)

    @classmethod
    def identity(cls, n: int) -> "PolyMap":
        return cls(n, tuple(Poly.z(n, j) for j in range(1, n + 1)))

    def __getitem__(self, j: int) -> Poly:
        return self.components[j]

    @property
    def is_truncated(self) -> bool:
        return self.truncation_order is not None

    def truncate(self, k: int) -> "PolyMap":
        return PolyMap(self.n, self.components, _min_order(k, self.truncation_order))

    def constant_term(self) -> tuple[ComplexRational, ...]:
        return tuple(p.constant_term() for p in self.components)

    def conj_components(self) -> tuple[Poly, ...]:
        return tuple(p.conj() for p in self.components)

    def compose(self, inner: "PolyMap") -> "PolyMap":
        """self o inner."""
        if inner.n != self.n:
            raise DimensionError("cannot compose maps of different dimensions")
        if self.is_truncated and any(inner.constant_term()):
            raise TruncationError("a truncated series about 0 cannot be composed with a map moving 0")
        order = _min_order(self.truncation_order, inner.truncation_order)
        comps = tuple(substitute(p, inner.components, order) for p in self.components)
        return PolyMap(self.n, comps, order)

    def evaluate(self, point: Sequence) -> tuple[ComplexRational, ...]:
        return tuple(p.evaluate(point) for p in self.components)

    def jacobian(self) -> list[list[Poly]]:
        """Block Jacobian of (F, conj F) with respect to (z, zbar)."""
        n = self.n
        rows = []
        for comp in self.components + self.conj_components():
            rows.append([comp.d_z(j) for j in range(1, n + 1)] + [comp.d_zbar(j) for j in range(1, n + 1)])
        return rows

    def pushforward(self, X: VectorField) -> VectorField:
        """dF(X), expressed as a field with coefficients in the source variables."""
        if X.n != self.n:
            raise DimensionError("dimension mismatch")
        return VectorField(self.n, tuple(X(p) for p in self.components + self.conj_components()))

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.n == other.n and self.components == other.components and self.truncation_order == other.truncation_order

    def __hash__(self):
        return hash((self.n, self.components, self.truncation_order))

    def __str__(self):
        body = ", ".join(str(p) for p in self.components)
        tail = "" if self.truncation_order is None else f" + O(|z|^{self.truncation_order + 1})"
        return f"({body}){tail}"


# reports -----------------------------------------------------------------------

@dataclass
class Offence:
    label: str
    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    coefficient: ComplexRational

    def to_json(self) -> dict:
        return {"label": self.label, "alpha": list(self.alpha), "beta": list(self.beta), "coefficient": self.coefficient.to_json()}


@dataclass
class ResidualReport:
    check: str
    passed: bool
    residuals: dict[str, Poly]
    valid_degree: int | None = None
    first_offence: Offence | None = None
    reduced: bool = False
    notes: list[str] = field(default_factory=list)

    def nonzero(self) -> dict[str, Poly]:
        return {k: v for k, v in self.residuals.items() if v}

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "verdict": "pass" if self.passed else "fail",
            "valid_degree": self.valid_degree,
            "reduced_mod_boundary": self.reduced,
            "first_offence": None if self.first_offence is None else self.first_offence.to_json(),
            "nonzero_residuals": {k: v.to_json() for k, v in sorted(self.nonzero().items())},
            "notes": list(self.notes),
        }


def _valid_degree(F: PolyMap, loss: int) -> int | None:
    if F.truncation_order is None:
        return None
    k = F.truncation_order - loss
    if k < 0:
        raise TruncationError(f"truncation order {F.truncation_order} is too low to decide any coefficient of this check")
    return k


def _finish(check: str, residuals: dict[str, Poly], valid: int | None, reduced: bool = False) -> ResidualReport:
    residuals = {k: v.truncate(valid) for k, v in residuals.items()}
    first = None
    for label, poly in residuals.items():
        if poly:
            (a, b), c = next(poly.items())
            first = Offence(label, a, b, c)
            break
    notes = [] if valid is None else [f"decided modulo terms of total degree > {valid}"]
    return ResidualReport(check, first is None, residuals, valid, first, reduced, notes)


def _coord_label(n: int, idx: int, target: bool) -> str:
    letter = "w" if target else "z"
    return f"d{letter}{idx + 1}" if idx < n else f"d{letter}b{idx - n + 1}"


def _structure_at(Jp, F: PolyMap) -> list[list[Poly]]:
    """Block matrix of J' with its entries evaluated along F."""
    return [[substitute(e, F.components, F.truncation_order) if e.degree > 0 else e for e in row] for row in block_matrix(Jp)]


def check_pseudoholomorphic(J: AnyStructure, Jp: AnyStructure, F: PolyMap) -> ResidualReport:
    """Residual dF . J(z) - J'(F(z)) . dF, entrywise (rows: target frame, columns: source frame)."""
    J, Jp = as_model(J), as_model(Jp)
    if not (J.n == Jp.n == F.n):
        raise DimensionError("structures and map must share the dimension")
    n = F.n
    valid = _valid_degree(F, 1)
    M = F.jacobian()
    Jz = block_matrix(J)
    JF = _structure_at(Jp, F)
    residuals = {}
    for r in range(2 * n):
        for c in range(2 * n):
            acc = Poly.zero(n)
            for k in range(2 * n):
                if M[r][k] and Jz[k][c]:
                    acc = acc + M[r][k] * Jz[k][c]
                if JF[r][k] and M[k][c]:
                    acc = acc - JF[r][k] * M[k][c]
            residuals[f"[{_coord_label(n, r, True)},{_coord_label(n, c, False)}]"] = acc
    return _finish("pseudoholomorphic", residuals, valid)


def component_residuals(JB: SimpleModelStructure, F: PolyMap) -> list[Poly]:
    """For j = 1..n-1 the polynomial

        sum_l Ltilde_l(F) dF_l/dz_j - 2i d(conj F_n)/dz_j - Ltilde_j(z) d(conj F_n)/dzbar_n,

    i.e. the z_j-column of the conj(w_n)-row of the pseudo-holomorphy system.
    """
    if not isinstance(JB, SimpleModelStructure):
        raise TypeError("the component system is stated for simple structures J^B")
    n = F.n
    if JB.n != n:
        raise DimensionError("structure and map dimensions differ")
    Fn_bar = F.components[n - 1].conj()
    LF = [substitute(JB.ltilde(l), F.components, F.truncation_order) for l in range(1, n)]
    out = []
    for j in range(1, n):
        acc = Poly.zero(n)
        for l in range(1, n):
            if LF[l - 1]:
                acc = acc + LF[l - 1] * F.components[l - 1].d_z(j)
        acc = acc - Fn_bar.d_z(j).scale(2 * I) - JB.ltilde(j) * Fn_bar.d_zbar(n)
        out.append(acc)
    return out


def check_component_system(JB: SimpleModelStructure, F: PolyMap) -> ResidualReport:
    valid = _valid_degree(F, 1)
    residuals = {f"eq[j={j}]": r for j, r in enumerate(component_residuals(JB, F), 1)}
    return _finish("component-system", residuals, valid)


def boundary_composite(F: PolyMap) -> Poly:
    """rho o F, exact up to the truncation order of F."""
    return substitute(rho(F.n), F.components, F.truncation_order).truncate(F.truncation_order)


def check_boundary_invariance(F: PolyMap) -> ResidualReport:
    """rho(F(z)) reduced modulo the boundary relation must vanish."""
    valid = _valid_degree(F, 0)
    reduced = reduce_mod_boundary(boundary_composite(F), valid)
    return _finish("boundary-invariance", {"rho(F)": reduced.representative}, valid, reduced=True)


def check_cr_on_boundary(J: AnyStructure, Jp: AnyStructure, F: PolyMap) -> ResidualReport:
    """dF pushes each frame field L_j into the J'-holomorphic tangent space along the boundary.

    For Z = dF(L_j): (i) Z rho vanishes on the boundary (tangency) and
    (ii) J'(F) Z - i Z vanishes on the boundary (eigenvector condition).
    """
    J, Jp = as_model(J), as_model(Jp)
    if not (J.n == Jp.n == F.n):
        raise DimensionError("structures and map must share the dimension")
    pre = check_boundary_invariance(F)
    if not pre.passed:
        raise ValidationError("F does not map the boundary into the boundary; the CR check needs it")
    n = F.n
    valid = _valid_degree(F, 1)
    r = rho(n)
    grad = [substitute(r.d_z(a), F.components, F.truncation_order) for a in range(1, n + 1)]
    grad += [substitute(r.d_zbar(a), F.components, F.truncation_order) for a in range(1, n + 1)]
    JF = _structure_at(Jp, F)
    residuals = {}
    for j, L in enumerate(tangent_frame(J).L, 1):
        Z = F.pushforward(L)
        tang = Poly.zero(n)
        for g, zc in zip(grad, Z.components):
            if g and zc:
                tang = tang + g * zc
        residuals[f"tangency[L{j}]"] = reduce_mod_boundary(tang, valid).representative
        for row in range(2 * n):
            acc = Z.components[row].scale(-I)
            for k in range(2 * n):
                if JF[row][k] and Z.components[k]:
                    acc = acc + JF[row][k] * Z.components[k]
            residuals[f"eigen[L{j},{_coord_label(n, row, True)}]"] = reduce_mod_boundary(acc, valid).representative
    return _finish("cr-on-boundary", residuals, valid, reduced=True)


# form of local pseudo-holomorphic maps ------------------------------------------

@dataclass
class FormReport:
    passed: bool
    c: ComplexRational | None
    holomorphic_part: tuple[Poly, ...] | None
    phi: Poly | None
    offence: Offence | None = None
    reason: str = ""
    truncation_order: int | None = None

    def to_json(self) -> dict:
        return {
            "verdict": "pass" if self.passed else "fail",
            "c": None if self.c is None else self.c.to_json(),
            "holomorphic_part": None if self.holomorphic_part is None else [p.to_json() for p in self.holomorphic_part],
            "phi": None if self.phi is None else self.phi.to_json(),
            "offence": None if self.offence is None else self.offence.to_json(),
            "reason": self.reason,
            "truncation_order": self.truncation_order,
        }


def check_form(F: PolyMap) -> FormReport:
    """Test F = (F'(z'), c z_n + phi(conj z')) with F' holomorphic, phi antiholomorphic, c real.

    For truncated input the verdict holds up to the truncation order.
    """
    n = F.n
    k = F.truncation_order
    for j in range(n - 1):
        for (a, b), coef in F.components[j].items():
            if any(b) or a[n - 1]:
                return FormReport(False, None, None, None, Offence(f"F{j + 1}", a, b, coef),
                                  "component must be holomorphic in z' only", k)
    Fn = F.components[n - 1]
    e_n = tuple(1 if i == n - 1 else 0 for i in range(n))
    zero = (0,) * n
    c = Fn.coefficient(e_n, zero)
    phi_terms = {}
    for (a, b), coef in Fn.items():
        if (a, b) == (e_n, zero):
            continue
        if any(a) or b[n - 1]:
            return FormReport(False, None, None, None, Offence(f"F{n}", a, b, coef),
                              "last component must be c z_n plus an antiholomorphic function of z'", k)
        phi_terms[(a, b)] = coef
    if c.im:
        return FormReport(False, c, None, None, Offence(f"F{n}", e_n, zero, c), "coefficient c of z_n is not real", k)
    return FormReport(True, c, F.components[: n - 1], Poly(n, phi_terms), None, "", k)
