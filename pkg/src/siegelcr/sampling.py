"""Floating-point cross-checks of the exact residuals.

Everything here is recomputed from scratch in double precision: the real
structure matrix is assembled directly from the coefficients of Ltilde, and
derivatives of maps are taken with a five-point stencil (exact for
polynomials of degree <= 4 up to rounding).  No symbolic residual is reused,
so agreement with the exact verdicts is an independent confirmation.

Real tangent vectors are identified with their z-components w in C^n
(u = sum w_k d/dz_k + conj(w_k) d/dzbar_k); in those terms

    J_z(w) = i w + e_n conj(sum_{k<n} Ltilde_k(z) w_k).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .algebra import Poly
from .maps import PolyMap
from .structures import AnyStructure, as_model

DEFAULT_TOL = 1e-9
STEP = 1e-3


@dataclass
class SampleReport:
    check: str
    samples: int
    max_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tolerance

    def to_json(self) -> dict:
        return {"check": self.check, "samples": self.samples, "max_residual": self.max_residual,
                "tolerance": self.tolerance, "verdict": "pass" if self.passed else "fail"}


# float model of a structure -----------------------------------------------------------

class FloatStructure:
    def __init__(self, J: AnyStructure):
        M = as_model(J)
        self.n = M.n
        self.alpha = np.array([[complex(x) for x in row] for row in M.alpha], dtype=complex).reshape(M.n - 1, M.n - 1)
        self.beta = np.array([[complex(x) for x in row] for row in M.beta], dtype=complex).reshape(M.n - 1, M.n - 1)

    def ltilde(self, z: np.ndarray) -> np.ndarray:
        zp = z[: self.n - 1]
        return self.alpha @ zp + self.beta @ np.conj(zp)

    def apply(self, z: np.ndarray, w: np.ndarray) -> np.ndarray:
        out = 1j * np.asarray(w, dtype=complex)
        out[self.n - 1] += np.conj(np.dot(self.ltilde(z), w[: self.n - 1]))
        return out

    def real_matrix(self, z: np.ndarray) -> np.ndarray:
        """2n x 2n matrix of J in the real coordinates (x_1..x_n, y_1..y_n)."""
        n = self.n
        cols = []
        for k in range(2 * n):
            w = np.zeros(n, dtype=complex)
            w[k % n] = 1 if k < n else 1j
            Jw = self.apply(z, w)
            cols.append(np.concatenate([Jw.real, Jw.imag]))
        return np.array(cols).T


def to_real(w: np.ndarray) -> np.ndarray:
    return np.concatenate([w.real, w.imag])


def from_real(v: np.ndarray) -> np.ndarray:
    n = len(v) // 2
    return v[:n] + 1j * v[n:]


def _real_basis(n: int) -> list[np.ndarray]:
    out = []
    for k in range(n):
        for s in (1, 1j):
            w = np.zeros(n, dtype=complex)
            w[k] = s
            out.append(w)
    return out


# points ---------------------------------------------------------------------------------

def random_points(n: int, count: int, rng: np.random.Generator, radius: float = 1.0) -> list[np.ndarray]:
    return [rng.uniform(-radius, radius, n) + 1j * rng.uniform(-radius, radius, n) for _ in range(count)]


def random_boundary_points(n: int, count: int, rng: np.random.Generator, radius: float = 1.0) -> list[np.ndarray]:
    pts = []
    for z in random_points(n, count, rng, radius):
        z[n - 1] = -np.sum(np.abs(z[: n - 1]) ** 2) + 1j * z[n - 1].imag
        pts.append(z)
    return pts


def rho_float(z: np.ndarray) -> float:
    return float(z[-1].real + np.sum(np.abs(z[:-1]) ** 2))


def grad_rho(z: np.ndarray) -> np.ndarray:
    """Real gradient of rho in (x, y) coordinates."""
    n = len(z)
    g = np.concatenate([2 * z.real, 2 * z.imag])
    g[n - 1], g[2 * n - 1] = 1.0, 0.0
    return g


def drho(z: np.ndarray, w: np.ndarray) -> float:
    return float(grad_rho(z) @ to_real(w))


# maps -----------------------------------------------------------------------------------

def _compile(p: Poly) -> Callable[[np.ndarray], complex]:
    terms = [(complex(c), np.array(a), np.array(b)) for (a, b), c in p.items()]

    def f(z: np.ndarray) -> complex:
        zb = np.conj(z)
        return sum((c * np.prod(z ** a) * np.prod(zb ** b) for c, a, b in terms), 0j)
    return f


class FloatMap:
    def __init__(self, F: PolyMap):
        self.n = F.n
        self._fs = [_compile(p) for p in F.components]

    def __call__(self, z: np.ndarray) -> np.ndarray:
        return np.array([f(z) for f in self._fs], dtype=complex)

    def d(self, z: np.ndarray, w: np.ndarray, h: float = STEP) -> np.ndarray:
        """Directional derivative along the real vector with z-components w."""
        return (self(z - 2 * h * w) - 8 * self(z - h * w) + 8 * self(z + h * w) - self(z + 2 * h * w)) / (12 * h)


def _max(values) -> float:
    return float(max((np.max(np.abs(v)) for v in values), default=0.0))


# checks ---------------------------------------------------------------------------------

def sample_structure(J: AnyStructure, count: int = 50, seed: int = 0, tol: float = DEFAULT_TOL) -> SampleReport:
    """J_z^2 = -I at sampled points."""
    S = FloatStructure(J)
    rng = np.random.default_rng(seed)
    res = []
    for z in random_points(S.n, count, rng):
        M = S.real_matrix(z)
        res.append(M @ M + np.eye(2 * S.n))
    return SampleReport("structure", count, _max(res), tol)


def hol_tangent_vectors(S: FloatStructure, p: np.ndarray) -> list[np.ndarray]:
    """Real vectors w = e_j + t e_n with w and J w both tangent to the boundary at p."""
    n = S.n
    en = np.zeros(n, dtype=complex)
    en[n - 1] = 1
    out = []
    for j in range(n - 1):
        ej = np.zeros(n, dtype=complex)
        ej[j] = 1

        def cond(w):
            return np.array([drho(p, w), drho(p, S.apply(p, w))])

        base = cond(ej)
        M = np.column_stack([cond(en), cond(1j * en)])
        s = np.linalg.solve(M, -base)
        out.append(ej + (s[0] + 1j * s[1]) * en)
    return out


def sample_frame(J: AnyStructure, count: int = 50, seed: int = 0, tol: float = DEFAULT_TOL) -> SampleReport:
    """L_j(p) is an i-eigenvector of the complexified J and is tangent; T is tangent."""
    from .structures import tangent_frame

    S = FloatStructure(J)
    n = S.n
    frame = tangent_frame(J)
    rng = np.random.default_rng(seed)
    res = []
    for z in random_points(n, count, rng):
        M = S.real_matrix(z)
        g = grad_rho(z)
        for L in frame.fields():
            comps = np.array([p.evaluate_float(z) for p in L.components], dtype=complex)
            a, b = comps[:n], comps[n:]
            v = np.concatenate([a + b, 1j * (b - a)])  # real coordinates of a d/dz + b d/dzbar
            if L in frame.L:
                res.append(M @ v - 1j * v)
            res.append(np.array([g @ v]))
    return SampleReport("frame", count, _max(res), tol)


def sample_nijenhuis(J: AnyStructure, count: int = 50, seed: int = 0, h: float = STEP) -> float:
    """Largest |N(u, v)| over sampled points and random real vectors, with J differentiated numerically."""
    S = FloatStructure(J)
    n = S.n
    rng = np.random.default_rng(seed)

    def DJ(z, u):
        w = from_real(u)
        return (S.real_matrix(z + h * w) - S.real_matrix(z - h * w)) / (2 * h)

    worst = 0.0
    for z in random_points(n, count, rng):
        u, v = rng.normal(size=2 * n), rng.normal(size=2 * n)
        M = S.real_matrix(z)
        N = DJ(z, M @ u) @ v - DJ(z, M @ v) @ u + M @ (DJ(z, v) @ u) - M @ (DJ(z, u) @ v)
        worst = max(worst, float(np.max(np.abs(N))))
    return worst


def sample_pseudoholomorphic(J: AnyStructure, Jp: AnyStructure, F: PolyMap, count: int = 50, seed: int = 0,
                             tol: float = DEFAULT_TOL, radius: float = 1.0) -> SampleReport:
    """dF(J w) - J'(F) dF(w) over a real basis w, at sampled points."""
    S, Sp, f = FloatStructure(J), FloatStructure(Jp), FloatMap(F)
    rng = np.random.default_rng(seed)
    res = []
    for z in random_points(F.n, count, rng, radius):
        Fz = f(z)
        for w in _real_basis(F.n):
            res.append(f.d(z, S.apply(z, w)) - Sp.apply(Fz, f.d(z, w)))
    return SampleReport("pseudoholomorphic", count, _max(res), tol)


def sample_component_system(J: AnyStructure, F: PolyMap, count: int = 50, seed: int = 0,
                            tol: float = DEFAULT_TOL, radius: float = 1.0) -> SampleReport:
    """Wirtinger-derivative form of the component equations, recomputed numerically."""
    S, f = FloatStructure(J), FloatMap(F)
    n = F.n
    rng = np.random.default_rng(seed)
    res = []
    for z in random_points(n, count, rng, radius):
        Fz = f(z)
        LF, Lz = S.ltilde(Fz), S.ltilde(z)
        en = np.zeros(n, dtype=complex)
        en[n - 1] = 1
        dxn, dyn = f.d(z, en), f.d(z, 1j * en)
        dFn_bar_dzbar_n = np.conj((dxn[n - 1] - 1j * dyn[n - 1]) / 2)
        for j in range(n - 1):
            ej = np.zeros(n, dtype=complex)
            ej[j] = 1
            dx, dy = f.d(z, ej), f.d(z, 1j * ej)
            dF_dz = (dx - 1j * dy) / 2
            dFn_bar_dz = np.conj((dx[n - 1] + 1j * dy[n - 1]) / 2)
            r = np.dot(LF, dF_dz[: n - 1]) - 2j * dFn_bar_dz - Lz[j] * dFn_bar_dzbar_n
            res.append(np.array([r]))
    return SampleReport("component-system", count, _max(res), tol)


def sample_boundary(F: PolyMap, count: int = 50, seed: int = 0, tol: float = DEFAULT_TOL, radius: float = 1.0) -> SampleReport:
    f = FloatMap(F)
    rng = np.random.default_rng(seed)
    res = [np.array([rho_float(f(p))]) for p in random_boundary_points(F.n, count, rng, radius)]
    return SampleReport("boundary-invariance", count, _max(res), tol)


def sample_rho_scaling(F: PolyMap, c: float, count: int = 50, seed: int = 0, tol: float = DEFAULT_TOL) -> SampleReport:
    """rho(F(z)) - c rho(z) at arbitrary points."""
    f = FloatMap(F)
    rng = np.random.default_rng(seed)
    res = [np.array([rho_float(f(z)) - c * rho_float(z)]) for z in random_points(F.n, count, rng)]
    return SampleReport("rho-scaling", count, _max(res), tol)


def sample_cr(J: AnyStructure, Jp: AnyStructure, F: PolyMap, count: int = 50, seed: int = 0,
              tol: float = DEFAULT_TOL, radius: float = 1.0) -> SampleReport:
    """dF maps the J-invariant tangent space at boundary points into the J'-invariant one, commuting with J."""
    S, Sp, f = FloatStructure(J), FloatStructure(Jp), FloatMap(F)
    rng = np.random.default_rng(seed)
    res = []
    for p in random_boundary_points(F.n, count, rng, radius):
        q = f(p)
        for u in hol_tangent_vectors(S, p):
            du, dJu = f.d(p, u), f.d(p, S.apply(p, u))
            res.append(np.array([drho(q, du), drho(q, dJu)]))
            res.append(dJu - Sp.apply(q, du))
    return SampleReport("cr-on-boundary", count, _max(res), tol)


# Levi form by finite differences ---------------------------------------------------------

def levi_matrix_fd(J: AnyStructure, p: Sequence, h: float = STEP) -> np.ndarray:
    """Levi matrix at the boundary point p from theta = J^t grad(rho) and Levi(u) = -dtheta(u, J u)."""
    S = FloatStructure(J)
    n = S.n
    p = np.asarray([complex(x) for x in p], dtype=complex)

    def theta(x: np.ndarray) -> np.ndarray:
        z = from_real(x)
        return S.real_matrix(z).T @ grad_rho(z)

    x0 = to_real(p)
    D = np.zeros((2 * n, 2 * n))
    for a in range(2 * n):
        e = np.zeros(2 * n)
        e[a] = h
        D[a] = (theta(x0 - 2 * e) - 8 * theta(x0 - e) + 8 * theta(x0 + e) - theta(x0 + 2 * e)) / (12 * h)
    dtheta = D - D.T  # dtheta[a, b] = d_a theta_b - d_b theta_a
    M = S.real_matrix(p)

    def Q(w: np.ndarray) -> float:
        u = to_real(w)
        return float(-(u @ dtheta @ (M @ u)))

    U = hol_tangent_vectors(S, p)
    m = n - 1
    H = np.zeros((m, m), dtype=complex)
    diag = [Q(u) for u in U]
    for j in range(m):
        H[j, j] = diag[j]
        for k in range(m):
            if j != k:
                re = (Q(U[j] + U[k]) - diag[j] - diag[k]) / 2
                im = (Q(U[j] + S.apply(p, U[k])) - diag[j] - diag[k]) / 2
                H[j, k] = re + 1j * im
    return H
