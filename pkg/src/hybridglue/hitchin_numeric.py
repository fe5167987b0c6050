"""Finite-difference checks of Hitchin-equation model and glued pairs.

Fields live on a punctured disk sampled in cylindrical coordinates
``t = log r`` (uniform step) and ``theta`` (periodic).  A connection is
``A = A_t dt + A_theta dtheta`` with skew-Hermitian coefficients and a
Higgs field is ``Phi = phi dz``.  With the compact real form
``tau(X) = -conj(X)^T`` one has

    F_A - [Phi, tau(Phi)] = (F_{t theta} - 2i r^2 [phi, phi^*]) dt ^ dtheta,

and the residual field stored here is that dt ^ dtheta coefficient, i.e.
the curvature measured in the cylindrical metric dt^2 + dtheta^2.  All L2
norms use the same cylindrical area element dt dtheta; for 1-forms and
2-forms in two dimensions this agrees with the flat measure r dr dtheta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .errors import InvalidParameter, NumericError
from .exact import ComplexMatrix, GaussQ, rank
from .liealg import principal_sl2

__all__ = [
    "PolarGrid",
    "PolarField",
    "ConnectionField",
    "CutoffProfile",
    "ResidualReport",
    "model_diagonal",
    "model_solution",
    "curvature",
    "residual",
    "cutoff",
    "growth_constant",
    "approximate_glue",
    "annulus_mask",
    "covariant_derivative",
    "bracket_field",
    "quadratic_form",
    "quadratic_form_terms",
    "l2_norm_sq",
    "commutant_in_h",
    "scaled_semisimple",
    "is_unitary",
]

# step ln(2)/24: halving R shifts the cutoff transition by exactly 24 nodes
ALIGNED_STEP = math.log(2.0) / 24
ALIGNED_R_MAX = 1.6


@dataclass(frozen=True)
class PolarGrid:
    """Nodes (r_i, theta_j), log-uniform in r and uniform periodic in theta."""

    r_min: float
    r_max: float
    n_r: int
    n_theta: int

    def __post_init__(self):
        if not (0 < self.r_min < self.r_max):
            raise InvalidParameter(f"need 0 < r_min < r_max, got {self.r_min}, {self.r_max}")
        if self.n_r < 8 or self.n_theta < 8:
            raise InvalidParameter("n_r and n_theta must both be >= 8")

    @classmethod
    def aligned(cls, n_r: int = 128, n_theta: int = 64, r_max: float = ALIGNED_R_MAX,
                step: float = ALIGNED_STEP) -> "PolarGrid":
        """Grid whose t-step divides ln 2, anchored at r_max."""
        r_min = r_max * math.exp(-step * (n_r - 1))
        return cls(r_min, r_max, n_r, n_theta)

    @property
    def t(self) -> np.ndarray:
        return np.linspace(math.log(self.r_min), math.log(self.r_max), self.n_r)

    @property
    def h_t(self) -> float:
        return (math.log(self.r_max) - math.log(self.r_min)) / (self.n_r - 1)

    @property
    def theta(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n_theta) / self.n_theta

    @property
    def h_theta(self) -> float:
        return 2 * np.pi / self.n_theta

    @property
    def r(self) -> np.ndarray:
        return np.exp(self.t)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """(t, theta) arrays of shape (n_r, n_theta)."""
        return np.meshgrid(self.t, self.theta, indexing="ij")

    def z(self) -> np.ndarray:
        tt, th = self.mesh()
        return np.exp(tt + 1j * th)

    def quadrature_weights(self) -> np.ndarray:
        """Trapezoid in t, rectangle (exact for periodic) in theta."""
        w = np.full(self.n_r, self.h_t)
        w[0] = w[-1] = self.h_t / 2
        return np.outer(w, np.full(self.n_theta, self.h_theta))


@dataclass(frozen=True, eq=False)
class PolarField:
    """Matrix-valued function on a grid; values have shape (n_r, n_theta, n, n)."""

    grid: PolarGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim != 4 or v.shape[:2] != (self.grid.n_r, self.grid.n_theta) or v.shape[2] != v.shape[3]:
            raise InvalidParameter(f"values shape {v.shape} does not fit the grid")
        if not np.all(np.isfinite(v)):
            raise NumericError("field contains non-finite values")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def dim(self) -> int:
        return self.values.shape[-1]

    @classmethod
    def constant(cls, grid: PolarGrid, matrix: np.ndarray) -> "PolarField":
        m = np.asarray(matrix, dtype=complex)
        return cls(grid, np.broadcast_to(m, (grid.n_r, grid.n_theta) + m.shape))

    @classmethod
    def zeros(cls, grid: PolarGrid, n: int) -> "PolarField":
        return cls(grid, np.zeros((grid.n_r, grid.n_theta, n, n), dtype=complex))

    def pointwise_norm(self) -> np.ndarray:
        return np.linalg.norm(self.values, axis=(-2, -1))

    def sup_norm(self) -> float:
        return float(self.pointwise_norm().max())

    def __add__(self, other: "PolarField") -> "PolarField":
        _same_grid(self, other)
        return PolarField(self.grid, self.values + other.values)

    def scale(self, c) -> "PolarField":
        return PolarField(self.grid, c * self.values)


@dataclass(frozen=True, eq=False)
class ConnectionField:
    """Connection 1-form A = A_t dt + A_theta dtheta."""

    t: PolarField
    theta: PolarField

    def __post_init__(self):
        _same_grid(self.t, self.theta)

    @property
    def grid(self) -> PolarGrid:
        return self.t.grid

    @property
    def dim(self) -> int:
        return self.t.dim

    @classmethod
    def zeros(cls, grid: PolarGrid, n: int) -> "ConnectionField":
        z = PolarField.zeros(grid, n)
        return cls(z, z)


def _same_grid(a, b) -> None:
    if a.grid != b.grid:
        raise InvalidParameter("fields live on different grids")
    if a.dim != b.dim:
        raise InvalidParameter(f"matrix sizes differ: {a.dim} vs {b.dim}")


# -- finite differences -------------------------------------------------------

def _d_t(values: np.ndarray, grid: PolarGrid) -> np.ndarray:
    """Second-order differences along t, one-sided at both ends.

    Edge stencils are written in difference form so constants differentiate
    to exactly zero.
    """
    v = np.asarray(values)
    h2 = 2 * grid.h_t
    out = np.empty(v.shape, dtype=np.result_type(v, float))
    out[1:-1] = (v[2:] - v[:-2]) / h2
    out[0] = (4 * (v[1] - v[0]) - (v[2] - v[0])) / h2
    out[-1] = -(4 * (v[-2] - v[-1]) - (v[-3] - v[-1])) / h2
    return out


def _d_theta(values: np.ndarray, grid: PolarGrid) -> np.ndarray:
    return (np.roll(values, -1, axis=1) - np.roll(values, 1, axis=1)) / (2 * grid.h_theta)


def _comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def _adjoint(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


# -- model solutions ----------------------------------------------------------

def model_diagonal(p: int, family: int = 1) -> np.ndarray:
    """Diagonal of the model Higgs coefficient divided by C.

    Family 1 is the semisimple element x = diag(2p, ..., 2, -2p, ..., -2, 0).
    Family 2 is (0, 0, 2(p-1), ..., 2, -2(p-1), ..., -2, 0); it has three
    zero entries, so its eigenvalues are not distinct.
    """
    if not isinstance(p, int) or p < 1:
        raise InvalidParameter(f"p must be an integer >= 1, got {p!r}")
    if family == 1:
        top = [2 * (p + 1 - i) for i in range(1, p + 1)]
        return np.array(top + [-v for v in top] + [0], dtype=float)
    if family == 2:
        top = [2 * (p - i) for i in range(1, p)]
        return np.array([0, 0] + top + [-v for v in top] + [0], dtype=float)
    raise InvalidParameter(f"family must be 1 or 2, got {family!r}")


def model_solution(p: int, C: float, grid: PolarGrid, family: int = 1) -> tuple[ConnectionField, PolarField]:
    """A = 0 and phi = C * diag / z sampled on the grid."""
    if C == 0 or not math.isfinite(C):
        raise InvalidParameter("C must be a nonzero real number")
    diag = C * model_diagonal(p, family)
    n = diag.size
    inv_z = 1.0 / grid.z()
    phi = np.zeros((grid.n_r, grid.n_theta, n, n), dtype=complex)
    idx = np.arange(n)
    phi[:, :, idx, idx] = inv_z[:, :, None] * diag[None, None, :]
    return ConnectionField.zeros(grid, n), PolarField(grid, phi)


# -- residual -----------------------------------------------------------------

class ResidualReport(NamedTuple):
    field: PolarField
    sup_norm: float
    l2_norm: float


def curvature(A: ConnectionField) -> PolarField:
    """F_{t theta} = d_t A_theta - d_theta A_t + [A_t, A_theta]."""
    g = A.grid
    at, ath = A.t.values, A.theta.values
    f = _d_t(ath, g) - _d_theta(at, g) + _comm(at, ath)
    return PolarField(g, f)


def residual(A: ConnectionField, Phi: PolarField) -> ResidualReport:
    """Hitchin-equation residual F_{t theta} - 2i r^2 [phi, phi^*]."""
    _same_grid(A.t, Phi)
    g = Phi.grid
    phi = Phi.values
    r2 = (g.r ** 2)[:, None, None, None]
    field = curvature(A).values - 2j * r2 * _comm(phi, _adjoint(phi))
    out = PolarField(g, field)
    l2 = math.sqrt(l2_norm_sq(out, weight=g.r[:, None] ** -2))
    return ResidualReport(out, out.sup_norm(), l2)


def l2_norm_sq(field: PolarField, weight: Optional[np.ndarray] = None) -> float:
    """Quadrature of |field|^2 dt dtheta, optionally times a nodal weight."""
    dens = field.pointwise_norm() ** 2
    if weight is not None:
        dens = dens * weight
    return float(np.sum(dens * field.grid.quadrature_weights()))


# -- cutoff -------------------------------------------------------------------

def _smooth_step(x: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for x <= 0, 1 for x >= 1."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        b = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1.0 - x, 1.0)), 0.0)
    return a / (a + b)


WIDTH = math.log(4.0 / 3.0)


@dataclass(frozen=True)
class CutoffProfile:
    """chi_R(r) = 1 for r <= 3R/4, 0 for r >= R, smooth in t = log r."""

    R: float

    def __post_init__(self):
        if not 0 < self.R < 1:
            raise InvalidParameter(f"R must lie in (0, 1), got {self.R}")

    @property
    def t_inner(self) -> float:
        return math.log(0.75 * self.R)

    @property
    def t_outer(self) -> float:
        return math.log(self.R)

    def of_t(self, t) -> np.ndarray:
        return 1.0 - _smooth_step((np.asarray(t, dtype=float) - self.t_inner) / WIDTH)

    def __call__(self, r) -> np.ndarray:
        return self.of_t(np.log(np.asarray(r, dtype=float)))


def cutoff(R: float) -> CutoffProfile:
    return CutoffProfile(R)


def growth_constant(chi: CutoffProfile, grid: PolarGrid) -> float:
    """max over nodes of |r d_r chi| + |(r d_r)^2 chi|, by differences in t."""
    c = chi.of_t(grid.t)
    d1 = _d_t(c, grid)
    d2 = _d_t(d1, grid)
    return float(np.max(np.abs(d1) + np.abs(d2)))


def annulus_mask(chi: CutoffProfile, grid: PolarGrid, margin: int = 2) -> np.ndarray:
    """Radial nodes within ``margin`` steps of [3R/4, R].

    Two steps is the reach of the composed first-difference stencils used for
    the gauge potential and its curvature.
    """
    t = grid.t
    pad = margin * grid.h_t * (1 + 1e-9)
    return (t >= chi.t_inner - pad) & (t <= chi.t_outer + pad)


# -- gauge action -------------------------------------------------------------

def _diagonal_of(field: PolarField) -> np.ndarray:
    v = field.values
    n = field.dim
    diag = v[:, :, np.arange(n), np.arange(n)]
    off = v.copy()
    off[:, :, np.arange(n), np.arange(n)] = 0
    if np.max(np.abs(off), initial=0.0) > 0:
        raise InvalidParameter("gamma must be diagonal-valued")
    return diag


def _diag_to_matrix(d: np.ndarray) -> np.ndarray:
    n = d.shape[-1]
    out = np.zeros(d.shape + (n,), dtype=complex)
    out[..., np.arange(n), np.arange(n)] = d
    return out


def approximate_glue(base: tuple[ConnectionField, PolarField], gamma: PolarField,
                     chi: CutoffProfile) -> tuple[ConnectionField, PolarField]:
    """Apply the complex gauge transformation g = exp(chi * gamma) to (A, Phi).

    The (0,1) part b = (A_t + i A_theta)/2 transforms as
    b -> g^{-1} b g + (f_t + i f_theta)/2 with f = chi*gamma, the unitary
    connection is rebuilt as A_w = -b^dagger, and Phi -> g^{-1} Phi g.
    """
    A, Phi = base
    _same_grid(A.t, Phi)
    _same_grid(Phi, gamma)
    g = Phi.grid
    chi_t = chi.of_t(g.t)[:, None, None]
    f = chi_t * _diagonal_of(gamma)
    with np.errstate(over="raise", invalid="raise"):
        try:
            gd = np.exp(f)
            gd_inv = np.exp(-f)
        except FloatingPointError as exc:
            raise NumericError("exp(chi*gamma) overflowed") from exc
    if not (np.all(np.isfinite(gd)) and np.all(np.isfinite(gd_inv))):
        raise NumericError("exp(chi*gamma) is not finite")
    G, Ginv = _diag_to_matrix(gd), _diag_to_matrix(gd_inv)
    b = 0.5 * (A.t.values + 1j * A.theta.values)
    df = 0.5 * (_d_t(f, g) + 1j * _d_theta(f, g))
    b_new = Ginv @ b @ G + _diag_to_matrix(df)
    a_new = -_adjoint(b_new)
    A_t = a_new + b_new
    A_th = 1j * (a_new - b_new)
    phi_new = Ginv @ Phi.values @ G
    return ConnectionField(PolarField(g, A_t), PolarField(g, A_th)), PolarField(g, phi_new)


# -- linearization ------------------------------------------------------------

def covariant_derivative(A: ConnectionField, gamma: PolarField) -> tuple[PolarField, PolarField]:
    """(D_t gamma, D_theta gamma) with D = d + [A, .]."""
    _same_grid(A.t, gamma)
    g = gamma.grid
    v = gamma.values
    dt = _d_t(v, g) + _comm(A.t.values, v)
    dth = _d_theta(v, g) + _comm(A.theta.values, v)
    return PolarField(g, dt), PolarField(g, dth)


def bracket_field(Phi: PolarField, gamma: PolarField) -> PolarField:
    """r * [phi, gamma]: the bracket measured in the cylindrical metric."""
    _same_grid(Phi, gamma)
    r = Phi.grid.r[:, None, None, None]
    return PolarField(Phi.grid, r * _comm(Phi.values, gamma.values))


def quadratic_form_terms(A: ConnectionField, Phi: PolarField, gamma: PolarField) -> tuple[float, float]:
    """(||d_A gamma||^2, ||[Phi, gamma]||^2) with |dz| = 1 normalization."""
    dt, dth = covariant_derivative(A, gamma)
    grad = l2_norm_sq(dt) + l2_norm_sq(dth)
    brk = l2_norm_sq(bracket_field(Phi, gamma))
    return grad, brk


def quadratic_form(A: ConnectionField, Phi: PolarField, gamma: PolarField) -> float:
    """||d_A gamma||^2 + 2 ||[Phi, gamma]||^2."""
    grad, brk = quadratic_form_terms(A, Phi, gamma)
    return grad + 2 * brk


# -- exact kernel ingredients -------------------------------------------------

def _skew_block_basis(p: int) -> list[ComplexMatrix]:
    n = 2 * p + 1
    out = []
    for lo, hi in ((0, p), (p, n)):
        for i in range(lo, hi):
            for j in range(i + 1, hi):
                out.append(ComplexMatrix.from_entries(n, {(i, j): 1, (j, i): -1}))
    return out


def commutant_in_h(p: int, phi: ComplexMatrix) -> int:
    """dim of {gamma in so(p) + so(p+1) (block diagonal) : [gamma, phi] = 0}."""
    n = 2 * p + 1
    if phi.n != n:
        raise InvalidParameter(f"phi must be {n}x{n}, got n={phi.n}")
    basis = _skew_block_basis(p)
    if not basis:
        return 0
    images = [b @ phi - phi @ b for b in basis]
    rows = [[img[i, j] for img in images] for i in range(n) for j in range(n)]
    rows = [r for r in rows if any(r)]
    return len(basis) - (rank(rows) if rows else 0)


def scaled_semisimple(p: int, C) -> ComplexMatrix:
    """C * x as an exact matrix."""
    return principal_sl2(p).x.scale(GaussQ.coerce(Fraction(C)))


def is_unitary(M: ComplexMatrix, tol) -> bool:
    """||M M^* - I||_F < tol, decided exactly."""
    tol = Fraction(tol)
    if tol <= 0:
        raise InvalidParameter("tolerance must be positive")
    defect = M @ M.adjoint() - ComplexMatrix.identity(M.n)
    return defect.frobenius2() < tol * tol

