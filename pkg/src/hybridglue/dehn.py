"""Cusp holonomy and generalized Dehn filling coefficients.

Near the complete structure the meridian and longitude holonomies can be
put in upper-triangular form

    mu     = eps * [[e^{u/2}, 1], [0, e^{-u/2}]]
    lambda =       [[e^{v/2}, tau], [0, e^{-v/2}]]

and they commute iff sinh(v/2) = tau * sinh(u/2).  The filling coefficients
(p, q) are the real solution of p*u + q*v = 2*pi*i.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import BranchError, DegenerateCusp, InvalidParameter, NoSolution

__all__ = [
    "CuspHolonomy",
    "FillingCoefficients",
    "INFINITY",
    "mu_matrix",
    "lambda_matrix",
    "v_of_u",
    "dv_du",
    "commutator_defect",
    "filling_coefficients",
    "u_for_slope",
    "figure_eight_exceptional_slopes",
]

TWO_PI_I = 2j * math.pi


def mu_matrix(u: complex, epsilon: int = 1) -> np.ndarray:
    if epsilon not in (1, -1):
        raise InvalidParameter("epsilon must be +1 or -1")
    h = cmath.exp(u / 2)
    return epsilon * np.array([[h, 1.0], [0.0, 1.0 / h]], dtype=complex)


def lambda_matrix(v: complex, tau: complex) -> np.ndarray:
    h = cmath.exp(v / 2)
    return np.array([[h, tau], [0.0, 1.0 / h]], dtype=complex)


def _branch_argument(u: complex, tau: complex) -> complex:
    w = tau * cmath.sinh(u / 2)
    # principal asinh is analytic on the unit disk; outside it the cut
    # along the imaginary axis can be crossed
    if not abs(w) < 1:
        raise BranchError(f"|tau*sinh(u/2)| = {abs(w):.6g} is outside the unit disk")
    return w


def v_of_u(u: complex, tau: complex) -> complex:
    """v = 2 asinh(tau sinh(u/2)) on the principal branch; v(0) = 0."""
    return 2 * cmath.asinh(_branch_argument(complex(u), complex(tau)))


def dv_du(u: complex, tau: complex) -> complex:
    w = _branch_argument(complex(u), complex(tau))
    return tau * cmath.cosh(u / 2) / cmath.sqrt(1 + w * w)


def commutator_defect(u: complex, v: complex, tau: complex) -> float:
    """Frobenius norm of [mu(u), lambda(v, tau)] with eps = 1."""
    a = mu_matrix(u, 1)
    b = lambda_matrix(v, tau)
    return float(np.linalg.norm(a @ b - b @ a))


@dataclass(frozen=True)
class CuspHolonomy:
    u: complex
    v: complex
    tau: complex
    epsilon: int = 1

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise InvalidParameter("epsilon must be +1 or -1")
        if complex(self.tau).imag == 0:
            raise InvalidParameter("tau must have nonzero imaginary part")

    @classmethod
    def from_u(cls, u: complex, tau: complex, epsilon: int = 1) -> "CuspHolonomy":
        return cls(complex(u), v_of_u(u, tau), complex(tau), epsilon)

    def meridian(self) -> np.ndarray:
        return mu_matrix(self.u, self.epsilon)

    def longitude(self) -> np.ndarray:
        return lambda_matrix(self.v, self.tau)

    def defect(self) -> float:
        return commutator_defect(self.u, self.v, self.tau)


@dataclass(frozen=True)
class FillingCoefficients:
    """Either the point at infinity or a real pair (p, q)."""

    p: Optional[float] = None
    q: Optional[float] = None

    @property
    def is_infinite(self) -> bool:
        return self.p is None

    def to_json(self):
        if self.is_infinite:
            return "infinity"
        return [self.p, self.q]

    def __str__(self):
        return "∞" if self.is_infinite else f"({self.p:.12g}, {self.q:.12g})"


INFINITY = FillingCoefficients()


def filling_coefficients(u: complex, tau: complex, *, rel_tol: float = 1e-13) -> FillingCoefficients:
    """Solve Re/Im of p*u + q*v = 2*pi*i for real (p, q)."""
    u = complex(u)
    if u == 0:
        return INFINITY
    v = v_of_u(u, tau)
    det = u.real * v.imag - v.real * u.imag
    if abs(det) <= rel_tol * abs(u) * max(abs(v), 1e-300):
        raise DegenerateCusp(f"u={u} and v={v} are real-proportional")
    two_pi = 2 * math.pi
    p = -v.real * two_pi / det
    q = u.real * two_pi / det
    return FillingCoefficients(p, q)


def u_for_slope(p: float, q: float, tau: complex, *, tol: float = 1e-12,
                max_iter: int = 100) -> complex:
    """Newton solve of p*u + q*v(u) = 2*pi*i from the linearized seed."""
    if p == 0 and q == 0:
        raise InvalidParameter("slope (0, 0) has no filling")
    tau = complex(tau)
    if q == 0:
        return TWO_PI_I / p
    if p == 0:
        # q*v = 2*pi*i fixes v; invert the sinh relation directly
        v = TWO_PI_I / q
        u = 2 * cmath.asinh(cmath.sinh(v / 2) / tau)
        try:
            residual = abs(q * v_of_u(u, tau) - TWO_PI_I)
        except BranchError as exc:
            raise NoSolution(f"slope (0, {q}) has no solution on the principal branch") from exc
        if residual >= tol:
            raise NoSolution(f"slope (0, {q}) lands on another branch (residual {residual:.3g})")
        return u
    u = TWO_PI_I / (p + q * tau)
    for _ in range(max_iter):
        try:
            f = p * u + q * v_of_u(u, tau) - TWO_PI_I
            if abs(f) < tol:
                return u
            u = u - f / (p + q * dv_du(u, tau))
        except BranchError as exc:
            raise NoSolution(f"Newton iterate left the branch domain for slope ({p}, {q})") from exc
        except ZeroDivisionError as exc:
            raise NoSolution(f"singular Newton step for slope ({p}, {q})") from exc
    raise NoSolution(f"no convergence in {max_iter} Newton steps for slope ({p}, {q})")


def figure_eight_exceptional_slopes() -> list[tuple[int, int]]:
    """The ten non-hyperbolic fillings of the figure-eight knot exterior."""
    out = [(1, 0), (0, 1)]
    for n in range(1, 5):
        out += [(n, 1), (-n, 1)]
    return out
