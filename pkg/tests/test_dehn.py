import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hybridglue import dehn
from hybridglue.errors import BranchError, DegenerateCusp, InvalidParameter, NoSolution

coord = st.floats(-0.5, 0.5, allow_nan=False)
taus = st.sampled_from([1j, 2j, 0.5 + 1j, -0.3 + 1.5j])


@given(coord, coord, taus)
def test_commutation(ur, ui, tau):
    u = complex(ur, ui)
    v = dehn.v_of_u(u, tau)
    assert cmath.sinh(v / 2) == pytest.approx(tau * cmath.sinh(u / 2), abs=1e-14)
    assert dehn.commutator_defect(u, v, tau) < 1e-12


def test_perturbed_v_breaks_commutation():
    u, tau = 0.2 + 0.1j, 1j
    assert dehn.commutator_defect(u, dehn.v_of_u(u, tau) + 0.1, tau) > 1e-3


@given(coord, coord, taus)
def test_derivative_matches_difference(ur, ui, tau):
    u = complex(ur, ui)
    h = 1e-6
    fd = (dehn.v_of_u(u + h, tau) - dehn.v_of_u(u - h, tau)) / (2 * h)
    assert abs(fd - dehn.dv_du(u, tau)) < 1e-7


def test_complete_structure():
    assert dehn.filling_coefficients(0, 1j).is_infinite
    assert dehn.filling_coefficients(0, 1j).to_json() == "infinity"


@pytest.mark.parametrize("n", range(4, 21))
def test_round_trip(n):
    u = dehn.u_for_slope(n, 1, 1j)
    c = dehn.filling_coefficients(u, 1j)
    assert math.hypot(c.p - n, c.q - 1) < 1e-9


def test_pure_meridian_and_longitude_slopes():
    assert dehn.u_for_slope(4, 0, 1j) == pytest.approx(2j * math.pi / 4)
    u = dehn.u_for_slope(0, 3, 1j)
    assert 3 * dehn.v_of_u(u, 1j) == pytest.approx(2j * math.pi, abs=1e-12)


def test_degenerate_cusp():
    # tau = 1 makes v real-proportional to u for real u
    with pytest.raises(DegenerateCusp):
        dehn.filling_coefficients(0.3, 1.0)


def test_branch_domain():
    with pytest.raises(BranchError):
        dehn.v_of_u(4.0 + 0j, 1j)


def test_no_solution_outside_branch():
    with pytest.raises(NoSolution):
        dehn.u_for_slope(1, 1, 1j)


def test_zero_slope_rejected():
    with pytest.raises(InvalidParameter):
        dehn.u_for_slope(0, 0, 1j)


def test_holonomy_validation():
    with pytest.raises(InvalidParameter):
        dehn.CuspHolonomy(0.1, 0.1, 1.0)
    with pytest.raises(InvalidParameter):
        dehn.mu_matrix(0.1, 2)
    h = dehn.CuspHolonomy.from_u(0.1 + 0.2j, 1j, epsilon=-1)
    a, b = h.meridian(), h.longitude()
    assert np.allclose(a @ b, b @ a)


def test_figure_eight_slopes():
    slopes = dehn.figure_eight_exceptional_slopes()
    assert len(slopes) == 10 and len(set(slopes)) == 10
    assert set(slopes) == {(1, 0), (0, 1)} | {(n, 1) for n in range(-4, 5) if n}
