"""Wave-packet spreading and localized-projector commutators."""

import math

import numpy as np
import pytest

from qpskit import GridRep, microcausality_check, nw_evolution, nw_projector
from qpskit.grid import GridConfigError
from qpskit.localization import _axis_transform


@pytest.fixture(scope="module")
def demo_grid():
    return GridRep(d=1, npts=4096, pmax=60.0, m=1.0, s=0)


def test_initial_packet_localized(demo_grid):
    res = nw_evolution(0.0, 0.1, 0.0, demo_grid)
    inside = np.abs(res.x) <= 5 * 0.1
    mass = float(res.density[inside].sum() * demo_grid.dx)
    # gaussian-integral oracle: erf(5) of the density profile
    assert mass >= 0.99
    assert mass == pytest.approx(math.erf(5.0), abs=1e-6)


def test_superluminal_tail_appears(demo_grid):
    res = nw_evolution(0.0, 0.1, 5.0, demo_grid)
    assert res.outside_cone_probability > 0
    assert -4.0 <= res.fitted_slope <= -1.0
    assert res.fit_points >= 4
    assert res.params["regularization"].startswith("gaussian")


def test_evolution_unitary(demo_grid):
    res = nw_evolution(0.0, 0.1, 5.0, demo_grid)
    assert res.params["unitarity_defect"] <= 1e-10
    assert float(res.density.sum() * demo_grid.dx) == pytest.approx(1.0, abs=1e-10)


def test_leakage_decreases_with_mass():
    probs = []
    for m in (0.5, 1.0, 2.0):
        g = GridRep(d=1, npts=4096, pmax=60.0, m=m, s=0)
        probs.append(nw_evolution(0.0, 0.1, 5.0, g).outside_cone_probability)
    assert probs[0] > probs[1] > probs[2] > 0


def test_offcenter_packet(demo_grid):
    res = nw_evolution(7.5, 0.2, 1.0, demo_grid)
    peak_x = res.x[np.argmax(res.density)]
    assert abs(peak_x - 7.5) < 1.0


def test_wraparound_refused(demo_grid):
    with pytest.raises(GridConfigError):
        nw_evolution(0.0, 0.1, 120.0, demo_grid)
    with pytest.raises(GridConfigError):
        nw_evolution(100.0, 0.1, 5.0, demo_grid)


def test_too_narrow_sigma_refused(demo_grid):
    with pytest.raises(GridConfigError):
        nw_evolution(0.0, demo_grid.dx / 2, 1.0, demo_grid)


@pytest.fixture(scope="module")
def causality_grid():
    return GridRep(d=1, npts=2048, pmax=30.0, m=1.0, s=0)


def test_projector_is_projection(causality_grid):
    g = causality_grid
    proj = nw_projector(g, (-1.0, 1.5), t=0.7)
    psi = np.zeros(g.state_shape, dtype=complex)
    psi[:, 0, 0] = np.exp(-g.p_axis**2 / 8.0)
    once = proj.apply(psi)
    twice = proj.apply(once)
    assert g.norm(twice - once) <= 1e-12 * g.norm(psi)
    # self-adjoint
    phi = np.zeros(g.state_shape, dtype=complex)
    phi[:, 0, 0] = np.exp(-(g.p_axis - 1.0)**2 / 2.0)
    assert g.inner(phi, proj.apply(psi)) == pytest.approx(
        g.inner(proj.apply(phi), psi), rel=1e-10, abs=1e-12)


def test_projector_localizes(causality_grid):
    g = causality_grid
    proj = nw_projector(g, (-1.0, 1.0), t=0.0)
    psi = np.zeros(g.state_shape, dtype=complex)
    psi[:, 0, 0] = np.exp(-g.p_axis**2 * 0.25)
    cut = proj.apply(psi)
    xrep = _axis_transform(g, cut[:, 0, 0])
    outside = np.abs(g.x_axis) > 1.0
    assert np.abs(xrep[outside]).max() <= 1e-12


def test_equal_time_disjoint_projectors_commute(causality_grid):
    norm = microcausality_check((-2.0, -1.0), 0.0, (1.0, 2.0), 0.0,
                                causality_grid, seed=1)
    assert norm <= 1e-12
    later = microcausality_check((-2.0, -1.0), 0.8, (1.0, 2.0), 0.8,
                                 causality_grid, seed=1)
    assert later <= 1e-10


def test_projector_commutes_with_itself(causality_grid):
    norm = microcausality_check((1.0, 2.0), 0.5, (1.0, 2.0), 0.5,
                                causality_grid, seed=1)
    assert norm <= 1e-12


def test_spacelike_unequal_time_projectors_do_not_commute(causality_grid):
    norm = microcausality_check((-2.0, -1.0), 0.0, (1.0, 2.0), 1.0,
                                causality_grid, seed=1)
    assert norm > 1e-6


def test_interval_at_box_edge_refused(causality_grid):
    g = causality_grid
    with pytest.raises(GridConfigError):
        microcausality_check((g.x_axis[0], g.x_axis[0] + 2.0), 0.0,
                             (1.0, 2.0), 0.0, g)
    with pytest.raises(ValueError):
        microcausality_check((2.0, 1.0), 0.0, (3.0, 4.0), 0.0, g)
