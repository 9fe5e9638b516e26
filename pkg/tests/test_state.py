import numpy as np
import pytest

from cheshire.errors import DimensionMismatch, NormalizationError, PostSelectionFailed
from cheshire.state import (
    JointState,
    ParticleMode,
    RotorPacket,
    SpinVector,
    WallPacket,
    expectation_Lx,
    expectation_Lx_quadrature,
    expectation_p,
    fidelity,
    mode_count,
    mode_space,
    project,
    rotor_marginal,
    vanishes_outside,
)


def test_mode_indices():
    assert ParticleMode.left().index(5) == 0
    assert ParticleMode.right().index(5) == 1
    assert ParticleMode.out(1).index(5) == 2
    assert ParticleMode.out(10).index(5) == mode_count(5) - 1
    assert len(mode_space(5)) == mode_count(5)
    with pytest.raises(IndexError):
        ParticleMode.out(11).index(5)


@pytest.mark.parametrize("family", ["gaussian", "raised_cosine", "skewed"])
def test_packet_is_normalized_and_compact(family):
    packet = RotorPacket.build(grid_size=1024, delta_theta=0.1, family=family)
    assert packet.norm == pytest.approx(1.0, abs=1e-14)
    assert vanishes_outside(packet)
    assert np.all(np.abs(packet.theta[packet.support]) <= 0.1)


def test_packet_needs_a_grid_point_inside():
    with pytest.raises(ValueError):
        RotorPacket.build(grid_size=4, delta_theta=0.1, center=0.3)


def test_grid_size_must_be_power_of_two():
    with pytest.raises(ValueError):
        RotorPacket(np.ones(100))


def test_fourier_view_is_parseval_normalized():
    packet = RotorPacket.build(grid_size=512, delta_theta=0.2, family="skewed")
    assert np.sum(np.abs(packet.fourier_view) ** 2) == pytest.approx(1.0, abs=1e-12)


def test_phase_factor_is_a_cyclic_shift():
    packet = RotorPacket.build(grid_size=256, delta_theta=0.3, family="raised_cosine")
    shifted = packet.times_phase(1).fourier_view
    np.testing.assert_allclose(shifted, -np.roll(packet.fourier_view, -1), atol=1e-14)


def test_symmetric_packet_has_zero_angular_momentum():
    packet = RotorPacket.build(grid_size=4096, delta_theta=0.3, family="raised_cosine")
    assert expectation_Lx(packet) == pytest.approx(0.0, abs=1e-9)


def test_lx_of_phase_shifted_packet():
    packet = RotorPacket.build(grid_size=4096, delta_theta=0.3, family="raised_cosine")
    assert expectation_Lx(packet.times_phase(1)) == pytest.approx(-1.0, abs=1e-9)
    assert expectation_Lx(packet.times_phase(-1)) == pytest.approx(1.0, abs=1e-9)


def test_lx_grid_and_fourier_views_agree():
    packet = RotorPacket.build(grid_size=2048, delta_theta=0.25, family="skewed").times_phase(3)
    assert expectation_Lx(packet) == pytest.approx(expectation_Lx_quadrature(packet), abs=1e-10)


def test_expectation_requires_unit_norm():
    packet = RotorPacket(2 * RotorPacket.build(grid_size=64, delta_theta=0.3).theta_samples)
    with pytest.raises(NormalizationError):
        expectation_Lx(packet)


def test_boost_moves_wall_momentum():
    wall = WallPacket.build(grid_size=512, delta_x=1.0)
    q = wall.wavenumbers[3]
    assert expectation_p(wall) == pytest.approx(0.0, abs=1e-12)
    assert expectation_p(wall.boosted(q)) == pytest.approx(q, abs=1e-6)


def test_reflection_phase_is_trivial_without_box_momentum():
    wall = WallPacket.build(grid_size=128)
    assert np.array_equal(wall.reflection_phase(), np.ones(128))


def test_theta_basis_scalar_products():
    theta = 0.3
    expected = np.exp(-1j * theta / 2) / np.sqrt(2)
    assert SpinVector.up_x().overlap(SpinVector.up_theta(theta)) == pytest.approx(expected, abs=1e-15)
    assert SpinVector.up_x().overlap(SpinVector.down_theta(theta)) == pytest.approx(expected, abs=1e-15)


def test_initial_state_layout():
    rotor = RotorPacket.build(grid_size=256, delta_theta=0.05)
    state = JointState.initial(4, rotor)
    assert state.dims == (10, 2, 256)
    assert state.amplitudes.shape == (10, 2, rotor.support.size)
    np.testing.assert_allclose(rotor_marginal(state), rotor.density(), atol=1e-15)


def test_shape_mismatch_is_rejected():
    rotor = RotorPacket.build(grid_size=256, delta_theta=0.05)
    with pytest.raises(DimensionMismatch):
        JointState(np.zeros((3, 2, rotor.support.size), dtype=complex), 4, 256, rotor.support)


def test_projection_returns_probability_and_renormalized_state():
    rotor = RotorPacket.build(grid_size=256, delta_theta=0.05)
    state = JointState.initial(4, rotor)
    prob, conditioned = project(state, [ParticleMode.left()], SpinVector.up_x())
    assert prob == pytest.approx(0.5, abs=1e-14)
    assert np.sum(np.abs(conditioned.amplitudes) ** 2) == pytest.approx(1.0, abs=1e-14)
    np.testing.assert_allclose(np.abs(conditioned.amplitudes[0, 0]), np.abs(conditioned.amplitudes[0, 1]))
    assert np.array_equal(state.amplitudes, JointState.initial(4, rotor).amplitudes)


def test_projection_onto_empty_mode_fails():
    rotor = RotorPacket.build(grid_size=256, delta_theta=0.05)
    with pytest.raises(PostSelectionFailed):
        project(JointState.initial(4, rotor), [ParticleMode.right()])


def test_fidelity_of_identical_and_incompatible_objects():
    packet = RotorPacket.build(grid_size=256, delta_theta=0.1)
    assert fidelity(packet, packet) == pytest.approx(1.0, abs=1e-14)
    assert fidelity(packet, packet.times_phase(1)) < 1.0
    with pytest.raises(DimensionMismatch):
        fidelity(packet, WallPacket.build(grid_size=256))
    with pytest.raises(DimensionMismatch):
        fidelity(packet, RotorPacket.build(grid_size=512, delta_theta=0.1))
