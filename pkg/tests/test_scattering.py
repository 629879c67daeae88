import numpy as np
import pytest

from chiralwalk import (
    ConditionError,
    Propagator,
    ScatteringParams,
    WavePacketSpec,
    beta_shift,
    build_open_chain,
    double_chain_map,
    eig_hermitian,
    f_shift,
    graph_eigensystem,
    greens_analytic,
    greens_analytic_derivative,
    greens_numeric,
    greens_numeric_trace,
    make_packet,
    phase_shift,
    rescale_time,
    theta3,
)
from chiralwalk.util import wrap_angle

SQ3 = np.sqrt(3.0)


def default_params(n=200, omega=SQ3):
    return ScatteringParams(
        n=n, n0=n / 2, sigma=n / np.sqrt(32), k0=np.pi / 2, omega=omega
    )


def default_packet(n=200):
    return WavePacketSpec(
        kind="gaussian", chain=1, n0=n / 2, sigma=n / np.sqrt(32), k0=np.pi / 2
    )


# ---------------------------------------------------------------- theta3


def test_theta3_zero_nome():
    for z in (0.0, 0.3, 2.0):
        assert theta3(z, 0.0) == 1.0


def test_theta3_series_values():
    # frozen from an independent multiprecision evaluation (mpmath jtheta)
    assert theta3(0.0, 0.1) == pytest.approx(1.2002000020000002, abs=1e-15)
    assert theta3(np.pi / 2, 0.1) == pytest.approx(0.8001999980000002, abs=1e-15)
    assert theta3(0.0, 0.5) == pytest.approx(2.1289368272118772, abs=1e-14)
    assert theta3(0.7, 0.5) == pytest.approx(1.0502979822965446, abs=1e-14)
    assert theta3(1.3, 0.93) == pytest.approx(5.064094090657154e-10, rel=1e-12)


def test_theta3_against_mpmath_grid():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 30
    for z in (0.0, 0.4, 1.1, np.pi / 2, 3.0):
        for q in (0.05, 0.3, 0.6, 0.9, 0.997):
            want = float(mpmath.jtheta(3, z, q))
            # absolute tolerance scaled to the z-maximum theta3(0, q): near q -> 1
            # the value at z = pi/2 collapses below roundoff for both evaluations
            scale = theta3(0.0, q)
            assert theta3(z, q) == pytest.approx(want, rel=1e-12, abs=1e-13 * scale)


def test_theta3_modular_matches_series_at_crossover():
    for z in np.linspace(0.0, np.pi, 9):
        direct = theta3(z, 0.5, method="series")
        modular = theta3(z, 0.5, method="modular")
        assert abs(direct - modular) <= 1e-12


def test_theta3_rejects_bad_nome():
    with pytest.raises(ValueError):
        theta3(0.0, 1.0)
    with pytest.raises(ValueError):
        theta3(0.0, -0.1)


# ---------------------------------------------------------------- phases


def test_f_shift_values():
    assert f_shift(np.pi / 2, 0.0) == pytest.approx(np.pi / 2)
    assert f_shift(np.pi / 2, SQ3) == pytest.approx(np.pi / 6)


def test_f_shift_free_identity():
    # arctan(-cot x) = x - pi/2 on (0, pi), hence f(x, 0) = pi - x
    for x in np.linspace(0.05, np.pi - 0.05, 23):
        assert f_shift(x, 0.0) == pytest.approx(np.pi - x, abs=1e-13)


def test_f_shift_endpoint_errors():
    for x in (0.0, np.pi, -0.2):
        with pytest.raises(ValueError):
            f_shift(x, 1.0)


@pytest.mark.parametrize(
    "omega,expected",
    [(0.0, 0.0), (-SQ3, 2 * np.pi / 3), (SQ3, -2 * np.pi / 3)],
)
def test_phase_shift_band_centre(omega, expected):
    assert phase_shift(np.pi / 2, omega) == pytest.approx(expected, abs=1e-14)


def test_phase_shift_range_and_endpoints():
    for k0 in np.linspace(0.1, np.pi - 0.1, 11):
        for omega in (-2.0, -0.3, 0.9, 2.0):
            d = phase_shift(k0, omega)
            assert -np.pi < d <= np.pi
    with pytest.raises(ValueError):
        phase_shift(0.0, 1.0)


def test_delta_equals_minus_two_beta():
    for k0 in np.linspace(0.1, np.pi - 0.1, 15):
        for omega in (-2.0, -1.1, -0.4, 0.0, 0.7, 1.9):
            gap = wrap_angle(phase_shift(k0, omega) + 2.0 * beta_shift(k0, omega))
            assert abs(gap) <= 1e-12


# ---------------------------------------------------------------- doubling


def test_double_chain_eigenstate_extension():
    from chiralwalk import QuantumState, assemble_hamiltonian

    n = 14
    chain = build_open_chain(n)
    es = graph_eigensystem(chain)
    h_big = assemble_hamiltonian(build_open_chain(2 * n + 1))
    for p in (0, 3, n - 1):
        psi = QuantumState(chain, es.eigenvectors[:, p])
        ext = double_chain_map(psi)
        resid = h_big @ ext.amplitudes - es.eigenvalues[p] * ext.amplitudes
        assert np.max(np.abs(resid)) <= 1e-10


def test_double_chain_centre_is_zero():
    n = 9
    chain = build_open_chain(n)
    psi = make_packet(chain, WavePacketSpec(kind="gaussian", n0=5, sigma=2, k0=1.0))
    ext = double_chain_map(psi)
    assert ext.amplitudes[n] == 0.0
    assert ext.norm() == pytest.approx(1.0, abs=1e-14)


def test_double_chain_evolution_restriction_oracle():
    # evolving the odd extension on 2N+1 sites and restricting to the left half
    # reproduces the open-chain evolution, including boundary reflections
    n = 30
    chain = build_open_chain(n)
    psi = make_packet(chain, WavePacketSpec(kind="gaussian", n0=15, sigma=4, k0=1.2))
    small = Propagator(graph_eigensystem(chain), psi)
    big = Propagator(graph_eigensystem(build_open_chain(2 * n + 1)), double_chain_map(psi))
    for t in (0.0, 7.0, 23.0, 61.0):
        direct = small.state_at(t).amplitudes
        restricted = big.state_at(t).amplitudes[:n] * np.sqrt(2.0)
        assert np.max(np.abs(direct - restricted)) <= 1e-10


# ---------------------------------------------------------------- numeric Y


def test_greens_numeric_t0_is_one():
    assert greens_numeric(60, 1.3, default_packet(60), 0.0) == pytest.approx(1.0, abs=1e-13)


def test_greens_numeric_bounded_by_one():
    trace = greens_numeric_trace(
        120, -1.7, default_packet(120), np.linspace(0.0, 240.0, 49)
    )
    assert np.max(np.abs(trace.values)) <= 1.0 + 1e-9


def test_greens_numeric_plateaus():
    n = 200
    packet = default_packet(n)
    sigma, vg = packet.sigma, 2.0
    # before the packet reaches the shifted boundary (2 sigma clearance)
    before = np.linspace(0.0, (n - packet.n0 - 2 * sigma) / vg, 9)
    # after the first collision, clear of the boundary again
    after = np.linspace((n - packet.n0 + 3 * sigma) / vg, 220.0, 9)
    trace_b = greens_numeric_trace(n, SQ3, packet, before)
    trace_a = greens_numeric_trace(n, SQ3, packet, after)
    assert np.max(np.abs(trace_b.values - 1.0)) <= 0.02
    target = np.exp(-2j * np.pi / 3)
    assert np.max(np.abs(trace_a.values - target)) <= 0.05


def test_greens_plateau_jump_structure():
    # near-constant plateaus separated by a phase jump of delta across the collision
    n = 160
    packet = default_packet(n)
    trace = greens_numeric_trace(n, SQ3, packet, np.linspace(90.0, 150.0, 13))
    spread = np.max(np.abs(trace.values - trace.values.mean()))
    assert spread < 0.03


# ---------------------------------------------------------------- analytic Y


def test_params_validation():
    with pytest.raises(ConditionError):
        ScatteringParams(n=100, n0=50, sigma=10, k0=0.01, omega=1.0)
    with pytest.raises(ConditionError):
        ScatteringParams(n=100, n0=50, sigma=10, k0=np.pi - 0.01, omega=1.0)
    with pytest.raises(ValueError):
        ScatteringParams(n=100, n0=50, sigma=-1, k0=1.0, omega=1.0)


def test_rescale_time_affine():
    params = default_params()
    assert rescale_time(0.0, params) == pytest.approx(np.pi + np.pi / 2)
    dt = params.n / (2 * np.sin(params.k0))
    assert rescale_time(dt, params) - rescale_time(0.0, params) == pytest.approx(np.pi)
    # one round trip = one quasi-period
    assert rescale_time(2 * dt, params) - rescale_time(0.0, params) == pytest.approx(
        2 * np.pi
    )


def test_greens_analytic_free_case():
    params = default_params(omega=0.0)
    for T in (0.0, 3.0, 12.0):
        assert greens_analytic(T, params) == 1.0 + 0.0j
    assert np.all(greens_analytic_derivative(np.linspace(0, 9, 5), params) == 0.0)


def test_greens_analytic_quasi_periodicity():
    params = default_params()
    ts = np.linspace(0.2, 12.0, 21)
    lhs = greens_analytic(ts + 2 * np.pi, params) * np.exp(-1j * params.delta)
    rhs = greens_analytic(ts, params)
    assert np.max(np.abs(lhs - rhs)) <= 1e-10


def test_greens_analytic_tracks_numeric():
    # oracle: the exact spectral overlap; measured asymptotic gap for these
    # parameters is 0.082 at mid-collision and 0.009 on plateaus
    n = 200
    packet = default_packet(n)
    params = default_params(n)
    times = np.linspace(0.0, 200.0, 81)
    trace = greens_numeric_trace(n, SQ3, packet, times)
    approx = greens_analytic(trace.rescaled, params)
    gap = np.abs(approx - trace.values)
    assert np.max(gap) <= 0.085
    vg = 2.0
    plateau = np.abs(times - 50.0) > 3 * packet.sigma / vg
    assert np.max(gap[plateau]) <= 0.02


def test_greens_derivative_matches_finite_difference():
    params = default_params()
    h = 1e-4
    for T in np.linspace(2 * np.pi - 1.0, 2 * np.pi + 1.0, 11):
        fd = (greens_analytic(T + h, params) - greens_analytic(T - h, params)) / (2 * h)
        an = greens_analytic_derivative(T, params)
        assert abs(fd - an) / abs(an) <= 1e-6


def test_greens_derivative_peaks_at_collisions():
    # theta-function spikes sit where the packet hits the shifted boundary
    params = default_params()
    t_grid = np.linspace(0.0, 200.0, 401)
    mags = np.abs(greens_analytic_derivative(rescale_time(t_grid, params), params))
    t_peak = t_grid[np.argmax(mags)]
    assert t_peak == pytest.approx(50.0, abs=1.0)  # (n - n0) / v_g
    mid_plateau = np.abs(mags[np.abs(t_grid - 100.0) < 10.0])
    assert np.max(mid_plateau) < 0.05 * np.max(mags)
