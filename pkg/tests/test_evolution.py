import numpy as np
import pytest

from chiralwalk import (
    Propagator,
    QuantumState,
    WavePacketSpec,
    assemble_hamiltonian,
    build_open_chain,
    build_y_junction,
    chain_densities,
    chain_density,
    dispersion,
    eig_hermitian,
    evolve,
    graph_eigensystem,
    make_packet,
    position_moments,
)
from chiralwalk.evolution import spectral_residual


def default_packet(n, k0=np.pi / 2, chain=1):
    return WavePacketSpec(
        kind="gaussian", chain=chain, n0=n / 2, sigma=n / np.sqrt(32), k0=k0
    )


def test_eig_two_site_chain():
    es = eig_hermitian(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert es.eigenvalues == pytest.approx([-1.0, 1.0])


def test_eig_diagonal():
    d = np.diag([3.0, -1.0, 2.0])
    es = eig_hermitian(d)
    assert es.eigenvalues == pytest.approx([-1.0, 2.0, 3.0])
    assert np.allclose(np.abs(es.eigenvectors), np.eye(3)[:, [1, 2, 0]])


def test_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        eig_hermitian(np.array([[0.0, 1.0], [0.5, 0.0]]))


def test_spectral_residuals_of_builders():
    for graph in (build_open_chain(40), build_y_junction(50, np.pi / 6)):
        h = assemble_hamiltonian(graph)
        es = eig_hermitian(h)
        assert spectral_residual(h, es) <= 1e-10
        v = es.eigenvectors
        assert np.max(np.abs(v.conj().T @ v - np.eye(es.dim))) <= 1e-10


def test_y_junction_edge_states_outside_band():
    # junction states split off above and below the chain band
    es = graph_eigensystem(build_y_junction(50, np.pi / 6))
    assert es.eigenvalues[0] < -2.0
    assert es.eigenvalues[-1] > 2.0
    assert np.sum(np.abs(es.eigenvalues) > 2.0) == 2


def test_evolve_identity_at_t0():
    g = build_open_chain(20)
    psi = make_packet(g, WavePacketSpec(kind="gaussian", n0=10, sigma=3, k0=1.0))
    out = evolve(graph_eigensystem(g), psi, 0.0)
    assert np.max(np.abs(out.amplitudes - psi.amplitudes)) <= 1e-14


def test_evolve_unitary():
    rng = np.random.default_rng(3)
    g = build_y_junction(20, 0.5)
    es = graph_eigensystem(g)
    for _ in range(5):
        amps = rng.normal(size=60) + 1j * rng.normal(size=60)
        psi = QuantumState(g, amps).normalized()
        t = rng.uniform(0, 300)
        assert evolve(es, psi, t).norm() == pytest.approx(1.0, abs=1e-12)


def test_evolve_dimension_mismatch():
    g = build_open_chain(5)
    psi = make_packet(g, WavePacketSpec(kind="gaussian", n0=3, sigma=1, k0=0.0))
    es = eig_hermitian(np.zeros((4, 4)))
    with pytest.raises(ValueError):
        evolve(es, psi, 1.0)


def test_packet_advances_at_group_velocity():
    n = 200
    g = build_y_junction(n, np.pi / 6)
    prop = Propagator(graph_eigensystem(g), make_packet(g, default_packet(n)))
    x0, _ = position_moments(prop.state_at(0.0), 1)
    x1, _ = position_moments(prop.state_at(15.0), 1)
    assert (x1 - x0) / 15.0 == pytest.approx(2.0, rel=0.02)


def test_packet_com_slope_matches_dispersion():
    # long free chain, several momenta, slope vs 2 sin k0 within 2%
    n = 400
    g = build_open_chain(n)
    for k0 in (np.pi / 2, np.pi / 3):
        spec = WavePacketSpec(kind="gaussian", n0=130, sigma=n / np.sqrt(32), k0=k0)
        prop = Propagator(graph_eigensystem(g), make_packet(g, spec))
        ts = np.linspace(0.0, 40.0, 9)
        xs = [position_moments(prop.state_at(t), 1)[0] for t in ts]
        slope = np.polyfit(ts, xs, 1)[0]
        assert slope == pytest.approx(dispersion(k0)[1], rel=0.02)


def test_envelope_rigid_at_band_centre():
    # zero curvature at k0 = pi/2: width drifts < 3% over a chain traversal
    n = 400
    g = build_open_chain(n)
    spec = WavePacketSpec(kind="gaussian", n0=100, sigma=200 / np.sqrt(32), k0=np.pi / 2)
    prop = Propagator(graph_eigensystem(g), make_packet(g, spec))
    _, w0 = position_moments(prop.state_at(0.0), 1)
    _, w1 = position_moments(prop.state_at(100.0), 1)
    assert abs(w1 - w0) / w0 < 0.03


def test_gaussian_mean_momentum_dft_oracle():
    # independent oracle: <k> from the DFT psi_hat(k) = sum_n psi_n e^{ikn}
    n = 600
    k0 = np.pi / 2
    g = build_open_chain(n)
    psi = make_packet(g, WavePacketSpec(kind="gaussian", n0=300, sigma=25, k0=k0))
    spectrum = np.abs(np.fft.ifft(psi.amplitudes) * n) ** 2
    ks = 2 * np.pi * np.fft.fftfreq(n)
    mean_k = float(np.sum(ks * spectrum) / np.sum(spectrum))
    assert mean_k == pytest.approx(k0, abs=1e-3)


def test_zero_momentum_packet_is_real_positive():
    g = build_open_chain(41)
    psi = make_packet(g, WavePacketSpec(kind="gaussian", n0=21, sigma=2.5, k0=0.0))
    assert np.max(np.abs(psi.amplitudes.imag)) == 0.0
    assert np.all(psi.amplitudes.real >= 0.0)
    spectrum = np.abs(np.fft.ifft(psi.amplitudes) * 41) ** 2
    ks = 2 * np.pi * np.fft.fftfreq(41)
    assert float(np.sum(ks * spectrum)) == pytest.approx(0.0, abs=1e-12)


def test_square_packet():
    n = 200
    g = build_y_junction(n, np.pi / 6)
    spec = WavePacketSpec(kind="square", chain=1, k0=np.pi / 2, support=(60, 140))
    psi = make_packet(g, spec)
    idx = g.chain_indices(1)
    mods = np.abs(psi.amplitudes[idx])
    assert np.allclose(mods[59:140], mods[59])
    assert np.all(mods[:59] == 0.0) and np.all(mods[140:] == 0.0)
    assert psi.norm() == pytest.approx(1.0, abs=1e-14)


def test_packet_validation():
    g = build_open_chain(10)
    with pytest.raises(ValueError):
        make_packet(g, WavePacketSpec(kind="gaussian", n0=40, sigma=1, k0=0.0))
    with pytest.raises(ValueError):
        make_packet(g, WavePacketSpec(kind="square", k0=0.0, support=(5, 12)))
    with pytest.raises(ValueError):
        WavePacketSpec(kind="gaussian", n0=5, sigma=-1.0, k0=0.0)
    with pytest.raises(ValueError):
        WavePacketSpec(kind="gaussian", n0=5, sigma=1.0, k0=4.0)


def test_chain_density_support_and_sum():
    n = 100
    g = build_y_junction(n, np.pi / 6)
    psi = make_packet(g, default_packet(n))
    assert chain_density(psi, 1) == pytest.approx(1.0, abs=1e-12)
    assert chain_density(psi, 2) <= 1e-12
    assert chain_density(psi, 3) <= 1e-12
    out = evolve(graph_eigensystem(g), psi, 37.0)
    assert sum(chain_densities(out).values()) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        chain_density(psi, 9)


@pytest.mark.parametrize(
    "k,expected",
    [
        (np.pi / 2, (0.0, 2.0, 0.0)),
        (np.pi / 6, (np.sqrt(3), 1.0, -np.sqrt(3))),
        (0.0, (2.0, 0.0, -2.0)),
    ],
)
def test_dispersion_values(k, expected):
    assert dispersion(k) == pytest.approx(expected, abs=1e-15)
