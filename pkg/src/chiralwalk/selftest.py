"""Fast invariant suite behind the `chiralwalk selftest` command.

Each check returns its worst residual and the bound it must meet; the CLI
prints one line per check.  `inject_fault` deliberately corrupts one
Hamiltonian entry so the negative path (nonzero exit) stays tested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .evolution import (
    Propagator,
    QuantumState,
    WavePacketSpec,
    eig_hermitian,
    make_packet,
)
from .gauge import apply_gauge, gauge_phases_for_chain
from .graphs import assemble_hamiltonian, build_khalique_chain, build_y_junction
from .scattering import ScatteringParams, beta_shift, greens_analytic, phase_shift
from .util import wrap_angle
from .yjunction import decompose_evolution, effective_eigensystems


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.residual <= self.bound


def _gauge_covariance(n: int) -> CheckResult:
    graph = build_khalique_chain(n)
    h = assemble_hamiltonian(graph)
    gauge = gauge_phases_for_chain(graph)
    packet = WavePacketSpec(kind="gaussian", n0=n / 2, sigma=n / 8, k0=0.0)
    psi0 = make_packet(graph, packet)
    plain = Propagator(eig_hermitian(h), psi0)
    gauged = Propagator(eig_hermitian(apply_gauge(h, gauge)), apply_gauge(psi0, gauge))
    worst = 0.0
    for t in np.linspace(0.0, n / 3.0, 8):
        d = plain.state_at(t).densities() - gauged.state_at(t).densities()
        worst = max(worst, float(np.max(np.abs(d))))
    return CheckResult("gauge covariance", worst, 1e-12)


def _spectral_union(n: int, theta: float, inject_fault: bool) -> CheckResult:
    h = np.array(assemble_hamiltonian(build_y_junction(n, theta)))
    if inject_fault:
        h[0, 1] += 0.001
        h[1, 0] += 0.001
    full = np.sort(np.linalg.eigvalsh(h))
    pieces = np.sort(
        np.concatenate(
            [es.eigenvalues for es in effective_eigensystems(n, theta).values()]
        )
    )
    return CheckResult(
        "spectral union", float(np.max(np.abs(full - pieces))), 1e-9
    )


def _decomposition(n: int, theta: float, seed: int) -> CheckResult:
    graph = build_y_junction(n, theta)
    rng = np.random.default_rng(seed)
    amps = np.zeros(3 * n, dtype=complex)
    amps[:n] = rng.normal(size=n) + 1j * rng.normal(size=n)
    psi0 = QuantumState(graph, amps / np.linalg.norm(amps))
    prop = Propagator(eig_hermitian(assemble_hamiltonian(graph)), psi0)
    worst = 0.0
    for t in (3.0, 17.0):
        direct = prop.state_at(t).amplitudes
        pieces = decompose_evolution(psi0, t).amplitudes
        worst = max(worst, float(np.max(np.abs(direct - pieces))))
    return CheckResult("decomposition identity", worst, 1e-10)


def _delta_beta() -> CheckResult:
    worst = 0.0
    for k0 in np.linspace(0.2, math.pi - 0.2, 9):
        for omega in (-2.0, -0.8, 0.0, 0.5, 1.7):
            gap = wrap_angle(phase_shift(k0, omega) + 2.0 * beta_shift(k0, omega))
            worst = max(worst, abs(gap))
    return CheckResult("delta = -2 beta", worst, 1e-12)


def _quasi_periodicity(n: int) -> CheckResult:
    params = ScatteringParams(
        n=n, n0=n / 2, sigma=n / math.sqrt(32), k0=math.pi / 2, omega=math.sqrt(3)
    )
    ts = np.linspace(0.5, 11.0, 13)
    gap = greens_analytic(ts + 2.0 * math.pi, params) * np.exp(
        -1j * params.delta
    ) - greens_analytic(ts, params)
    return CheckResult("quasi-periodicity", float(np.max(np.abs(gap))), 1e-10)


def run_checks(
    quick: bool = False, inject_fault: bool = False, seed: int = 7
) -> list[CheckResult]:
    n = 60 if quick else 200
    return [
        _gauge_covariance(n),
        _spectral_union(40 if quick else n, 0.7, inject_fault),
        _decomposition(30 if quick else 60, 0.7, seed),
        _delta_beta(),
        _quasi_periodicity(n),
    ]
