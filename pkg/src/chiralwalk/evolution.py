"""Exact spectral time evolution, wave packets, and density observables.

Evolution is computed from the full Hermitian eigendecomposition, so any time
t is reached in one step with no integrator error.  Sign conventions: with the
+J hopping matrix the plane wave e^{i k n} has energy 2 cos k, so a packet
built here with momentum label k0 carries the ramp e^{-i k0 n} and moves
toward larger site index with group velocity 2 sin k0 for k0 in (0, pi).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError
from .graphs import PhasedGraph, assemble_hamiltonian

HERMITICITY_TOL = 1e-12


@dataclass
class EigenSystem:
    """Full spectral decomposition: ascending eigenvalues, orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.size


def eig_hermitian(h: np.ndarray, check: bool = True) -> EigenSystem:
    """Diagonalize a dense Hermitian matrix.

    Raises ValueError when the input is measurably non-Hermitian.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if check:
        dev = np.max(np.abs(h - h.conj().T)) if h.size else 0.0
        if dev > HERMITICITY_TOL:
            raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    w, v = np.linalg.eigh(h)
    return EigenSystem(eigenvalues=w, eigenvectors=v)


@dataclass
class QuantumState:
    """Complex amplitudes over the flat site index of a labelled graph."""

    graph: PhasedGraph
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.graph.num_sites,):
            raise ValueError(
                f"amplitude vector of length {amps.size} does not match "
                f"{self.graph.num_sites}-site graph"
            )
        self.amplitudes = amps

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def densities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def normalized(self) -> "QuantumState":
        return QuantumState(self.graph, self.amplitudes / self.norm())


@dataclass(frozen=True)
class WavePacketSpec:
    """Packet parameters: Gaussian (n0, sigma) or square (support), both with
    a momentum ramp k0 on a host chain."""

    kind: str = "gaussian"
    chain: int = 1
    n0: float = 0.0
    sigma: float = 1.0
    k0: float = 0.0
    support: tuple[int, int] | None = None

    def __post_init__(self):
        if self.kind not in ("gaussian", "square"):
            raise ValueError(f"unknown packet kind {self.kind!r}")
        if not (-np.pi < self.k0 <= np.pi):
            raise ValueError(f"k0 must lie in (-pi, pi], got {self.k0}")
        if self.kind == "gaussian" and self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.kind == "square" and self.support is None:
            raise ValueError("square packet needs a support range")


def make_packet(graph: PhasedGraph, spec: WavePacketSpec) -> QuantumState:
    """Normalized packet on one chain: envelope times phase ramp e^{-i k0 n}."""
    idx = graph.chain_indices(spec.chain)
    length = idx.size
    n = np.arange(1, length + 1)
    if spec.kind == "gaussian":
        if not (1 <= spec.n0 <= length):
            raise ValueError(f"packet centre {spec.n0} outside chain 1..{length}")
        envelope = np.exp(-((n - spec.n0) ** 2) / (2.0 * spec.sigma**2))
    else:
        lo, hi = spec.support
        if not (1 <= lo <= hi <= length):
            raise ValueError(f"support {spec.support} outside chain 1..{length}")
        envelope = ((n >= lo) & (n <= hi)).astype(float)
    amps = np.zeros(graph.num_sites, dtype=complex)
    amps[idx] = envelope * np.exp(-1j * spec.k0 * n)
    return QuantumState(graph, amps / np.linalg.norm(amps))


def evolve(es: EigenSystem, psi: QuantumState, t: float) -> QuantumState:
    """Unitary image e^{-i H t} |psi> via the eigendecomposition of H."""
    if es.dim != psi.amplitudes.size:
        raise ValueError(
            f"eigensystem dimension {es.dim} does not match state "
            f"dimension {psi.amplitudes.size}"
        )
    coeff = es.eigenvectors.conj().T @ psi.amplitudes
    amps = es.eigenvectors @ (np.exp(-1j * es.eigenvalues * t) * coeff)
    return QuantumState(psi.graph, amps)


class Propagator:
    """Evolves one initial state to many times, reusing the spectral data."""

    def __init__(self, es: EigenSystem, psi0: QuantumState):
        if es.dim != psi0.amplitudes.size:
            raise ValueError("eigensystem and state dimensions differ")
        self.es = es
        self.graph = psi0.graph
        self._coeff = es.eigenvectors.conj().T @ psi0.amplitudes

    def state_at(self, t: float) -> QuantumState:
        amps = self.es.eigenvectors @ (
            np.exp(-1j * self.es.eigenvalues * t) * self._coeff
        )
        return QuantumState(self.graph, amps)

    def amplitudes_at(self, times) -> np.ndarray:
        """Matrix of amplitudes, one column per requested time."""
        times = np.asarray(times, dtype=float)
        phases = np.exp(-1j * np.outer(self.es.eigenvalues, times))
        return self.es.eigenvectors @ (phases * self._coeff[:, None])


def spectral_residual(h: np.ndarray, es: EigenSystem) -> float:
    """max-norm residual of H v = eps v over all eigenpairs."""
    r = h @ es.eigenvectors - es.eigenvectors * es.eigenvalues[None, :]
    return float(np.max(np.abs(r))) if r.size else 0.0


def check_spectral_residual(h, es, tol: float = 1e-10) -> float:
    res = spectral_residual(h, es)
    if res > tol:
        raise NumericalError(f"spectral residual {res:.3e} exceeds {tol:.1e}")
    return res


def chain_density(psi: QuantumState, chain: int) -> float:
    """Total density on one chain: sum_n |phi_{chain,n}|^2."""
    if chain not in psi.graph.chain_labels():
        raise ValueError(f"graph has no chain labelled {chain}")
    idx = psi.graph.chain_indices(chain)
    return float(np.sum(np.abs(psi.amplitudes[idx]) ** 2))


def chain_densities(psi: QuantumState) -> dict[int, float]:
    return {l: chain_density(psi, l) for l in psi.graph.chain_labels()}


def dispersion(k: float) -> tuple[float, float, float]:
    """(energy, group velocity, curvature) of the momentum label k.

    Energy 2 cos k; a packet labelled k0 in (0, pi) moves toward larger site
    index with speed 2 sin k0; spreading is controlled by -2 cos k and is
    absent at |k| = pi/2.
    """
    if not (-np.pi < k <= np.pi):
        raise ValueError(f"momentum must lie in (-pi, pi], got {k}")
    return 2.0 * np.cos(k), 2.0 * np.sin(k), -2.0 * np.cos(k)


def position_moments(psi: QuantumState, chain: int) -> tuple[float, float]:
    """Centre of mass and standard deviation of the density on one chain,
    normalized to the weight on that chain."""
    idx = psi.graph.chain_indices(chain)
    dens = np.abs(psi.amplitudes[idx]) ** 2
    w = dens.sum()
    if w == 0:
        raise ValueError(f"state has no weight on chain {chain}")
    n = np.arange(1, idx.size + 1)
    mean = float((n * dens).sum() / w)
    var = float(((n - mean) ** 2 * dens).sum() / w)
    return mean, np.sqrt(var)


def graph_eigensystem(graph: PhasedGraph) -> EigenSystem:
    """Eigendecomposition of the graph Hamiltonian (assembled and checked)."""
    return eig_hermitian(assemble_hamiltonian(graph))
