"""Gauge transformations that move hopping phases off chain bonds.

On a path graph every bond phase theta_n can be absorbed into a diagonal
unitary C = diag(e^{-i alpha_n}) with alpha_1 = 0 and
alpha_{n+1} = alpha_n - theta_n.  Conjugating the Hamiltonian, C H C^dagger,
yields the phase-free tridiagonal chain; states transform covariantly as
psi -> C psi, which puts the phase ramp on the amplitudes instead.  Per-site
densities are untouched either way.  Graphs with cycles cannot be gauged: loop
phases are physical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TopologyError
from .graphs import PhasedGraph
from .util import wrap_angle


@dataclass(frozen=True)
class GaugeVector:
    """Per-site phases alpha_n (radians), defined modulo a global constant."""

    alphas: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=float)
        object.__setattr__(self, "alphas", a)

    def __neg__(self) -> "GaugeVector":
        return GaugeVector(wrap_angle(-self.alphas))

    def __len__(self) -> int:
        return len(self.alphas)


def _path_bond_phases(graph: PhasedGraph) -> np.ndarray:
    """Phases theta_n of the bonds (n, n+1) of a single open chain."""
    n = graph.num_sites
    chains = graph.chain_labels()
    if len(chains) != 1 or len(graph.edges) != n - 1:
        raise TopologyError("gauge transformation needs a single open chain")
    chain = chains[0]
    phases = np.zeros(n - 1)
    seen = np.zeros(n - 1, dtype=bool)
    for e in graph.edges:
        lo, hi = e.src.site, e.dst.site
        sign = 1.0
        if lo > hi:
            lo, hi, sign = hi, lo, -1.0
        if hi != lo + 1 or e.src.chain != chain or e.dst.chain != chain:
            raise TopologyError("gauge transformation needs a single open chain")
        phases[lo - 1] = sign * e.phase
        seen[lo - 1] = True
    if not seen.all():
        raise TopologyError("gauge transformation needs a single open chain")
    return phases


def gauge_phases_for_chain(graph: PhasedGraph) -> GaugeVector:
    """Phases alpha with alpha_1 = 0, alpha_{n+1} = alpha_n - theta_n.

    Output is reduced to (-pi, pi]; the gauge only enters through e^{i alpha}.
    """
    thetas = _path_bond_phases(graph)
    alphas = np.concatenate([[0.0], -np.cumsum(thetas)])
    return GaugeVector(wrap_angle(alphas))


def apply_gauge(target, gauge: GaugeVector):
    """Apply C = diag(e^{-i alpha_n}) to a matrix (C H C^dagger) or state (C psi).

    Accepts a 2-d array, a 1-d array, or a QuantumState; returns the same kind.
    """
    from .evolution import QuantumState  # local import to avoid a cycle

    c = np.exp(-1j * gauge.alphas)
    if isinstance(target, QuantumState):
        if len(gauge) != target.amplitudes.size:
            raise ValueError("gauge length does not match state dimension")
        return QuantumState(target.graph, c * target.amplitudes)
    arr = np.asarray(target)
    if arr.ndim == 1:
        if len(gauge) != arr.size:
            raise ValueError("gauge length does not match state dimension")
        return c * arr
    if arr.ndim == 2:
        if arr.shape[0] != arr.shape[1] or arr.shape[0] != len(gauge):
            raise ValueError("gauge length does not match matrix dimension")
        return (c[:, None] * arr) * np.conj(c)[None, :]
    raise ValueError("target must be a state vector, matrix, or QuantumState")
