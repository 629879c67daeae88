"""Closed-form structure of the phased Y-junction.

The junction triangle commutes with the cyclic chain rotation, so the walk
splits into three sectors nu = 1, 2, 3.  Sector nu sees a single open chain
with a boundary potential omega_nu = 2 cos(2 pi nu / 3 + theta) on its last
site.  Eigenenergies are eps = 2 cos zeta with zeta solving

    sin((N+1) zeta) / sin(N zeta) = omega,

one real root per interval ((m-1) pi / N, m pi / N); when |omega| exceeds
(N+1)/N one root moves onto the imaginary axis (zeta = i mu, or pi + i mu for
omega < 0) and describes a state localized at the junction.  Full-graph
eigenstates are the chain solution sin(n zeta) replicated over the three
chains with phases e^{i 2 pi nu l / 3}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSizeError, NumericalError
from .evolution import EigenSystem, QuantumState, eig_hermitian, evolve
from .graphs import PhasedGraph, build_open_chain

# exact primitive third root of unity; never accumulate cos/sin of angles
SIGMA = complex(-0.5, math.sqrt(3.0) / 2.0)

ROOT_TOL = 1e-13
RESIDUAL_TOL = 1e-11
MARGINAL_BAND = 1e-6


@dataclass(frozen=True)
class JunctionEigen:
    """Eigenvalues omega_nu and eigenvectors of the 3x3 junction matrix."""

    omegas: tuple[float, float, float]
    vectors: np.ndarray  # columns (1/sqrt3) sigma^{nu l}, l = 1..3

    def __iter__(self):
        return iter(self.omegas)


def junction_eigenvalues(theta: float) -> JunctionEigen:
    """omega_nu = 2 cos(2 pi nu / 3 + theta) for nu = 1, 2, 3."""
    omegas = tuple(2.0 * math.cos(2.0 * math.pi * nu / 3.0 + theta) for nu in (1, 2, 3))
    vectors = np.array(
        [[SIGMA ** (nu * l) for nu in (1, 2, 3)] for l in (1, 2, 3)]
    ) / math.sqrt(3.0)
    return JunctionEigen(omegas=omegas, vectors=vectors)


def _secular(zeta: float, n: int, omega: float) -> float:
    """sin((n+1) zeta) - omega sin(n zeta); pole-free form of the root equation."""
    return math.sin((n + 1) * zeta) - omega * math.sin(n * zeta)


def _secular_prime(zeta: float, n: int, omega: float) -> float:
    return (n + 1) * math.cos((n + 1) * zeta) - omega * n * math.cos(n * zeta)


def _bisect_newton(n, omega, lo, hi, s_lo) -> float:
    """Bracketed bisection to ~1e-13 followed by Newton polish."""
    a, b = lo, hi
    for _ in range(200):
        if b - a < ROOT_TOL:
            break
        mid = 0.5 * (a + b)
        if _secular(mid, n, omega) * s_lo > 0:
            a = mid
        else:
            b = mid
    z = 0.5 * (a + b)
    for _ in range(4):
        f = _secular(z, n, omega)
        fp = _secular_prime(z, n, omega)
        if fp == 0.0:
            break
        step = f / fp
        if abs(step) > (hi - lo):
            break
        z -= step
    return min(max(z, lo), hi)


def _bound_state_mu(n: int, omega: float) -> float:
    """mu > 0 with sinh((n+1) mu) / sinh(n mu) = |omega|, solved in log space."""
    target = math.log(abs(omega))

    def logratio(mu: float) -> float:
        return mu + math.log1p(-math.exp(-2 * (n + 1) * mu)) - math.log1p(
            -math.exp(-2 * n * mu)
        )

    lo = 1e-16
    hi = max(target + 1.0, 4.0 / n)
    while logratio(hi) < target:
        hi *= 2.0
        if hi > 1e3:
            raise NumericalError("bound-state bracket failed to close")
    for _ in range(200):
        if hi - lo < 1e-15 * max(1.0, hi):
            break
        mid = 0.5 * (lo + hi)
        if logratio(mid) < target:
            lo = mid
        else:
            hi = mid
    mu = 0.5 * (lo + hi)
    for _ in range(4):
        g = logratio(mu) - target
        gp = (n + 1) / math.tanh((n + 1) * mu) - n / math.tanh(n * mu)
        if gp == 0.0:
            break
        mu -= g / gp
    return mu


@dataclass(frozen=True)
class RootSolution:
    """The N roots zeta for one boundary value omega, in interval order.

    Real entries are extended states; a complex entry (positive imaginary
    part) is the junction-localized state.  marginal flags |omega| within
    rounding distance of the (N+1)/N threshold.
    """

    n: int
    omega: float
    zetas: np.ndarray
    marginal: bool = False

    @property
    def energies(self) -> np.ndarray:
        return (2.0 * np.cos(self.zetas)).real

    @property
    def is_edge(self) -> np.ndarray:
        return np.abs(self.zetas.imag) > 0.0

    @property
    def has_edge_state(self) -> bool:
        return bool(self.is_edge.any())


def solve_zeta_roots(n: int, omega: float) -> RootSolution:
    """All N roots of sin((N+1) zeta) / sin(N zeta) = omega.

    Real roots are bracketed by the poles at m pi / N and found by bisection
    plus a Newton polish; the bound-state branch (present iff
    |omega| > (N+1)/N) is solved on the imaginary axis.  Residuals of the real
    roots are checked against 1e-11.
    """
    if n < 2:
        raise InvalidSizeError(f"need n >= 2, got {n}")
    omega = float(omega)
    threshold = (n + 1) / n
    marginal = abs(abs(omega) - threshold) < MARGINAL_BAND
    zetas = np.empty(n, dtype=complex)

    lo_m = 2 if omega > threshold else 1
    hi_m = n - 1 if omega < -threshold else n
    for m in range(lo_m, hi_m + 1):
        lo = (m - 1) * math.pi / n
        hi = m * math.pi / n
        # sign of the secular function at the left edge of the bracket
        if m == 1:
            s_lo = 1.0 if (n + 1) - omega * n >= 0 else -1.0
        else:
            s_lo = 1.0 if (m - 1) % 2 == 0 else -1.0
        eps = 1e-12 * math.pi / n
        zetas[m - 1] = _bisect_newton(n, omega, lo + eps, hi - eps, s_lo)

    if omega > threshold:
        zetas[0] = 1j * _bound_state_mu(n, omega)
    elif omega < -threshold:
        zetas[n - 1] = math.pi + 1j * _bound_state_mu(n, omega)

    sol = RootSolution(n=n, omega=omega, zetas=zetas, marginal=marginal)
    _check_residuals(sol)
    return sol


def _check_residuals(sol: RootSolution) -> None:
    for z in sol.zetas[~sol.is_edge].real:
        s = math.sin(sol.n * z)
        if s == 0.0:
            raise NumericalError("root landed on a pole of the secular equation")
        res = abs(math.sin((sol.n + 1) * z) / s - sol.omega)
        if res > RESIDUAL_TOL:
            raise NumericalError(
                f"root residual {res:.3e} exceeds {RESIDUAL_TOL:.1e} "
                f"(n={sol.n}, omega={sol.omega})"
            )


def build_effective_chain(n: int, omega: float) -> np.ndarray:
    """Open chain with unit hoppings plus a boundary potential omega at site n."""
    if n < 2:
        raise InvalidSizeError(f"need n >= 2, got {n}")
    h = np.zeros((n, n), dtype=complex)
    rng = np.arange(n - 1)
    h[rng, rng + 1] = 1.0
    h[rng + 1, rng] = 1.0
    h[n - 1, n - 1] = omega
    return h


@dataclass(frozen=True)
class AnalyticEigenstate:
    """Effective-chain eigenstate built from one root zeta."""

    eta: int
    zeta: complex
    energy: float
    amplitudes: np.ndarray
    nu: int | None = None


def _chain_amplitudes(n: int, zeta: complex) -> np.ndarray:
    """Normalized lambda^m - lambda^{-m} profile, lambda = e^{i zeta}."""
    m = np.arange(1, n + 1)
    if zeta.imag == 0.0:
        amps = np.sin(zeta.real * m)
    elif abs(zeta.real) < 1e-12:
        amps = np.sinh(zeta.imag * m)
    else:  # zeta = pi + i mu: staggered hyperbolic profile
        amps = ((-1.0) ** m) * np.sinh(zeta.imag * m)
    return amps / np.linalg.norm(amps)


def detect_edge_state(n: int, omega: float) -> AnalyticEigenstate | None:
    """Junction-localized state, present iff |omega| > (N+1)/N.

    Amplitudes grow like sinh(mu m) toward the boundary site, so the decay
    ratio away from it is e^{-mu}.
    """
    sol = solve_zeta_roots(n, omega)
    if not sol.has_edge_state:
        return None
    k = int(np.nonzero(sol.is_edge)[0][0])
    zeta = complex(sol.zetas[k])
    return AnalyticEigenstate(
        eta=k + 1,
        zeta=zeta,
        energy=float(sol.energies[k]),
        amplitudes=_chain_amplitudes(n, zeta),
    )


def graph_eigenstate(
    graph: PhasedGraph, nu: int, zeta: complex
) -> QuantumState:
    """Full Y-junction eigenstate: chain profile replicated with sector phases."""
    if graph.topology != "y-junction":
        raise ValueError("graph_eigenstate needs a Y-junction graph")
    n = graph.num_sites // 3
    chain = _chain_amplitudes(n, zeta)
    amps = np.empty(3 * n, dtype=complex)
    for l in (1, 2, 3):
        amps[(l - 1) * n : l * n] = SIGMA ** (nu * l) * chain
    amps /= np.linalg.norm(amps)
    return QuantumState(graph, amps)


def effective_eigensystems(n: int, theta: float) -> dict[int, EigenSystem]:
    """Eigendecompositions of the three effective chains, keyed by nu."""
    je = junction_eigenvalues(theta)
    return {
        nu: eig_hermitian(build_effective_chain(n, omega))
        for nu, omega in zip((1, 2, 3), je.omegas)
    }


def decompose_evolution(
    psi0: QuantumState,
    t: float,
    n: int | None = None,
    theta: float | None = None,
    support_tol: float = 1e-12,
) -> QuantumState:
    """Evolve a chain-1 state of the Y-junction through three chain problems.

    The full walk is psi(t) = sum_l P_l sum_nu (1/3) sigma^{nu (l-1)} chi^nu(t)
    with every chi^nu evolved from the same chain-1 profile under its own
    effective chain.  Exact for any t.
    """
    graph = psi0.graph
    if graph.topology != "y-junction":
        raise ValueError("decompose_evolution needs a Y-junction graph")
    n_graph = graph.num_sites // 3
    if n is not None and n != n_graph:
        raise ValueError(f"n={n} does not match the graph ({n_graph} sites per chain)")
    n = n_graph
    if theta is None:
        theta = _junction_phase(graph)

    off_chain = np.concatenate(
        [psi0.amplitudes[graph.chain_indices(l)] for l in (2, 3)]
    )
    if off_chain.size and np.max(np.abs(off_chain)) > support_tol:
        raise ValueError("initial state must be supported on chain 1")

    chain_graph = build_open_chain(n)
    chi0 = QuantumState(chain_graph, psi0.amplitudes[graph.chain_indices(1)])
    systems = effective_eigensystems(n, theta)
    chi_t = {nu: evolve(systems[nu], chi0, t).amplitudes for nu in (1, 2, 3)}

    amps = np.zeros(3 * n, dtype=complex)
    for l in (1, 2, 3):
        block = np.zeros(n, dtype=complex)
        for nu in (1, 2, 3):
            block += (SIGMA ** (nu * (l - 1))) * chi_t[nu]
        amps[graph.chain_indices(l)] = block / 3.0
    return QuantumState(graph, amps)


def _junction_phase(graph: PhasedGraph) -> float:
    from .graphs import SiteId

    n = graph.num_sites // 3
    for e in graph.edges:
        if e.src == SiteId(1, n) and e.dst == SiteId(2, n):
            return e.phase
    raise ValueError("could not locate the junction triangle")


def spectrum_records(n: int, thetas) -> list[tuple[float, int, int, float, bool]]:
    """(theta, nu, eta, energy, is_edge_state) rows for a phase grid."""
    rows = []
    for theta in np.atleast_1d(thetas):
        je = junction_eigenvalues(float(theta))
        for nu, omega in zip((1, 2, 3), je.omegas):
            sol = solve_zeta_roots(n, omega)
            for k in range(n):
                rows.append(
                    (
                        float(theta),
                        nu,
                        k + 1,
                        float(sol.energies[k]),
                        bool(sol.is_edge[k]),
                    )
                )
    return rows
