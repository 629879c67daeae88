"""Lattice scattering of a wave packet off a potential-shifted chain boundary.

Central object: the finite-time overlap between free and boundary-shifted
evolution of the same packet,

    Y(t) = <psi0| e^{+i H0 t} e^{-i Heff t} |psi0>,

which sits on plateaus (1 before the packet reaches the boundary, e^{i delta}
after each reflection) and jumps during collisions.  On the rescaled axis
T(t) = pi + n0 pi / N + 2 pi t sin(k0) / N the stationary-phase approximation
is a double sum of Gaussian-weighted resonances,

    Yhat(T) = sum_{q,p} [sigma^2 (1 - e^{2 i beta}) / (2 i Nsq N)]
              * e^{i (q - p - beta/pi) T} / (q - p - beta/pi)
              * e^{-a [(q - c)^2 + (p - c)^2]},

with a = pi^2 sigma^2 / (2 N^2), c = N k0 / pi, Nsq = theta3(0, e^{-1/sigma^2})
the squared packet normalization, and beta = f(k0, 0) - f(k0, omega).  Each
term gains e^{-2 i beta} under T -> T + 2 pi, which is the quasi-periodicity
Yhat(T + 2 pi) = e^{i delta} Yhat(T) with delta = -2 beta the boundary phase
shift.  The exact T-derivative collapses to a squared theta function.

The exact overlap Y(t) computed spectrally is the ground truth here; the
closed forms are validated against it, never the other way around.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConditionError
from .evolution import (
    Propagator,
    QuantumState,
    WavePacketSpec,
    eig_hermitian,
    make_packet,
)
from .graphs import build_open_chain
from .util import wrap_angle
from .yjunction import build_effective_chain

K0_MARGIN = 0.05


def theta3(z: float, q: float, method: str = "auto") -> float:
    """Jacobi theta_3(z, q) = 1 + 2 sum_{n>=1} q^{n^2} cos(2 n z) for real z.

    For q > 0.5 the direct series converges slowly, so the modular (imaginary)
    transformation is used instead: with q = e^{-t},
    theta3 = sqrt(pi/t) * sum_k exp(-(z - k pi)^2 / t).  ``method`` can force
    either path ("series" / "modular"); both agree to machine precision at the
    q = 0.5 crossover.
    """
    if not 0.0 <= q < 1.0:
        raise ValueError(f"nome must lie in [0, 1), got {q}")
    if q == 0.0:
        return 1.0
    z = float(z)
    if method == "series" or (method == "auto" and q <= 0.5):
        total = 1.0
        n = 1
        while True:
            w = q ** (n * n)
            total += 2.0 * w * math.cos(2.0 * n * z)
            if w < 1e-18:
                return total
            n += 1
    if method not in ("auto", "modular"):
        raise ValueError(f"unknown method {method!r}")
    t = -math.log(q)
    k_mid = int(round(z / math.pi))
    half = int(math.ceil(math.sqrt(45.0 * t) / math.pi)) + 2
    total = 0.0
    for k in range(k_mid - half, k_mid + half + 1):
        total += math.exp(-((z - k * math.pi) ** 2) / t)
    return math.sqrt(math.pi / t) * total


def f_shift(x: float, omega: float) -> float:
    """f(x, omega) = pi/2 - arctan((omega - cos x) / sin x) on x in (0, pi).

    Principal arctan branch; f(x, 0) reduces to pi - x.
    """
    if not 0.0 < x < math.pi:
        raise ValueError(f"momentum must lie strictly inside (0, pi), got {x}")
    return math.pi / 2.0 - math.atan((omega - math.cos(x)) / math.sin(x))


def beta_shift(k0: float, omega: float) -> float:
    """beta = f(k0, 0) - f(k0, omega); the phase shift is delta = -2 beta."""
    return f_shift(k0, 0.0) - f_shift(k0, omega)


def phase_shift(k0: float, omega: float) -> float:
    """Boundary phase shift delta = 2 k0 - 2 arctan((omega - cos k0)/sin k0) - pi,
    reduced to (-pi, pi]."""
    if not 0.0 < k0 < math.pi:
        raise ValueError(f"momentum must lie strictly inside (0, pi), got {k0}")
    delta = (
        2.0 * k0
        - 2.0 * math.atan((omega - math.cos(k0)) / math.sin(k0))
        - math.pi
    )
    return wrap_angle(delta)


@dataclass
class ScatteringParams:
    """Packet-plus-boundary parameters and the derived sum ingredients.

    k0 must stay 0.05 away from 0 and pi: the stationary-phase forms break
    when the packet barely moves or sits at the band edge.
    """

    n: int
    n0: float
    sigma: float
    k0: float
    omega: float
    beta: float = field(init=False)
    delta: float = field(init=False)
    norm_sq: float = field(init=False)

    def __post_init__(self):
        if not K0_MARGIN < self.k0 < math.pi - K0_MARGIN:
            raise ConditionError(
                f"k0 must stay {K0_MARGIN} away from 0 and pi, got {self.k0}"
            )
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        self.beta = beta_shift(self.k0, self.omega)
        self.delta = wrap_angle(-2.0 * self.beta)
        self.norm_sq = theta3(0.0, math.exp(-1.0 / self.sigma**2))
        self._build_sum()

    # --- truncated double sum over (q, p), reduced to the diagonal d = q - p ---
    def _build_sum(self):
        a = math.pi**2 * self.sigma**2 / (2.0 * self.n**2)
        c = self.n * self.k0 / math.pi
        w = int(math.ceil(6.0 * self.n / (math.pi * self.sigma))) + 8
        js = np.arange(round(c) - w, round(c) + w + 1)
        weights = np.exp(-a * (js - c) ** 2)
        # S_d = sum_{q - p = d} weight_q weight_p
        self._corr = np.correlate(weights, weights, mode="full")
        self._ds = np.arange(-(js.size - 1), js.size)
        self._gauss_scale = a

    @property
    def group_velocity(self) -> float:
        return 2.0 * math.sin(self.k0)

    def prefactor(self) -> complex:
        return (
            self.sigma**2
            * (1.0 - np.exp(2j * self.beta))
            / (2j * self.norm_sq * self.n)
        )


def rescale_time(t, params: ScatteringParams):
    """Affine packet clock: T(t) = pi + n0 pi / N + 2 pi t sin(k0) / N."""
    t = np.asarray(t, dtype=float)
    out = math.pi + params.n0 * math.pi / params.n + (
        2.0 * math.pi * math.sin(params.k0) / params.n
    ) * t
    return float(out) if out.ndim == 0 else out


def greens_analytic(T, params: ScatteringParams):
    """Stationary-phase overlap Yhat(T); scalar or array T.

    omega = 0 makes the prefactor 1 - e^{2 i beta} vanish with a matching
    zero-denominator term, which is the free case: Yhat is identically 1.
    """
    T = np.asarray(T, dtype=float)
    if params.omega == 0.0:
        out = np.ones(T.shape, dtype=complex)
        return complex(out) if out.ndim == 0 else out
    b = params.beta / math.pi
    shifted = params._ds - b
    phases = np.exp(1j * np.multiply.outer(T, shifted))
    out = params.prefactor() * (phases @ (params._corr / shifted))
    return complex(out) if out.ndim == 0 else out


def greens_analytic_derivative(T, params: ScatteringParams):
    """Exact T-derivative of the overlap sum:

        Yhat'(T) = [sigma^2 (1 - e^{2 i beta}) / (2 Nsq N)]
                   * e^{-i T beta / pi} * theta3(T/2, e^{-a})^2,

    with a = pi^2 sigma^2 / (2 N^2).  The e^{-i T beta / pi} oscillation is
    forced by differentiating each resonance term and is consistent with the
    quasi-periodicity of Yhat.
    """
    T = np.asarray(T, dtype=float)
    if params.omega == 0.0:
        out = np.zeros(T.shape, dtype=complex)
        return complex(out) if out.ndim == 0 else out
    nome = math.exp(-params._gauss_scale)
    th = np.vectorize(lambda z: theta3(z, nome))(T / 2.0)
    pref = 1j * params.prefactor()
    out = pref * np.exp(-1j * T * params.beta / math.pi) * th**2
    return complex(out) if out.ndim == 0 else out


def double_chain_map(psi: QuantumState) -> QuantumState:
    """Odd-parity extension of an N-site chain state onto 2N+1 sites.

    Left half copies the state, the central site is zero, the right half is
    the negated mirror; the result is renormalized.  Free-chain eigenstates
    map to eigenstates of the doubled free chain with the same energy, so
    reflection off the open end becomes free propagation across the centre.
    """
    g = psi.graph
    if len(g.chain_labels()) != 1 or len(g.edges) != g.num_sites - 1:
        raise ValueError("double_chain_map needs a single open chain")
    n = g.num_sites
    amps = np.zeros(2 * n + 1, dtype=complex)
    amps[:n] = psi.amplitudes
    amps[n + 1 :] = -psi.amplitudes[::-1]
    doubled = build_open_chain(2 * n + 1, chain=g.chain_labels()[0])
    return QuantumState(doubled, amps / np.linalg.norm(amps))


def greens_numeric(n: int, omega: float, packet: WavePacketSpec, t: float) -> complex:
    """Exact overlap <psi0| e^{+i H0 t} e^{-i Heff t} |psi0> via two spectral
    evolutions on the n-site chain."""
    trace = greens_numeric_trace(n, omega, packet, [t])
    return complex(trace.values[0])


@dataclass(frozen=True)
class GreensTrace:
    """Sampled overlap: times, rescaled times, complex values."""

    times: np.ndarray
    rescaled: np.ndarray
    values: np.ndarray


def greens_numeric_trace(
    n: int, omega: float, packet: WavePacketSpec, times
) -> GreensTrace:
    """Overlap trace over many times, diagonalizing each chain once."""
    times = np.asarray(times, dtype=float)
    chain = build_open_chain(n)
    psi0 = make_packet(chain, packet)
    free = Propagator(eig_hermitian(build_effective_chain(n, 0.0)), psi0)
    shifted = Propagator(eig_hermitian(build_effective_chain(n, omega)), psi0)
    a_free = free.amplitudes_at(times)
    a_shift = shifted.amplitudes_at(times)
    values = np.einsum("ij,ij->j", a_free.conj(), a_shift)
    # rescaled axis directly (valid for any k0, unlike ScatteringParams)
    rescaled = (
        math.pi
        + packet.n0 * math.pi / n
        + (2.0 * math.pi * math.sin(packet.k0) / n) * times
    )
    return GreensTrace(times=times, rescaled=rescaled, values=values)
