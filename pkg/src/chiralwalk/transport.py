"""Chain-resolved transport control on junction graphs.

After one junction scattering the packet weight on chain l is the interference
of the three sector phase shifts,

    n_l = | (1/3) sum_nu sigma^{nu (l-1)} e^{i delta_nu} |^2,

with sigma = e^{2 pi i / 3} and delta_nu the boundary phase shift of sector
nu.  The weights sum to one, are 2 pi / 3 periodic in theta, and concentrate
entirely on one chain exactly when 3 theta + k0 = pi (mod 2 pi).
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConditionError
from .evolution import (
    Propagator,
    WavePacketSpec,
    chain_densities,
    dispersion,
    graph_eigensystem,
    make_packet,
)
from .graphs import (
    PhasedGraph,
    build_binary_tree,
    build_y_junction,
    build_y_ring_composite,
    tree_junction_labels,
)
from .scattering import phase_shift
from .util import wrap_angle
from .yjunction import SIGMA, junction_eigenvalues

K0_EDGE_TOL = 0.05


def analytic_chain_densities(k0: float, theta: float) -> tuple[float, float, float]:
    """Post-scattering chain weights (n1, n2, n3) from the sector phase shifts."""
    if not K0_EDGE_TOL < k0 < math.pi - K0_EDGE_TOL:
        raise ConditionError(
            f"k0 must stay {K0_EDGE_TOL} away from 0 and pi, got {k0}"
        )
    deltas = [phase_shift(k0, omega) for omega in junction_eigenvalues(theta)]
    out = []
    for l in (1, 2, 3):
        amp = sum(
            SIGMA ** (nu * (l - 1)) * np.exp(1j * d)
            for nu, d in zip((1, 2, 3), deltas)
        ) / 3.0
        out.append(abs(amp) ** 2)
    return tuple(out)


def complete_transport_thetas(k0: float) -> tuple[float, float, float]:
    """The three phases in [0, 2 pi) with 3 theta + k0 = pi (mod 2 pi).

    Near k0 = 0 (mod pi) the packet spreads faster than it moves and the
    condition loses meaning, so those momenta are rejected.
    """
    if min(abs(k0 % math.pi), math.pi - (k0 % math.pi)) < K0_EDGE_TOL:
        raise ConditionError(
            f"complete transport undefined for k0 near 0 (mod pi), got {k0}"
        )
    base = (math.pi - k0) / 3.0
    return tuple(sorted((base + 2.0 * math.pi * m / 3.0) % (2.0 * math.pi) for m in range(3)))


def first_collision_window(n: int, n0: float, sigma: float, k0: float) -> float:
    """Measurement time (n - n0 + 3 sigma) / v_g: the packet centre has crossed
    the junction by three widths.

    Rejects packets too wide to separate launch, junction, and measurement
    (sigma > n / 4).
    """
    if not 1 <= n0 <= n:
        raise ValueError(f"packet centre {n0} outside chain 1..{n}")
    if sigma > n / 4.0:
        raise ValueError(
            f"packet too wide for a clean first-collision window "
            f"(sigma={sigma}, chain length {n})"
        )
    vg = dispersion(k0)[1]
    if vg <= 0:
        raise ValueError(f"k0={k0} does not propagate toward the junction")
    return (n - n0 + 3.0 * sigma) / vg


@dataclass(frozen=True)
class TransportRecord:
    theta: float
    k0: float
    numeric: tuple[float, float, float] | None = None
    analytic: tuple[float, float, float] | None = None


def _measure_numeric(args) -> tuple[float, float, float]:
    n, theta, packet = args
    graph = build_y_junction(n, theta)
    psi0 = make_packet(graph, packet)
    t = first_collision_window(n, packet.n0, packet.sigma, packet.k0)
    prop = Propagator(graph_eigensystem(graph), psi0)
    dens = chain_densities(prop.state_at(t))
    return (dens[1], dens[2], dens[3])


def sweep_theta(
    n: int,
    packet: WavePacketSpec,
    thetas,
    mode: str = "both",
    jobs: int = 1,
) -> list[TransportRecord]:
    """Chain weights over a phase grid, numeric and/or analytic.

    Numeric weights are measured at the first-collision window; grid points
    are independent and may be mapped over processes (results keep grid
    order).
    """
    if mode not in ("numeric", "analytic", "both"):
        raise ValueError(f"unknown sweep mode {mode!r}")
    thetas = [float(th) for th in np.atleast_1d(thetas)]
    numeric: list[tuple[float, float, float] | None] = [None] * len(thetas)
    if mode in ("numeric", "both"):
        work = [(n, th, packet) for th in thetas]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                numeric = list(pool.map(_measure_numeric, work))
        else:
            numeric = [_measure_numeric(w) for w in work]
    records = []
    for i, th in enumerate(thetas):
        ana = (
            analytic_chain_densities(packet.k0, th)
            if mode in ("analytic", "both")
            else None
        )
        records.append(
            TransportRecord(theta=th, k0=packet.k0, numeric=numeric[i], analytic=ana)
        )
    return records


@dataclass(frozen=True)
class JunctionPassage:
    """One junction crossing: when the packet centre arrives and where the
    weight sits shortly after."""

    junction: int
    t_arrival: float
    t_measured: float
    intended_chain: int
    densities: dict[int, float]

    @property
    def routed_fraction(self) -> float:
        return self.densities[self.intended_chain]


@dataclass(frozen=True)
class RoutingReport:
    kind: str
    n: int
    k0: float
    thetas: dict[int, float]
    path: str
    target_chain: int
    passages: list[JunctionPassage]
    threshold: float = 0.95

    @property
    def reached_target(self) -> bool:
        return self.passages[-1].routed_fraction >= self.threshold

    @property
    def min_routed_fraction(self) -> float:
        return min(p.routed_fraction for p in self.passages)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "k0": self.k0,
            "thetas": {str(k): v for k, v in self.thetas.items()},
            "path": self.path,
            "target_chain": self.target_chain,
            "threshold": self.threshold,
            "reached_target": self.reached_target,
            "passages": [
                {
                    "junction": p.junction,
                    "t_arrival": p.t_arrival,
                    "t_measured": p.t_measured,
                    "intended_chain": p.intended_chain,
                    "routed_fraction": p.routed_fraction,
                    "densities": {str(k): v for k, v in p.densities.items()},
                }
                for p in self.passages
            ],
        }


def tree_route_demo(
    depth: int,
    n: int,
    theta: float,
    k0: float,
    target_leaf: str,
) -> RoutingReport:
    """Route a packet from the trunk of a binary tree to a commanded leaf.

    ``target_leaf`` is a string of L/R choices, one per junction on the path
    (length = depth).  The junctions along the path get phase +|theta| for L
    and -|theta| for R; with |theta| satisfying the complete-transport
    condition for k0 the packet follows the choices junction by junction.
    theta = 0 is the breadth mode: the packet splits 0.4/0.4 onto the two
    children with 0.2 reflected, and the report carries the split instead of
    a routed path.
    """
    path = target_leaf.upper()
    if len(path) != depth or any(ch not in "LR" for ch in path):
        raise ValueError(f"target path must be {depth} L/R choices, got {target_leaf!r}")
    magnitude = abs(theta)
    breadth = magnitude == 0.0
    if not breadth:
        allowed = complete_transport_thetas(k0)
        if min(abs(wrap_angle(magnitude - a)) for a in allowed) > 1e-9:
            warnings.warn(
                f"|theta|={magnitude} does not satisfy the complete-transport "
                f"condition for k0={k0}; reporting split ratios",
                stacklevel=2,
            )

    # junctions visited along the commanded path, with per-junction phases
    junctions = [0]
    for ch in path[:-1]:
        junctions.append(2 * junctions[-1] + (1 if ch == "L" else 2))
    thetas = {j: magnitude for j in tree_junction_labels(depth)}
    for j, ch in zip(junctions, path):
        thetas[j] = magnitude if ch == "L" else -magnitude

    graph = build_binary_tree(depth, n, thetas)
    n0 = n / 2.0
    sigma = n / math.sqrt(32.0)
    packet = WavePacketSpec(kind="gaussian", chain=0, n0=n0, sigma=sigma, k0=k0)
    psi0 = make_packet(graph, packet)
    prop = Propagator(graph_eigensystem(graph), psi0)
    vg = dispersion(k0)[1]

    passages = []
    chain = 0
    for hop, (j, ch) in enumerate(zip(junctions, path)):
        intended = 2 * j + (1 if ch == "L" else 2)
        t_arr = ((n - n0) + hop * n) / vg
        t_meas = t_arr + 3.0 * sigma / vg
        dens = chain_densities(prop.state_at(t_meas))
        passages.append(
            JunctionPassage(
                junction=j,
                t_arrival=t_arr,
                t_measured=t_meas,
                intended_chain=intended,
                densities=dens,
            )
        )
        chain = intended
    return RoutingReport(
        kind="binary-tree",
        n=n,
        k0=k0,
        thetas=thetas,
        path=path,
        target_chain=chain,
        passages=passages,
    )


def ring_route_demo(n: int, theta: float, k0: float) -> RoutingReport:
    """Drive a packet around the Y-plus-ring composite.

    Launched on chain 3 toward the junction, the packet should hand over to
    chain 1, run down to the second triangle, circulate the ring, come back up
    chain 1, and exit onto chain 2.  The report measures the chain weights at
    the mid-leg times of that commanded itinerary.
    """
    graph = build_y_ring_composite(n, theta)
    n0 = n / 2.0
    sigma = n / math.sqrt(32.0)
    packet = WavePacketSpec(kind="gaussian", chain=3, n0=n0, sigma=sigma, k0=k0)
    psi0 = make_packet(graph, packet)
    prop = Propagator(graph_eigensystem(graph), psi0)
    vg = dispersion(k0)[1]

    # distances from launch to the middle of each commanded leg
    legs = [
        (1, (n - n0) + n / 2.0),                  # down chain 1
        (4, (n - n0) + (n - 1) + n / 2.0),        # around the ring
        (1, (n - n0) + 2.0 * (n - 1) + n / 2.0),  # back up chain 1
        (2, (n - n0) + 3.0 * (n - 1) + n / 2.0),  # out onto chain 2
    ]
    passages = []
    for hop, (chain, dist) in enumerate(legs):
        t = dist / vg
        dens = chain_densities(prop.state_at(t))
        passages.append(
            JunctionPassage(
                junction=hop,
                t_arrival=(dist - n / 2.0) / vg,
                t_measured=t,
                intended_chain=chain,
                densities=dens,
            )
        )
    return RoutingReport(
        kind="y-ring",
        n=n,
        k0=k0,
        thetas={0: theta},
        path="ring",
        target_chain=2,
        passages=passages,
        threshold=0.95,
    )
