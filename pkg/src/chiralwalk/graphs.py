"""Phased graphs and their Hermitian hopping Hamiltonians.

Vertices carry ``(chain, site)`` labels.  Every undirected edge is stored once,
oriented, with a real amplitude J and a phase theta; the reverse hopping
``J e^{-i theta}`` is implied by Hermiticity.  Site order fixes the flat matrix
index: chains are laid out as contiguous blocks in construction order with the
site index ascending, so on the Y-junction the state ``(l, n)`` sits at flat
index ``(l - 1) * N + (n - 1)``.

Triangle convention used by every junction builder: the three triangle edges
are oriented cyclically ``1 -> 2 -> 3 -> 1`` and each carries phase ``+theta``.
Negating theta therefore conjugates the Hamiltonian entrywise (time reversal).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .errors import InvalidSizeError, TopologyError


class SiteId(NamedTuple):
    chain: int
    site: int


@dataclass(frozen=True)
class PhasedEdge:
    """One stored direction of an undirected hopping J e^{i theta}."""

    src: SiteId
    dst: SiteId
    amplitude: float = 1.0
    phase: float = 0.0


@dataclass(frozen=True)
class PhasedGraph:
    sites: tuple[SiteId, ...]
    edges: tuple[PhasedEdge, ...]
    topology: str = "custom"

    def __post_init__(self):
        index = {}
        for i, s in enumerate(self.sites):
            if s in index:
                raise TopologyError(f"duplicate site {s}")
            index[s] = i
        for e in self.edges:
            if e.src == e.dst:
                raise TopologyError(f"self-loop at {e.src}")
            if e.src not in index or e.dst not in index:
                raise TopologyError(f"edge {e} references a missing site")
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_ham", None)
        if self.sites and not self._connected():
            raise TopologyError("graph is not connected")

    def _connected(self) -> bool:
        n = len(self.sites)
        adj: list[list[int]] = [[] for _ in range(n)]
        for e in self.edges:
            a, b = self._index[e.src], self._index[e.dst]
            adj[a].append(b)
            adj[b].append(a)
        seen = np.zeros(n, dtype=bool)
        stack = [0]
        seen[0] = True
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        return bool(seen.all())

    @property
    def num_sites(self) -> int:
        return len(self.sites)

    def index(self, site: SiteId) -> int:
        return self._index[site]

    def site_at(self, i: int) -> SiteId:
        return self.sites[i]

    def chain_labels(self) -> tuple[int, ...]:
        return tuple(sorted({s.chain for s in self.sites}))

    def chain_length(self, chain: int) -> int:
        return sum(1 for s in self.sites if s.chain == chain)

    def chain_indices(self, chain: int) -> np.ndarray:
        """Flat indices of one chain, ordered by site number."""
        pairs = sorted(
            (s.site, self._index[s]) for s in self.sites if s.chain == chain
        )
        if not pairs:
            raise ValueError(f"no chain labelled {chain}")
        return np.array([i for _, i in pairs], dtype=int)

    def to_json(self) -> str:
        return json.dumps(
            {
                "sites": [[s.chain, s.site] for s in self.sites],
                "edges": [
                    [self._index[e.src], self._index[e.dst], e.amplitude, e.phase]
                    for e in self.edges
                ],
                "topology": self.topology,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "PhasedGraph":
        data = json.loads(text)
        sites = tuple(SiteId(int(c), int(n)) for c, n in data["sites"])
        edges = tuple(
            PhasedEdge(sites[int(a)], sites[int(b)], float(j), float(th))
            for a, b, j, th in data["edges"]
        )
        return cls(sites=sites, edges=edges, topology=str(data["topology"]))


def _chain_sites(chain: int, n: int) -> list[SiteId]:
    return [SiteId(chain, k) for k in range(1, n + 1)]


def _chain_bonds(chain, n, hoppings=None, phases=None):
    hoppings = [1.0] * (n - 1) if hoppings is None else list(hoppings)
    phases = [0.0] * (n - 1) if phases is None else list(phases)
    if len(hoppings) != n - 1 or len(phases) != n - 1:
        raise ValueError(
            f"need {n - 1} hoppings/phases for an {n}-site chain, "
            f"got {len(hoppings)}/{len(phases)}"
        )
    return [
        PhasedEdge(SiteId(chain, k), SiteId(chain, k + 1), hoppings[k - 1], phases[k - 1])
        for k in range(1, n)
    ]


def build_open_chain(
    n: int,
    hoppings: Sequence[float] | None = None,
    phases: Sequence[float] | None = None,
    chain: int = 1,
) -> PhasedGraph:
    """Path graph on ``n`` sites with per-bond amplitudes and phases.

    Bond ``k`` joins sites ``k`` and ``k+1`` and carries ``J_k e^{i theta_k}``
    in that orientation.  Defaults are J=1, theta=0.
    """
    if n < 2:
        raise InvalidSizeError(f"chain needs at least 2 sites, got {n}")
    return PhasedGraph(
        sites=tuple(_chain_sites(chain, n)),
        edges=tuple(_chain_bonds(chain, n, hoppings, phases)),
        topology="chain",
    )


def khalique_phases(n: int) -> list[float]:
    """Bond phases 0, pi/(n-2), 2 pi/(n-2), ..., pi of the ramped-phase chain."""
    if n < 3:
        raise InvalidSizeError(f"ramped-phase chain needs n >= 3, got {n}")
    return [0.0] + [(k - 1) * np.pi / (n - 2) for k in range(2, n)]


def build_khalique_chain(n: int) -> PhasedGraph:
    """Chain whose bond phases ramp linearly up to pi (Khalique et al. model).

    The first bond is phase-free; bond k >= 2 carries phase (k-1) pi / (n-2).
    Gauging the phases away imprints a momentum close to -pi/2 on states near
    the chain centre, which is what makes zero-momentum packets walk.
    """
    g = build_open_chain(n, phases=khalique_phases(n))
    return PhasedGraph(sites=g.sites, edges=g.edges, topology="khalique-chain")


def _triangle(corners: Sequence[SiteId], theta: float, amplitude: float = 1.0):
    """Cyclically oriented phased triangle 1 -> 2 -> 3 -> 1."""
    a, b, c = corners
    return [
        PhasedEdge(a, b, amplitude, theta),
        PhasedEdge(b, c, amplitude, theta),
        PhasedEdge(c, a, amplitude, theta),
    ]


def build_y_junction(n: int, theta: float) -> PhasedGraph:
    """Three n-site chains joined at their site-n ends by a phased triangle."""
    if n < 2:
        raise InvalidSizeError(f"junction chains need at least 2 sites, got {n}")
    sites: list[SiteId] = []
    edges: list[PhasedEdge] = []
    for l in (1, 2, 3):
        sites += _chain_sites(l, n)
        edges += _chain_bonds(l, n)
    edges += _triangle([SiteId(1, n), SiteId(2, n), SiteId(3, n)], theta)
    return PhasedGraph(tuple(sites), tuple(edges), topology="y-junction")


def build_y_ring_composite(n: int, theta: float) -> PhasedGraph:
    """Y-junction whose chain-1 far end is fused to an n-site ring.

    The ring is chain 4.  Its closing bond is replaced by a second phased
    triangle on ``{(1,1), (4,1), (4,n)}`` with the same cyclic orientation and
    phase as the junction triangle, the chain-1 end playing the trunk role.
    Total sites: 4n.
    """
    if n < 3:
        raise InvalidSizeError(f"ring needs at least 3 sites, got {n}")
    y = build_y_junction(n, theta)
    sites = list(y.sites) + _chain_sites(4, n)
    edges = list(y.edges) + _chain_bonds(4, n)
    edges += _triangle([SiteId(1, 1), SiteId(4, 1), SiteId(4, n)], theta)
    return PhasedGraph(tuple(sites), tuple(edges), topology="y-ring")


def tree_junction_labels(depth: int) -> list[int]:
    """Chain labels that carry a junction at their site-n end (heap order)."""
    return list(range(2**depth - 1))


def build_binary_tree(
    depth: int, n: int, theta: float | Mapping[int, float]
) -> PhasedGraph:
    """Rooted binary tree whose edges are n-site chains.

    Chains are heap-labelled: trunk 0, children of chain c are 2c+1 (left) and
    2c+2 (right).  Chain c runs from site 1 at its parent junction to site n at
    its own junction (the trunk's site-1 end is free).  Each junction joins the
    parent's site-n end to the children's site-1 ends through a phased triangle
    oriented parent -> left -> right -> parent, so a packet satisfying the
    complete-transport condition with theta > 0 exits onto the left child.

    ``theta`` may be a single phase or a mapping from junction label (the
    parent chain) to a per-junction phase.
    """
    if depth < 1:
        raise InvalidSizeError(f"tree depth must be >= 1, got {depth}")
    if n < 2:
        raise InvalidSizeError(f"tree chains need at least 2 sites, got {n}")
    n_chains = 2 ** (depth + 1) - 1
    sites: list[SiteId] = []
    edges: list[PhasedEdge] = []
    for c in range(n_chains):
        sites += _chain_sites(c, n)
        edges += _chain_bonds(c, n)
    for c in tree_junction_labels(depth):
        th = theta[c] if isinstance(theta, Mapping) else theta
        edges += _triangle(
            [SiteId(c, n), SiteId(2 * c + 1, 1), SiteId(2 * c + 2, 1)], th
        )
    return PhasedGraph(tuple(sites), tuple(edges), topology="binary-tree")


def assemble_hamiltonian(graph: PhasedGraph) -> np.ndarray:
    """Dense Hermitian hopping matrix: H[a, b] = J e^{i theta} for edge a -> b.

    The result is cached on the graph and returned read-only.
    """
    cached = graph._ham
    if cached is not None:
        return cached
    m = graph.num_sites
    h = np.zeros((m, m), dtype=complex)
    for e in graph.edges:
        a, b = graph.index(e.src), graph.index(e.dst)
        h[a, b] = e.amplitude * np.exp(1j * e.phase)
        h[b, a] = np.conj(h[a, b])
    h.setflags(write=False)
    object.__setattr__(graph, "_ham", h)
    return h
