"""Chiral continuous-time quantum walks on phased graphs.

Builders for chains, Y-junctions, ring composites, and binary trees; exact
spectral time evolution of wave packets; the gauge map between chiral chains
and momentum-imprinted free chains; closed-form junction spectra and the
three-effective-chain decomposition; lattice boundary scattering (phase
shifts, theta-function Green's traces); and chain-resolved transport control.
"""

from .errors import (
    ChiralWalkError,
    ConditionError,
    InvalidSizeError,
    NumericalError,
    TopologyError,
)
from .evolution import (
    EigenSystem,
    Propagator,
    QuantumState,
    WavePacketSpec,
    chain_densities,
    chain_density,
    dispersion,
    eig_hermitian,
    evolve,
    graph_eigensystem,
    make_packet,
    position_moments,
)
from .gauge import GaugeVector, apply_gauge, gauge_phases_for_chain
from .graphs import (
    PhasedEdge,
    PhasedGraph,
    SiteId,
    assemble_hamiltonian,
    build_binary_tree,
    build_khalique_chain,
    build_open_chain,
    build_y_junction,
    build_y_ring_composite,
)
from .scattering import (
    GreensTrace,
    ScatteringParams,
    beta_shift,
    double_chain_map,
    f_shift,
    greens_analytic,
    greens_analytic_derivative,
    greens_numeric,
    greens_numeric_trace,
    phase_shift,
    rescale_time,
    theta3,
)
from .transport import (
    RoutingReport,
    TransportRecord,
    analytic_chain_densities,
    complete_transport_thetas,
    first_collision_window,
    ring_route_demo,
    sweep_theta,
    tree_route_demo,
)
from .yjunction import (
    AnalyticEigenstate,
    JunctionEigen,
    RootSolution,
    build_effective_chain,
    decompose_evolution,
    detect_edge_state,
    graph_eigenstate,
    junction_eigenvalues,
    solve_zeta_roots,
    spectrum_records,
)

__version__ = "0.1.0"
