"""Delimited output with a fixed contract: comma separator, '.' decimal,
header row, LF line endings, floats at 12 significant digits.  Identical
inputs produce byte-identical files."""

from __future__ import annotations

import json
from typing import Iterable, Sequence

import numpy as np

from .evolution import QuantumState, chain_densities
from .scattering import GreensTrace
from .transport import RoutingReport, TransportRecord
from .util import fmt_float


def _cell(x) -> str:
    if isinstance(x, bool) or isinstance(x, np.bool_):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return fmt_float(x)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(x) for x in row) + "\n")


def _json_cell(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, str):
        return x if x else None
    return float(x)


def write_table(path, header, rows, fmt: str = "csv") -> None:
    """Emit a table as CSV or as a {"columns", "rows"} JSON document."""
    if fmt == "csv":
        write_csv(path, header, rows)
    elif fmt == "json":
        doc = {
            "columns": list(header),
            "rows": [[_json_cell(x) for x in row] for row in rows],
        }
        with open(path, "w", newline="\n") as fh:
            json.dump(doc, fh)
            fh.write("\n")
    else:
        raise ValueError(f"unknown output format {fmt!r}")


def snapshot_rows(states: Sequence[tuple[float, QuantumState]]):
    """(t, chain, site, density, phase) for each site of each snapshot."""
    for t, psi in states:
        for i, site in enumerate(psi.graph.sites):
            amp = psi.amplitudes[i]
            yield (t, site.chain, site.site, abs(amp) ** 2, float(np.angle(amp)))


def write_snapshot_csv(path, states, fmt: str = "csv") -> None:
    write_table(path, ["t", "chain", "site", "density", "phase"], snapshot_rows(states), fmt)


def write_trajectory_csv(path, times, states: Sequence[QuantumState], fmt: str = "csv") -> None:
    """(t, n_<chain>, ...) total chain densities over time."""
    labels = states[0].graph.chain_labels()
    header = ["t"] + [f"n_{l}" for l in labels]
    rows = []
    for t, psi in zip(times, states):
        dens = chain_densities(psi)
        rows.append([t] + [dens[l] for l in labels])
    write_table(path, header, rows, fmt)


def write_spectrum_csv(path, records, fmt: str = "csv") -> None:
    write_table(path, ["theta", "nu", "eta", "energy", "is_edge_state"], records, fmt)


def write_greens_csv(path, trace: GreensTrace, fmt: str = "csv") -> None:
    rows = (
        (t, T, y.real, y.imag, abs(y), float(np.angle(y)))
        for t, T, y in zip(trace.times, trace.rescaled, trace.values)
    )
    write_table(path, ["t", "T", "re_y", "im_y", "abs_y", "arg_y"], rows, fmt)


def write_sweep_csv(path, records: Sequence[TransportRecord], fmt: str = "csv") -> None:
    header = ["theta", "n1_num", "n2_num", "n3_num", "n1_ana", "n2_ana", "n3_ana"]
    rows = []
    for r in records:
        num = r.numeric if r.numeric is not None else ("", "", "")
        ana = r.analytic if r.analytic is not None else ("", "", "")
        rows.append([r.theta, *num, *ana])
    write_table(path, header, rows, fmt)


def write_routing_json(path, report: RoutingReport) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
