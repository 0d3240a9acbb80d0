"""Parity-resolved spectral flows of the rotating-frame Hamiltonian vs drive amplitude.

Level identity is (parity, ascending rank within the parity block).  Same-parity
levels repel and never cross as the drive grows, so the rank is a stable label
along the whole flow; this is what makes adiabatic state preparation and the
labeling used by the ramp and radiation modules well defined.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fock import ConvergenceError, FockSpace, tail_population
from .rwa import RwaSystem, build_h_rwa, zero_drive_levels


def even_indices(dim: int) -> np.ndarray:
    return np.arange(0, dim, 2)


def odd_indices(dim: int) -> np.ndarray:
    return np.arange(1, dim, 2)


def parity_split(h: np.ndarray, space: FockSpace,
                 comm_tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Split a parity-conserving operator into its even and odd Fock blocks.

    Raises if the operator couples the two parity sublattices, i.e. if it does
    not commute with the parity operator within ``comm_tol``.
    """
    dim = space.dim
    ev, od = even_indices(dim), odd_indices(dim)
    cross = max(np.max(np.abs(h[np.ix_(ev, od)])), np.max(np.abs(h[np.ix_(od, ev)])))
    scale = max(float(np.max(np.abs(h))), 1.0)
    if cross > comm_tol * scale:
        raise ValueError(
            f"operator violates parity: cross-block magnitude {cross:.3g} "
            f"exceeds {comm_tol:.3g} relative tolerance"
        )
    return h[np.ix_(ev, ev)], h[np.ix_(od, od)]


def level_label_at_zero_drive(delta: float, n: int) -> tuple[int, int]:
    """(parity, rank) label of the Fock state |n> within its parity block at f = 0."""
    parity = 1 if n % 2 == 0 else -1
    same = np.arange(n % 2, max(n + 3, 12), 2)
    levels = zero_drive_levels(delta, int(same[-1]))[same]
    order = np.argsort(levels, kind="stable")
    rank = int(np.where(same[order] == n)[0][0])
    return parity, rank


def eigenstate_by_label(space: FockSpace, delta: float, f: float,
                        parity: int, rank: int) -> tuple[float, np.ndarray]:
    """Eigenpair with the given (parity, rank) label.

    The eigenvector is embedded in the full Fock space, with its global phase
    fixed so that the largest-magnitude component is real and positive.
    """
    h = build_h_rwa(space, RwaSystem(delta=delta, f=f))
    even_block, odd_block = parity_split(h, space)
    idx = even_indices(space.dim) if parity == 1 else odd_indices(space.dim)
    block = even_block if parity == 1 else odd_block
    if not 0 <= rank < len(idx):
        raise ValueError(f"rank {rank} out of range for parity {parity:+d}")
    w, v = np.linalg.eigh(block)
    phi = np.zeros(space.dim, dtype=complex)
    phi[idx] = v[:, rank]
    k = int(np.argmax(np.abs(phi)))
    phi *= np.exp(-1j * np.angle(phi[k]))
    return float(w[rank]), phi


@dataclass
class SpectrumSeries:
    """Level flows over a drive grid; column j carries label (parities[j], ranks[j])."""

    delta: float
    f_grid: np.ndarray
    levels: np.ndarray          # shape (len(f_grid), n_levels)
    parities: np.ndarray        # +-1 per column
    ranks: np.ndarray           # rank within the parity block per column
    dim: int = field(default=0)

    def column(self, parity: int, rank: int) -> np.ndarray:
        mask = (self.parities == parity) & (self.ranks == rank)
        j = np.where(mask)[0]
        if len(j) == 0:
            raise ValueError(f"label (parity={parity:+d}, rank={rank}) not tracked")
        return self.levels[:, j[0]]


def spectrum_vs_drive(space: FockSpace, delta: float, f_grid: np.ndarray,
                      n_levels: int, tail_tol: float = 1e-8) -> SpectrumSeries:
    """Track the lowest ``n_levels`` levels per parity across an ascending drive grid.

    Columns are ordered by energy at the first grid point and keep their
    (parity, rank) identity at every drive value.
    """
    f_grid = np.asarray(f_grid, dtype=float)
    if np.any(np.diff(f_grid) < 0):
        raise ValueError("f_grid must be ascending")
    dim = space.dim
    n_even = min(n_levels, len(even_indices(dim)))
    n_odd = min(n_levels, len(odd_indices(dim)))

    even_flow = np.empty((len(f_grid), n_even))
    odd_flow = np.empty((len(f_grid), n_odd))
    for i, f in enumerate(f_grid):
        h = build_h_rwa(space, RwaSystem(delta=delta, f=f))
        eb, ob = parity_split(h, space)
        if i == len(f_grid) - 1:
            _check_tracked_tails(eb, ob, n_even, n_odd, dim, tail_tol)
        even_flow[i] = np.linalg.eigvalsh(eb)[:n_even]
        odd_flow[i] = np.linalg.eigvalsh(ob)[:n_odd]

    levels = np.concatenate([even_flow, odd_flow], axis=1)
    parities = np.concatenate([np.ones(n_even, dtype=int), -np.ones(n_odd, dtype=int)])
    ranks = np.concatenate([np.arange(n_even), np.arange(n_odd)])
    order = np.argsort(levels[0], kind="stable")
    return SpectrumSeries(delta=delta, f_grid=f_grid, levels=levels[:, order],
                          parities=parities[order], ranks=ranks[order], dim=dim)


def _check_tracked_tails(even_block, odd_block, n_even, n_odd, dim, tail_tol):
    """Truncation check at the largest drive: tracked eigenvectors must not lean
    on the top Fock levels."""
    tail = max(4, dim // 8)
    for block, n_keep, idx in ((even_block, n_even, even_indices(dim)),
                               (odd_block, n_odd, odd_indices(dim))):
        _, v = np.linalg.eigh(block)
        for r in range(n_keep):
            phi = np.zeros(dim, dtype=complex)
            phi[idx] = v[:, r]
            if tail_population(phi, tail) > tail_tol:
                raise ConvergenceError(
                    f"tracked level rank {r} has tail population "
                    f"{tail_population(phi, tail):.3g} > {tail_tol:.3g}; increase dim"
                )


def same_parity_gap(series: SpectrumSeries, parity: int, rank: int) -> np.ndarray:
    """Distance to the nearest tracked same-parity neighbor, per drive value."""
    target = series.column(parity, rank)
    gaps = np.full(len(series.f_grid), np.inf)
    for j in range(series.levels.shape[1]):
        if series.parities[j] != parity or series.ranks[j] == rank:
            continue
        gaps = np.minimum(gaps, np.abs(series.levels[:, j] - target))
    if np.any(np.isinf(gaps)):
        raise ValueError("no same-parity neighbor tracked; increase n_levels")
    return gaps


def find_degeneracy_points(space: FockSpace, delta_grid: np.ndarray, f: float,
                           tol: float = 1e-8, n_levels: int = 6) -> list[dict]:
    """Scan the detuning for level coincidences at fixed drive.

    Reports opposite-parity coincidences (exact at integer delta for any drive)
    and same-parity coincidences (present at half-integer delta only as f -> 0).
    Each record carries the detuning, the kind, the two (parity, rank) labels,
    and the residual gap.
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    found = []
    for delta in np.asarray(delta_grid, dtype=float):
        h = build_h_rwa(space, RwaSystem(delta=delta, f=f))
        eb, ob = parity_split(h, space)
        ev = np.linalg.eigvalsh(eb)[:n_levels]
        od = np.linalg.eigvalsh(ob)[:n_levels]
        for i, ei in enumerate(ev):
            for j, oj in enumerate(od):
                if abs(ei - oj) < tol:
                    found.append({"delta": float(delta), "kind": "opposite-parity",
                                  "labels": ((1, i), (-1, j)), "gap": float(abs(ei - oj))})
        for name, block, par in (("even", ev, 1), ("odd", od, -1)):
            for i in range(len(block) - 1):
                if block[i + 1] - block[i] < tol:
                    found.append({"delta": float(delta), "kind": f"same-parity-{name}",
                                  "labels": ((par, i), (par, i + 1)),
                                  "gap": float(block[i + 1] - block[i])})
    return found


def series_rows(series: SpectrumSeries):
    """Rows (f, parity, rank, energy) for CSV emission."""
    for i, f in enumerate(series.f_grid):
        for j in range(series.levels.shape[1]):
            yield (f, int(series.parities[j]), int(series.ranks[j]),
                   series.levels[i, j])
