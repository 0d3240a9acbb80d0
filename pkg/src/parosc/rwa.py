"""RWA Hamiltonian of the parametrically driven Kerr oscillator and analytic companions.

Unit convention (everywhere in this package): hbar = 1, energies and rates in
units of the Kerr nonlinearity V, time in units of 1/V.  The dimensionless
controls are the scaled detuning delta = (omega_F/2 - omega_0)/V and the
scaled drive amplitude f.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import FockSpace, ladder_operators, number_operator


@dataclass(frozen=True)
class RwaSystem:
    """Dimensionless system parameters of the rotating-frame Hamiltonian.

    Derived scales: ``lam`` is the dimensionless Planck constant of the scaled
    phase space (lam = 1/(2 f)) and ``mu`` = delta/f controls the double-well
    shape of the classical Hamiltonian function.  Both need f > 0.
    """

    delta: float
    f: float

    def __post_init__(self):
        if self.f < 0:
            raise ValueError(f"drive amplitude f must be >= 0, got {self.f}")

    @property
    def lam(self) -> float:
        if self.f <= 0:
            raise ValueError("lam is defined only for f > 0")
        return 1.0 / (2.0 * self.f)

    @property
    def mu(self) -> float:
        if self.f <= 0:
            raise ValueError("mu is defined only for f > 0")
        return self.delta / self.f


@dataclass(frozen=True)
class SemiclassicalSummary:
    """Well data of the classical Hamiltonian function for -1 < mu."""

    q0: float           # well position, sqrt(mu + 1)
    omega_min: float    # small-oscillation frequency about the well, 2*sqrt(mu + 1)
    g_min: float        # well depth, -(mu + 1)^2/4
    eta: float          # squeezing parameter, 1/sqrt(mu + 1)
    gap_estimate: float  # intrawell level spacing in units of V, 2*sqrt((delta + f) f)


def build_h_rwa(space: FockSpace, system: RwaSystem) -> np.ndarray:
    """Rotating-frame Hamiltonian -delta*n + (n^2 + n)/2 + (f/2)(a^2 + a_dag^2).

    Hermitian, commutes with occupation-number parity; units of V.
    """
    a, a_dag = ladder_operators(space)
    n_op = number_operator(space)
    h = -system.delta * n_op + 0.5 * (n_op @ n_op + n_op)
    h += 0.5 * system.f * (a @ a + a_dag @ a_dag)
    return h


def zero_drive_levels(delta: float, n_max: int) -> np.ndarray:
    """Eigenvalues E_n = Ebar_n - Ebar_0 at zero drive, Ebar_n = (n + 1/2 - delta)^2 / 2."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    n = np.arange(n_max + 1)
    ebar = 0.5 * (n + 0.5 - delta) ** 2
    return ebar - ebar[0]


def _ebar(delta: float, n: int) -> float:
    return 0.5 * (n + 0.5 - delta) ** 2


def perturbative_shift(delta: float, f: float, n: int) -> float:
    """Second-order-in-drive shift of level n about the zero-drive spectrum.

    Valid asymptotically for small f; the resonant denominator 2*Ebar_n - 1
    makes the second-order result meaningless where it vanishes, so that case
    is an error rather than a limit.
    """
    denom = 2.0 * _ebar(delta, n) - 1.0
    if abs(denom) < 1e-9:
        raise ValueError(
            f"level n={n} at delta={delta} has a resonant denominator; "
            "the second-order shift does not apply"
        )
    return -(f ** 2 / 4.0) * (2.0 * _ebar(delta, n) - delta ** 2 - 0.75) / denom


def classical_hamiltonian_function(Q, P, mu: float):
    """Scaled classical Hamiltonian in the rotating frame.

    g(Q, P) = (P^2 + Q^2)^2/4 - mu (P^2 + Q^2)/2 + (P^2 - Q^2)/2.  For
    -1 < mu < 1 it has two minima at P = 0, Q = +-sqrt(mu + 1).
    """
    r2 = np.asarray(P) ** 2 + np.asarray(Q) ** 2
    return r2 ** 2 / 4.0 - 0.5 * mu * r2 + 0.5 * (np.asarray(P) ** 2 - np.asarray(Q) ** 2)


def semiclassics(system: RwaSystem) -> SemiclassicalSummary:
    """Harmonic expansion about the well of the classical Hamiltonian function."""
    mu = system.mu
    if mu + 1.0 <= 0:
        raise ValueError(f"no double well: mu + 1 = {mu + 1} <= 0")
    q0 = np.sqrt(mu + 1.0)
    return SemiclassicalSummary(
        q0=q0,
        omega_min=2.0 * q0,
        g_min=-(mu + 1.0) ** 2 / 4.0,
        eta=1.0 / q0,
        gap_estimate=2.0 * np.sqrt((system.delta + system.f) * system.f),
    )


def coherent_eigen_residual(space: FockSpace, f: float) -> float:
    """Residual of the exact coherent eigenstates at scaled detuning delta = 1.

    At delta = 1 the Hamiltonian factorizes and the coherent states |+-alpha>
    with alpha^2 = -f are exact degenerate eigenstates with energy -f^2/2.
    Returns max over the two signs of ||(H - E)|alpha>||.
    """
    if f <= 0:
        raise ValueError("f must be > 0")
    alpha = 1j * np.sqrt(f)
    h = build_h_rwa(space, RwaSystem(delta=1.0, f=f))
    energy = -f ** 2 / 2.0
    worst = 0.0
    for sign in (1.0, -1.0):
        psi = space.coherent_state(sign * alpha, tail_tol=1e-12)
        worst = max(worst, float(np.linalg.norm(h @ psi - energy * psi)))
    return worst


def exact_level_shift(space: FockSpace, delta: float, f: float, n: int) -> float:
    """Exact-diagonalization shift of the level adiabatically connected to |n>.

    The level is identified by its (parity, rank) label at zero drive, which
    is preserved because same-parity levels repel.  Used as the oracle against
    which ``perturbative_shift`` is checked.
    """
    from .spectrum import level_label_at_zero_drive, parity_split

    parity, rank = level_label_at_zero_drive(delta, n)
    h = build_h_rwa(space, RwaSystem(delta=delta, f=f))
    even_block, odd_block = parity_split(h, space)
    block = even_block if parity == 1 else odd_block
    levels = np.linalg.eigvalsh(block)
    # diagonal of H at f=0 equals Ebar_n - Ebar_0, i.e. the zero-drive levels
    return float(levels[rank]) - zero_drive_levels(delta, n)[n]


__all__ = [
    "RwaSystem",
    "SemiclassicalSummary",
    "build_h_rwa",
    "zero_drive_levels",
    "perturbative_shift",
    "classical_hamiltonian_function",
    "semiclassics",
    "coherent_eigen_residual",
    "exact_level_shift",
]
