"""Transient and stationary emission spectra of the dissipative driven oscillator.

Two-time correlators <a_dag(t1) a(t2)> follow from the quantum regression rule:
propagate rho to t1, deform it by a_dag on the right, propagate the deformation
for tau = t2 - t1, and trace against a.

Propagation uses the spectral decomposition of the Liouvillian when its
eigenbasis is well conditioned; near exceptional points (eigenvector
coalescence makes the eigenbasis useless) it falls back to exact stepping with
the matrix exponential of one uniform time step.

The frequency axis is x = Omega - omega_F/2 in units of V; physical bath
prefactors are set to one, so spectra are in the reduced form where only peak
positions, signs, symmetry, and the sum rule are meaningful.

Transient spectral density (total excess emitted energy per unit frequency,
relative to the steady state):

    E_rad(x) = Int_0^T dt 2 Re Int_0^t dt' e^{i x (t - t')} [C(t', t) - C_st(t - t')]

evaluated on a uniform time grid with trapezoidal weights; the grid step obeys
dt <= min(0.05/gamma_tilde, 0.2/max|x|) so the fastest retained oscillation is
resolved.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .fock import ladder_operators
from .lindblad import Liouvillian, steady_state


@dataclass
class CorrelatorGrid:
    """C(t1, t2) = <a_dag(t1) a(t2)> for t2 >= t1; lower triangle unused (zeros)."""

    t_grid: np.ndarray
    values: np.ndarray


@dataclass
class SpectralDensity:
    omega_grid: np.ndarray      # x = Omega - omega_F/2, units of V
    values: np.ndarray
    kind: str                   # "transient_energy" or "steady_power"


# ---------------------------------------------------------------------------
# propagation backends

class _SpectralFlow:
    def __init__(self, liou: Liouvillian):
        self.mu, self.r, self.rinv = liou.spectral()

    def evolve_columns(self, x0: np.ndarray, ts: np.ndarray) -> np.ndarray:
        """Columns exp(L t) x0 for every t."""
        c0 = self.rinv @ x0
        return self.r @ (np.exp(np.outer(self.mu, ts)) * c0[:, None])

    def adjoint_rows(self, row: np.ndarray, ts: np.ndarray) -> np.ndarray:
        """Rows row^T exp(L t) for every t, stacked as shape (len(ts), d^2)."""
        g = row @ self.r
        return (np.exp(np.outer(ts, self.mu)) * g[None, :]) @ self.rinv


class _SteppingFlow:
    """Exact uniform-step flow through expm(L dt); used near exceptional points."""

    def __init__(self, liou: Liouvillian, dt: float):
        self.prop = expm(liou.matrix * dt)
        self.dt = dt

    def _check(self, ts):
        steps = np.diff(ts)
        if len(ts) > 1 and not np.allclose(steps, self.dt, rtol=1e-9, atol=0.0):
            raise ValueError("stepping flow needs the uniform grid it was built for")

    def evolve_columns(self, x0: np.ndarray, ts: np.ndarray) -> np.ndarray:
        self._check(ts)
        out = np.empty((x0.size, len(ts)), dtype=complex)
        x = x0.astype(complex)
        for k in range(len(ts)):
            out[:, k] = x
            x = self.prop @ x
        return out

    def adjoint_rows(self, row: np.ndarray, ts: np.ndarray) -> np.ndarray:
        self._check(ts)
        out = np.empty((len(ts), row.size), dtype=complex)
        v = row.astype(complex)
        for k in range(len(ts)):
            out[k] = v
            v = v @ self.prop
        return out


def _flow(liou: Liouvillian, dt: float | None):
    try:
        return _SpectralFlow(liou)
    except np.linalg.LinAlgError:
        if dt is None:
            raise
        return _SteppingFlow(liou, dt)


def _operators(liou: Liouvillian):
    a, a_dag = ladder_operators(liou.space)
    dim = liou.dim
    tr_a = a.T.reshape(-1)                        # Tr[a M] = vec(a^T) . vec(M)
    right_adag = np.kron(np.eye(dim), a_dag.T)    # vec(M a_dag)
    return tr_a, right_adag


def _default_dt(gamma_tilde: float, omega_grid: np.ndarray) -> float:
    x_max = float(np.max(np.abs(omega_grid))) if len(omega_grid) else 0.0
    dt = 0.05 / gamma_tilde
    if x_max > 0:
        dt = min(dt, 0.2 / x_max)
    return dt


def _uniform(t_grid: np.ndarray) -> float | None:
    steps = np.diff(t_grid)
    if len(steps) and np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        return float(steps[0])
    return None


def _trapz_weights(n: int, dt: float) -> np.ndarray:
    w = np.full(n, dt)
    w[0] = w[-1] = 0.5 * dt
    return w


def _fourier_quadrature(xs: np.ndarray, ts: np.ndarray, signal: np.ndarray,
                        block: int = 512) -> np.ndarray:
    """2 Re Int dt e^{i x t} signal(t) for every x, in x-blocks to bound memory."""
    out = np.empty(len(xs))
    for i in range(0, len(xs), block):
        chunk = xs[i:i + block]
        phases = np.exp(1j * np.outer(chunk, ts))
        out[i:i + block] = 2.0 * np.real(phases @ signal)
    return out


# ---------------------------------------------------------------------------
# correlators

def two_time_correlator(liou: Liouvillian, rho0: np.ndarray,
                        t_grid: np.ndarray) -> CorrelatorGrid:
    """Fill C(t1, t2) for all grid pairs with t2 >= t1 by quantum regression."""
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid[0] != 0 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must ascend from 0")
    tr_a, right_adag = _operators(liou)
    flow = _flow(liou, _uniform(t_grid))
    rho_vecs = flow.evolve_columns(np.asarray(rho0, complex).reshape(-1), t_grid)
    seeds = right_adag @ rho_vecs
    n_t = len(t_grid)
    values = np.zeros((n_t, n_t), dtype=complex)
    if isinstance(flow, _SpectralFlow):
        g = tr_a @ flow.r
        comp = flow.rinv @ seeds
        for i in range(n_t):
            taus = t_grid[i:] - t_grid[i]
            values[i, i:] = (g * comp[:, i]) @ np.exp(np.outer(flow.mu, taus))
    else:
        rows = flow.adjoint_rows(tr_a, t_grid)        # row j = tr_a Lambda^{j dt}
        full = rows @ seeds                           # (tau index, t1 index)
        for i in range(n_t):
            values[i, i:] = full[: n_t - i, i]
    return CorrelatorGrid(t_grid=t_grid, values=values)


def stationary_correlator(liou: Liouvillian, taus: np.ndarray,
                          rho_st: np.ndarray | None = None) -> np.ndarray:
    """C_st(tau) = Tr[a Lambda_tau(rho_st a_dag)]."""
    if rho_st is None:
        rho_st = steady_state(liou)
    taus = np.asarray(taus, dtype=float)
    tr_a, right_adag = _operators(liou)
    seed = right_adag @ np.asarray(rho_st, complex).reshape(-1)
    flow = _flow(liou, _uniform(taus))
    return flow.adjoint_rows(tr_a, taus) @ seed


# ---------------------------------------------------------------------------
# spectra

def transient_spectrum(liou: Liouvillian, rho0: np.ndarray, T_max: float,
                       omega_grid: np.ndarray, dt: float | None = None,
                       relax_tol: float = 1e-4) -> SpectralDensity:
    """Excess emitted energy per unit frequency after preparing rho0.

    Requires T_max >= 10/gamma_tilde so the transient has relaxed; warns if the
    state at T_max still differs from the steady state by more than relax_tol.
    Values may be negative: the prepared state can emit less at a frequency
    than the steady state does.
    """
    gt = liou.gamma_tilde
    if gt <= 0:
        raise ValueError("transient spectrum needs gamma_tilde > 0")
    if T_max < 10.0 / gt:
        raise ValueError(f"T_max = {T_max} too short; need >= {10.0 / gt}")
    omega_grid = np.asarray(omega_grid, dtype=float)
    if dt is None:
        dt = _default_dt(gt, omega_grid)
    n_t = int(np.ceil(T_max / dt)) + 1
    ts = np.linspace(0.0, T_max, n_t)
    dt = ts[1] - ts[0]

    rho_st = steady_state(liou)
    tr_a, right_adag = _operators(liou)
    flow = _flow(liou, dt)
    # evolve the deviation from the steady state; its correlator seeds are
    # exactly C(t', t' + tau) - C_st(tau)
    dev0 = (np.asarray(rho0, complex) - rho_st).reshape(-1)
    dev_vecs = flow.evolve_columns(dev0, ts)
    if float(np.max(np.abs(dev_vecs[:, -1]))) > relax_tol:
        warnings.warn(
            f"state not relaxed at T_max: deviation {np.max(np.abs(dev_vecs[:, -1])):.2e}",
            RuntimeWarning, stacklevel=2,
        )
    seeds = right_adag @ dev_vecs                 # (d^2, n_t), per t'

    # trapezoid prefix over t': B[:, r] = Int_0^{t_r} seeds dt'
    prefix = np.cumsum(seeds, axis=1) * dt
    b = prefix - 0.5 * dt * (seeds + seeds[:, :1])
    # S(tau_j) = Int_0^{T - tau_j} dt' dC(t', t' + tau_j)
    #          = [tr_a Lambda^{tau_j}] . B[:, n-1-j]
    rows = flow.adjoint_rows(tr_a, ts)
    s_tau = np.einsum("jm,mj->j", rows, b[:, ::-1])

    w_tau = _trapz_weights(n_t, dt)
    values = _fourier_quadrature(omega_grid, ts, w_tau * s_tau)
    return SpectralDensity(omega_grid=omega_grid, values=values, kind="transient_energy")


def steady_spectrum(liou: Liouvillian, omega_grid: np.ndarray, T_corr: float,
                    dt: float | None = None) -> SpectralDensity:
    """Stationary emitted power per unit frequency around half the drive frequency."""
    gt = liou.gamma_tilde
    if gt <= 0:
        raise ValueError("steady spectrum needs gamma_tilde > 0")
    if T_corr < 10.0 / gt:
        raise ValueError(f"T_corr = {T_corr} too short; need >= {10.0 / gt}")
    omega_grid = np.asarray(omega_grid, dtype=float)
    if dt is None:
        dt = _default_dt(gt, omega_grid)
    n_t = int(np.ceil(T_corr / dt)) + 1
    taus = np.linspace(0.0, T_corr, n_t)
    c_st = stationary_correlator(liou, taus)
    w = _trapz_weights(n_t, taus[1] - taus[0])
    values = _fourier_quadrature(omega_grid, taus, w * c_st)
    return SpectralDensity(omega_grid=omega_grid, values=values, kind="steady_power")


def excess_occupation(liou: Liouvillian, rho0: np.ndarray, t: np.ndarray) -> np.ndarray:
    """<n>(t) - <n>_st along the dissipative flow; helper for tests and the CLI."""
    t = np.asarray(t, dtype=float)
    rho_st = steady_state(liou)
    flow = _flow(liou, _uniform(t))
    dev = flow.evolve_columns((np.asarray(rho0, complex) - rho_st).reshape(-1), t)
    n_row = np.diag(np.arange(liou.dim)).T.reshape(-1)
    return np.real(n_row @ dev)


def sum_rule_check(liou: Liouvillian, rho0: np.ndarray, T_max: float,
                   x_max: float | None = None, n_x: int = 4001,
                   dt: float | None = None) -> tuple[float, float]:
    """Frequency-integral consistency check of the transient spectrum.

    lhs = (1/2 pi) Int dx E_rad(x) over a wide grid; rhs = Int dt (<n>(t) - <n>_st).
    The two must agree because integrating the phase factor over all x
    collapses the double time integral onto its diagonal.
    """
    gt = liou.gamma_tilde
    if x_max is None:
        # cover every oscillation frequency that carries weight for this seed;
        # Lorentzian tails beyond the margin cost ~ 2*gt/(pi*margin)
        try:
            mu, r, rinv = liou.spectral()
        except np.linalg.LinAlgError as exc:
            raise ValueError(
                "x_max must be given explicitly when the eigenbasis is "
                "ill-conditioned"
            ) from exc
        tr_a, right_adag = _operators(liou)
        rho_st = steady_state(liou)
        seed = rinv @ (right_adag @ (np.asarray(rho0, complex) - rho_st).reshape(-1))
        w = np.abs((tr_a @ r) * seed)
        active = w > 1e-12 * max(float(w.max()), 1e-300)
        x_max = (float(np.max(np.abs(mu[active].imag))) if np.any(active) else 0.0) \
            + 100.0 * gt
    xs = np.linspace(-x_max, x_max, n_x)
    spec = transient_spectrum(liou, rho0, T_max, xs, dt=dt)
    lhs = float(np.trapezoid(spec.values, xs) / (2.0 * np.pi))

    if dt is None:
        dt = _default_dt(gt, xs)
    n_t = int(np.ceil(T_max / dt)) + 1
    ts = np.linspace(0.0, T_max, n_t)
    excess = excess_occupation(liou, rho0, ts)
    rhs = float(np.sum(_trapz_weights(n_t, ts[1] - ts[0]) * excess))
    return lhs, rhs


def spectrum_rows(spec: SpectralDensity):
    """Rows (x, value) for CSV emission."""
    for x, v in zip(spec.omega_grid, spec.values):
        yield (x, v)
