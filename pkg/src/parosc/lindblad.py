"""Zero-temperature Lindblad dynamics of the driven oscillator in the rotating frame.

d rho/dt = -i [H, rho] - gamma_tilde (n rho - 2 a rho a_dag + rho n)

with the single lowering-operator dissipator (bath temperature far below the
oscillator quantum).  The Liouvillian is kept as a dense dim^2 x dim^2 matrix
acting on row-stacked density matrices: at desk-scale truncations robustness
beats scalability.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .fock import FockSpace, check_state, ladder_operators, number_operator
from .rwa import RwaSystem, build_h_rwa


@dataclass
class Liouvillian:
    """Dense generator of the dissipative evolution, with cached spectral data."""

    space: FockSpace
    sys: RwaSystem
    gamma_tilde: float
    matrix: np.ndarray
    _spectral: tuple | None = field(default=None, repr=False)
    _eigvals: np.ndarray | None = field(default=None, repr=False)
    _steady: np.ndarray | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.space.dim

    def apply(self, rho: np.ndarray) -> np.ndarray:
        d = self.dim
        return (self.matrix @ rho.reshape(d * d)).reshape(d, d)

    def eigenvalues(self) -> np.ndarray:
        """Generator eigenvalues; robust even where the eigenbasis is not."""
        if self._eigvals is None:
            if self._spectral is not None:
                self._eigvals = self._spectral[0]
            else:
                self._eigvals = np.linalg.eigvals(self.matrix)
        return self._eigvals

    def spectral(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Eigendecomposition (mu, R, Rinv) of the generator; cached.

        Raises if the eigenbasis is too ill-conditioned to represent the flow,
        which happens near exceptional points where eigenvectors coalesce.
        """
        if self._spectral is None:
            mu, r = np.linalg.eig(self.matrix)
            cond = np.linalg.cond(r)
            # cond*eps bounds the relative error of spectral propagation
            if cond > 1e13:
                raise np.linalg.LinAlgError(
                    f"Liouvillian eigenbasis condition number {cond:.2e} too large"
                )
            self._spectral = (mu, r, np.linalg.inv(r))
            self._eigvals = mu
        return self._spectral


def _vec(rho: np.ndarray) -> np.ndarray:
    return rho.reshape(-1)


def _unvec(x: np.ndarray, dim: int) -> np.ndarray:
    return x.reshape(dim, dim)


def build_liouvillian(space: FockSpace, sys: RwaSystem, gamma_tilde: float) -> Liouvillian:
    """L[rho] = -i[H, rho] - gamma_tilde (n rho - 2 a rho a_dag + rho n), units of V.

    Row-stacking convention: vec(A rho B) = (A kron B^T) vec(rho).
    """
    if gamma_tilde < 0:
        raise ValueError("gamma_tilde must be >= 0")
    dim = space.dim
    h = build_h_rwa(space, sys)
    a, _ = ladder_operators(space)
    n_op = number_operator(space)
    eye = np.eye(dim)
    lmat = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    lmat += -gamma_tilde * (np.kron(n_op, eye) + np.kron(eye, n_op.T)
                            - 2.0 * np.kron(a, a.conj()))
    return Liouvillian(space=space, sys=sys, gamma_tilde=gamma_tilde, matrix=lmat)


def trace_preservation_residual(liou: Liouvillian) -> float:
    """Max entry of Tr(L[.]): the trace functional must annihilate the generator."""
    tr_vec = _vec(np.eye(liou.dim)).astype(complex)
    return float(np.max(np.abs(tr_vec @ liou.matrix)))


def evolve_master(liou: Liouvillian, rho0: np.ndarray, t_grid: np.ndarray,
                  rel_tol: float = 1e-9) -> np.ndarray:
    """Propagate rho0 over t_grid; returns array of shape (len(t_grid), dim, dim).

    Same adaptive-integrator contract as the ramp module.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    dim = liou.dim
    lmat = liou.matrix
    n2 = dim * dim

    def rhs(t, y):
        x = y[:n2] + 1j * y[n2:]
        dx = lmat @ x
        return np.concatenate([dx.real, dx.imag])

    x0 = _vec(np.asarray(rho0, dtype=complex))
    y0 = np.concatenate([x0.real, x0.imag])
    span = (min(0.0, t_grid[0]), t_grid[-1])
    # rel_tol is a global target; step control is local, so integrate tighter
    sol = solve_ivp(rhs, span, y0, t_eval=t_grid, method="DOP853",
                    rtol=rel_tol / 20.0, atol=rel_tol * 1e-3)
    if not sol.success:
        raise RuntimeError(f"master-equation propagation failed: {sol.message}")
    out = (sol.y[:n2] + 1j * sol.y[n2:]).T
    return out.reshape(len(t_grid), dim, dim)


def steady_state(liou: Liouvillian, null_tol: float = 1e-8) -> np.ndarray:
    """Stationary density matrix: null vector of L under the trace constraint.

    Solved as the least-squares solution of L x = 0 stacked with Tr x = 1, with
    the null-space dimension checked through the generator's eigenvalues
    (must be exactly one near zero for gamma_tilde > 0).
    """
    if liou.gamma_tilde <= 0:
        raise ValueError("steady state requires gamma_tilde > 0")
    if liou._steady is not None:
        return liou._steady
    dim = liou.dim
    mu = liou.eigenvalues()
    scale = max(np.max(np.abs(mu)), 1.0)
    n_null = int(np.sum(np.abs(mu) < null_tol * scale))
    if n_null != 1:
        raise RuntimeError(f"degenerate null space: {n_null} eigenvalues below "
                           f"{null_tol * scale:.3g}")
    tr_row = _vec(np.eye(dim)).astype(complex)
    a_mat = np.vstack([liou.matrix, tr_row])
    b = np.zeros(dim * dim + 1, dtype=complex)
    b[-1] = 1.0
    x, *_ = np.linalg.lstsq(a_mat, b, rcond=None)
    rho = _unvec(x, dim)
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    resid = float(np.max(np.abs(liou.apply(rho))))
    if resid > 1e-10 * scale:
        raise RuntimeError(f"steady-state residual {resid:.3g} too large")
    liou._steady = rho
    return rho


def state_decay_rate(phi: np.ndarray, gamma_tilde: float) -> float:
    """Decay rate 2 * gamma_tilde * <phi|n|phi> of a parity eigenstate's population.

    For a definite-parity state the ladder operators have no diagonal matrix
    element, so only the occupation enters.
    """
    phi = np.asarray(phi, dtype=complex)
    check_state(phi)
    n_diag = np.arange(phi.shape[0])
    return float(2.0 * gamma_tilde * np.sum(n_diag * np.abs(phi) ** 2))


def expectation_number(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ np.diag(np.arange(rho.shape[0])))))
