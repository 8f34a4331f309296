"""Eigenpairs of the truncated parity sectors, with truncation refinement.

The dense path is: band-preserving Givens reduction to tridiagonal form,
implicit-shift QL for the eigenvalues, inverse iteration for the few
eigenvectors that are wanted, and an independent Sturm-bisection pass that
every solve is checked against.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import DomainError, SolverError
from .operator import BandedSymmetricMatrix, Params, Parity, assemble_sector

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_L_INIT = 64
DEFAULT_L_MAX = 2**14
QL_MAX_SWEEPS = 50
ORACLE_AGREEMENT = 1e-10


class Tridiagonal(NamedTuple):
    diagonal: np.ndarray
    offdiagonal: np.ndarray
    transform: np.ndarray | None  # Q with M = Q^T T Q


def _reduce(m: BandedSymmetricMatrix):
    n, b = m.dim, min(m.half_bandwidth, max(m.dim - 1, 0))
    w = np.zeros((b + 2, n))
    w[: b + 1] = m.bands[: b + 1]
    cap = n * max(b - 1, 0) * (n // max(b, 1) + 2) + 1
    rot_p = np.zeros(cap, dtype=np.int64)
    rot_c = np.zeros(cap)
    rot_s = np.zeros(cap)
    nrot = _kernels.band_to_tridiagonal(w, b, rot_p, rot_c, rot_s) if b > 1 else 0
    if nrot < 0:
        raise SolverError("rotation buffer overflow in band reduction")
    d = w[0].copy()
    e = w[1, : n - 1].copy() if b >= 1 else np.zeros(max(n - 1, 0))
    return d, e, (rot_p, rot_c, rot_s, nrot)


def tridiagonalize(m: BandedSymmetricMatrix, want_transform: bool = True) -> Tridiagonal:
    """Orthogonal similarity reduction of a band matrix to tridiagonal T.

    The returned transform Q satisfies ``M = Q.T @ T @ Q``.
    """
    d, e, (rp, rc, rs, nrot) = _reduce(m)
    q = None
    if want_transform:
        q = np.eye(m.dim)
        _kernels.apply_rotations(q, rp, rc, rs, nrot, False)
    return Tridiagonal(d, e, q)


def _check_tridiagonal(diag, offdiag):
    d = np.ascontiguousarray(diag, dtype=float)
    e = np.ascontiguousarray(offdiag, dtype=float)
    if d.ndim != 1 or e.ndim != 1 or e.shape[0] != max(d.shape[0] - 1, 0):
        raise DomainError("offdiagonal must have length len(diagonal) - 1")
    return d, e


def eigen_tridiagonal(diag, offdiag, want_vectors: bool = False):
    """All eigenvalues (ascending) of T, optionally with orthonormal eigenvectors.

    Returns ``values`` or ``(values, vectors)`` with eigenvectors as columns.
    """
    d, e = _check_tridiagonal(diag, offdiag)
    n = d.shape[0]
    dd = d.copy()
    ee = np.zeros(n)
    ee[: n - 1] = e
    z = np.eye(n) if want_vectors else np.zeros((1, 1))
    status = _kernels.tql(dd, ee, z, want_vectors, QL_MAX_SWEEPS)
    if status != _kernels.QL_OK:
        raise SolverError(f"QL did not converge for eigenvalue {status}", index=int(status))
    order = np.argsort(dd, kind="stable")
    if want_vectors:
        return dd[order], z[:, order]
    return dd[order]


def sturm_count(diag, offdiag, x: float) -> int:
    """Number of eigenvalues of T strictly less than x."""
    d, e = _check_tridiagonal(diag, offdiag)
    return int(_kernels.sturm_count(d, e, float(x)))


def sturm_bisection(diag, offdiag, k: int, tol: float) -> np.ndarray:
    """Lowest k eigenvalues of T by bisection on the Sturm count."""
    if tol <= 0:
        raise DomainError("tol must be positive")
    d, e = _check_tridiagonal(diag, offdiag)
    if not 0 <= k <= d.shape[0]:
        raise DomainError(f"k={k} out of range for dimension {d.shape[0]}")
    return _kernels.bisect_lowest(d, e, int(k), float(tol))


def lowest_eigenpairs(m: BandedSymmetricMatrix, k: int, check_oracle: bool = True):
    """Lowest k eigenvalues and unit eigenvectors (columns) of a band matrix."""
    n = m.dim
    k = min(k, n)
    d, e, (rp, rc, rs, nrot) = _reduce(m)
    values = eigen_tridiagonal(d, e)[:k]
    if check_oracle:
        oracle = _kernels.bisect_lowest(d, e, k, 1e-3 * ORACLE_AGREEMENT)
        worst = float(np.max(np.abs(oracle - values))) if k else 0.0
        if worst > ORACLE_AGREEMENT:
            raise SolverError(f"QL and Sturm bisection disagree by {worst:.3e}")
    tnorm = float(np.max(np.abs(d)) + 2 * np.max(np.abs(e), initial=0.0))
    y = _kernels.inverse_iteration(d, e, values, 12345, 1e-8 * max(tnorm, 1.0))
    _kernels.apply_rotations(y, rp, rc, rs, nrot, True)
    y /= np.linalg.norm(y, axis=0)
    # Rayleigh quotients: error scales with the eigenvalue, not with ||M||
    values = np.einsum("ij,ij->j", y, m.matvec(y))
    return values, y


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    """Lowest eigenpairs of Q(alpha, beta), merged across parity sectors.

    ``eigenvectors[j]`` is the coefficient vector of eigenvalue j inside the
    sector ``parities[j]`` at truncation ``L_used[parity]`` (2L entries).
    """

    params: Params
    eigenvalues: np.ndarray
    parities: tuple
    eigenvectors: tuple
    L_used: dict
    residuals: np.ndarray
    tol: float
    changes: np.ndarray = None  # |lambda_j(L) - lambda_j(L/2)| at acceptance
    sector_eigenvalues: dict = field(default_factory=dict)
    parity_merged: bool = True

    @property
    def ground(self) -> np.ndarray:
        return self.eigenvectors[0]

    @property
    def gap(self) -> float:
        return float(self.eigenvalues[1] - self.eigenvalues[0])

    def vectors_for(self, parity: Parity):
        return [v for v, p in zip(self.eigenvectors, self.parities) if p is parity]


def _padded_residual(big: BandedSymmetricMatrix, lam: float, vec: np.ndarray) -> float:
    padded = np.zeros(big.dim)
    padded[: vec.shape[0]] = vec
    return float(np.linalg.norm(big.matvec(padded) - lam * padded))


def _solve_sectors(params, L, k):
    out = {}
    for parity in Parity:
        out[parity] = lowest_eigenpairs(assemble_sector(params, parity, L), k)
    return out


def _merge(sectors, k):
    items = []
    for parity in Parity:  # EVEN listed first so stable sort breaks ties Even-first
        vals, vecs = sectors[parity]
        items.extend((float(v), parity, vecs[:, j]) for j, v in enumerate(vals))
    items.sort(key=lambda t: t[0])
    return items[:k]


def converged_spectrum(
    params: Params,
    k: int,
    tol: float = DEFAULT_TOL,
    L_init: int = DEFAULT_L_INIT,
    L_max: int = DEFAULT_L_MAX,
) -> SpectrumResult:
    """Lowest k eigenvalues of Q, refined by doubling the truncation.

    A truncation L is accepted when the merged eigenvalues moved by less than
    ``tol`` since L/2 and every eigenvector, padded into the 2L truncation,
    has residual at most ``10 * tol``.
    """
    if k < 1:
        raise DomainError("k must be at least 1")
    if tol <= 0:
        raise DomainError("tol must be positive")
    L = max(int(L_init), 2, k)
    # monotone decrease under refinement; allow for rounding in the solves
    slack = lambda v: 1e-12 * max(1.0, abs(v))  # noqa: E731
    prev = None
    prev_sectors = None
    while True:
        if L > L_max:
            bracket = None if prev is None else [v for v, _, _ in prev]
            raise SolverError(
                f"truncation cap L_max={L_max} reached before convergence to tol={tol}",
                bracket=bracket,
            )
        sectors = _solve_sectors(params, L, k)
        if prev_sectors is not None:
            for parity in Parity:
                old, new = prev_sectors[parity][0], sectors[parity][0]
                m = min(len(old), len(new))
                bad = [j for j in range(m) if new[j] > old[j] + slack(old[j])]
                if bad:
                    raise SolverError(
                        f"truncation monotonicity violated in {parity.name} sector "
                        f"at L={L} (index {bad[0]})",
                        index=bad[0],
                    )
        merged = _merge(sectors, k)
        if prev is not None and len(prev) == len(merged):
            change = max(abs(a[0] - b[0]) for a, b in zip(merged, prev))
            if change < tol:
                big = {p: assemble_sector(params, p, 2 * L) for p in Parity}
                residuals = np.array([_padded_residual(big[p], v, vec) for v, p, vec in merged])
                if np.all(residuals <= 10 * tol):
                    log.debug("converged at L=%d (change %.3e)", L, change)
                    return SpectrumResult(
                        params=params,
                        eigenvalues=np.array([v for v, _, _ in merged]),
                        parities=tuple(p for _, p, _ in merged),
                        eigenvectors=tuple(vec for _, _, vec in merged),
                        L_used={p: L for p in Parity},
                        residuals=residuals,
                        tol=tol,
                        changes=np.array([abs(a[0] - b[0]) for a, b in zip(merged, prev)]),
                        sector_eigenvalues={p: sectors[p][0].copy() for p in Parity},
                    )
        prev, prev_sectors = merged, sectors
        L *= 2
