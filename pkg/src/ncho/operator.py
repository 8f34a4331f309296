"""The oscillator Q(alpha, beta) in the Hermite basis, split by parity.

Q acts on C^2 (x) L^2(R). In ladder form

    Q = A (N + 1/2) + J (a^2 - a*^2) / 2,   A = diag(alpha, beta),  J = [[0, -1], [1, 0]]

so Q only couples oscillator levels n and n +- 2 and commutes with parity.
Within one parity sector the basis e_s (x) phi_n is flattened as
``k = 2*level + (spin - 1)`` with ``n = 2*level`` (even) or ``2*level + 1``
(odd), which gives a real symmetric matrix of half-bandwidth 3.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import DomainError

HALF_BANDWIDTH = 3


@dataclass(frozen=True)
class Params:
    """Model parameters; requires alpha, beta > 0 and alpha*beta > 1."""

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError(f"alpha and beta must be finite, got ({a}, {b})")
        if a <= 0 or b <= 0:
            raise DomainError(f"requires alpha>0 and beta>0, got ({a}, {b})")
        if a * b <= 1:
            raise DomainError(f"requires alpha*beta>1, got alpha*beta={a * b!r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def epsilon(self) -> float:
        return self.beta - self.alpha

    @property
    def lo(self) -> float:
        return min(self.alpha, self.beta)

    @property
    def hi(self) -> float:
        return max(self.alpha, self.beta)

    def swapped(self) -> "Params":
        return Params(self.beta, self.alpha)

    def canonical(self) -> "Params":
        """Return the equivalent parameters with beta >= alpha."""
        return self if self.beta >= self.alpha else self.swapped()


class Parity(enum.Enum):
    EVEN = 0
    ODD = 1

    @property
    def offset(self) -> int:
        return self.value

    def levels_to_n(self, level):
        return 2 * level + self.value


@dataclass(frozen=True)
class BasisIndex:
    level: int
    spin: int
    parity: Parity

    def __post_init__(self):
        if self.level < 0:
            raise DomainError("level must be non-negative")
        if self.spin not in (1, 2):
            raise DomainError("spin must be 1 or 2")

    @property
    def n(self) -> int:
        return 2 * self.level + self.parity.offset

    @property
    def flat(self) -> int:
        return 2 * self.level + (self.spin - 1)

    @classmethod
    def from_flat(cls, k: int, parity: Parity) -> "BasisIndex":
        return cls(k // 2, k % 2 + 1, parity)


_J = ((0.0, -1.0), (1.0, 0.0))


def matrix_element(params: Params, row: BasisIndex, col: BasisIndex) -> float:
    """<e_i phi_m, Q e_j phi_n> for basis states of the same parity."""
    if row.parity is not col.parity:
        raise DomainError("parity sectors do not couple")
    i, m = row.spin, row.n
    j, n = col.spin, col.n
    value = 0.0
    if m == n and i == j:
        value += (params.alpha if i == 1 else params.beta) * (n + 0.5)
    jij = _J[i - 1][j - 1]
    if jij:
        if m == n - 2:
            value += jij * 0.5 * math.sqrt(n * (n - 1))
        elif m == n + 2:
            value -= jij * 0.5 * math.sqrt((n + 1) * (n + 2))
    return value


@dataclass(frozen=True, eq=False)
class BandedSymmetricMatrix:
    """Real symmetric band matrix in lower storage: ``bands[d, j] = M[j + d, j]``.

    Entries of ``bands[d]`` beyond ``dim - d`` are padding and kept at zero.
    """

    bands: np.ndarray

    def __post_init__(self):
        bands = np.array(self.bands, dtype=float)
        if bands.ndim != 2 or bands.shape[1] < 1:
            raise DomainError("bands must be a (half_bandwidth+1, dim) array")
        if not np.all(np.isfinite(bands)):
            raise DomainError("matrix entries must be finite")
        n = bands.shape[1]
        for d in range(1, bands.shape[0]):
            bands[d, max(n - d, 0):] = 0.0
        bands.flags.writeable = False
        object.__setattr__(self, "bands", bands)

    @property
    def dim(self) -> int:
        return self.bands.shape[1]

    @property
    def half_bandwidth(self) -> int:
        return self.bands.shape[0] - 1

    @classmethod
    def from_dense(cls, dense, half_bandwidth: int) -> "BandedSymmetricMatrix":
        dense = np.asarray(dense, dtype=float)
        if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
            raise DomainError("need a square matrix")
        if not np.array_equal(dense, dense.T):
            raise DomainError("matrix is not symmetric")
        n = dense.shape[0]
        if np.any(np.tril(dense, -half_bandwidth - 1)):
            raise DomainError(f"entries outside half-bandwidth {half_bandwidth}")
        bands = np.zeros((half_bandwidth + 1, n))
        for d in range(min(half_bandwidth + 1, n)):
            bands[d, : n - d] = np.diagonal(dense, -d)
        return cls(bands)

    def to_dense(self) -> np.ndarray:
        n = self.dim
        out = np.zeros((n, n))
        for d in range(min(self.half_bandwidth + 1, n)):
            diag = self.bands[d, : n - d]
            idx = np.arange(n - d)
            out[idx + d, idx] = diag
            out[idx, idx + d] = diag
        return out

    def matvec(self, v) -> np.ndarray:
        v = np.asarray(v)
        n = self.dim
        if v.shape[0] != n:
            raise DomainError(f"vector length {v.shape[0]} does not match dim {n}")
        out = self.bands[0].reshape((n,) + (1,) * (v.ndim - 1)) * v
        for d in range(1, min(self.half_bandwidth + 1, n)):
            b = self.bands[d, : n - d].reshape((n - d,) + (1,) * (v.ndim - 1))
            out[d:] += b * v[: n - d]
            out[: n - d] += b * v[d:]
        return out

    def triplets(self) -> Iterator[tuple[int, int, float]]:
        """Nonzero entries (row, col, value) of the full matrix, row-major."""
        dense = self.to_dense()
        rows, cols = np.nonzero(dense)
        for r, c in zip(rows, cols):
            yield int(r), int(c), float(dense[r, c])

    def write_triplets(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for r, c, v in self.triplets():
                fh.write(f"{r} {c} {v!r}\n")


def assemble_sector(params: Params, parity: Parity, L: int) -> BandedSymmetricMatrix:
    """Compression of Q onto levels 0..L-1 of one parity sector (dim 2L)."""
    if L < 2:
        raise DomainError(f"need at least 2 levels per sector, got L={L}")
    n = parity.levels_to_n(np.arange(L, dtype=float))
    bands = np.zeros((HALF_BANDWIDTH + 1, 2 * L))
    bands[0, 0::2] = params.alpha * (n + 0.5)
    bands[0, 1::2] = params.beta * (n + 0.5)
    # <e_i phi_{n+2}, Q e_j phi_n> = -J_ij sqrt((n+1)(n+2)) / 2
    up = 0.5 * np.sqrt((n[:-1] + 1.0) * (n[:-1] + 2.0))
    # (level+1, spin 1) x (level, spin 2): offset 1, J_12 = -1
    bands[1, 1:-1:2] = up
    # (level+1, spin 2) x (level, spin 1): offset 3, J_21 = +1
    bands[3, 0:-3:2] = -up
    return BandedSymmetricMatrix(bands)


def _check_layout(v) -> np.ndarray:
    v = np.asarray(v)
    if v.ndim < 1 or v.shape[0] % 2:
        raise DomainError("coefficient vector must have even length (two spins per level)")
    return v


def number_diagonal(parity: Parity, dim: int) -> np.ndarray:
    """Oscillator number n for each flat index of a sector of size ``dim``."""
    return np.repeat(parity.levels_to_n(np.arange(dim // 2)), 2).astype(float)


def apply_number(parity: Parity, v) -> np.ndarray:
    """N = a*a on a sector coefficient vector."""
    v = _check_layout(v)
    n = number_diagonal(parity, v.shape[0])
    return n.reshape((-1,) + (1,) * (v.ndim - 1)) * v


def apply_V(parity: Parity, v) -> np.ndarray:
    """V = diag(0, 1) (p^2 + x^2) / 2 = diag(0, 1) (N + 1/2)."""
    v = _check_layout(v)
    f = number_diagonal(parity, v.shape[0]) + 0.5
    f[0::2] = 0.0
    return f.reshape((-1,) + (1,) * (v.ndim - 1)) * v


def swap_vector(parity: Parity, v) -> np.ndarray:
    """Map a sector vector of Q(alpha, beta) to the matching vector of Q(beta, alpha).

    The equivalence is spin exchange followed by the Fourier transform, which
    acts on phi_n as (-i)^n; inside one parity sector that is a real sign
    (-1)^level up to a global phase.
    """
    v = _check_layout(v)
    out = np.empty_like(v)
    out[0::2] = v[1::2]
    out[1::2] = v[0::2]
    sign = (-1.0) ** np.arange(v.shape[0] // 2)
    out[0::2] *= sign.reshape((-1,) + (1,) * (v.ndim - 1))
    out[1::2] *= sign.reshape((-1,) + (1,) * (v.ndim - 1))
    return out
