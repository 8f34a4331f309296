"""Explicit ground states of Q(alpha, alpha) and the inner products built on them.

For alpha > 1 and omega = sqrt(alpha^2 - 1) the diagonal operator has the
two-fold ground level omega/2, spanned by

    u1(x) = n0 exp(-(omega + i) x^2 / (2 alpha)) (1,  i)
    u2(x) = n0 exp(-(omega - i) x^2 / (2 alpha)) (1, -i),   n0 = alpha^(-1/4) (omega/pi)^(1/4) / sqrt(2)

(unitary dilation S_a f(x) = sqrt(a) f(a x)). Inner products are <f, g> =
integral of conj(f) g summed over both spin components. Every closed form
here has a quadrature counterpart in :func:`quadrature_oracle`.
"""

from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate

from .errors import DomainError, OracleError
from .operator import Params, Parity, apply_V, assemble_sector

ORACLE_ABS_ERR = 1e-11


def _omega(alpha: float) -> float:
    if not alpha > 1:
        raise DomainError(f"requires alpha>1, got {alpha}")
    return math.sqrt(alpha * alpha - 1.0)


def vu1_u1(alpha: float) -> float:
    """<u1, V u1> = alpha / (4 omega)."""
    return alpha / (4.0 * _omega(alpha))


def vu1_u2(alpha: float) -> complex:
    """<u1, V u2> = -omega^(3/2) / (4 alpha) * (omega - i)^(-1/2), principal branch."""
    w = _omega(alpha)
    return -(w**1.5) / (4.0 * alpha) / cmath.sqrt(complex(w, -1.0))


def gaussian_x2_moment(alpha: float) -> complex:
    """<v0, x^2 exp(i x^2) v0> = omega^(1/2) (omega - i)^(-3/2) / 2."""
    w = _omega(alpha)
    z = complex(w, -1.0)
    return 0.5 * math.sqrt(w) / (z * cmath.sqrt(z))


@dataclass(frozen=True)
class DiagonalGroundPair:
    """Component formulas of u1, u2 for Q(alpha, alpha)."""

    alpha: float

    def __post_init__(self):
        _omega(self.alpha)

    @property
    def omega(self) -> float:
        return _omega(self.alpha)

    @property
    def energy(self) -> float:
        return 0.5 * self.omega

    def _width(self, which: int) -> complex:
        # Gaussian exponent c in exp(-c x^2 / 2)
        return complex(self.omega, 1.0 if which == 1 else -1.0) / self.alpha

    def _norm(self) -> float:
        return self.alpha**-0.25 * (self.omega / math.pi) ** 0.25 / math.sqrt(2.0)

    def v0(self, x):
        w = self.omega
        return (w / math.pi) ** 0.25 * np.exp(-w * np.asarray(x) ** 2 / 2)

    def u(self, which: int, x) -> np.ndarray:
        """Spin components, shape (2, len(x))."""
        x = np.asarray(x, dtype=float)
        c = self._width(which)
        f = self._norm() * np.exp(-c * x**2 / 2)
        spin2 = 1j if which == 1 else -1j
        return np.stack([f, spin2 * f])

    def Vu(self, which: int, x) -> np.ndarray:
        """V u_i with (p^2 + x^2) exp(-c x^2/2) = (c + (1 - c^2) x^2) exp(-c x^2/2)."""
        x = np.asarray(x, dtype=float)
        c = self._width(which)
        comps = self.u(which, x)
        out = np.zeros_like(comps)
        out[1] = 0.5 * (c + (1 - c * c) * x**2) * comps[1]
        return out

    def cutoff(self) -> float:
        """Half-width beyond which |u|^2 (times x^4) is below 1e-16 relative."""
        rate = self.omega / self.alpha  # |u|^2 ~ exp(-rate x^2)
        return math.sqrt((37.0 + 4.0 * math.log(40.0)) / rate) + 2.0


class Quantity(enum.Enum):
    VU1U1 = "vu1u1"
    VU1U2 = "vu1u2"
    X2MOMENT = "x2moment"
    NORM_U1 = "norm_u1"
    ORTHO_U12 = "ortho_u12"
    VNORM_U1 = "vnorm_u1"


def _quad_complex(fn, lim):
    """2 * integral_0^lim fn; every integrand here is even in x."""
    kw = dict(epsabs=1e-15, epsrel=1e-12, limit=2000)
    with warnings.catch_warnings():
        # quadpack warnings mean the error estimate itself is unreliable
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            re, err_re = integrate.quad(lambda x: fn(x).real, 0.0, lim, **kw)
            im, err_im = integrate.quad(lambda x: fn(x).imag, 0.0, lim, **kw)
        except integrate.IntegrationWarning as exc:
            raise OracleError(f"quadrature unreliable: {str(exc).splitlines()[0]}")
    err = 2.0 * math.hypot(err_re, err_im)
    if not err <= ORACLE_ABS_ERR:
        raise OracleError(f"quadrature error estimate {err:.2e} above {ORACLE_ABS_ERR:.0e}")
    return complex(2.0 * re, 2.0 * im)


def quadrature_oracle(alpha: float, which) -> complex:
    """Adaptive Gauss-Kronrod evaluation of the requested inner product.

    Uses only the explicit component formulas of u1, u2, v0; no closed-form
    integrals. The integration interval covers the Gaussian tail to 1e-16.
    Raises OracleError instead of returning an unverified value; in practice
    that happens only for alpha within about 0.02 of 1, where the integrands
    become wide chirps.
    """
    which = Quantity(which)
    pair = DiagonalGroundPair(alpha)
    lim = pair.cutoff()

    def inner(f, g):
        return lambda x: np.sum(np.conj(f(x)) * g(x))

    u1 = lambda x: pair.u(1, np.atleast_1d(x))  # noqa: E731
    u2 = lambda x: pair.u(2, np.atleast_1d(x))  # noqa: E731
    Vu1 = lambda x: pair.Vu(1, np.atleast_1d(x))  # noqa: E731
    Vu2 = lambda x: pair.Vu(2, np.atleast_1d(x))  # noqa: E731

    if which is Quantity.NORM_U1:
        return _quad_complex(inner(u1, u1), lim)
    if which is Quantity.ORTHO_U12:
        return _quad_complex(inner(u1, u2), lim)
    if which is Quantity.VU1U1:
        return _quad_complex(inner(u1, Vu1), lim)
    if which is Quantity.VU1U2:
        return _quad_complex(inner(u1, Vu2), lim)
    if which is Quantity.VNORM_U1:
        return complex(math.sqrt(_quad_complex(inner(Vu1, Vu1), lim).real), 0.0)
    # X2MOMENT: <v0, x^2 e^{i x^2} v0>; v0 decays like exp(-omega x^2)
    lim0 = math.sqrt(40.0 / pair.omega) + 2.0
    return _quad_complex(lambda x: pair.v0(x) ** 2 * x * x * np.exp(1j * x * x), lim0)


def hermite_functions(nmax: int, x) -> np.ndarray:
    """phi_0 .. phi_nmax on the grid x (rows), by the stable three-term recurrence."""
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1, x.size))
    out[0] = math.pi**-0.25 * np.exp(-(x**2) / 2)
    if nmax >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for n in range(1, nmax):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * x * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


class UBasis(NamedTuple):
    u1: np.ndarray
    u2: np.ndarray
    residuals: tuple  # ||(Q0 - E0) u_i|| in the truncated even sector


def _overlaps(pair, L, h, lim):
    x = np.arange(-lim, lim + h / 2, h)
    phi = hermite_functions(2 * L - 2, x)[0::2]  # even levels only
    vecs = []
    for which in (1, 2):
        comps = pair.u(which, x)
        v = np.empty(2 * L, dtype=complex)
        v[0::2] = phi @ comps[0] * h
        v[1::2] = phi @ comps[1] * h
        vecs.append(v)
    return vecs


def u_vectors_in_basis(alpha: float, L: int) -> UBasis:
    """Even-sector coefficients of u1, u2 from trapezoid quadrature against phi_n.

    The trapezoid rule converges geometrically for these entire, Gaussian-decaying
    integrands; the step is halved until the overlaps stop changing.
    """
    if L < 4:
        raise DomainError("need L >= 4 levels")
    pair = DiagonalGroundPair(alpha)
    lim = max(pair.cutoff(), math.sqrt(2.0 * (2 * L) + 1) + 10.0)
    h = 0.1
    prev = _overlaps(pair, L, h, lim)
    for _ in range(8):
        h /= 2
        cur = _overlaps(pair, L, h, lim)
        if max(np.max(np.abs(a - b)) for a, b in zip(cur, prev)) < 1e-14:
            break
        prev = cur
    else:
        raise OracleError("basis overlaps did not stabilise under step refinement")
    q0 = assemble_sector(Params(alpha, alpha), Parity.EVEN, L)
    res = tuple(float(np.linalg.norm(q0.matvec(v) - pair.energy * v)) for v in cur)
    return UBasis(cur[0], cur[1], res)


def basis_expectation_V(vec_a, vec_b) -> complex:
    """<a, V b> for even-sector coefficient vectors."""
    return complex(np.vdot(vec_a, apply_V(Parity.EVEN, vec_b)))
