"""Numerical checks of the intermediate inequalities, symmetry checks, and
spectral zeta brackets."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import closedform
from .certificates import g_constants, iw_bounds
from .eigensolve import DEFAULT_TOL, SpectrumResult, converged_spectrum
from .errors import DomainError
from .operator import Params, Parity, apply_number

NAN = float("nan")


def check_ptb1(params: Params, ground, parity: Parity = Parity.EVEN) -> float:
    """||g||^2 / (m^2 - 1) - <g, N g> with m = min(alpha, beta).

    NaN when m <= 1 (the inequality is not available there).
    """
    m = params.lo
    if not m > 1:
        return NAN
    g = np.asarray(ground)
    norm2 = float(np.vdot(g, g).real)
    return norm2 / (m * m - 1.0) - float(np.vdot(g, apply_number(parity, g)).real)


def check_parity_of_ground(params: Params, spec: SpectrumResult) -> bool:
    """True iff the even-sector minimum lies below the odd one by more than 10 tol."""
    even = spec.sector_eigenvalues[Parity.EVEN]
    odd = spec.sector_eigenvalues[Parity.ODD]
    if len(even) == 0 or len(odd) == 0:
        raise DomainError("spectrum lacks one of the parity sectors")
    return bool(even[0] < odd[0] - 10 * spec.tol)


def qhat_component(params: Params, ground, parity: Parity = Parity.EVEN) -> complex:
    """Level-0 coefficient of the spin carrying max(alpha, beta).

    This is the projection onto ker N restricted to the larger-coefficient spin,
    written in the frame where that spin is the second one.
    """
    if parity is Parity.ODD:
        return 0j
    g = np.asarray(ground)
    return complex(g[1] if params.beta >= params.alpha else g[0])


def check_qhat_bound(params: Params, ground, E: float, parity: Parity = Parity.EVEN) -> float:
    """(beta/2 - E)^-2 ||g||^2 / (alpha^2 - 1) - ||Qhat g||^2, canonical alpha <= beta.

    NaN when beta/2 <= E or alpha <= 1.
    """
    a, b = params.lo, params.hi
    if not (a > 1 and 0.5 * b > E):
        return NAN
    g = np.asarray(ground)
    norm2 = float(np.vdot(g, g).real)
    rhs = (0.5 * b - E) ** -2 / (a * a - 1.0) * norm2
    return rhs - abs(qhat_component(params, g, parity)) ** 2


def check_swap_symmetry(params: Params, k: int, tol: float = DEFAULT_TOL) -> float:
    """max_j |lambda_j(alpha, beta) - lambda_j(beta, alpha)|."""
    if params.alpha == params.beta:
        return 0.0
    a = converged_spectrum(params, k, tol).eigenvalues
    b = converged_spectrum(params.swapped(), k, tol).eigenvalues
    return float(np.max(np.abs(a - b)))


# --- spectral zeta ----------------------------------------------------------


def hurwitz_bracket(s: float, q: float, explicit: int = 2000) -> tuple[float, float]:
    """Rigorous bracket for sum_{i>=0} (q + i)^-s, s > 1, q > 0.

    ``explicit`` terms are summed directly; the rest is bounded by the
    Euler-Maclaurin estimates I + f/2 <= tail <= I + f/2 - f'/12, valid for
    completely monotone f.
    """
    if not s > 1:
        raise DomainError("divergent: s must exceed 1")
    i = np.arange(explicit, dtype=float)
    head = math.fsum(((q + i) ** -s)[::-1])
    x = q + explicit
    f = x**-s
    integral = x ** (1.0 - s) / (s - 1.0)
    fprime = -s * x ** (-s - 1.0)
    lo = head + integral + 0.5 * f
    hi = lo - fprime / 12.0
    # one ulp-scale widening per side for rounding in the explicit sum
    pad = 4 * np.finfo(float).eps * hi
    return lo - pad, hi + pad


@dataclass(frozen=True)
class ZetaBracket:
    s: float
    n_terms: int
    partial: float
    tail_low: float
    tail_high: float

    @property
    def low(self) -> float:
        return self.partial + self.tail_low

    @property
    def high(self) -> float:
        return self.partial + self.tail_high

    @property
    def width(self) -> float:
        return self.tail_high - self.tail_low

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.low - slack <= value <= self.high + slack

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "n_terms": self.n_terms,
            "partial": self.partial,
            "tail_low": self.tail_low,
            "tail_high": self.tail_high,
            "low": self.low,
            "high": self.high,
        }


def zeta_partial(params: Params, s: float, n_terms: int, tol: float = DEFAULT_TOL) -> ZetaBracket:
    """Bracket for sum_n lambda_n^-s: partial sum plus IW-bounded tail.

    The tail terms also absorb the solver allowance on the partial sum
    (last refinement change plus rounding per eigenvalue).

    Pairs j > N/2 contribute between 2 ((j - 1/2) M c)^-s and
    2 ((j - 1/2) m c)^-s with m, M = min, max(alpha, beta) and
    c = sqrt((alpha beta - 1) / (alpha beta)).
    """
    if not s > 1:
        raise DomainError("divergent: zeta brackets need s > 1")
    if n_terms < 2 or n_terms % 2:
        raise DomainError("n_terms must be even and >= 2")
    spec = converged_spectrum(params, n_terms, tol)
    lam = spec.eigenvalues
    partial = math.fsum(lam**-s)
    # truncation only raises eigenvalues; rounding moves them both ways
    rounding = 4 * np.finfo(float).eps * lam
    below = math.fsum(lam**-s - (lam + rounding) ** -s)
    above = math.fsum((lam - spec.changes - rounding) ** -s - lam**-s)
    ab = params.alpha * params.beta
    c = math.sqrt((ab - 1.0) / ab)
    h_lo, h_hi = hurwitz_bracket(s, n_terms / 2 + 0.5)
    tail_low = 2.0 * (params.hi * c) ** -s * h_lo - below
    tail_high = 2.0 * (params.lo * c) ** -s * h_hi + above
    return ZetaBracket(float(s), int(n_terms), float(partial), float(tail_low), float(tail_high))


def diagonal_zeta2(alpha: float) -> float:
    """Exact zeta_Q(2) for alpha = beta: pi^2 / (alpha^2 - 1)."""
    return math.pi**2 / (alpha * alpha - 1.0)


# --- verification suites ------------------------------------------------------

SUITES = ("ptb1", "parity", "qhat", "swap", "closedform", "iw")


def _record(check, params, margin, passed):
    return {
        "check": check,
        "params": {"alpha": params.alpha, "beta": params.beta},
        "margin": float(margin),
        "pass": None if passed is None else bool(passed),
    }


def _ground_space(spec: SpectrumResult):
    """Eigenvectors of the (possibly degenerate) lowest level."""
    E = spec.eigenvalues[0]
    return [
        (vec, par)
        for val, vec, par in zip(spec.eigenvalues, spec.eigenvectors, spec.parities)
        if val - E <= 1e3 * spec.tol
    ]


def run_suite(name: str, params: Params, tol: float = DEFAULT_TOL) -> list[dict]:
    """Run one named check suite; ``pass`` is None where a check does not apply."""
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}")
    allow = 10 * tol
    out = []
    if name == "closedform":
        return _closedform_records(params)
    if name == "swap":
        dev = check_swap_symmetry(params, 6, tol)
        return [_record("swap", params, allow - dev, dev <= allow)]
    spec = converged_spectrum(params, 10, tol)
    if name == "iw":
        for j in range(1, 6):
            lo, hi = iw_bounds(params, j)
            for idx in (2 * j - 2, 2 * j - 1):
                lam = spec.eigenvalues[idx]
                m = min(lam - lo, hi - lam)
                out.append(_record(f"iw_lambda{idx + 1}", params, m, m >= -allow))
        return out
    if name == "parity":
        even = spec.sector_eigenvalues[Parity.EVEN][0]
        odd = spec.sector_eigenvalues[Parity.ODD][0]
        applies = params.alpha > 2 and params.beta > 2
        ok = check_parity_of_ground(params, spec)
        return [_record("ground_even", params, odd - even, ok if applies else None)]
    E = float(spec.eigenvalues[0])
    for idx, (vec, par) in enumerate(_ground_space(spec)):
        if name == "ptb1":
            m = check_ptb1(params, vec, par)
        else:
            m = check_qhat_bound(params, vec, E, par)
        applies = not math.isnan(m)
        out.append(_record(f"{name}_ground{idx}", params, m, (m >= -allow) if applies else None))
    return out


def _closedform_records(params: Params) -> list[dict]:
    alpha = params.alpha
    out = []
    if not alpha > 1:
        return [_record("closedform", params, NAN, None)]
    Q = closedform.Quantity
    pairs = [
        ("vu1u1", closedform.vu1_u1(alpha), Q.VU1U1),
        ("vu1u2", closedform.vu1_u2(alpha), Q.VU1U2),
        ("x2moment", closedform.gaussian_x2_moment(alpha), Q.X2MOMENT),
        ("norm_u1", 1.0, Q.NORM_U1),
        ("ortho_u12", 0.0, Q.ORTHO_U12),
    ]
    for label, closed, which in pairs:
        err = abs(closed - closedform.quadrature_oracle(alpha, which))
        out.append(_record(label, params, 1e-10 - err, err <= 1e-10))
    g = g_constants(alpha)
    err = abs(abs(closedform.vu1_u2(alpha)) - g.g4)
    out.append(_record("vu1u2_modulus_g4", params, 1e-12 - err, err <= 1e-12))
    vnorm = closedform.quadrature_oracle(alpha, Q.VNORM_U1).real
    out.append(_record("vnorm_le_g1E0", params, g.g1 * g.E0 - vnorm, vnorm <= g.g1 * g.E0))
    basis = closedform.u_vectors_in_basis(alpha, 64)
    res = max(basis.residuals)
    out.append(_record("eigen_equation", params, 1e-8 - res, res <= 1e-8))
    return out
