"""Closed-form bounds and simplicity certificates for the lowest eigenvalue E.

All certificate formulas are written for beta >= alpha. Parameters with
alpha > beta are first mapped to (beta, alpha): the two operators are unitarily
equivalent, so every verdict and margin is swap invariant by construction.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .closedform import vu1_u1
from .errors import DomainError
from .operator import Params


class Verdict(enum.Enum):
    CERTIFIED = "certified"
    HYPOTHESIS_FAILED = "hypothesis_failed"
    CONDITION_FAILED = "condition_failed"


class Kind(enum.Enum):
    TH1_MULTIPLICITY = "th1"
    TH2_SIMPLE = "th2"
    CO13_SIMPLE = "co13"
    TH3_GAP = "th3"


class RhoVariant(enum.Enum):
    HALF_ANGLE = "half-angle"
    PAPER = "paper"


# --- bounds ---------------------------------------------------------------


def iw_bounds(params: Params, j: int) -> tuple[float, float]:
    """Two-sided bracket for the pair (lambda_{2j-1}, lambda_{2j})."""
    if j < 1:
        raise DomainError("pair index j starts at 1")
    ab = params.alpha * params.beta
    c = math.sqrt((ab - 1.0) / ab)
    return (j - 0.5) * params.lo * c, (j - 0.5) * params.hi * c


def lambda2_upper_iw(params: Params) -> float:
    ab = params.alpha * params.beta
    return 0.5 * params.hi * math.sqrt((ab - 1.0) / ab)


def re_rho(params: Params, variant: RhoVariant = RhoVariant.HALF_ANGLE) -> float:
    """Real part of rho with rho^2 = sqrt(alpha beta - 1) - i."""
    ab = params.alpha * params.beta
    if RhoVariant(variant) is RhoVariant.PAPER:
        # value as printed next to the definition
        return math.sqrt(math.sqrt(ab) * (math.sqrt(ab - 1.0) + 1.0) / 2.0)
    return math.sqrt((math.sqrt(ab) + math.sqrt(ab - 1.0)) / 2.0)


def e_upper(params: Params, variant: RhoVariant = RhoVariant.HALF_ANGLE) -> float:
    """Upper bound for E = lambda_1."""
    a, b = params.alpha, params.beta
    ab = a * b
    skew = abs(a - b) * (ab - 1.0) ** 0.25 / math.sqrt(ab) * re_rho(params, variant)
    return math.sqrt(ab) * math.sqrt(ab - 1.0) / (a + b + skew)


# --- constants for the near-diagonal gap bound ----------------------------


class Lambda2Source(enum.Enum):
    CERTIFIED_IW = "iw"
    NUMERIC = "numeric"
    DIAGONAL = "diagonal"


@dataclass(frozen=True)
class GConstants:
    alpha: float
    lambda2_source: Lambda2Source
    lambda2: float
    g1: float
    g2: float
    g3: float
    g4: float

    @property
    def omega(self) -> float:
        return math.sqrt(self.alpha**2 - 1.0)

    @property
    def E0(self) -> float:
        return 0.5 * self.omega


def g_constants(
    alpha: float,
    lambda2_source: Lambda2Source = Lambda2Source.DIAGONAL,
    lambda2: float | None = None,
    beta: float | None = None,
) -> GConstants:
    """g1..g4 at ``alpha`` (the smaller parameter).

    ``lambda2`` is required for NUMERIC; CERTIFIED_IW needs ``beta`` and takes
    the worst case of g2 over lambda2 in [omega/2, IW upper bound].
    """
    if not alpha > 1:
        raise DomainError(f"g constants require alpha>1, got {alpha}")
    source = Lambda2Source(lambda2_source)
    w = math.sqrt(alpha * alpha - 1.0)
    g1 = (3.0 + math.sqrt(3.0) / w) / (alpha - 1.0)
    g3 = alpha / (2.0 * w)
    g4 = w**1.5 / (4.0 * alpha**1.5)
    if source is Lambda2Source.DIAGONAL:
        lam2 = 0.5 * w
    elif source is Lambda2Source.NUMERIC:
        if lambda2 is None or not lambda2 > 0:
            raise DomainError("NUMERIC source needs a positive lambda2")
        lam2 = float(lambda2)
    else:
        if beta is None:
            raise DomainError("CERTIFIED_IW source needs beta")
        lo, hi = 0.5 * w, lambda2_upper_iw(Params(alpha, beta))
        if lo <= w <= hi:
            raise DomainError("g2 singular: lambda2 interval contains sqrt(alpha^2-1)")
        lam2 = lo if abs(w - lo) < abs(w - hi) else hi
    gap = abs(w - lam2)
    if gap == 0.0:
        raise DomainError("g2 singular: lambda2 equals sqrt(alpha^2-1)")
    g2 = w / (2.0 * gap) * g1 * g1
    return GConstants(alpha, source, lam2, g1, g2, g3, g4)


def kappa_ell(eps: float, g: GConstants) -> tuple[float, float]:
    if eps < 0:
        raise DomainError("eps must be non-negative")
    E0 = g.E0
    kappa = (
        E0 * g.g1**2
        + eps * g.g2 * (E0 * g.g1 + g.g3 + g.g4)
        + eps**2 * 2.0 * E0 * g.g1**2 * g.g2
        + eps**3 * 2.0 * E0 * g.g1 * g.g2**2
    )
    f1 = 1.0 - eps**2 * g.g2
    f2 = 1.0 - 2.0 * eps**2 * g.g2**2
    if eps**2 * g.g2 >= 0.5 or f1 <= 0 or f2 <= 0:
        raise DomainError("ell undefined: need eps^2 g2 < 1/2 and 1 - 2 eps^2 g2^2 > 0")
    return kappa, f1 * math.sqrt(f2)


def gap_bound(eps: float, g: GConstants) -> float:
    """(2 eps / ell) (g4 - eps kappa); a positive value bounds lambda2 - lambda1 below."""
    kappa, ell = kappa_ell(eps, g)
    return 2.0 * eps / ell * (g.g4 - eps * kappa)


# --- certificates ---------------------------------------------------------


@dataclass(frozen=True)
class Hypothesis:
    name: str
    holds: bool
    slack: float


@dataclass(frozen=True)
class Certificate:
    kind: Kind
    params: Params
    hypotheses: tuple
    verdict: Verdict
    margin: float
    details: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.verdict is Verdict.CERTIFIED

    def to_dict(self) -> dict:
        return {
            "theorem": self.kind.value,
            "alpha": self.params.alpha,
            "beta": self.params.beta,
            "hypotheses": [
                {"name": h.name, "holds": h.holds, "slack": h.slack} for h in self.hypotheses
            ],
            "verdict": self.verdict.value,
            "margin": self.margin,
            "details": dict(self.details),
        }


def _verdict(hyps, condition: bool) -> Verdict:
    if not all(h.holds for h in hyps):
        return Verdict.HYPOTHESIS_FAILED
    return Verdict.CERTIFIED if condition else Verdict.CONDITION_FAILED


def th1_certificate(params: Params) -> Certificate:
    """Ground level at most two-fold and even when both parameters exceed 2."""
    a, b = params.alpha, params.beta
    hyps = (Hypothesis("alpha>2", a > 2, a - 2), Hypothesis("beta>2", b > 2, b - 2))
    m = params.lo
    details = {"ground_parity_claim": "even"}
    margin = float("nan")
    if m * m > 2:
        bound = 2.0 * (m * m - 1.0) / (m * m - 2.0)
        details["dimension_bound"] = bound
        margin = 3.0 - bound
    verdict = _verdict(hyps, margin > 0)
    return Certificate(Kind.TH1_MULTIPLICITY, params, hyps, verdict, margin, details)


class ESource(enum.Enum):
    E_UPPER = "eupper"
    NUMERIC = "numeric"


def th2_certificate(
    params: Params,
    e_source: ESource = ESource.E_UPPER,
    E: float | None = None,
    variant: RhoVariant = RhoVariant.HALF_ANGLE,
) -> Certificate:
    """Simplicity from 1/2 > ((beta/2 - E)^-2 + 1) / (alpha^2 - 1).

    With ``e_source=E_UPPER`` E is replaced by its closed-form upper bound
    (corollary form); with NUMERIC the supplied ``E`` is used.
    """
    e_source = ESource(e_source)
    p = params.canonical()
    a, b = p.alpha, p.beta
    kind = Kind.CO13_SIMPLE if e_source is ESource.E_UPPER else Kind.TH2_SIMPLE
    if e_source is ESource.E_UPPER:
        E = e_upper(p, variant)
    elif E is None:
        raise DomainError("NUMERIC E source needs a value")
    gap = 0.5 * b - E
    hyps = [
        Hypothesis("alpha>2", a > 2, a - 2),
        Hypothesis("beta>alpha", b > a, b - a),
    ]
    details = {"E": E, "half_beta_minus_E": gap}
    if e_source is ESource.E_UPPER:
        details["rho_variant"] = RhoVariant(variant).value
    if gap > 0:
        rhs = (gap**-2 + 1.0) / (a * a - 1.0)
        margin = 0.5 - rhs
    else:
        rhs, margin = float("inf"), float("-inf")
    details["rhs"] = rhs
    hyps_ok = all(h.holds for h in hyps)
    hyps.append(Hypothesis("half_beta>E", gap > 0, gap))
    if not hyps_ok:
        verdict = Verdict.HYPOTHESIS_FAILED
    else:
        verdict = Verdict.CERTIFIED if gap > 0 and margin > 0 else Verdict.CONDITION_FAILED
    return Certificate(kind, params, tuple(hyps), verdict, margin, details)


def th3_gap_certificate(
    params: Params,
    lambda2_source: Lambda2Source = Lambda2Source.CERTIFIED_IW,
    lambda2: float | None = None,
) -> Certificate:
    """Near-diagonal gap bound B = (2 eps / ell)(g4 - eps kappa).

    Certified iff the hypotheses hold, eps > 0 and eps kappa < g4 (so B > 0).
    The margin is g4 - eps kappa. Exactly on the diagonal the bound is 0 and
    the verdict is CONDITION_FAILED.
    """
    lambda2_source = Lambda2Source(lambda2_source)
    p = params.canonical()
    a, b = p.alpha, p.beta
    eps = b - a
    nan = float("nan")
    hyps = [Hypothesis("alpha>1", a > 1, a - 1)]
    details: dict = {"eps": eps, "lambda2_source": lambda2_source.value}
    if not a > 1:
        return Certificate(Kind.TH3_GAP, params, tuple(hyps), Verdict.HYPOTHESIS_FAILED, nan, details)
    root_gap = 3.0 * math.sqrt(a * a - 1) - math.sqrt(b * b - 1)
    hyps.append(Hypothesis("sqrt(beta^2-1)<=3sqrt(alpha^2-1)", root_gap >= 0, root_gap))
    try:
        g = g_constants(a, lambda2_source, lambda2=lambda2, beta=b)
    except DomainError as exc:
        hyps.append(Hypothesis("g2_finite", False, nan))
        details["error"] = str(exc)
        return Certificate(Kind.TH3_GAP, params, tuple(hyps), Verdict.HYPOTHESIS_FAILED, nan, details)
    small = 0.5 - eps * eps * g.g2
    hyps.append(Hypothesis("eps^2*g2<1/2", small > 0, small))
    E0 = g.E0
    kappa = (
        E0 * g.g1**2
        + eps * g.g2 * (E0 * g.g1 + g.g3 + g.g4)
        + eps**2 * 2.0 * E0 * g.g1**2 * g.g2
        + eps**3 * 2.0 * E0 * g.g1 * g.g2**2
    )
    margin = g.g4 - eps * kappa
    details.update(
        g1=g.g1, g2=g.g2, g3=g.g3, g4=g.g4, E0=E0, lambda2=g.lambda2, kappa=kappa,
        # constant g3/2 from the closed-form ground-state computation
        vu1u1=vu1_u1(a),
    )
    try:
        _, ell = kappa_ell(eps, g)
        bound = 2.0 * eps / ell * margin
    except DomainError:
        ell, bound = nan, nan
    hyps.append(Hypothesis("ell_defined", not math.isnan(ell), 0.0 if math.isnan(ell) else ell))
    details.update(ell=ell, bound=bound)
    verdict = _verdict(hyps, eps > 0 and margin > 0)
    return Certificate(Kind.TH3_GAP, params, tuple(hyps), verdict, margin, details)


def certify(params: Params, kind, **options) -> Certificate:
    """Dispatch to the certificate for ``kind``."""
    kind = Kind(kind)
    if kind is Kind.TH1_MULTIPLICITY:
        return th1_certificate(params)
    if kind is Kind.TH3_GAP:
        return th3_gap_certificate(
            params, options.get("lambda2_source", Lambda2Source.CERTIFIED_IW), options.get("lambda2")
        )
    if kind is Kind.CO13_SIMPLE:
        return th2_certificate(params, ESource.E_UPPER, variant=options.get("variant", RhoVariant.HALF_ANGLE))
    return th2_certificate(params, ESource.NUMERIC, E=options.get("E"))


# --- region scans -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RegionGrid:
    """Verdicts and margins on an (alpha, beta) grid; ``verdicts[i, j]`` is at
    (alpha_grid[i], beta_grid[j])."""

    kind: Kind
    alpha_grid: np.ndarray
    beta_grid: np.ndarray
    verdicts: np.ndarray  # object array of Verdict
    margins: np.ndarray

    def certified_mask(self) -> np.ndarray:
        return np.vectorize(lambda v: v is Verdict.CERTIFIED, otypes=[bool])(self.verdicts)

    def rows(self):
        """(alpha, beta, verdict, margin) in row-major (alpha, beta) order."""
        for i, a in enumerate(self.alpha_grid):
            for j, b in enumerate(self.beta_grid):
                yield float(a), float(b), self.verdicts[i, j], float(self.margins[i, j])


def _scan_row(args):
    alpha, beta_grid, kind, options = args
    out = []
    for b in beta_grid:
        try:
            p = Params(alpha, b)
        except DomainError:
            out.append((Verdict.HYPOTHESIS_FAILED, float("nan")))
            continue
        opts = dict(options)
        if opts.pop("numeric", False):
            from .eigensolve import converged_spectrum

            spec = converged_spectrum(p, 2, tol=opts.pop("tol", 1e-10))
            opts["lambda2"], opts["E"] = float(spec.eigenvalues[1]), float(spec.eigenvalues[0])
            opts["lambda2_source"] = Lambda2Source.NUMERIC
        opts.pop("tol", None)
        cert = certify(p, kind, **opts)
        out.append((cert.verdict, cert.margin))
    return out


def scan_region(alpha_grid, beta_grid, kind, options: dict | None = None, workers: int = 1) -> RegionGrid:
    """Evaluate one certificate over a grid.

    Points with alpha*beta <= 1 are recorded as HYPOTHESIS_FAILED with NaN
    margin. ``options['numeric']`` feeds solver eigenvalues to th2/th3.
    Results do not depend on ``workers``.
    """
    kind = Kind(kind)
    ag = np.asarray(alpha_grid, dtype=float)
    bg = np.asarray(beta_grid, dtype=float)
    for grid in (ag, bg):
        if grid.ndim != 1 or grid.size == 0 or np.any(np.diff(grid) <= 0):
            raise DomainError("grids must be non-empty and strictly increasing")
    options = dict(options or {})
    tasks = [(float(a), bg, kind, options) for a in ag]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_scan_row, tasks))
    else:
        rows = [_scan_row(t) for t in tasks]
    verdicts = np.empty((ag.size, bg.size), dtype=object)
    margins = np.empty((ag.size, bg.size))
    for i, row in enumerate(rows):
        for j, (v, m) in enumerate(row):
            verdicts[i, j] = v
            margins[i, j] = m
    return RegionGrid(kind, ag, bg, verdicts, margins)
