"""Verification harness: quadrature normalization, Kolmogorov-Smirnov and
moment checks, construction-equivalence and invariance experiments, and
machine-readable report generation.

The default suite is the package's acceptance gate: every closed-form
constant is integrated against an independent quadrature, every sampler is
tested against either an analytic CDF or an alternative construction of the
same law, and the two known printed-variant formula errors are demonstrated
quantitatively (see ERRATA.md).

Statistical policy: KS checks use a per-check p-threshold of 0.005 and at
most ~20 KS statistics run per suite; a stochastic check that fails is rerun
once on an independent derived stream and only a double failure fails the
suite.  A correct implementation therefore passes with probability well
above 0.9 while genuine distributional errors at the tested sample sizes
drive p far below threshold.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.interpolate import PchipInterpolator
from scipy.special import betainc, betaln, ndtr, ndtri

from ._version import __version__
from .algebra import (
    AlgebraTag,
    DivMatrix,
    HermitianPD,
    _conj_t_raw,
    _hermitize_raw,
    _identity_raw,
    _matmul_raw,
)
from .distributions import (
    BetaIIParams,
    MatricTParams,
    MatrixMTParams,
    RngStream,
    ScaleMixtureSpec,
    WishartParams,
    logpdf_beta2_matric,
    logpdf_beta2_multivariate,
    logpdf_matric_t,
    logpdf_matrix_mt,
    radial_logpdf_matric_t,
    radial_logpdf_matrix_mt,
    sample_beta2_matric,
    sample_elliptical_t,
    sample_matric_t,
    sample_matrix_mt,
    sample_wishart,
)
from .spectral import (
    eigenvalues_batch,
    log_joint_eig_beta2,
    log_joint_eig_mv,
    log_joint_sv_matric_t,
    singular_values_batch,
)
from .special import log_gamma, log_gamma_ratio_identity_gap

__all__ = [
    "ks_one_sample",
    "ks_two_sample",
    "moment_check",
    "MomentResult",
    "quadrature_mass_scalar",
    "quadrature_mass_row",
    "quadrature_mass_positive",
    "quadrature_mass_eig2",
    "CheckSpec",
    "CheckResult",
    "VerifyReport",
    "default_suite",
    "run_suite",
]

_LOG_PI = math.log(math.pi)
_LOG_2 = math.log(2.0)


# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov machinery.
# ---------------------------------------------------------------------------


def _kolmogorov_sf(x: float) -> float:
    """Survival function of the Kolmogorov limit distribution.

    Two complementary series are used on either side of x ~ 1.18 so both
    tails converge in a handful of terms; agrees with independent library
    implementations to machine precision.
    """
    if x <= 0.0:
        return 1.0
    if x < 1.18:
        t = math.exp(-math.pi * math.pi / (8.0 * x * x))
        cdf = math.sqrt(2.0 * math.pi) / x * (t + t ** 9 + t ** 25 + t ** 49)
        return max(0.0, 1.0 - cdf)
    t = math.exp(-2.0 * x * x)
    sf = 2.0 * (t - t ** 4 + t ** 9 - t ** 16 + t ** 25)
    return min(1.0, max(0.0, sf))


def _check_sorted(x: np.ndarray, name: str) -> None:
    if np.any(np.diff(x) < 0.0):
        raise ValueError(f"{name} must be sorted ascending")


def ks_one_sample(samples, cdf) -> tuple:
    """One-sample KS test of sorted samples against a reference CDF.

    Returns (D, p) with D the sup-distance between the empirical CDF and the
    reference and p from the asymptotic Kolmogorov distribution at sqrt(N)*D.
    """
    x = np.asarray(samples, dtype=float)
    n = x.size
    if n < 100:
        raise ValueError("need at least 100 samples")
    _check_sorted(x, "samples")
    try:
        f = np.asarray(cdf(x), dtype=float)
        if f.shape != x.shape:
            raise TypeError
    except TypeError:
        f = np.asarray([cdf(v) for v in x], dtype=float)
    i = np.arange(1, n + 1)
    d_plus = float((i / n - f).max())
    d_minus = float((f - (i - 1) / n).max())
    d = max(d_plus, d_minus)
    return d, _kolmogorov_sf(math.sqrt(n) * d)


def ks_two_sample(a, b) -> tuple:
    """Two-sample KS test of two sorted samples.

    Returns (D, p) with the asymptotic p evaluated at sqrt(nm/(n+m)) * D.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_sorted(a, "a")
    _check_sorted(b, "b")
    na, nb = a.size, b.size
    if min(na, nb) < 1:
        raise ValueError("empty sample")
    allv = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, allv, side="right") / na
    cdf_b = np.searchsorted(b, allv, side="right") / nb
    d = float(np.abs(cdf_a - cdf_b).max())
    en = na * nb / (na + nb)
    return d, _kolmogorov_sf(math.sqrt(en) * d)


@dataclass(frozen=True)
class MomentResult:
    passed: bool
    z: float
    mean: float
    se: float


def moment_check(samples, expected: float, tol_se: float, estimator=None) -> MomentResult:
    """Compare the sample mean of a statistic against its expected value,
    in units of the Monte Carlo standard error."""
    if estimator is not None:
        vals = np.asarray([estimator(s) for s in samples], dtype=float)
    else:
        vals = np.asarray(samples, dtype=float)
    n = vals.size
    mean = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(n))
    if se == 0.0:
        z = 0.0 if mean == expected else math.inf
    else:
        z = (mean - expected) / se
    return MomentResult(abs(z) <= tol_se, z, mean, se)


# ---------------------------------------------------------------------------
# Quadrature normalization.
# ---------------------------------------------------------------------------


def _quad(fn, lo, hi, epsabs=1e-10, epsrel=1e-10, target=1e-8) -> float:
    out = integrate.quad(fn, lo, hi, epsabs=epsabs, epsrel=epsrel,
                         limit=300, full_output=1)
    val, abserr = out[0], out[1]
    if len(out) > 3 or not np.isfinite(val) or abserr > max(target, 1e-6 * abs(val)):
        raise RuntimeError(
            f"quadrature did not converge (value {val}, error estimate {abserr})"
        )
    return val


def quadrature_mass_row(log_density_radial, tag: AlgebraTag, n: int = 1) -> float:
    """Total mass of an isotropic density of a 1 x n algebra row matrix.

    The beta*n dimensional integral reduces radially against the surface
    area of the unit sphere (the volume of the m = 1 orthonormal-frame
    manifold), so one 1-D quadrature measures the normalizing constant:

        mass = int_0^inf  2 pi^(d/2)/Gamma(d/2) * r^(d-1) * pdf(r) dr

    with d = beta * n.
    """
    beta = AlgebraTag(tag).beta
    dim = beta * n
    log_surface = _LOG_2 + dim / 2.0 * _LOG_PI - log_gamma(dim / 2.0)

    def integrand(r: float) -> float:
        if r <= 0.0:
            return 0.0
        return math.exp(log_surface + (dim - 1) * math.log(r)
                        + log_density_radial(r))

    return _quad(integrand, 0.0, np.inf)


def quadrature_mass_scalar(log_density_radial, tag: AlgebraTag) -> float:
    """Mass of an isotropic scalar density over the algebra (beta real
    coefficients), by radial reduction."""
    return quadrature_mass_row(log_density_radial, tag, 1)


def quadrature_mass_positive(log_density) -> float:
    """Mass of a density on the positive half line.

    Integrates in u with x = u^2, which removes the integrable endpoint
    singularity every beta type II scalar kernel can have at the origin.
    """

    def integrand(u: float) -> float:
        if u <= 0.0:
            return 0.0
        x = u * u
        if x == 0.0:
            return 0.0
        return math.exp(log_density(x) + math.log(2.0 * u))

    return _quad(integrand, 0.0, np.inf)


def quadrature_mass_eig2(log_joint2) -> float:
    """Mass of a two-point ordered-spectrum density over v1 > v2 > 0.

    `log_joint2(v1, v2)` evaluates the joint log density on the open cone.
    Integration runs over the ordered cone directly (inner variable up to the
    outer one), so the Vandermonde kink never crosses the domain interior.
    """

    def integrand(v2: float, v1: float) -> float:
        if v2 <= 0.0 or v2 >= v1:
            return 0.0
        return math.exp(log_joint2(v1, v2))

    val, err = integrate.dblquad(integrand, 0.0, np.inf, 0.0, lambda v1: v1,
                                 epsabs=1e-7, epsrel=1e-7)
    if not np.isfinite(val) or err > 1e-5:
        raise RuntimeError(f"2-D quadrature did not converge (error {err})")
    return val


# ---------------------------------------------------------------------------
# Check plumbing.
# ---------------------------------------------------------------------------

_STOCHASTIC_KINDS = ("ks1", "ks2", "moment")
_KINDS = ("normalization", "ks1", "ks2", "moment", "identity")


@dataclass(frozen=True)
class CheckSpec:
    """One named check: what to run, at what budget, against what threshold."""

    name: str
    kind: str
    params: dict = field(default_factory=dict)
    budget: int | None = None
    threshold: float = 0.005

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown check kind {self.kind!r}")
        if self.kind in ("ks1", "ks2"):
            if not 0.0 < self.threshold < 1.0:
                raise ValueError("KS thresholds are p-values in (0, 1)")
        elif not self.threshold > 0.0:
            raise ValueError("threshold must be a positive tolerance")

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "params": dict(self.params),
            "budget": self.budget,
            "threshold": self.threshold,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "CheckSpec":
        return cls(
            str(obj["name"]),
            str(obj["kind"]),
            dict(obj.get("params", {})),
            obj.get("budget"),
            float(obj["threshold"]),
        )


@dataclass
class CheckResult:
    name: str
    kind: str
    statistic: float
    threshold: float
    passed: bool
    attempts: int
    detail: dict
    wall_time_s: float

    def to_json_dict(self) -> dict:
        # Wall time deliberately stays out of the serialized form so that
        # reports from identical seeds compare byte-identical.
        return {
            "name": self.name,
            "kind": self.kind,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "passed": self.passed,
            "attempts": self.attempts,
            "detail": self.detail,
        }


@dataclass
class VerifyReport:
    checks: list
    seed: int
    stream: int

    @property
    def overall_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def total_wall_time_s(self) -> float:
        return sum(c.wall_time_s for c in self.checks)

    def to_json_dict(self) -> dict:
        return {
            "version": __version__,
            "seed": self.seed,
            "stream": self.stream,
            "overall_pass": self.overall_pass,
            "checks": [c.to_json_dict() for c in
                       sorted(self.checks, key=lambda c: c.name)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")


# ---------------------------------------------------------------------------
# Individual check runners.  Each returns (statistic, passed, detail).
# ---------------------------------------------------------------------------

# Reference (D, p) pairs for the KS implementations, computed once with an
# independent library oracle on fixed synthetic datasets (regenerated below
# at run time); the pair ordering matches _KS_REFERENCE_CASES.
_KS_REFERENCE_PAIRS = (
    (0.000500000000000056, 1.0),
    (0.0013988808952837715, 1.0),
    (0.06080987637998653, 0.04955316747499797),
    (0.053333333333333344, 0.5021045630694755),
    (0.0020000000000000018, 1.0),
)


def _ks_reference_cases():
    n = 1000
    yield "uniform-grid", ks_one_sample((np.arange(1, n + 1) - 0.5) / n, lambda v: v)
    m = 500
    q = ndtri((np.arange(1, m + 1) - 0.3) / (m + 0.4))
    yield "normal-quantiles", ks_one_sample(q, ndtr)
    yield "normal-shifted", ks_one_sample(q + 0.15, ndtr)
    a = (np.arange(1, 401) - 0.5) / 400
    b = ((np.arange(1, 601) - 0.5) / 600) ** 1.15
    yield "two-sample-warp", ks_two_sample(a, b)
    a = (np.arange(1, 301) - 0.5) / 300
    b = (np.arange(1, 501) - 0.5) / 500
    yield "two-sample-grids", ks_two_sample(a, b)


def _run_ks_reference(spec: CheckSpec, rng: RngStream):
    detail = {}
    worst = 0.0
    for (name, (d, p)), (d_ref, p_ref) in zip(_ks_reference_cases(),
                                              _KS_REFERENCE_PAIRS):
        gap = max(abs(d - d_ref), abs(p - p_ref))
        detail[name] = {"D": d, "p": p, "gap": gap}
        worst = max(worst, gap)
    return worst, worst < spec.threshold, detail


def _run_gamma_ratio(spec: CheckSpec, rng: RngStream):
    gen = rng.generator
    budget = spec.budget or 200
    worst = 0.0
    for _ in range(budget):
        tag = AlgebraTag(int(gen.choice([1, 2, 4, 8])))
        m = int(gen.integers(1, 6))
        n = int(gen.integers(1, 6))
        nu = (m - 1) + float(gen.uniform(0.25, 6.0))
        worst = max(worst, abs(log_gamma_ratio_identity_gap(tag, m, n, nu)))
    return worst, worst < spec.threshold, {"draws": budget}


def _random_hpd(gen: np.random.Generator, tag: AlgebraTag, m: int) -> HermitianPD:
    g = gen.normal(size=(m, m, tag.beta))
    a = _matmul_raw(g, _conj_t_raw(g)) + (0.5 + 0.5 * m) * _identity_raw(m, tag.beta)
    return HermitianPD(DivMatrix(tag, _hermitize_raw(a)))


def _run_form_equivalence(spec: CheckSpec, rng: RngStream):
    gen = rng.generator
    per_beta = spec.budget or 100
    worst = 0.0
    for beta in (1, 2, 4):
        tag = AlgebraTag(beta)
        for _ in range(per_beta):
            m = int(gen.integers(1, 5))
            n = int(gen.integers(1, 5))
            nu = beta * (m - 1) + float(gen.uniform(0.5, 4.0))
            params = MatricTParams(
                tag, m, n, nu,
                DivMatrix(tag, gen.normal(size=(m, n, beta))),
                _random_hpd(gen, tag, m),
                _random_hpd(gen, tag, n),
            )
            point = DivMatrix(tag, gen.normal(size=(m, n, beta)))
            gap = abs(logpdf_matric_t(params, point, "primal")
                      - logpdf_matric_t(params, point, "dual"))
            worst = max(worst, gap)
    return worst, worst < spec.threshold, {"points_per_beta": per_beta}


def _run_normalization_t(spec: CheckSpec, rng: RngStream):
    nu = float(spec.params.get("nu", 2.5))
    rho = float(spec.params.get("rho", 1.3))
    detail = {}
    worst = 0.0
    for beta in (1, 2, 4, 8):
        tag = AlgebraTag(beta)
        for n in (1, 2, 3):
            mass_t = quadrature_mass_row(
                lambda r: radial_logpdf_matric_t(tag, n, nu, r), tag, n)
            mass_mt = quadrature_mass_row(
                lambda r: radial_logpdf_matrix_mt(tag, n, nu, rho, r), tag, n)
            detail[f"matric-t-beta{beta}-n{n}"] = mass_t
            detail[f"matrix-mt-beta{beta}-n{n}"] = mass_mt
            worst = max(worst, abs(mass_t - 1.0), abs(mass_mt - 1.0))
    return worst, worst < spec.threshold, detail


def _scalar_beta2_logpdf(params: BetaIIParams, evaluator):
    tag = params.tag

    def log_density(x: float) -> float:
        point = DivMatrix.from_real(tag, [[x]])
        return evaluator(params, point)

    return log_density


def _run_normalization_beta2(spec: CheckSpec, rng: RngStream):
    nu = float(spec.params.get("nu", 2.0))
    detail = {}
    worst = 0.0
    for beta in (1, 2, 4, 8):
        tag = AlgebraTag(beta)
        for n in (1, 2, 3):
            params = BetaIIParams(tag, 1, n, nu)
            m1 = quadrature_mass_positive(
                _scalar_beta2_logpdf(params, logpdf_beta2_matric))
            m2 = quadrature_mass_positive(
                _scalar_beta2_logpdf(params, logpdf_beta2_multivariate))
            detail[f"matric-beta{beta}-n{n}"] = m1
            detail[f"mv-beta{beta}-n{n}"] = m2
            worst = max(worst, abs(m1 - 1.0), abs(m2 - 1.0))
    return worst, worst < spec.threshold, detail


def _run_normalization_eig2d(spec: CheckSpec, rng: RngStream):
    m = int(spec.params.get("m", 2))
    n = int(spec.params.get("n", 3))
    nu = float(spec.params.get("nu", 3.0))
    tag = AlgebraTag(int(spec.params.get("beta", 1)))
    mass_b2 = quadrature_mass_eig2(
        lambda l1, l2: log_joint_eig_beta2(tag, m, n, nu, [l1, l2]))
    mass_mv = quadrature_mass_eig2(
        lambda l1, l2: log_joint_eig_mv(tag, m, n, nu, [l1, l2]))
    detail = {"eig-beta2-mass": mass_b2, "eig-mv-mass": mass_mv}
    worst = max(abs(mass_b2 - 1.0), abs(mass_mv - 1.0))
    return worst, worst < spec.threshold, detail


def _per_sv_ks2(tag: AlgebraTag, raw_a: np.ndarray, raw_b: np.ndarray):
    sa = singular_values_batch(tag, raw_a)
    sb = singular_values_batch(tag, raw_b)
    pmin, detail = 1.0, {}
    for i in range(sa.shape[1]):
        d, p = ks_two_sample(np.sort(sa[:, i]), np.sort(sb[:, i]))
        detail[f"sv{i + 1}"] = {"D": d, "p": p}
        pmin = min(pmin, p)
    return pmin, detail


def _run_construction_equivalence(spec: CheckSpec, rng: RngStream):
    tag = AlgebraTag(int(spec.params["beta"]))
    m, n = int(spec.params.get("m", 2)), int(spec.params.get("n", 3))
    nu = float(spec.params.get("nu", 5.0))
    nsamp = spec.budget or 20000
    params = MatricTParams(tag, m, n, nu)
    a = sample_matric_t(rng, params, "wishart_root", size=nsamp)
    b = sample_matric_t(rng, params, "inverse_root", size=nsamp)
    pmin, detail = _per_sv_ks2(tag, a, b)
    return pmin, pmin > spec.threshold, detail


def _run_scalar_law_cauchy(spec: CheckSpec, rng: RngStream):
    nsamp = spec.budget or 50000
    t = sample_matric_t(rng, MatricTParams(AlgebraTag.REAL, 1, 1, 1.0),
                        size=nsamp)[:, 0, 0, 0]
    d, p = ks_one_sample(np.sort(t), lambda x: 0.5 + np.arctan(x) / math.pi)
    return p, p > spec.threshold, {"D": d, "p": p}


def _run_scalar_law_beta_prime(spec: CheckSpec, rng: RngStream):
    nu = float(spec.params.get("nu", 3.0))
    nsamp = spec.budget or 50000
    f = sample_beta2_matric(rng, BetaIIParams(AlgebraTag.REAL, 1, 1, nu),
                            size=nsamp)[:, 0, 0, 0]
    a_par, b_par = 0.5, nu / 2.0
    d, p = ks_one_sample(np.sort(f), lambda x: betainc(a_par, b_par, x / (1.0 + x)))
    return p, p > spec.threshold, {"D": d, "p": p}


def _numeric_cdf_interpolator(logpdf_scalar, xs: np.ndarray):
    """Build a CDF on the real line by cumulative quadrature over a grid."""

    def pdf(x: float) -> float:
        return math.exp(logpdf_scalar(x))

    pieces = [_quad(pdf, -np.inf, xs[0], epsabs=1e-11, epsrel=1e-11)]
    for lo, hi in zip(xs, xs[1:]):
        pieces.append(_quad(pdf, lo, hi, epsabs=1e-11, epsrel=1e-11))
    cum = np.cumsum(pieces)
    total = cum[-1] + _quad(pdf, xs[-1], np.inf, epsabs=1e-11, epsrel=1e-11)
    return PchipInterpolator(xs, cum / total, extrapolate=False), total


def _run_scalar_law_mt_cdf(spec: CheckSpec, rng: RngStream):
    nu = float(spec.params.get("nu", 3.0))
    rho = float(spec.params.get("rho", 2.0))
    nsamp = spec.budget or 50000
    params = MatrixMTParams(AlgebraTag.REAL, 1, 1, nu, rho)
    t = np.sort(sample_matrix_mt(rng, params, size=nsamp)[:, 0, 0, 0])

    def logpdf_scalar(x: float) -> float:
        return logpdf_matrix_mt(params, DivMatrix.from_real(AlgebraTag.REAL, [[x]]))

    qs = np.linspace(0.0, 1.0, 301)
    xs = np.unique(np.quantile(t, qs))
    xs = np.concatenate([[xs[0] - 1.0], xs, [xs[-1] + 1.0]])
    cdf, total = _numeric_cdf_interpolator(logpdf_scalar, xs)
    inside = t[(t >= xs[0]) & (t <= xs[-1])]
    d, p = ks_one_sample(inside, cdf)
    return p, p > spec.threshold, {"D": d, "p": p, "quadrature_total_mass": total}


def _run_wishart_construction(spec: CheckSpec, rng: RngStream):
    tag = AlgebraTag(int(spec.params.get("beta", 1)))
    m = int(spec.params.get("m", 2))
    nu = float(spec.params.get("nu", 6.0))
    nsamp = spec.budget or 20000
    params = WishartParams(tag, m, nu)
    wa = sample_wishart(rng, params, "bartlett", size=nsamp)
    wb = sample_wishart(rng, params, "gram", size=nsamp)
    ta = np.sort(eigenvalues_batch(tag, wa)[:, 0])
    tb = np.sort(eigenvalues_batch(tag, wb)[:, 0])
    d, p = ks_two_sample(ta, tb)
    return p, p > spec.threshold, {"D": d, "p": p}


def _run_wishart_mean(spec: CheckSpec, rng: RngStream):
    tag = AlgebraTag(int(spec.params.get("beta", 2)))
    m = int(spec.params.get("m", 2))
    nu = float(spec.params.get("nu", 5.0))
    nsamp = spec.budget or 20000
    xi_raw = _identity_raw(m, tag.beta) * 1.5
    xi_raw[0, 1, 0] = xi_raw[1, 0, 0] = 0.4
    if tag.beta >= 2:
        xi_raw[0, 1, 1], xi_raw[1, 0, 1] = 0.3, -0.3
    xi = HermitianPD(DivMatrix(tag, xi_raw))
    params = WishartParams(tag, m, nu, xi)
    draws = sample_wishart(rng, params, "bartlett", size=nsamp)
    expected = nu * xi.mat.data
    mean = draws.mean(axis=0)
    se = draws.std(axis=0, ddof=1) / math.sqrt(nsamp)
    diff = mean - expected
    z = np.where(se > 1e-14, diff / np.where(se > 1e-14, se, 1.0), 0.0)
    exact_bad = np.any((se <= 1e-14) & (np.abs(diff) > 1e-10))
    worst = float(np.abs(z).max())
    passed = (worst <= spec.threshold) and not exact_bad
    return worst, passed, {"max_abs_z": worst, "n": nsamp}


def _run_elliptical_invariance(spec: CheckSpec, rng: RngStream):
    tag = AlgebraTag(int(spec.params["beta"]))
    m = int(spec.params.get("m", 2))
    n = int(spec.params.get("n", 3))
    nu = int(spec.params.get("nu", 4))
    mix = ScaleMixtureSpec(tuple(spec.params.get("weights", (0.7, 0.3))),
                           tuple(spec.params.get("scales", (1.0, 3.0))))
    nsamp = spec.budget or 20000
    a = sample_elliptical_t(rng, tag, m, n, nu, mix, size=nsamp)
    b = sample_matric_t(rng, MatricTParams(tag, m, n, float(nu)), size=nsamp)
    pmin, detail = _per_sv_ks2(tag, a, b)
    return pmin, pmin > spec.threshold, detail


def _run_printed_variant_evidence(spec: CheckSpec, rng: RngStream):
    tag = AlgebraTag.REAL
    # Singular-value density coefficient: corrected vs printed pi exponent,
    # measured where the whole density is one scalar integral.
    sv_corr = _quad(lambda x: math.exp(log_joint_sv_matric_t(tag, 1, 1, 1.0, [x])),
                    0.0, np.inf)
    sv_printed = _quad(
        lambda x: math.exp(log_joint_sv_matric_t(tag, 1, 1, 1.0, [x],
                                                 printed_variant=True)),
        0.0, np.inf)
    # Cogram beta II bracket exponent: corrected vs printed extra -1.
    params = BetaIIParams(tag, 2, 1, 3.0, orientation="cogram")
    co_corr = quadrature_mass_positive(
        _scalar_beta2_logpdf(params, logpdf_beta2_matric))
    co_printed = quadrature_mass_positive(
        lambda x: logpdf_beta2_matric(
            params, DivMatrix.from_real(tag, [[x]]), printed_variant=True))
    detail = {
        "sv-coefficient": {"corrected_mass": sv_corr, "printed_mass": sv_printed},
        "cogram-exponent": {"corrected_mass": co_corr, "printed_mass": co_printed},
    }
    corrected_ok = max(abs(sv_corr - 1.0), abs(co_corr - 1.0)) < 1e-6
    stat = min(abs(sv_printed - 1.0), abs(co_printed - 1.0))
    return stat, corrected_ok and stat > spec.threshold, detail


def _lmax_cdf_eig_beta2_m2(n: int, nu: float, xs: np.ndarray):
    """CDF of the largest eigenvalue of the two-point gram beta II spectrum
    at beta = 1, via the closed-form inner integral

        int_0^x l^p (1+l)^(-q) (x - l) dl = x I0(x) - I1(x),

    where each I_k is a regularized incomplete beta in l/(1+l).  The outer
    integral is 1-D quadrature; the normalizing constant cancels in the
    ratio, leaving a pure shape comparison against the sampled spectrum.
    """
    p = (n - 1) / 2.0 - 1.0
    q = (nu + n) / 2.0

    def inc(k: int, t: float) -> float:
        a = p + k + 1.0
        b = q - a
        if b <= 0.0:
            raise RuntimeError("tail too heavy for the closed-form reduction")
        return math.exp(betaln(a, b)) * betainc(a, b, t / (1.0 + t))

    def outer(x: float) -> float:
        if x <= 0.0:
            return 0.0
        return x ** p * (1.0 + x) ** (-q) * (x * inc(0, x) - inc(1, x))

    pieces = [_quad(outer, 0.0, xs[0], epsabs=1e-12, epsrel=1e-12)]
    for lo, hi in zip(xs, xs[1:]):
        pieces.append(_quad(outer, lo, hi, epsabs=1e-12, epsrel=1e-12))
    cum = np.cumsum(pieces)
    total = cum[-1] + _quad(outer, xs[-1], np.inf, epsabs=1e-12, epsrel=1e-12)
    return PchipInterpolator(xs, cum / total, extrapolate=False)


def _run_spectrum_closed_form(spec: CheckSpec, rng: RngStream):
    tag = AlgebraTag(int(spec.params.get("beta", 1)))
    m = int(spec.params.get("m", 2))
    n = int(spec.params.get("n", 3))
    nu = float(spec.params.get("nu", 4.0))
    if tag.beta != 1 or m != 2:
        raise ValueError("the closed-form marginal is implemented for beta=1, m=2")
    nsamp = spec.budget or 20000
    t = sample_matric_t(rng, MatricTParams(tag, m, n, nu), size=nsamp)
    f = _hermitize_raw(_matmul_raw(t, _conj_t_raw(t)))
    lmax = np.sort(eigenvalues_batch(tag, f)[:, 0])
    qs = np.linspace(0.0, 1.0, 301)
    xs = np.unique(np.quantile(lmax, qs))
    xs = np.concatenate([[xs[0] * 0.5], xs, [xs[-1] * 1.5]])
    cdf = _lmax_cdf_eig_beta2_m2(n, nu, xs)
    inside = lmax[(lmax >= xs[0]) & (lmax <= xs[-1])]
    d, p = ks_one_sample(inside, cdf)
    return p, p > spec.threshold, {"D": d, "p": p}


_RUNNERS = {
    "ks-reference-values": _run_ks_reference,
    "gamma-ratio-identity": _run_gamma_ratio,
    "matric-t-form-equivalence": _run_form_equivalence,
    "normalization-scalar-t": _run_normalization_t,
    "normalization-scalar-beta2": _run_normalization_beta2,
    "normalization-eig-2d": _run_normalization_eig2d,
    "construction-equivalence-beta1": _run_construction_equivalence,
    "construction-equivalence-beta2": _run_construction_equivalence,
    "construction-equivalence-beta4": _run_construction_equivalence,
    "scalar-law-cauchy": _run_scalar_law_cauchy,
    "scalar-law-beta-prime": _run_scalar_law_beta_prime,
    "scalar-law-mt-quadrature-cdf": _run_scalar_law_mt_cdf,
    "wishart-construction-equivalence": _run_wishart_construction,
    "wishart-mean": _run_wishart_mean,
    "elliptical-invariance-beta1": _run_elliptical_invariance,
    "elliptical-invariance-beta2": _run_elliptical_invariance,
    "printed-variant-evidence": _run_printed_variant_evidence,
    "spectrum-vs-closed-form": _run_spectrum_closed_form,
}


def default_suite() -> list:
    """The default check list; together these are the acceptance criteria."""
    return [
        CheckSpec("ks-reference-values", "identity", {}, 5, 1e-9),
        CheckSpec("gamma-ratio-identity", "identity", {}, 200, 1e-10),
        CheckSpec("matric-t-form-equivalence", "identity", {}, 100, 1e-9),
        CheckSpec("normalization-scalar-t", "normalization",
                  {"nu": 2.5, "rho": 1.3}, None, 1e-6),
        CheckSpec("normalization-scalar-beta2", "normalization",
                  {"nu": 2.0}, None, 1e-6),
        CheckSpec("normalization-eig-2d", "normalization",
                  {"beta": 1, "m": 2, "n": 3, "nu": 3.0}, None, 1e-4),
        CheckSpec("construction-equivalence-beta1", "ks2",
                  {"beta": 1, "m": 2, "n": 3, "nu": 5.0}, 20000, 0.005),
        CheckSpec("construction-equivalence-beta2", "ks2",
                  {"beta": 2, "m": 2, "n": 3, "nu": 5.0}, 20000, 0.005),
        # nu must satisfy nu+n-m > beta*(n-1) for the inverse-root
        # construction to exist, which at beta = 4 forces nu > 7.
        CheckSpec("construction-equivalence-beta4", "ks2",
                  {"beta": 4, "m": 2, "n": 3, "nu": 8.0}, 20000, 0.005),
        CheckSpec("scalar-law-cauchy", "ks1", {}, 50000, 0.005),
        CheckSpec("scalar-law-beta-prime", "ks1", {"nu": 3.0}, 50000, 0.005),
        CheckSpec("scalar-law-mt-quadrature-cdf", "ks1",
                  {"nu": 3.0, "rho": 2.0}, 50000, 0.005),
        CheckSpec("wishart-construction-equivalence", "ks2",
                  {"beta": 1, "m": 2, "nu": 6.0}, 20000, 0.005),
        CheckSpec("wishart-mean", "moment", {"beta": 2, "m": 2, "nu": 5.0},
                  20000, 3.0),
        CheckSpec("elliptical-invariance-beta1", "ks2",
                  {"beta": 1, "m": 2, "n": 3, "nu": 4,
                   "weights": (0.7, 0.3), "scales": (1.0, 3.0)}, 20000, 0.005),
        CheckSpec("elliptical-invariance-beta2", "ks2",
                  {"beta": 2, "m": 2, "n": 3, "nu": 4,
                   "weights": (0.7, 0.3), "scales": (1.0, 3.0)}, 20000, 0.005),
        CheckSpec("printed-variant-evidence", "normalization", {}, None, 0.10),
        CheckSpec("spectrum-vs-closed-form", "ks1",
                  {"beta": 1, "m": 2, "n": 3, "nu": 4.0}, 20000, 0.005),
    ]


def run_suite(config, rng: RngStream, progress=None) -> VerifyReport:
    """Execute a list of CheckSpec deterministically.

    Each check receives its own stream derived from (suite seed, check
    index).  A stochastic check (ks1/ks2/moment) that fails its threshold is
    rerun once on a further derived stream and passes if either attempt
    passes; deterministic checks run once.  Individual check failures are
    recorded in the report, never thrown.
    """
    results = []
    for idx, spec in enumerate(config):
        runner = _RUNNERS.get(spec.name)
        if runner is None:
            raise ValueError(f"unknown check name {spec.name!r}")
        stream = rng.child(idx)
        start = time.perf_counter()
        try:
            stat, passed, detail = runner(spec, stream)
        except Exception as exc:  # recorded, not thrown
            stat, passed, detail = math.nan, False, {"error": repr(exc)}
        attempts = 1
        if not passed and spec.kind in _STOCHASTIC_KINDS and "error" not in detail:
            rerun_stream = stream.child(1)
            try:
                stat2, passed2, detail2 = runner(spec, rerun_stream)
            except Exception as exc:
                stat2, passed2, detail2 = math.nan, False, {"error": repr(exc)}
            attempts = 2
            detail = {"first_attempt": detail, "rerun": detail2,
                      "first_statistic": stat}
            if spec.kind == "moment":
                stat = min(stat, stat2)
            else:
                stat = max(stat, stat2) if np.isfinite(stat2) else stat
            passed = passed or passed2
        wall = time.perf_counter() - start
        result = CheckResult(spec.name, spec.kind, float(stat), spec.threshold,
                             bool(passed), attempts, detail, wall)
        results.append(result)
        if progress is not None:
            progress(result)
    return VerifyReport(results, rng.seed, rng.stream)
