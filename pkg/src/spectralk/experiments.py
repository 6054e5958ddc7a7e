"""Monte Carlo checks of inheritance on the average, of the conditional
variance formulas, and a free-cumulant limit demonstration.

Targets are exact rationals computed on the population.  Replicate r always
draws from ``RngStream(seed, r)`` and replicates are processed in fixed-size
chunks, so a report does not depend on the number of worker threads.
"""

from __future__ import annotations

import json
import math
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from . import free
from .classical import as_sample, k_statistic, k_statistic_coefficients
from .combinat import IntegerPartition, _partitions
from .errors import CapacityError, DegreeExceedsSampleError, PopulationParseError
from .random_matrix import RNG_NAME, spectral_samples, srs_samples
from .spectral import (
    DEFAULT_SPECTRAL_CAP,
    conditional_moment_formulas,
    generalized_polykay_l,
    normalized_spectral,
    spectral_kstat,
    statistic_coefficients,
)

STAT_KINDS = ("spectral_k", "spectral_l", "classical_k")
MOMENTS = ("var_k1", "cov_k1_k2", "var_k2")
LAWS = ("semicircle", "uniform")
LIMIT_SIZES = (8, 16, 32, 64)
MIN_REPLICATES = 100
Z_LIMIT = 4.0
# var K_2 is a fourth-moment estimator with a heavier tail
Z_LIMIT_VAR_K2 = 5.0
DEGENERATE_TOL = 1e-8

BUILTIN_POPULATIONS = {
    "arange8": tuple(Fraction(k) for k in range(1, 9)),
    "symm3": (Fraction(1), Fraction(2), Fraction(3)),
    "skew6": tuple(Fraction(v) for v in (0, 0, 0, 1, 5, 9)),
}


def default_statistics(max_degree=3, kinds=("spectral_k", "spectral_l", "classical_k")):
    """Every (kind, lambda) with |lambda| <= max_degree."""
    out = []
    for kind in kinds:
        for i in range(1, max_degree + 1):
            out.extend((kind, IntegerPartition(p)) for p in _partitions(i, i))
    return tuple(out)


@dataclass
class ExperimentConfig:
    population: tuple = ()
    m: int = 1
    replicates: int = 20000
    seed: int = 0
    statistics: tuple = ()
    degree_cap: int = DEFAULT_SPECTRAL_CAP
    output: str | None = None
    population_name: str | None = None
    moments: tuple = MOMENTS
    law: str = "semicircle"
    sizes: tuple = LIMIT_SIZES
    workers: int = 1
    chunk: int = 2000

    def __post_init__(self):
        self.population = as_sample(self.population) if len(self.population) else ()
        self.statistics = tuple((kind, IntegerPartition(lam)) for kind, lam in self.statistics)

    @property
    def n(self):
        return len(self.population)

    def validate(self, need_population=True):
        if self.replicates < MIN_REPLICATES:
            raise ValueError(f"replicates must be >= {MIN_REPLICATES}, got {self.replicates}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.workers < 1 or self.chunk < 1:
            raise ValueError("workers and chunk must be >= 1")
        if need_population:
            if not self.population:
                raise ValueError("empty population")
            if not 1 <= self.m <= self.n:
                raise ValueError(f"sample size m = {self.m} must satisfy 1 <= m <= n = {self.n}")
        for kind, lam in self.statistics:
            if kind not in STAT_KINDS:
                raise ValueError(f"unknown statistic kind {kind!r}; choose from {STAT_KINDS}")
            if lam.weight > self.degree_cap:
                raise CapacityError(f"degree {lam.weight} of {lam} exceeds the cap {self.degree_cap}")
            if kind == "classical_k" and lam.weight > 4:
                raise CapacityError(f"classical k-statistics are tabulated only up to degree 4, got {lam}")
            if need_population and lam.weight > self.m:
                raise DegreeExceedsSampleError(lam.weight, self.m)

    def to_dict(self):
        return {
            "population": [str(v) for v in self.population],
            "population_name": self.population_name,
            "m": self.m,
            "replicates": self.replicates,
            "seed": self.seed,
            "statistics": [[kind, list(lam)] for kind, lam in self.statistics],
            "degree_cap": self.degree_cap,
        }


@dataclass
class SpectralExperimentReport:
    suite: str
    config: dict
    rng: str
    results: list
    verdict: str
    elapsed_s: float
    trend: list = field(default_factory=list)

    @property
    def failed(self):
        return self.verdict == "FAIL"

    def to_dict(self):
        out = {"suite": self.suite, "config": self.config, "rng": self.rng, "results": self.results,
               "verdict": self.verdict}
        if self.trend:
            out["trend"] = self.trend
        out["elapsed_s"] = self.elapsed_s
        return out


def _verdict(results):
    gated = [r["pass"] for r in results if r.get("gating", True)]
    return "PASS" if all(gated) else "FAIL"


def _rational(value):
    return str(Fraction(value))


def _chunks(total, size):
    return [range(start, min(start + size, total)) for start in range(0, total, size)]


def _map_chunks(fn, cfg):
    parts = _chunks(cfg.replicates, cfg.chunk)
    if cfg.workers == 1:
        return [fn(c) for c in parts]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(fn, parts))


def _power_sum_table(samples, degree):
    return [None] + [np.sum(samples**r, axis=1) for r in range(1, degree + 1)]


def _evaluate(coeffs, S):
    """sum_nu c_nu prod_j S_{nu_j} over a batch of power sums."""
    total = np.zeros_like(S[1])
    for nu, c in coeffs.items():
        term = np.full_like(S[1], float(c))
        for part in nu:
            term = term * S[part]
        total = total + term
    return total


def _coefficients(kind, lam, m):
    if kind == "classical_k":
        return k_statistic_coefficients(lam, m)
    return statistic_coefficients(kind, lam, m)


def exact_target(kind, lam, x):
    """Exact value of a statistic on the population."""
    if kind == "spectral_k":
        return spectral_kstat(lam, x, cap=max(DEFAULT_SPECTRAL_CAP, IntegerPartition(lam).weight))
    if kind == "spectral_l":
        return generalized_polykay_l(lam, x, cap=max(DEFAULT_SPECTRAL_CAP, IntegerPartition(lam).weight))
    if kind == "classical_k":
        return k_statistic(lam, x)
    raise ValueError(f"unknown statistic kind {kind!r}")


def _draw_statistics(cfg, specs):
    """Per-replicate values of each (kind, lambda) in ``specs``, in replicate order."""
    x = [float(v) for v in cfg.population]
    degree = max(lam.weight for _, lam in specs)
    spectral = [(k, lam) for k, lam in specs if k != "classical_k"]
    classical = [(k, lam) for k, lam in specs if k == "classical_k"]
    coeffs = {(k, lam): _coefficients(k, lam, cfg.m) for k, lam in specs}

    def run(chunk):
        out = {}
        if spectral:
            S = _power_sum_table(spectral_samples(x, cfg.m, cfg.seed, chunk), degree)
            for spec in spectral:
                out[spec] = _evaluate(coeffs[spec], S)
        if classical:
            S = _power_sum_table(srs_samples(x, cfg.m, cfg.seed, chunk), degree)
            for spec in classical:
                out[spec] = _evaluate(coeffs[spec], S)
        return out

    parts = _map_chunks(run, cfg)
    return {spec: np.concatenate([p[spec] for p in parts]) for spec in specs}


def _mean_and_se(values):
    mean = math.fsum(values.tolist()) / len(values)
    se = float(np.std(values, ddof=1)) / math.sqrt(len(values))
    return mean, se


def _gate(estimate, stderr, target, limit, degenerate):
    """Returns (z, pass, degenerate flag)."""
    tf = float(target)
    tol = DEGENERATE_TOL * (1 + abs(tf))
    if degenerate or stderr <= tol * 1e-3:
        ok = abs(estimate - tf) <= tol
        return (0.0 if ok else (estimate - tf) / tol), ok, True
    z = (estimate - tf) / stderr
    return z, abs(z) <= limit, False


def _result(kind, lam, check, target, estimate, stderr, limit, degenerate, replicates):
    z, ok, degen = _gate(estimate, stderr, target, limit, degenerate)
    return {
        "lambda": list(lam),
        "kind": kind,
        "check": check,
        "target_rational": _rational(target),
        "target": float(target),
        "estimate": estimate,
        "stderr": stderr,
        "z": z,
        "z_limit": limit,
        "pass": ok,
        "degenerate": degen,
        "replicates": replicates,
    }


def exhaustive_srs_average(lam, x, m):
    """Exact average of k_lambda over all C(n, m) subsets of x."""
    x = as_sample(x)
    subsets = list(combinations(range(len(x)), m))
    total = sum(k_statistic(lam, [x[j] for j in s]) for s in subsets)
    return Fraction(total) / len(subsets) if not isinstance(total, float) else total / len(subsets)


def run_inheritance(cfg):
    """MC mean of each statistic over samples of size m against its exact value
    on the population; |z| > 4 fails."""
    start = time.perf_counter()
    if not cfg.statistics:
        cfg.statistics = tuple(s for s in default_statistics(min(3, cfg.m))
                               if s[0] != "classical_k" or len(cfg.population) >= s[1].length)
    cfg.validate()
    values = _draw_statistics(cfg, cfg.statistics)
    degenerate = cfg.m == cfg.n
    results = []
    for kind, lam in cfg.statistics:
        target = exact_target(kind, lam, cfg.population)
        mean, se = _mean_and_se(values[(kind, lam)])
        results.append(_result(kind, lam, "mean", target, mean, se, Z_LIMIT, degenerate, cfg.replicates))
    if cfg.n <= 7:
        for kind, lam in cfg.statistics:
            if kind != "classical_k" or lam.length > cfg.m:
                continue
            avg = exhaustive_srs_average(lam, cfg.population, cfg.m)
            target = k_statistic(lam, cfg.population)
            results.append({
                "lambda": list(lam), "kind": kind, "check": "exhaustive_srs",
                "target_rational": _rational(target), "target": float(target),
                "estimate": float(avg), "estimate_rational": _rational(avg),
                "stderr": 0.0, "z": 0.0, "pass": avg == target, "degenerate": True, "replicates": 0,
            })
    return SpectralExperimentReport("inheritance", cfg.to_dict(), RNG_NAME, results, _verdict(results),
                                    time.perf_counter() - start)


def _jackknife_cov_se(a, b):
    """Delete-one jackknife standard error of the sample covariance."""
    r = len(a)
    a = a - a.mean()
    b = b - b.mean()
    sa, sb, sab = a.sum(), b.sum(), (a * b).sum()
    k = r - 1
    mean_a = (sa - a) / k
    mean_b = (sb - b) / k
    loo = (sab - a * b - k * mean_a * mean_b) / (k - 1)
    return math.sqrt(k / r * float(np.sum((loo - loo.mean()) ** 2)))


_MOMENT_SPECS = {
    "var_k1": ((1,), (1,)),
    "cov_k1_k2": ((1,), (2,)),
    "var_k2": ((2,), (2,)),
}


def run_variance_check(cfg):
    """MC conditional (co)variances of K_1, K_2 against the closed forms."""
    start = time.perf_counter()
    cfg.validate()
    for name in cfg.moments:
        if name not in MOMENTS:
            raise ValueError(f"unknown moment {name!r}; choose from {MOMENTS}")
    moments = [name for name in cfg.moments if max(sum(_MOMENT_SPECS[name][0]), sum(_MOMENT_SPECS[name][1])) <= cfg.m]
    if "var_k2" in moments and cfg.n < 4:
        moments.remove("var_k2")
    specs = sorted({("spectral_k", IntegerPartition(lam)) for name in moments for lam in _MOMENT_SPECS[name]})
    values = _draw_statistics(cfg, specs) if specs else {}
    degenerate = cfg.m == cfg.n
    results = []
    for name in moments:
        la, lb = (IntegerPartition(v) for v in _MOMENT_SPECS[name])
        a, b = values[("spectral_k", la)], values[("spectral_k", lb)]
        estimate = float(np.cov(a, b, ddof=1)[0, 1])
        se = _jackknife_cov_se(a, b)
        target = conditional_moment_formulas(name, cfg.population, cfg.m)
        limit = Z_LIMIT_VAR_K2 if name == "var_k2" else Z_LIMIT
        res = _result("spectral_k", la, "var" if la == lb else "cov", target, estimate, se, limit, degenerate,
                      cfg.replicates)
        res["statistic"] = name
        res["lambda_b"] = list(lb)
        results.append(res)
    return SpectralExperimentReport("variance", cfg.to_dict(), RNG_NAME, results, _verdict(results),
                                    time.perf_counter() - start)


def _semicircle_cdf(t):
    return 0.5 + t * math.sqrt(max(4 - t * t, 0.0)) / (4 * math.pi) + math.asin(max(-1.0, min(1.0, t / 2))) / math.pi


def law_quantiles(law, m):
    """Midpoint quantiles F^(-1)((k - 1/2)/m), k = 1..m, of a compactly supported law."""
    probs = [(k - 0.5) / m for k in range(1, m + 1)]
    if law == "semicircle":
        return [brentq(lambda t, u=u: _semicircle_cdf(t) - u, -2.0, 2.0, xtol=1e-15) for u in probs]
    if law == "uniform":
        return [2 * u - 1 for u in probs]
    raise ValueError(f"unknown law {law!r}; choose from {LAWS}")


def law_moments(law, d):
    if law == "semicircle":
        return free.semicircle_moments(d)
    if law == "uniform":
        return free.uniform_moments(d)
    raise ValueError(f"unknown law {law!r}; choose from {LAWS}")


_LIMIT_DEFAULT = (
    ("spectral_k", (1,)), ("spectral_k", (2,)), ("spectral_k", (1, 1)), ("spectral_k", (4,)),
    ("spectral_l", (1, 1)), ("spectral_l", (2, 2)),
)


def run_limit_demo(cfg):
    """Normalized statistics m^(i - l(lambda)) kappa~_lambda and m^(i - l) l_lambda
    on quantile spectra of a fixed law, for growing m, next to the product of
    the law's free cumulants.  Never gates."""
    start = time.perf_counter()
    if cfg.law not in LAWS:
        raise ValueError(f"unknown law {cfg.law!r}; choose from {LAWS}")
    if not cfg.statistics:
        cfg.statistics = tuple((k, IntegerPartition(lam)) for k, lam in _LIMIT_DEFAULT)
    cfg.validate(need_population=False)
    degree = max(lam.weight for _, lam in cfg.statistics)
    if min(cfg.sizes) < degree:
        raise DegreeExceedsSampleError(degree, min(cfg.sizes))
    cumulants = free.moments_to_free_cumulants(law_moments(cfg.law, degree))
    spectra = {m: law_quantiles(cfg.law, m) for m in cfg.sizes}
    results, trend = [], []
    for kind, lam in cfg.statistics:
        target = Fraction(1)
        for part in lam:
            target *= cumulants[part - 1]
        mode = "kstat" if kind == "spectral_k" else "polykay"
        series = []
        for m in cfg.sizes:
            value = float(normalized_spectral(lam, spectra[m], kind=mode, cap=max(degree, cfg.degree_cap)))
            series.append(value)
            results.append({
                "lambda": list(lam), "kind": kind, "check": "limit", "m": m,
                "target_rational": _rational(target), "target": float(target), "estimate": value,
                "stderr": 0.0, "z": 0.0, "pass": True, "gating": False,
            })
        gaps = [abs(v - float(target)) for v in series]
        trend.append({
            "lambda": list(lam), "kind": kind, "sizes": list(cfg.sizes), "values": series,
            "target_rational": _rational(target), "target": float(target),
            "monotone_toward_target": all(g2 <= g1 + 1e-12 for g1, g2 in zip(gaps, gaps[1:])),
        })
    config = cfg.to_dict()
    config.update({"law": cfg.law, "sizes": list(cfg.sizes), "regime": "quantile spectra of a fixed law, n = m"})
    return SpectralExperimentReport("limit", config, RNG_NAME, results, "DEMONSTRATION",
                                    time.perf_counter() - start, trend)


def report_json(report):
    return json.dumps(report.to_dict(), indent=2)


def write_report(report, path):
    Path(path).write_text(report_json(report) + "\n")


_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?")


def _parse_number(token):
    if _RATIONAL.fullmatch(token):
        return Fraction(token)
    value = float(token)
    if not math.isfinite(value):
        raise ValueError(token)
    return value


def parse_population(text):
    """Numbers separated by commas or newlines; '#' starts a comment.

    Integers and "p/q" rationals are kept exact; decimals become floats.
    """
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        for tokno, token in enumerate(body.split(","), start=1):
            token = token.strip()
            try:
                values.append(_parse_number(token))
            except (ValueError, ZeroDivisionError):
                raise PopulationParseError(lineno, tokno, token) from None
    if not values:
        raise ValueError("population file contains no numbers")
    return tuple(values)


def read_population(path):
    return parse_population(Path(path).read_text())
