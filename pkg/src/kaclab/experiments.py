"""Monte Carlo experiments on root counts of Kac polynomials.

Every experiment draws sample ``i`` from its own stream
``SeedSpec(master, lane_offset + i)``, so the per-sample results do not
depend on how samples are spread over worker processes; workers return
their chunk and the parent reassembles by sample index.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats

from . import root_count as rc
from .coeff_sampling import CoefficientDistribution, SeedSpec, sample_coefficients
from .errors import ParameterError
from .kac_poly import BulkParams, KacPolynomial, Region, variance_at
from .kac_rice import expected_count, expected_count_real_line

log = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"
EXCLUSION_BUDGET = 0.01
LANE = 1 << 40  # stream offset between independent sample families

EXIT_OK = 0
EXIT_STATISTICAL = 2
EXIT_NUMERIC = 3

GAUSSIAN = CoefficientDistribution("gaussian")


# ----------------------------------------------------------------- statistics

def wilson_interval(k: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    if n < 1:
        raise ParameterError("need at least one trial")
    ci = stats.binomtest(int(k), int(n)).proportion_ci(confidence, method="wilson")
    return float(ci.low), float(ci.high)


def rule_of_three(n: int) -> float:
    """95% upper bound on a probability after ``n`` trials with no event."""
    return 3.0 / n


def sample_seed(seed: SeedSpec, index: int, lane: int = 0) -> SeedSpec:
    return SeedSpec(seed.master_seed, seed.stream_index + lane * LANE + index)


def _draw(dist, n, seed, index, lane=0) -> KacPolynomial:
    return KacPolynomial(sample_coefficients(dist, n, sample_seed(seed, index, lane)))


def resolve_threads(threads: int | None = None) -> int:
    if threads is None:
        env = os.environ.get("KACLAB_THREADS")
        threads = int(env) if env else 1
    if threads < 1:
        raise ParameterError("thread count must be >= 1")
    return threads


def _run_chunks(func, payload, samples: int, parallelism: int):
    """Evaluate ``func(payload, indices)`` over all sample indices, in index order."""
    if parallelism <= 1 or samples < 2:
        return func(payload, range(samples))
    chunks = max(1, min(samples, 4 * parallelism))
    bounds = np.linspace(0, samples, chunks + 1).astype(int)
    ranges = [range(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    out = []
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        for part in pool.map(func, [payload] * len(ranges), ranges):
            out.extend(part)
    return out


# ------------------------------------------------------------- configuration

@dataclass
class ExperimentConfig:
    """Parameters of a root-count Monte Carlo run.

    Exactly one of ``interval`` and ``region`` selects the counting
    target; ``region="all"`` counts every region and sums them.
    """

    n: int = 1000
    dist: CoefficientDistribution = field(default_factory=lambda: GAUSSIAN)
    samples: int = 2000
    interval: tuple | None = (0.0, 1.0)
    region: Region | str | None = None
    epsilon: float = 0.5
    seed: SeedSpec = field(default_factory=SeedSpec)
    parallelism: int = 1
    depth_budget: int = rc.DEFAULT_DEPTH

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError("degree must be >= 1")
        if self.samples < 1:
            raise ParameterError("samples must be >= 1")
        if not self.epsilon > 0:
            raise ParameterError("epsilon must be positive")
        if isinstance(self.region, str) and self.region != "all":
            self.region = Region.parse(self.region)
        if self.region is not None:
            self.interval = None
        elif self.interval is None:
            raise ParameterError("need an interval or a region")
        else:
            a, b = float(self.interval[0]), float(self.interval[1])
            if not a < b:
                raise ParameterError(f"interval needs lo < hi, got {self.interval}")
            self.interval = (a, b)
        self.parallelism = resolve_threads(self.parallelism)

    @property
    def target(self) -> str:
        if self.region == "all":
            return "real_line"
        if isinstance(self.region, Region):
            return self.region.value
        return f"[{self.interval[0]!r},{self.interval[1]!r}]"

    def reference_mean(self) -> float:
        """Gaussian Kac-Rice mean of the target, whatever the coefficient law."""
        if self.region == "all":
            return expected_count_real_line(self.n)
        if isinstance(self.region, Region):
            return expected_count(self.n, self.region.bounds)
        return expected_count(self.n, self.interval)

    def as_dict(self) -> dict:
        return {
            "n": self.n, "dist": self.dist.spec_string(), "epsilon0": self.dist.epsilon0,
            "samples": self.samples, "target": self.target, "epsilon": self.epsilon,
            "seed": self.seed.master_seed, "stream_index": self.seed.stream_index,
            "parallelism": self.parallelism, "depth_budget": self.depth_budget,
        }


@dataclass
class TailReport:
    mean_count: float
    std_error: float
    reference_mean: float
    threshold: float
    tail_probability_lower: float
    tail_probability_upper: float
    tail_probability_two_sided: float
    wilson_ci_lower: tuple
    wilson_ci_upper: tuple
    wilson_ci_two_sided: tuple
    samples: int
    excluded: int = 0

    @property
    def z_score(self) -> float:
        if self.std_error == 0:
            return 0.0 if self.mean_count == self.reference_mean else math.inf
        return (self.mean_count - self.reference_mean) / self.std_error

    def as_dict(self) -> dict:
        d = asdict(self)
        d["z_score"] = self.z_score
        return d


def tail_report(counts, reference: float, epsilon: float, n: int, excluded: int = 0) -> TailReport:
    """Tails ``N <= ref - eps log n`` and ``N >= ref + eps log n``."""
    c = np.asarray(counts, dtype=np.float64)
    k = c.size
    if k == 0:
        raise ParameterError("no usable samples")
    thr = epsilon * math.log(n)
    lo = int(np.count_nonzero(c <= reference - thr))
    hi = int(np.count_nonzero(c >= reference + thr))
    both = int(np.count_nonzero(np.abs(c - reference) >= thr))
    se = float(c.std(ddof=1) / math.sqrt(k)) if k > 1 else 0.0
    return TailReport(
        float(c.mean()), se, float(reference), thr, lo / k, hi / k, both / k,
        wilson_interval(lo, k), wilson_interval(hi, k), wilson_interval(both, k), k, excluded,
    )


# --------------------------------------------------------------- root counts

def _count_target(p: KacPolynomial, interval, region, depth):
    """(count, uncertain cells, per-region counts or None)."""
    if region == "all":
        res = [rc.count_region(p, r, depth) for r in Region]
        return (sum(r.certified_count for r in res), sum(len(r.uncertain_cells) for r in res),
                [r.certified_count for r in res])
    if isinstance(region, Region):
        r = rc.count_region(p, region, depth)
    else:
        r = rc.count_certified(p, interval, depth)
    return r.certified_count, len(r.uncertain_cells), None


def _mc_chunk(cfg: ExperimentConfig, indices):
    cache = {}
    small = cfg.n <= rc.EXACT_DEGREE
    out = []
    for i in indices:
        p = _draw(cfg.dist, cfg.n, cfg.seed, i)
        key = p.coefficients.tobytes() if small else None
        if key is not None and key in cache:
            out.append(cache[key])
            continue
        row = _count_target(p, cfg.interval, cfg.region, cfg.depth_budget)
        if key is not None:
            cache[key] = row
        out.append(row)
    return out


@dataclass
class MCResult:
    config: ExperimentConfig
    counts: np.ndarray
    uncertain: np.ndarray
    region_counts: np.ndarray | None
    report: TailReport

    @property
    def excluded(self) -> int:
        return int(np.count_nonzero(self.uncertain))

    @property
    def numeric_ok(self) -> bool:
        return self.excluded < EXCLUSION_BUDGET * self.counts.size

    def to_csv(self, fh=None) -> str | None:
        """Per-sample rows ``sample_id,count,uncertain_cells`` (+ region columns)."""
        buf = io.StringIO() if fh is None else fh
        w = csv.writer(buf, lineterminator="\n")
        head = ["sample_id", "count", "uncertain_cells"]
        if self.region_counts is not None:
            head += [r.value for r in Region]
        w.writerow(head)
        for i in range(self.counts.size):
            row = [i, int(self.counts[i]), int(self.uncertain[i])]
            if self.region_counts is not None:
                row += [int(v) for v in self.region_counts[i]]
            w.writerow(row)
        return buf.getvalue() if fh is None else None


def run_root_count_mc(cfg: ExperimentConfig) -> MCResult:
    """Certified root counts of ``cfg.samples`` independent draws.

    Samples whose count carries uncertain cells are excluded from the
    tail report and counted in ``excluded``.
    """
    log.info("root-count MC %s", cfg.as_dict())
    rows = _run_chunks(_mc_chunk, cfg, cfg.samples, cfg.parallelism)
    counts = np.array([r[0] for r in rows], dtype=np.int64)
    unc = np.array([r[1] for r in rows], dtype=np.int64)
    regions = None
    if cfg.region == "all":
        regions = np.array([r[2] for r in rows], dtype=np.int64)
    keep = unc == 0
    report = tail_report(counts[keep], cfg.reference_mean(), cfg.epsilon, cfg.n,
                         int(np.count_nonzero(~keep)))
    res = MCResult(cfg, counts, unc, regions, report)
    if not res.numeric_ok:
        log.warning("%d of %d samples excluded for uncertain cells", res.excluded, cfg.samples)
    return res


# ------------------------------------------------------------ multiple roots

def _multi_chunk(payload, indices):
    n, dist, seed, x, ends, depth = payload
    out = []
    for i in indices:
        p = _draw(dist, n, seed, i)
        hits = [False] * len(ends)
        # intervals are nested: once a larger one has < 2 roots, so do the rest
        for j, y in enumerate(ends):
            if rc.count_certified(p, (x, y), depth).certified_count < 2:
                break
            hits[j] = True
        out.append(hits)
    return out


def multiple_root_scan(n: int, x_anchor: float, delta_list, samples: int,
                       seed: SeedSpec = SeedSpec(), dist: CoefficientDistribution = GAUSSIAN,
                       parallelism: int = 1, depth_budget: int = rc.DEFAULT_DEPTH) -> dict:
    """Estimate ``P(N[x, y] >= 2)`` with ``log((1 - x)/(1 - y)) = delta``.

    Deltas with no observed event get the rule-of-three bound and are
    left out of the log-log slope fit.
    """
    deltas = sorted({float(d) for d in delta_list}, reverse=True)
    if not deltas or min(deltas) <= 0:
        raise ParameterError("deltas must be positive")
    if not 0 < x_anchor < 1:
        raise ParameterError("anchor must lie in (0, 1)")
    ends = [1.0 - (1.0 - x_anchor) * math.exp(-d) for d in deltas]
    if any(not x_anchor < y < 1.0 for y in ends):
        raise ParameterError("delta too small to separate the endpoints")
    payload = (n, dist, seed, x_anchor, ends, depth_budget)
    hits = np.array(_run_chunks(_multi_chunk, payload, samples, resolve_threads(parallelism)),
                    dtype=bool).reshape(samples, len(deltas))
    rows = []
    for j, d in enumerate(deltas):
        k = int(hits[:, j].sum())
        rows.append({
            "delta": d, "events": k, "probability": k / samples,
            "wilson_ci": wilson_interval(k, samples),
            "upper_rule_of_three": rule_of_three(samples) if k == 0 else None,
        })
    rows.sort(key=lambda r: r["delta"])
    fit = [(math.log(r["delta"]), math.log(r["probability"])) for r in rows if r["events"] > 0]
    slope = None
    if len(fit) >= 2:
        a = np.array(fit)
        slope = float(np.polyfit(a[:, 0], a[:, 1], 1)[0])
    return {"n": n, "x_anchor": x_anchor, "samples": samples, "dist": dist.spec_string(),
            "per_delta": rows, "slope": slope, "fit_points": len(fit)}


# ------------------------------------------------------ sign changes vs roots

def _sc_chunk(payload, indices):
    n, dist, seed, spec, depth = payload
    lo, hi = float(spec.x[0]), float(spec.x[-1])
    out = []
    for i in indices:
        p = _draw(dist, n, seed, i)
        star = rc.count_grid_sign_changes(p, spec)
        r = rc.count_certified(p, (lo, hi), depth)
        out.append((star, r.certified_count, len(r.uncertain_cells)))
    return out


def sign_change_vs_root_mc(n: int, m: float, ell: float, delta: float, samples: int,
                           seed: SeedSpec = SeedSpec(), dist: CoefficientDistribution = GAUSSIAN,
                           parallelism: int = 1, count: int | None = None,
                           depth_budget: int = rc.DEFAULT_DEPTH) -> dict:
    """Per-sample sign changes ``N*`` against certified counts ``N`` on the grid span."""
    spec = rc.PartitionSpec.build(m, ell, n, delta, count)
    payload = (n, dist, seed, spec, depth_budget)
    rows = np.array(_run_chunks(_sc_chunk, payload, samples, resolve_threads(parallelism)),
                    dtype=np.int64)
    keep = rows[:, 2] == 0
    star, full = rows[keep, 0], rows[keep, 1]
    k = int(keep.sum())
    mism = int(np.count_nonzero(star != full))
    return {
        "n": n, "m": m, "ell": ell, "delta": delta, "T": spec.T, "samples": samples,
        "used": k, "excluded": samples - k,
        "mismatch_probability": mism / k if k else math.nan,
        "wilson_ci": wilson_interval(mism, k) if k else None,
        "violations": int(np.count_nonzero(star > full)),
        "mean_sign_changes": float(star.mean()) if k else math.nan,
        "mean_roots": float(full.mean()) if k else math.nan,
        "bulk_valid": BulkParams(n, max(m, 2.0), max(ell, 1.0)).valid() if n >= 2 else False,
    }


# ---------------------------------------------------------------- universality

def _ecdf_distance(a, b) -> float:
    grid = np.union1d(a, b)
    fa = np.searchsorted(np.sort(a), grid, side="right") / a.size
    fb = np.searchsorted(np.sort(b), grid, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def universality_compare(n: int, samples: int, seed: SeedSpec = SeedSpec(),
                         laws=("gaussian", "rademacher", "uniform_symmetric"),
                         m: float | None = None, ell: float | None = None,
                         parallelism: int = 1) -> dict:
    """Bulk root-count distributions under several coefficient laws.

    Each law gets its own lane of streams. Passing the same law twice
    compares it with itself on independent draws.
    """
    bulk = BulkParams.typical(n) if m is None else BulkParams(n, m, ell)
    interval = bulk.interval()
    threads = resolve_threads(parallelism)
    counts = {}
    for lane, kind in enumerate(laws):
        cfg = ExperimentConfig(n, CoefficientDistribution(kind), samples, interval,
                               seed=SeedSpec(seed.master_seed, seed.stream_index + (lane + 1) * LANE),
                               parallelism=threads)
        res = run_root_count_mc(cfg)
        counts[f"{lane}:{kind}"] = res.counts[res.uncertain == 0]
    keys = list(counts)
    summary = {k: {"mean": float(v.mean()), "std_error": float(v.std(ddof=1) / math.sqrt(v.size)),
                   "samples": int(v.size)} for k, v in counts.items()}
    pairs = []
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            a, b = counts[keys[i]], counts[keys[j]]
            top = int(max(a.max(), b.max()))
            pa = np.bincount(a, minlength=top + 1) / a.size
            pb = np.bincount(b, minlength=top + 1) / b.size
            se = math.hypot(summary[keys[i]]["std_error"], summary[keys[j]]["std_error"])
            pairs.append({
                "laws": (keys[i], keys[j]),
                "max_cdf_distance": _ecdf_distance(a, b),
                "bin_gaps": (pa - pb).tolist(),
                "mean_gap": float(a.mean() - b.mean()),
                "mean_gap_se": se,
            })
    return {"n": n, "interval": interval, "laws": summary, "pairs": pairs}


# --------------------------------------------------------------------- figure

def _fig_chunk(payload, indices):
    n, dist, seed, depth = payload
    out = []
    for i in indices:
        p = _draw(dist, n, seed, i)
        r = rc.isolate_roots(p, (0.0, 1.0), rc.ISOLATION_WIDTH, depth)
        out.append((r.roots(), len(r.uncertain_cells)))
    return out


@dataclass
class Figure1Result:
    n: int
    samples: int
    rows: list  # (sample_id, root or None)
    bulk_edge: float
    bulk_fraction: float
    bulk_fraction_se: float
    reference_ratio: float
    total_roots: int
    expected_total: float
    total_se: float
    excluded: int

    def to_csv(self, fh=None):
        return rc.roots_to_csv(self.rows, fh)

    def summary(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if k != "rows"}
        d["sample_ids"] = len({sid for sid, _ in self.rows})
        return d


def figure1_dataset(n: int = 1000, samples: int = 100, dist: CoefficientDistribution = GAUSSIAN,
                    seed: SeedSpec = SeedSpec(), a: float = 0.2, parallelism: int = 1,
                    depth_budget: int = rc.DEFAULT_DEPTH) -> Figure1Result:
    """Roots in [0, 1] of ``samples`` draws and their share in ``[1 - n^-a, 1]``.

    A sample without roots contributes one row with an empty root so that
    every sample id appears in the CSV.
    """
    edge = 1.0 - n ** (-a)
    payload = (n, dist, seed, depth_budget)
    per = _run_chunks(_fig_chunk, payload, samples, resolve_threads(parallelism))
    rows = []
    tot = np.zeros(samples)
    inb = np.zeros(samples)
    for sid, (roots, _) in enumerate(per):
        if not roots:
            rows.append((sid, None))
        for x in roots:
            rows.append((sid, x))
        tot[sid] = len(roots)
        inb[sid] = sum(1 for x in roots if x >= edge)
    T = tot.sum()
    frac = inb.sum() / T if T else math.nan
    # ratio estimator, roots are clustered by sample
    resid = inb - frac * tot
    se = math.sqrt(samples / (samples - 1) * np.sum(resid**2)) / T if T and samples > 1 else math.nan
    ref = expected_count(n, (edge, 1.0)) / expected_count(n, (0.0, 1.0))
    exp_total = samples * expected_count(n, (0.0, 1.0))
    return Figure1Result(n, samples, rows, edge, float(frac), float(se), float(ref), int(T),
                         float(exp_total), float(tot.std(ddof=1) * math.sqrt(samples)),
                         sum(1 for _, u in per if u))


# ---------------------------------------------------------------- dyadic tails

def _dyadic_chunk(payload, indices):
    n, dist, seed, cells, jensen_samples, max_points, depth = payload
    out = []
    for i in indices:
        p = _draw(dist, n, seed, i)
        cnt = []
        jen = []
        for a, b in cells:
            r = rc.count_certified(p, (a, b), depth)
            cnt.append(r.upper_bound)
            if i < jensen_samples:
                R = b - a
                jen.append(rc.jensen_root_bound(p, 0.5 * (a + b), 0.5 * R, R, max_points))
        out.append((cnt, jen))
    return out


def dyadic_tail_scan(n: int, j_range, h_values, samples: int, seed: SeedSpec = SeedSpec(),
                     dist: CoefficientDistribution = GAUSSIAN, jensen_samples: int = 20,
                     jensen_points: int = 1 << 14, parallelism: int = 1,
                     depth_budget: int = rc.DEFAULT_DEPTH) -> dict:
    """Exceedance ``P(N[x_j, x_{j+1}] >= h)`` on the cells ``x_j = 1 - 2^-j``.

    Counts use the certified upper bound, so uncertain cells can only
    raise the estimates. The Jensen bound is evaluated on the first
    ``jensen_samples`` draws.
    """
    js = list(j_range)
    if not js or min(js) < 0:
        raise ParameterError("j_range must hold non-negative integers")
    cells = [(1.0 - 2.0**-j, 1.0 - 2.0 ** -(j + 1)) for j in js]
    hs = sorted(int(h) for h in h_values)
    payload = (n, dist, seed, cells, jensen_samples, jensen_points, depth_budget)
    per = _run_chunks(_dyadic_chunk, payload, samples, resolve_threads(parallelism))
    counts = np.array([c for c, _ in per], dtype=np.int64)
    jen = np.array([j for _, j in per if j], dtype=np.float64).reshape(-1, len(cells))
    out = []
    for k, j in enumerate(js):
        col = counts[:, k]
        probs = {h: float(np.count_nonzero(col >= h) / samples) for h in hs}
        out.append({
            "j": j, "cell": cells[k], "probabilities": probs,
            "wilson_ci": {h: wilson_interval(int(round(probs[h] * samples)), samples) for h in hs},
            "max_count": int(col.max()), "mean_count": float(col.mean()),
            "jensen": ({"mean": float(jen[:, k].mean()), "max": float(jen[:, k].max()),
                        "min": float(jen[:, k].min()),
                        "always_above_count": bool(np.all(jen[:, k] >= col[:jen.shape[0]]))}
                       if jen.size else None),
        })
    return {"n": n, "samples": samples, "h_values": hs, "cells": out}


# ------------------------------------------------------------------ shadows

def concentration_trend(degrees=(100, 1000, 10_000), epsilon: float = 0.5, samples: int = 2000,
                        seed: SeedSpec = SeedSpec(), dist: CoefficientDistribution = GAUSSIAN,
                        parallelism: int = 1) -> dict:
    """Two-sided tails on [0, 1] for increasing degrees."""
    reports = {}
    excluded = 0
    for n in degrees:
        res = run_root_count_mc(ExperimentConfig(n, dist, samples, (0.0, 1.0), epsilon=epsilon,
                                                 seed=seed, parallelism=parallelism))
        reports[n] = res.report
        excluded += res.excluded
    tails = [reports[n].tail_probability_two_sided for n in degrees]
    return {
        "epsilon": epsilon, "samples": samples, "reports": reports,
        "two_sided": dict(zip(degrees, tails)),
        "nonincreasing": all(b <= a for a, b in zip(tails, tails[1:])),
        "excluded": excluded,
    }


def lower_tail_floor(n: int = 8, samples: int = 100_000, seed: SeedSpec = SeedSpec(),
                     dist: CoefficientDistribution | None = None, parallelism: int = 1) -> dict:
    """Frequency of draws with no real root at all."""
    dist = dist or CoefficientDistribution("rademacher")
    res = run_root_count_mc(ExperimentConfig(n, dist, samples, region="all", seed=seed,
                                             parallelism=parallelism))
    k = int(np.count_nonzero((res.counts == 0) & (res.uncertain == 0)))
    return {"n": n, "samples": samples, "dist": dist.spec_string(), "rootless": k,
            "probability": k / samples, "wilson_ci": wilson_interval(k, samples)}


def anti_concentration(n: int, m: float, samples: int, seed: SeedSpec = SeedSpec(),
                       dist: CoefficientDistribution = GAUSSIAN, batch: int = 1000) -> dict:
    """``P(|f_n(x)| <= m^-3 sqrt(V(x)))`` at ``x = 1 - 1/(4m)``."""
    x = 1.0 - 1.0 / (4.0 * m)
    thr = m**-3.0 * math.sqrt(variance_at(n, x))
    # all draws share the point, so evaluate as one matrix-vector product per batch
    powers = x ** np.arange(n + 1)
    hits = 0
    for start in range(0, samples, batch):
        size = min(batch, samples - start)
        block = np.stack([sample_coefficients(dist, n, sample_seed(seed, i))
                          for i in range(start, start + size)])
        vals = block @ powers
        hits += int(np.count_nonzero(np.abs(vals) <= thr))
    return {"n": n, "m": m, "x": x, "threshold": thr, "samples": samples, "events": hits,
            "probability": hits / samples, "wilson_ci": wilson_interval(hits, samples)}


# ---------------------------------------------------------------------- report

def _jsonable(o):
    if isinstance(o, dict):
        return {str(k): _jsonable(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_jsonable(v) for v in o]
    if isinstance(o, TailReport):
        return _jsonable(o.as_dict())
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, float) and not math.isfinite(o):
        return None
    return o


def exit_code(assertions: dict, numeric_ok: bool = True) -> int:
    if not numeric_ok:
        return EXIT_NUMERIC
    return EXIT_OK if all(assertions.values()) else EXIT_STATISTICAL


def report_document(experiment: str, config: dict, results: dict, assertions: dict | None = None,
                    numeric_ok: bool = True) -> dict:
    assertions = assertions or {}
    return {
        "schema_version": SCHEMA_VERSION,
        "experiment": experiment,
        "config": _jsonable(config),
        "results": _jsonable(results),
        "assertions": {k: bool(v) for k, v in assertions.items()},
        "numeric_ok": bool(numeric_ok),
        "exit_code": exit_code(assertions, numeric_ok),
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2)


__all__ = [
    "ExperimentConfig", "TailReport", "MCResult", "Figure1Result", "run_root_count_mc",
    "multiple_root_scan", "sign_change_vs_root_mc", "universality_compare", "figure1_dataset",
    "dyadic_tail_scan", "concentration_trend", "lower_tail_floor", "anti_concentration",
    "wilson_interval", "rule_of_three", "tail_report", "report_document", "exit_code",
    "sample_seed",
]
