"""Monte Carlo and exhaustive density estimates for term properties."""

from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, TextIO

from scipy.stats import binomtest

from .bounds import certify_sn_structural
from .classify import CLASS_IDS, ClassParams, default_g, head_lambdas, in_class, is_safe
from .counting import CapExceeded, count_closed_lambda, count_cl, enumerate_cl, enumerate_closed_lambda
from .rewrite import Budget, SNStatus, decide_sn, decide_sn_cl
from .sampling import derive_rng, sample_cl, sample_lambda
from .terms import contains_subterm, contains_subterm_cl, parse_cl, parse_lambda

__all__ = [
    "DensityRow", "ExperimentConfig", "ExactResult", "CSV_FIELDS",
    "make_property", "run_density", "run_exhaustive", "wilson_interval", "emit",
]

log = logging.getLogger(__name__)

CSV_FIELDS = ("model", "property", "n", "samples", "seed", "hits", "fraction", "ci_lo", "ci_hi", "unknown_count")

LAMBDA_PROPERTIES = (
    "sn-certified", "sn-decided", "sn-refuted", "width-le-2", "safe-or-width1",
    *(f"class-{c}" for c in CLASS_IDS), "head-lambdas-ge-g",
)
CL_PROPERTIES = ("sn-decided", "sn-refuted")

# A property maps a term to (hit, unknown).
Property = Callable[[object], tuple]


def make_property(name: str, model: str = "lambda", budget: Budget = Budget()) -> Property:
    """Evaluator for a property id such as ``width-le-2`` or ``contains:(I I)``."""
    if name.startswith("contains:"):
        text = name[len("contains:"):]
        if model == "cl":
            t0 = parse_cl(text)
            return lambda t: (contains_subterm_cl(t, t0), False)
        t0 = parse_lambda(text)
        return lambda t: (contains_subterm(t, t0), False)
    if model == "cl":
        if name == "sn-decided":
            return lambda t: _sn_bucket(decide_sn_cl(t, budget), SNStatus.PROVED_SN)
        if name == "sn-refuted":
            return lambda t: _sn_bucket(decide_sn_cl(t, budget), SNStatus.PROVED_NOT_SN)
        raise ValueError(f"unknown property {name!r} for combinators")
    if model != "lambda":
        raise ValueError(f"unknown model {model!r}")
    if name == "sn-certified":
        return lambda t: (certify_sn_structural(t) is not None, False)
    if name == "sn-decided":
        return lambda t: _sn_bucket(decide_sn(t, budget), SNStatus.PROVED_SN)
    if name == "sn-refuted":
        return lambda t: _sn_bucket(decide_sn(t, budget), SNStatus.PROVED_NOT_SN)
    if name == "width-le-2":
        return lambda t: (t.width <= 2, False)
    if name == "safe-or-width1":
        return lambda t: (t.width <= 1 or (t.width == 2 and is_safe(t)), False)
    if name == "head-lambdas-ge-g":
        return lambda t: (head_lambdas(t) >= default_g(t.size), False)
    if name.startswith("class-") and name[6:] in CLASS_IDS:
        cls, params = name[6:], ClassParams()
        return lambda t: (in_class(t, cls, params), False)
    raise ValueError(f"unknown property {name!r}")


def _sn_bucket(verdict, wanted: SNStatus) -> tuple:
    return verdict.status is wanted, verdict.status is SNStatus.UNKNOWN


def wilson_interval(hits: int, samples: int) -> tuple[float, float]:
    """95% Wilson score interval, widened if needed to contain the point estimate."""
    if samples == 0:
        return 0.0, 1.0
    ci = binomtest(hits, samples).proportion_ci(confidence_level=0.95, method="wilson")
    p = hits / samples
    return float(min(ci.low, p)), float(max(ci.high, p))


@dataclass(frozen=True)
class ExperimentConfig:
    model: str
    property: str
    sizes: tuple
    samples: int
    seed: int
    budget: Budget = Budget()
    workers: int = 1

    def __post_init__(self):
        if self.model not in ("lambda", "cl"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.samples < 1:
            raise ValueError("samples must be positive")
        for n in self.sizes:
            if n < 0 or (self.model == "lambda" and count_closed_lambda(n) == 0):
                raise ValueError(f"there are no {self.model} terms of size {n}")
        make_property(self.property, self.model, self.budget)


@dataclass(frozen=True)
class DensityRow:
    model: str
    property: str
    n: int
    samples: int
    seed: int
    hits: int
    fraction: float
    ci_lo: float
    ci_hi: float
    unknown_count: int
    warning: Optional[str] = field(default=None, compare=False)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in CSV_FIELDS}


def _count_chunk(args) -> tuple[int, int]:
    model, prop, n, seed, start, stop, budget = args
    evaluate = make_property(prop, model, budget)
    hits = unknown = 0
    for i in range(start, stop):
        rng = derive_rng(seed, (model, n), i)
        t = sample_lambda(n, rng) if model == "lambda" else sample_cl(n, rng)
        hit, unk = evaluate(t)
        hits += hit
        unknown += unk
    return hits, unknown


def run_density(config: ExperimentConfig) -> list[DensityRow]:
    """One row per size; draw ``i`` at size ``n`` depends only on ``(seed, model, n, i)``."""
    jobs = []
    for n in config.sizes:
        step = -(-config.samples // max(1, config.workers))
        for start in range(0, config.samples, step):
            jobs.append((config.model, config.property, n, config.seed,
                         start, min(config.samples, start + step), config.budget))
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            results = list(pool.map(_count_chunk, jobs))
    else:
        results = [_count_chunk(j) for j in jobs]
    totals: dict = {}
    for job, (hits, unknown) in zip(jobs, results):
        h, u = totals.get(job[2], (0, 0))
        totals[job[2]] = (h + hits, u + unknown)
    rows = []
    for n in config.sizes:
        hits, unknown = totals[n]
        lo, hi = wilson_interval(hits, config.samples)
        warning = None
        if unknown * 2 > config.samples:
            warning = f"{unknown} of {config.samples} verdicts unknown; raise the budget"
            log.warning("size %d: %s", n, warning)
        rows.append(DensityRow(config.model, config.property, n, config.samples, config.seed,
                               hits, hits / config.samples, lo, hi, unknown, warning))
    return rows


@dataclass(frozen=True)
class ExactResult:
    model: str
    property: str
    n: int
    hits: int
    total: int
    unknown_count: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.hits, self.total)


def run_exhaustive(prop: str, n: int, model: str = "lambda", budget: Budget = Budget()) -> ExactResult:
    """Exact share of size-``n`` terms with the property, by enumeration."""
    total = count_closed_lambda(n) if model == "lambda" else count_cl(n)
    if total == 0:
        raise ValueError(f"there are no {model} terms of size {n}")
    evaluate = make_property(prop, model, budget)
    terms = enumerate_closed_lambda(n) if model == "lambda" else enumerate_cl(n)
    hits = unknown = seen = 0
    for t in terms:
        hit, unk = evaluate(t)
        hits += hit
        unknown += unk
        seen += 1
    assert seen == total
    return ExactResult(model, prop, n, hits, total, unknown)


def emit(rows: Iterable[DensityRow], fmt: str = "csv", out: Optional[TextIO] = None) -> str:
    """Serialize rows as CSV or JSON; identical rows give identical text."""
    rows = list(rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for r in rows:
            w.writerow([_fmt(getattr(r, k)) for k in CSV_FIELDS])
        text = buf.getvalue()
    elif fmt == "json":
        text = json.dumps([r.as_dict() for r in rows], indent=2) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if out is not None:
        out.write(text)
    return text


def _fmt(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


__all__ += ["CapExceeded", "LAMBDA_PROPERTIES", "CL_PROPERTIES"]
