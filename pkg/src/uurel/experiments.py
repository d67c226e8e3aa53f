"""Monte Carlo experiments: universality checks, the random-pair entropy study, MUB sweeps.

Every trial draws from its own substream ``trial_rng(seed, index)``, so results
do not depend on the number of workers, and rows are always emitted in trial
order.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, ConvergenceError
from .io import write_csv
from .majorization import DEFAULT_MEASURES, SHANNON, majorizes, tensor_product
from .multi import (
    MeasurementEnsemble,
    build_bound_vector_multi,
    example1_ensemble,
    joint_distribution,
)
from .oracle import OptimizerConfig, mub_conjectured_value, omega_k_oracle
from .pair import (
    DEFAULT_BUDGET,
    UncertaintyVector,
    build_bound_vector,
    check_joint,
    maassen_uffink_bound,
    monotone_bounds,
    omega1_exact,
    omega2_exact,
    omega_tilde_k,
    overlap_stats,
)
from .quantum import (
    computational_basis,
    fourier_basis,
    haar_random_basis,
    measure_basis,
    random_density,
    random_pure,
    trial_rng,
)

DOMINANCE_SLACK = 1e-9
C_SPLIT = 0.83

TRIAL_HEADER = ("trial", "c", "H_joint", "H_bound", "maassen_uffink", "min_margin")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "pair"
    dim: int = 6
    trials: int = 10_000
    seed: int = 0
    measures: tuple = DEFAULT_MEASURES
    out: str | None = None
    budget: int = DEFAULT_BUDGET
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trial count must be >= 1")
        if self.dim < 2:
            raise ValueError("dimension must be >= 2")


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    c: float
    h_joint: float
    h_bound: float
    maassen_uffink: float
    min_margin: float
    # Φ(joint) - Φ(bound) per measure label; negative beyond slack is a violation
    dominance: dict = field(default_factory=dict, compare=False)

    def row(self):
        return (self.trial, self.c, self.h_joint, self.h_bound, self.maassen_uffink, self.min_margin)


@dataclass
class VerifySummary:
    trials: int
    violations: int
    dominance_violations: int
    worst_margin: float
    worst_dominance: float
    records: list

    @property
    def ok(self) -> bool:
        return self.violations == 0 and self.dominance_violations == 0


def _record(i, joint, vec: UncertaintyVector, measures, c=math.nan, mu=math.nan):
    rep = check_joint(joint, vec)
    dom = {phi.label: phi(joint) - phi(vec.sorted) for phi in measures}
    return TrialRecord(i, c, SHANNON(joint), SHANNON(vec.sorted), mu, rep.min_margin, dom)


def pair_trial(seed, i, dim, measures=DEFAULT_MEASURES, pure=False, budget=DEFAULT_BUDGET):
    """Random bases and a random state (pure, or of uniformly drawn rank)."""
    rng = trial_rng(seed, i)
    a = haar_random_basis(dim, rng)
    b = haar_random_basis(dim, rng)
    if pure:
        rho = random_pure(dim, rng).density()
    else:
        rho = random_density(dim, int(rng.integers(1, dim + 1)), rng)
    vec = build_bound_vector(a, b, budget)
    joint = tensor_product(measure_basis(rho, a), measure_basis(rho, b))
    return _record(i, joint, vec, measures, overlap_stats(a, b).c, maassen_uffink_bound(a, b))


def ensemble_trial(seed, i, ens: MeasurementEnsemble, vec, measures=DEFAULT_MEASURES):
    rng = trial_rng(seed, i)
    rho = random_density(ens.dim, int(rng.integers(1, ens.dim + 1)), rng)
    return _record(i, joint_distribution(rho, ens), vec, measures)


def random_bases_trial(seed, i, dim, n_bases, measures=DEFAULT_MEASURES, budget=DEFAULT_BUDGET):
    rng = trial_rng(seed, i)
    ens = MeasurementEnsemble(tuple(haar_random_basis(dim, rng) for _ in range(n_bases)))
    rho = random_density(dim, int(rng.integers(1, dim + 1)), rng)
    vec = build_bound_vector_multi(ens, budget)
    return _record(i, joint_distribution(rho, ens), vec, measures)


def _run_trials(fn, n, workers, *args):
    if workers <= 1:
        return [fn(i, *args) for i in range(n)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n), *[[a] * n for a in args], chunksize=max(1, n // (8 * workers))))


def _pair_job(i, seed, dim, measures, pure, budget):
    return pair_trial(seed, i, dim, measures, pure, budget)


def _ensemble_job(i, seed, ens, vec, measures):
    return ensemble_trial(seed, i, ens, vec, measures)


def _triple_job(i, seed, dim, n_bases, measures, budget):
    return random_bases_trial(seed, i, dim, n_bases, measures, budget)


def summarize(records) -> VerifySummary:
    margins = np.array([r.min_margin for r in records])
    dom = np.array([min(r.dominance.values()) if r.dominance else 0.0 for r in records])
    return VerifySummary(
        trials=len(records),
        violations=int(np.sum(margins < -1e-9)),
        dominance_violations=int(np.sum(dom < -DOMINANCE_SLACK)),
        worst_margin=float(margins.min()),
        worst_dominance=float(dom.min()),
        records=records,
    )


def run_verify(cfg: ExperimentConfig, ensemble: MeasurementEnsemble | None = None) -> VerifySummary:
    """Check majorization and measure dominance on ``cfg.trials`` random draws.

    ``cfg.experiment`` selects the draw: ``pair`` (fresh Haar bases each
    trial), ``example1`` (the fixed three-basis ensemble), ``triple`` (fresh
    Haar triples), or ``file`` with ``ensemble`` given.
    """
    kind = cfg.experiment
    if kind == "pair":
        recs = _run_trials(_pair_job, cfg.trials, cfg.workers, cfg.seed, cfg.dim, cfg.measures, False, cfg.budget)
    elif kind == "triple":
        recs = _run_trials(_triple_job, cfg.trials, cfg.workers, cfg.seed, cfg.dim, 3, cfg.measures, cfg.budget)
    elif kind in ("example1", "file"):
        ens = example1_ensemble() if kind == "example1" else ensemble
        if ens is None:
            raise ValueError("experiment 'file' needs an ensemble")
        vec = build_bound_vector_multi(ens, cfg.budget)
        recs = _run_trials(_ensemble_job, cfg.trials, cfg.workers, cfg.seed, ens, vec, cfg.measures)
    else:
        raise ValueError(f"unknown experiment {kind!r}")
    summary = summarize(recs)
    if cfg.out:
        write_csv(cfg.out, TRIAL_HEADER, (r.row() for r in recs))
    return summary


@dataclass
class Figure3Summary:
    trials: int
    above_mu: int
    high_c: int
    high_c_above_mu: int
    low_c: int
    low_c_above_mu: int
    records: list

    def fraction(self, num, den):
        return num / den if den else math.nan


def run_figure3(cfg: ExperimentConfig) -> Figure3Summary:
    """Random basis pairs and random pure states; Shannon bound versus Maassen-Uffink."""
    recs = _run_trials(_pair_job, cfg.trials, cfg.workers, cfg.seed, cfg.dim, (SHANNON,), True, cfg.budget)
    if cfg.out:
        write_csv(cfg.out, TRIAL_HEADER, (r.row() for r in recs))
    above = [r.h_bound > r.maassen_uffink for r in recs]
    high = [r.c > C_SPLIT for r in recs]
    return Figure3Summary(
        trials=len(recs),
        above_mu=sum(above),
        high_c=sum(high),
        high_c_above_mu=sum(a and h for a, h in zip(above, high)),
        low_c=len(recs) - sum(high),
        low_c_above_mu=sum(a and not h for a, h in zip(above, high)),
        records=recs,
    )


def mub_conjectured_vector(d: int) -> UncertaintyVector:
    """Vector built from the conjectured MUB values ``¼(1 + sqrt(k/d))²``."""
    vals = [mub_conjectured_value(d, k) for k in range(1, d * d + 1)]
    return UncertaintyVector.from_bounds(monotone_bounds(vals, np.zeros(d * d, dtype=bool)))


@dataclass
class MubRow:
    d: int
    k: int
    omega_tilde: float
    conjectured: float
    exact: float | None
    oracle: float | None
    oracle_note: str
    mub_rate: float | None


def mub_majorization_rate(d: int, trials: int, seed: int, budget=DEFAULT_BUDGET) -> float:
    """Fraction of random basis pairs whose ω̃ majorizes the conjectured MUB vector."""
    target = mub_conjectured_vector(d)
    hits = 0
    for i in range(trials):
        rng = trial_rng(seed, i)
        vec = build_bound_vector(haar_random_basis(d, rng), haar_random_basis(d, rng), budget)
        hits += majorizes(target.sorted, vec.sorted)
    return hits / trials


def run_mub(dims, ks, trials=1000, seed=0, oracle_cfg: OptimizerConfig | None = None,
            budget=DEFAULT_BUDGET, with_oracle=True) -> list:
    rows = []
    for d in dims:
        a, b = computational_basis(d), fourier_basis(d)
        rate = mub_majorization_rate(d, trials, seed, budget) if trials else None
        for k in ks:
            if k > d:
                continue
            exact = omega1_exact(a, b) if k == 1 else omega2_exact(a, b) if k == 2 else None
            oracle, note = None, ""
            try:
                ot = omega_tilde_k(a, b, k, budget)
            except BudgetExceeded as exc:
                ot = math.nan
                note = str(exc)
            if with_oracle:
                try:
                    oracle = omega_k_oracle((a, b), k, oracle_cfg or OptimizerConfig(seed=seed)).value
                except (ValueError, BudgetExceeded, ConvergenceError) as exc:
                    note = str(exc)
            rows.append(MubRow(d, k, ot, mub_conjectured_value(d, k), exact, oracle, note, rate))
    return rows
