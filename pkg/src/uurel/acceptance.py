"""Release gate: every acceptance criterion as a seeded, self-contained check.

Each ``criterion_*`` function returns :class:`CriterionResult`; the CLI and
``tests/test_acceptance.py`` both run them.  ``scale`` shrinks trial counts
proportionally for quick smoke runs (1.0 is the release setting).
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .experiments import ExperimentConfig, run_verify
from .majorization import (
    DEFAULT_MEASURES,
    MIN_ENTROPY,
    NEG_LOG_MIN,
    SHANNON,
    UncertaintyMeasure,
    random_doubly_stochastic,
)
from .multi import MeasurementEnsemble, build_bound_vector_multi, example1_ensemble, omega_tilde_sequence_multi
from .oracle import (
    OptimizerConfig,
    ProductObjective,
    _random_start,
    max_product_pure,
    mub_conjecture_probe,
    omega_k_oracle,
)
from .pair import (
    build_bound_vector,
    omega1_exact,
    omega2_exact,
    omega_tilde_k,
    omega_tilde_sequence,
    overlap_stats,
)
from .quantum import (
    computational_basis,
    fourier_basis,
    haar_random_basis,
    operator_norm_psd,
    random_projector,
    trial_rng,
)


@dataclass(frozen=True)
class CriterionResult:
    number: str
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:>4} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _n(count, scale):
    return max(1, int(round(count * scale)))


def criterion_theorem1(seed=0, scale=1.0):
    """Oracle product maximum equals ¼||A+B||² for random projector pairs."""
    worst_rel, worst_excess = 0.0, -math.inf
    n = _n(200, scale)
    for i in range(n):
        rng = trial_rng(seed, i)
        d = int(rng.integers(2, 7))
        a = random_projector(d, int(rng.integers(1, d)), rng)
        b = random_projector(d, int(rng.integers(1, d)), rng)
        closed = 0.25 * operator_norm_psd(a + b) ** 2
        val, _ = max_product_pure(a, b, OptimizerConfig(seed=seed * 1000 + i))
        worst_rel = max(worst_rel, abs(val - closed) / closed)
        worst_excess = max(worst_excess, val - closed)
    ok = worst_rel <= 1e-4 and worst_excess <= 1e-9
    return ok, f"{n} pairs, worst relative gap {worst_rel:.2e}, worst excess {worst_excess:.2e}"


def criterion_pair_universality(seed=0, scale=1.0):
    """p⊗q ≺ ω̃ and Φ(p⊗q) >= Φ(ω̃) on random states and basis pairs, d = 2..6."""
    parts, ok = [], True
    for d in range(2, 7):
        s = run_verify(ExperimentConfig("pair", dim=d, trials=_n(10_000, scale), seed=seed, measures=DEFAULT_MEASURES))
        ok &= s.ok
        parts.append(f"d={d}: {s.violations}+{s.dominance_violations} viol")
    return ok, f"{_n(10_000, scale)} trials/dim; " + ", ".join(parts)


def criterion_multi_universality(seed=0, scale=1.0):
    """L-measurement relation on Example 1 and on random d=3 basis triples."""
    n = _n(1000, scale)
    s1 = run_verify(ExperimentConfig("example1", dim=4, trials=n, seed=seed))
    s2 = run_verify(ExperimentConfig("triple", dim=3, trials=n, seed=seed))
    ok = s1.ok and s2.ok
    return ok, (f"example1: {s1.violations}+{s1.dominance_violations} viol (worst margin {s1.worst_margin:.1e}); "
                f"triples: {s2.violations}+{s2.dominance_violations} viol (worst margin {s2.worst_margin:.1e})")


def criterion_example1(seed=0, scale=1.0, ensemble: MeasurementEnsemble | None = None):
    """Ω̃_1 ≈ 0.78 and ω̃ ≈ (0.78, 0.22, 0, ...) for the three-basis example."""
    ens = example1_ensemble() if ensemble is None else ensemble
    vec = build_bound_vector_multi(ens)
    target = np.zeros(len(vec))
    target[:2] = (0.78, 0.22)
    om1 = vec.bounds[1]
    dev = float(np.max(np.abs(vec.raw - target)))
    ok = abs(om1 - 0.78) <= 0.005 and dev <= 0.005
    return ok, f"Ω̃1 = {om1:.6f}, max |ω̃ - (0.78, 0.22, 0, ...)| = {dev:.2e}"


def criterion_exact_k12(seed=0, scale=1.0):
    """Enumerated Ω̃_1, Ω̃_2 equal the closed forms; the oracle matches both."""
    worst = 0.0
    n = _n(100, scale)
    for i in range(n):
        rng = trial_rng(seed, i)
        d = 2 + i % 5
        a, b = haar_random_basis(d, rng), haar_random_basis(d, rng)
        worst = max(worst, abs(omega_tilde_k(a, b, 1) - omega1_exact(a, b)),
                    abs(omega_tilde_k(a, b, 2) - omega2_exact(a, b)))
    worst_oracle = 0.0
    n_oracle = 0
    for d in (2, 3, 4):
        for j in range(_n(2, scale)):
            rng = trial_rng(seed + 7919, 10 * d + j)
            a, b = haar_random_basis(d, rng), haar_random_basis(d, rng)
            cfg = OptimizerConfig(seed=seed + d * 100 + j)
            for k, exact in ((1, omega1_exact(a, b)), (2, omega2_exact(a, b))):
                val = omega_k_oracle((a, b), k, cfg).value
                worst_oracle = max(worst_oracle, abs(val - exact) / exact)
                n_oracle += 1
    ok = worst <= 1e-12 and worst_oracle <= 1e-4
    return ok, (f"{n} pairs: max |enumerated - closed form| = {worst:.1e}; "
                f"{n_oracle} oracle runs: max relative gap {worst_oracle:.1e}")


def criterion_maassen_uffink(seed=0, scale=1.0):
    """-log2 Ω̃_1 = -2 log2((1+c)/2); for MUB pairs it is the min-entropy of ω̃."""
    worst = 0.0
    for i in range(_n(100, scale)):
        rng = trial_rng(seed, i)
        d = 2 + i % 5
        a, b = haar_random_basis(d, rng), haar_random_basis(d, rng)
        vec = build_bound_vector(a, b)
        c = overlap_stats(a, b).c
        worst = max(worst, abs(-math.log2(vec.bounds[1]) + 2 * math.log2((1 + c) / 2)))
    worst_mub = 0.0
    largest_ok = True
    for d in range(2, 9):
        a, b = computational_basis(d), fourier_basis(d)
        vec = build_bound_vector(a, b)
        c = overlap_stats(a, b).c
        largest_ok &= vec.sorted[0] == vec.raw[0]
        worst_mub = max(worst_mub, abs(MIN_ENTROPY(vec.sorted) + 2 * math.log2((1 + c) / 2)))
    ok = worst <= 1e-12 and worst_mub <= 1e-12 and largest_ok
    return ok, (f"random pairs max deviation {worst:.1e}; MUB d=2..8 min-entropy deviation {worst_mub:.1e}, "
                f"Ω̃1 largest component: {largest_ok}")


def _schur_suite(phi_factory, seed, scale):
    worst_mix, worst_perm = math.inf, 0.0
    for i in range(_n(1000, scale)):
        rng = trial_rng(seed, i)
        d = int(rng.integers(2, 9))
        phi = phi_factory(rng)
        conc = rng.uniform(0.05, 2.0)
        p = rng.dirichlet(np.full(d, conc))
        if rng.random() < 0.3:
            p[rng.random(d) < 0.3] = 0.0
            p = p / p.sum() if p.sum() > 0 else np.eye(d)[0]
        dmat = random_doubly_stochastic(d, int(rng.integers(1, 5)), rng)
        worst_mix = min(worst_mix, phi(dmat @ p) - phi(p))
        worst_perm = max(worst_perm, abs(phi(p[rng.permutation(d)]) - phi(p)))
    return worst_mix, worst_perm


def _renyi_random(rng):
    a = rng.uniform(0.05, 0.95) if rng.random() < 0.5 else rng.uniform(1.05, 64.0)
    return UncertaintyMeasure("renyi", float(a))


SCHUR_KINDS = {
    "shannon": lambda rng: SHANNON,
    "renyi": _renyi_random,
    "minentropy": lambda rng: MIN_ENTROPY,
    "neglogmin": lambda rng: NEG_LOG_MIN,
}


def _criterion_schur(kind):
    def run(seed=0, scale=1.0):
        worst_mix, worst_perm = _schur_suite(SCHUR_KINDS[kind], seed, scale)
        ok = worst_mix >= -1e-9 and worst_perm <= 1e-12
        return ok, f"min Φ(Dp)-Φ(p) = {worst_mix:.3e}, max permutation change {worst_perm:.1e}"

    run.__doc__ = f"Schur-concavity and permutation invariance of the {kind} measure, dims 2..8."
    return run


def criterion_l2_reduction(seed=0, scale=1.0):
    """The L-measurement bounds on two bases equal the two-basis bounds for every k."""
    worst = 0.0
    n = _n(50, scale)
    for i in range(n):
        rng = trial_rng(seed, i)
        d = 2 + i % 3
        a, b = haar_random_basis(d, rng), haar_random_basis(d, rng)
        two = omega_tilde_sequence(a, b).values
        multi = omega_tilde_sequence_multi(MeasurementEnsemble((a, b)), short_circuit=False).values
        worst = max(worst, float(np.max(np.abs(two - multi))))
    return worst <= 1e-12, f"{n} pairs, all k: max deviation {worst:.1e}"


def criterion_mub_probe(seed=0, scale=1.0):
    """Theorem-backed corners of the MUB conjecture; larger cases only reported."""
    cfg = OptimizerConfig(seed=seed)
    oracle21, conj21 = mub_conjecture_probe(2, 1, cfg)
    target = 0.25 * (1 + math.sqrt(0.5)) ** 2
    ok = abs(oracle21 - target) <= 1e-3 and conj21 == target
    corners = []
    for d, k in ((2, 2), (3, 3)):
        a, b = computational_basis(d), fourier_basis(d)
        orc, conj = mub_conjecture_probe(d, k, cfg)
        searched = omega_k_oracle((a, b), k, cfg, shortcut=False).value
        ot = omega_tilde_k(a, b, k)
        exact_one = orc == 1.0 and conj == 1.0 and ot == 1.0
        ok &= exact_one and abs(searched - 1.0) <= 1e-9
        corners.append(f"(d,k)=({d},{k}) all 1: {exact_one}, search {searched:.12f}")
    reported = []
    for d, k in ((3, 1), (3, 2), (4, 2)):
        orc, conj = mub_conjecture_probe(d, k, cfg)
        reported.append(f"({d},{k}) oracle {orc:.6f} vs {conj:.6f}")
    return ok, (f"d=2 oracle Ω1 {oracle21:.6f} vs {target:.6f}; " + "; ".join(corners)
                + "; reported: " + ", ".join(reported))


def criterion_gradient(seed=0, scale=1.0):
    """Analytic ascent gradients agree with central differences (h = 1e-6)."""
    h = 1e-6
    worst = 0.0
    n = _n(100, scale)
    for i in range(n):
        rng = trial_rng(seed, i)
        d = int(rng.integers(2, 5))
        n_meas = int(rng.integers(2, 4))
        bases = [haar_random_basis(d, rng) for _ in range(n_meas)]
        obj = ProductObjective([b.projectors() for b in bases])
        k = int(rng.integers(1, 4))
        idx = [tuple(int(rng.integers(d)) for _ in range(n_meas)) for _ in range(k)]
        rank = 1 if i % 2 == 0 else d
        m = _random_start(rng, d, rank, 1) * rng.uniform(0.5, 2.0)
        gidx = obj.global_index([idx])
        _, g = obj.value_and_gradient(m, gidx)
        fd = np.zeros_like(g)
        for pos in np.ndindex(*m.shape[1:]):
            for unit, part in ((1.0, "re"), (1j, "im")):
                e = np.zeros_like(m)
                e[(0,) + pos] = unit * h
                diff = (obj.value(m + e, gidx)[0] - obj.value(m - e, gidx)[0]) / (2 * h)
                if part == "re":
                    fd[(0,) + pos] += diff
                else:
                    fd[(0,) + pos] += 1j * diff
        rel = np.linalg.norm(fd - g) / max(np.linalg.norm(g), 1e-300)
        worst = max(worst, float(rel))
    return worst <= 1e-5, f"{n} random points: worst relative error {worst:.1e}"


CRITERIA = [
    ("1", "Theorem 1 equality", criterion_theorem1),
    ("2", "two-basis universality", criterion_pair_universality),
    ("3", "L-measurement universality", criterion_multi_universality),
    ("4", "Example 1 reproduction", criterion_example1),
    ("5", "exactness at k=1,2", criterion_exact_k12),
    ("6", "Maassen-Uffink recovery", criterion_maassen_uffink),
    ("7a", "Schur-concavity: shannon", _criterion_schur("shannon")),
    ("7b", "Schur-concavity: renyi", _criterion_schur("renyi")),
    ("7c", "Schur-concavity: minentropy", _criterion_schur("minentropy")),
    ("7d", "Schur-concavity: neglogmin", _criterion_schur("neglogmin")),
    ("8", "L=2 reduction", criterion_l2_reduction),
    ("9", "MUB conjecture probe", criterion_mub_probe),
    ("10", "gradient check", criterion_gradient),
]


def run_criterion(number, seed=0, scale=1.0, **kwargs) -> CriterionResult:
    for num, name, fn in CRITERIA:
        if num == number:
            t0 = time.perf_counter()
            ok, detail = fn(seed=seed, scale=scale, **kwargs)
            return CriterionResult(num, name, bool(ok), detail, time.perf_counter() - t0)
    raise KeyError(number)


def run_all(seed=0, scale=1.0, echo=None) -> list:
    results = []
    for num, _, _ in CRITERIA:
        res = run_criterion(num, seed, scale)
        if echo:
            echo(res.line())
        results.append(res)
    return results
