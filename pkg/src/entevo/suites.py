"""Seeded property suites behind ``entevo verify``."""
from dataclasses import asdict, dataclass, field

import numpy as np

from . import evolution as ev
from .channels import ChannelFamily
from .measures import (
    generator_count,
    generator_set,
    so_generators,
    tau_lower_bound,
    wootters_concurrence,
)
from .states import random_density, random_pure, random_rank2

CHANNELS = ("pd", "ad", "gad")
T_GRID = (0.1, 0.5, 1.0, 1.5, 2.0)

PURE_TOL = 1e-7
CUT_TOL = 1e-8
GAP_TOL = 1e-8
WOOTTERS_TOL = 1e-10


@dataclass
class CaseResult:
    case: str
    passed: bool
    deviation: float
    detail: str = ""

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.deviation = float(self.deviation)


@dataclass
class SuiteReport:
    suite: str
    seed: int
    measure: str
    cases: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.cases)

    @property
    def max_deviation(self):
        return max((c.deviation for c in self.cases), default=0.0)

    def to_json(self):
        return {
            "suite": self.suite,
            "seed": self.seed,
            "measure": self.measure,
            "passed": self.passed,
            "max_deviation": self.max_deviation,
            "cases": [asdict(c) for c in self.cases],
        }


def _rngs(seed, n):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def pure_evolution(n_cases, seed, measure="tau"):
    out = []
    for i, rng in enumerate(_rngs(seed, n_cases)):
        psi = random_pure(3, rng)
        worst, where = 0.0, ""
        for name in CHANNELS:
            fam = ChannelFamily(name)
            for q in (1, 2, 3):
                for t in T_GRID:
                    r = ev.verify_pure_evolution(psi, fam(t), q, measure=measure)
                    if abs(r.gap) > worst:
                        worst, where = abs(r.gap), f"{name} qubit={q} t={t} class={r.class_used}"
        out.append(CaseResult(f"state{i}", worst <= PURE_TOL, worst, where))
    return out


def cut_independence(n_cases, seed, measure="tau"):
    out = []
    for i, rng in enumerate(_rngs(seed, n_cases)):
        psi = random_pure(3, rng)
        for name in CHANNELS:
            dev = ev.cut_independence_check(psi, ChannelFamily(name)(0.5))
            out.append(CaseResult(f"state{i}/{name}", dev <= CUT_TOL, dev))
    return out


def mixed_bound(n_cases, seed, measure="tau"):
    out = []
    for i, rng in enumerate(_rngs(seed, n_cases)):
        rho = random_rank2(3, rng)
        worst, where = 0.0, ""
        for name in CHANNELS:
            fam = ChannelFamily(name)
            for t in T_GRID:
                r = ev.verify_mixed_bound(rho, fam(t), 3, measure=measure)
                if -r.gap > worst:
                    worst, where = -r.gap, f"{name} t={t} class={r.class_used}"
        out.append(CaseResult(f"state{i}", worst <= GAP_TOL, worst, where))
    return out


def two_sided(n_cases, seed, measure="tau"):
    out = []
    grid = (0.25, 1.0, 2.0)
    for i, rng in enumerate(_rngs(seed, n_cases)):
        rho = random_rank2(3, rng)
        worst, where = 0.0, ""
        for name in ("pd", "ad"):
            fam = ChannelFamily(name)
            for t1 in grid:
                for t2 in grid:
                    r = ev.verify_two_sided(rho, fam(t1), fam(t2), (1, 3))
                    if -r.gap > worst:
                        worst, where = -r.gap, f"{name} t=({t1},{t2}) class={r.class_used}"
        out.append(CaseResult(f"state{i}", worst <= GAP_TOL, worst, where))
    return out


def reduction_wootters(n_cases, seed, measure="tau"):
    out = []
    for i, rng in enumerate(_rngs(seed, n_cases)):
        rank = int(rng.integers(1, 5))
        rho = random_density(2, rng, rank=rank)
        dev = abs(tau_lower_bound(rho) - wootters_concurrence(rho))
        out.append(CaseResult(f"state{i}/rank{rank}", dev <= WOOTTERS_TOL, dev))
    return out


def generators(n_cases=0, seed=0, measure="tau"):
    out = []
    for n in (2, 3, 4, 5):
        expected = generator_count(n)
        gens = so_generators(2 ** (n - 1))
        # L_k: purely imaginary, antisymmetric.  S_k = L_k (x) sigma_y is then real symmetric.
        lk = max(max(np.abs(g.T + g).max(), np.abs(g.real).max()) for g in gens)
        for cut in range(1, n + 1):
            ops = generator_set(n, cut).operators
            sk = max(max(np.abs(op.T - op).max(), np.abs(op.imag).max()) for op in ops)
            ok = len(ops) == expected == len(gens) and lk == 0.0 and sk == 0.0
            out.append(CaseResult(f"N={n} cut={cut}", ok, float(max(lk, sk, abs(len(ops) - expected))),
                                  f"count={len(ops)} expected={expected}"))
    return out


SUITES = {
    "pure_evolution": pure_evolution,
    "cut_independence": cut_independence,
    "mixed_bound": mixed_bound,
    "two_sided": two_sided,
    "reduction_wootters": reduction_wootters,
    "generators": generators,
}


def run_suite(name, n_cases=50, seed=0, measure="tau"):
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    report = SuiteReport(name, seed, measure)
    report.cases = SUITES[name](n_cases, seed, measure)
    return report
