"""``entevo`` command line: sweeps, verification suites and state calculators."""
import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import evolution as ev
from .channels import ChannelFamily, family_to_dict
from .measures import FIFTH_EIGENVALUE_TOL, c_k_terms, classify, cut_breakdown, tau_lower_bound
from .states import PureState, as_density, load_state
from .suites import SUITES, run_suite

CSV_HEADER = ("p", "t", "tau_lhs", "tau_rhs", "gap", "factor_class")
DEFAULT_P_GRID = "0:1:21"
DEFAULT_T_GRID = {"pd": "0:2:41", "ad": "0:2:41", "gad": "0:1.5:41"}
# Dense fifth-eigenvalue diagnostic is O(K d^3); skip it above this size.
DENSE_DIAGNOSTIC_MAX_QUBITS = 4


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    family: ChannelFamily
    p_grid: tuple
    t_grid: tuple
    qubit: int = 3
    out: str = None
    seed: int = 0
    emit_plot_script: bool = False
    measure: str = "tau"
    renormalize: bool = True
    jobs: int = 1

    def __post_init__(self):
        for name, grid in (("p", self.p_grid), ("t", self.t_grid)):
            if not grid:
                raise UsageError(f"{name} grid is empty")
            if any(b < a for a, b in zip(grid, grid[1:])):
                raise UsageError(f"{name} grid must be ascending")
        if self.p_grid[0] < 0 or self.p_grid[-1] > 1:
            raise UsageError("p values must lie in [0, 1]")
        if self.t_grid[0] < 0:
            raise UsageError("t values must be non-negative")
        if not 1 <= self.qubit <= 3:
            raise UsageError("qubit must be 1, 2 or 3")


@dataclass(frozen=True)
class SweepRow:
    p: float
    t: float
    tau_lhs: float
    tau_rhs: float
    gap: float
    factor_class: str

    def cells(self):
        return [_fmt(self.p), _fmt(self.t), _fmt(self.tau_lhs), _fmt(self.tau_rhs),
                _fmt(self.gap), self.factor_class]


def _fmt(x):
    return f"{float(x):.17g}"


def parse_grid(text):
    """``a:b:n`` (``n`` evenly spaced points), a comma list, or one number."""
    text = text.strip()
    try:
        if ":" in text:
            a, b, n = text.split(":")
            n = int(n)
            if n < 1:
                raise UsageError(f"grid {text!r} needs at least one point")
            return tuple(float(x) for x in np.linspace(float(a), float(b), n))
        return tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"cannot parse grid {text!r}; expected a:b:n") from exc


def _sweep_row(config, p):
    rows = []
    for t in config.t_grid:
        r = ev.verify_mixture(p, config.family(t), config.qubit, config.measure, config.renormalize)
        rows.append(SweepRow(p, t, r.lhs, r.rhs, r.gap, r.class_used))
    return rows


def run_sweep(config):
    """All rows in p-major order; p values may be evaluated in parallel."""
    if config.jobs > 1 and len(config.p_grid) > 1:
        with ProcessPoolExecutor(config.jobs) as pool:
            chunks = list(pool.map(_sweep_row, [config] * len(config.p_grid), config.p_grid))
    else:
        chunks = [_sweep_row(config, p) for p in config.p_grid]
    return [row for chunk in chunks for row in chunk]


def write_csv(rows, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(row.cells())


PLOT_TEMPLATE = '''"""Surface plot of {csv_name}: lhs as a surface, rhs as lines at fixed p."""
import csv
import sys

import matplotlib.pyplot as plt
import numpy as np

with open({csv_path!r}) as fh:
    rows = list(csv.DictReader(fh))
p = np.array([float(r["p"]) for r in rows])
t = np.array([float(r["t"]) for r in rows])
lhs = np.array([float(r["tau_lhs"]) for r in rows])
rhs = np.array([float(r["tau_rhs"]) for r in rows])
ps, ts = np.unique(p), np.unique(t)
shape = (ps.size, ts.size)

fig = plt.figure()
ax = fig.add_subplot(projection="3d")
ax.plot_surface(p.reshape(shape), t.reshape(shape), lhs.reshape(shape), color="tab:blue", alpha=0.6)
for i in range(ps.size):
    ax.plot(p.reshape(shape)[i], t.reshape(shape)[i], rhs.reshape(shape)[i], color="tab:red", lw=0.8)
ax.set_xlabel("p")
ax.set_ylabel("gamma t")
ax.set_zlabel("tau")
ax.set_title({title!r})
if len(sys.argv) > 1:
    fig.savefig(sys.argv[1], dpi=150)
else:
    plt.show()
'''


def write_plot_script(csv_path, title):
    csv_path = Path(csv_path)
    script = csv_path.with_suffix(".plot.py")
    script.write_text(PLOT_TEMPLATE.format(csv_name=csv_path.name, csv_path=str(csv_path.resolve()),
                                           title=title))
    return script


# -- subcommands -------------------------------------------------------------

def cmd_sweep(args, out=None):
    out = out or sys.stdout
    mode = "literal" if args.kraus_literal else args.mode
    family = ChannelFamily(args.channel, args.gamma, "trace_preserving" if mode == "tp" else mode)
    config = SweepConfig(
        family=family,
        p_grid=parse_grid(args.p_grid or DEFAULT_P_GRID),
        t_grid=parse_grid(args.t_grid or DEFAULT_T_GRID[args.channel]),
        qubit=args.qubit,
        out=args.out,
        seed=args.seed,
        emit_plot_script=args.plot_script,
        measure=args.measure.replace("-", "_"),
        renormalize=not args.kraus_literal,
        jobs=args.jobs,
    )
    rows = run_sweep(config)
    if config.out is None or config.out == "-":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(row.cells())
    else:
        write_csv(rows, config.out)
        if config.emit_plot_script:
            desc = family_to_dict(family)
            title = f"{desc['channel']} ({desc['mode']}) on qubit {config.qubit}"
            print(f"plot script: {write_plot_script(config.out, title)}", file=sys.stderr)
    gaps = np.array([r.gap for r in rows])
    print(f"{len(rows)} rows; gap range [{gaps.min():.3e}, {gaps.max():.3e}]", file=sys.stderr)
    return 0


def cmd_verify(args, out=None):
    out = out or sys.stdout
    report = run_suite(args.suite, args.cases, args.seed, args.measure.replace("-", "_"))
    if args.json:
        json.dump(report.to_json(), out, indent=1)
        out.write("\n")
    else:
        for case in report.cases:
            status = "PASS" if case.passed else "FAIL"
            extra = f"  {case.detail}" if case.detail else ""
            print(f"{status}  {case.case:<24} deviation={case.deviation:.3e}{extra}", file=out)
        verdict = "PASS" if report.passed else "FAIL"
        failed = sum(not c.passed for c in report.cases)
        print(f"{verdict}  suite={report.suite} cases={len(report.cases)} failed={failed} "
              f"max_deviation={report.max_deviation:.3e}", file=out)
    return 0 if report.passed else 1


def cmd_bound(args, out=None):
    out = out or sys.stdout
    state = load_state(args.file)
    rho = as_density(state)
    n = rho.n_qubits
    print(f"n_qubits: {n}", file=out)
    print(f"tau_{n}: {_fmt(tau_lower_bound(rho))}", file=out)
    for terms in cut_breakdown(rho):
        print(f"cut {terms.cut}: {_fmt(terms.cut_concurrence)}", file=out)
    if n <= DENSE_DIAGNOSTIC_MAX_QUBITS:
        fifth = max(c_k_terms(rho, q, method="dense").fifth_eigenvalue for q in range(1, n + 1))
        flag = "" if fifth <= FIFTH_EIGENVALUE_TOL * rho.trace**2 else "  (not negligible)"
        print(f"fifth eigenvalue max: {fifth:.3e}{flag}", file=out)
    else:
        print("fifth eigenvalue max: 0 (structural; dense check skipped)", file=out)
    return 0


def cmd_classify(args, out=None):
    out = out or sys.stdout
    state = load_state(args.file)
    if not isinstance(state, PureState):
        raise UsageError("classify needs a pure-state file")
    if state.n_qubits != 3:
        raise UsageError(f"classify needs three qubits, got {state.n_qubits}")
    result = classify(state)
    print(f"class: {result.tag}", file=out)
    print(f"three_tangle: {_fmt(result.three_tangle)}", file=out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="entevo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="(p, gamma t) sweep over the GHZ-W mixture")
    sw.add_argument("--channel", choices=("pd", "ad", "gad"), required=True)
    sw.add_argument("--gamma", type=float, default=1.0)
    sw.add_argument("--mode", choices=("tp", "literal"), default="tp",
                    help="GAD prefactors: trace preserving or the 1/2 variant")
    sw.add_argument("--p-grid", help=f"a:b:n (default {DEFAULT_P_GRID})")
    sw.add_argument("--t-grid", help="a:b:n (default 0:2:41, or 0:1.5:41 for gad)")
    sw.add_argument("--qubit", type=int, default=3)
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--out", help="CSV path; stdout if omitted")
    sw.add_argument("--plot-script", action="store_true", help="also write FILE.plot.py")
    sw.add_argument("--kraus-literal", action="store_true",
                    help="literal GAD operators and no output renormalization")
    sw.add_argument("--measure", choices=("tau", "noisy-cut"), default="tau")
    sw.add_argument("--jobs", type=int, default=1)
    sw.set_defaults(func=cmd_sweep)

    ve = sub.add_parser("verify", help="run a seeded property suite")
    ve.add_argument("--suite", choices=sorted(SUITES), required=True)
    ve.add_argument("--cases", type=int, default=50)
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("--measure", choices=("tau", "noisy-cut"), default="tau")
    ve.add_argument("--json", action="store_true")
    ve.set_defaults(func=cmd_verify)

    bo = sub.add_parser("bound", help="concurrence lower bound of a state file")
    bo.add_argument("file")
    bo.set_defaults(func=cmd_bound)

    cl = sub.add_parser("classify", help="GHZ/W class of a three-qubit pure state file")
    cl.add_argument("file")
    cl.set_defaults(func=cmd_classify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"entevo {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
