"""Command-line front end: ``graphcodes <command> [flags]``.

Parameter precedence, lowest first: built-in defaults, the JSON file given
by ``--config``, explicit flags. Every command writes CSV (header row,
``.`` decimals) or JSON to ``--out`` (default stdout).

Exit codes: 0 success, 1 assertion failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import analysis, oracle
from .codes import from_parity_check
from .erasure import EnsembleParams, build_F, edge_probability, is_recoverable, monte_carlo
from .errors import DecoderDisagreementError
from .f2la import sample_bernoulli_matrix
from .gcode import build_graph_code
from .graphs import entanglement_entropy, sample_er
from .stats import trial_seeds

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

ESTIMATE_COLUMNS = ["n", "p", "R", "w", "trials", "failures", "point", "ci_low", "ci_high", "seed"]
SWEEP_COLUMNS = ["kind", *ESTIMATE_COLUMNS, "slope"]
GCHECK_COLUMNS = ["p", "eps_prime", "g", "sign", "asserted"]
KOLCHIN_COLUMNS = ["n", "alpha", "w", "rows", "trials", "failures", "point", "ci_low", "ci_high", "seed"]
WEIGHT_COLUMNS = [
    "n", "sample", "max_h_row_weight", "max_degree", "max_generator_weight", "row_threshold", "generator_threshold",
]
ORACLE_COLUMNS = ["check", "instances", "passed"]
DISTANCE_COLUMNS = ["n", "sample", "k", "d", "d_restricted", "eps_prime_n", "restricted_exceeds"]
ENTROPY_COLUMNS = ["n", "sample", "cut", "entropy", "max_possible", "maximal", "schmidt_log2"]

GCHECK_ASSERT_FROM = 0.335


class UsageError(Exception):
    pass


@dataclass
class ExperimentConfig:
    """Every parameter a command reads; a run is a function of this and nothing else."""

    command: str
    n: list[int] = field(default_factory=list)
    p: float | None = None
    rate: float = 0.25
    w: float = 3.0
    zeta: float = 0.25
    alpha: float = 0.5
    beta: float = 0.2
    cut_fraction: float = 0.5
    trials: int = 1000
    samples: int = 20
    seed: int = 0
    threads: int = 0
    start: float = 0.335
    stop: float = 0.495
    step: float = 0.005
    out: str = "-"
    format: str = "csv"

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> ExperimentConfig:
        return cls(**json.loads(text))

    @property
    def workers(self) -> int:
        return self.threads if self.threads > 0 else (os.cpu_count() or 1)


COMMAND_DEFAULTS = {
    "simulate": {},
    "sweep": {},
    "gcheck": {},
    "kolchin": {"w": 2.0, "trials": 2000, "n": [128, 256, 512, 1024]},
    "weights": {"w": 2.0, "n": [2048]},
    "oracle-verify": {"n": [8], "samples": 20},
    "distance": {"n": [16], "w": 1.0},
    "entropy": {"n": [10], "w": 2.0},
}
REQUIRED = {"simulate": ("n", "p"), "sweep": ("n", "p")}
CONFIG_KEYS = {f.name for f in fields(ExperimentConfig)} - {"command"}


# ----------------------------------------------------------------------------
# output


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _emit(cfg: ExperimentConfig, columns: list[str], rows: list[dict], extra: dict | None = None) -> None:
    if cfg.format == "json":
        payload = {"config": asdict(cfg), "rows": rows}
        if extra:
            payload.update(extra)
        text = json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([_cell(r.get(c)) for c in columns])
        text = buf.getvalue()
    if cfg.out == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    raise TypeError(type(o).__name__)


def _estimate_row(est, n: int, p: float, rate: float, w: float) -> dict:
    return {
        "n": n, "p": p, "R": rate, "w": w, "trials": est.trials, "failures": est.failures,
        "point": est.point, "ci_low": est.ci_low, "ci_high": est.ci_high, "seed": est.seed,
        "causes": est.causes, "events": est.events, "disagreements": est.disagreements,
    }


# ----------------------------------------------------------------------------
# commands


def _run_estimates(cfg: ExperimentConfig) -> list[dict]:
    rows = []
    for n in cfg.n:
        est = monte_carlo(EnsembleParams(n, cfg.rate, cfg.w), cfg.p, cfg.trials, cfg.seed, threads=cfg.workers)
        rows.append(_estimate_row(est, n, cfg.p, cfg.rate, cfg.w))
    return rows


def cmd_simulate(cfg: ExperimentConfig) -> int:
    _emit(cfg, ESTIMATE_COLUMNS, _run_estimates(cfg))
    return EXIT_OK


def loglog_slope(ns, points) -> float | None:
    """Least-squares slope of log(point) against log(n) over positive points."""
    pairs = [(math.log(n), math.log(pt)) for n, pt in zip(ns, points) if pt > 0]
    if len(pairs) < 2:
        return None
    x, y = np.array(pairs).T
    return float(np.polyfit(x, y, 1)[0])


def cmd_sweep(cfg: ExperimentConfig) -> int:
    if any(b <= a for a, b in zip(cfg.n, cfg.n[1:])):
        raise UsageError("--n must be strictly ascending for sweep")
    rows = [{"kind": "estimate", **r} for r in _run_estimates(cfg)]
    slope = loglog_slope(cfg.n, [r["point"] for r in rows])
    _emit(cfg, SWEEP_COLUMNS, rows + [{"kind": "summary", "slope": slope}], extra={"slope": slope})
    return EXIT_OK


def gcheck_grid(start: float, stop: float, step: float) -> list[float]:
    count = math.floor((stop - start) / step + 1e-9) + 1
    return [round(start + i * step, 12) for i in range(count)]


def cmd_gcheck(cfg: ExperimentConfig) -> int:
    if cfg.step <= 0:
        raise UsageError("--step must be positive")
    if not 0 < cfg.start < cfg.stop < 0.5:
        raise UsageError("need 0 < --start < --stop < 0.5")
    rows = []
    ok = True
    for p in gcheck_grid(cfg.start, cfg.stop, cfg.step):
        rep = analysis.g_of_p(p)
        asserted = p >= GCHECK_ASSERT_FROM - 1e-12
        ok &= not asserted or rep.g_value < 0
        rows.append(
            {"p": p, "eps_prime": rep.epsilon_prime, "g": rep.g_value,
             "sign": "negative" if rep.g_value < 0 else "nonnegative", "asserted": asserted}
        )
    _emit(cfg, GCHECK_COLUMNS, rows, extra={"all_asserted_negative": ok})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_kolchin(cfg: ExperimentConfig) -> int:
    rows = []
    for n in cfg.n:
        est = analysis.kolchin_experiment(n, cfg.alpha, cfg.w, cfg.trials, cfg.seed, threads=cfg.workers)
        rows.append(
            {"n": n, "alpha": cfg.alpha, "w": cfg.w, "rows": est.params["rows"], "trials": est.trials,
             "failures": est.failures, "point": est.point, "ci_low": est.ci_low, "ci_high": est.ci_high,
             "seed": cfg.seed}
        )
    _emit(cfg, KOLCHIN_COLUMNS, rows)
    return EXIT_OK


def cmd_weights(cfg: ExperimentConfig) -> int:
    rows, summaries = [], []
    for n in cfg.n:
        st = analysis.weight_statistics(n, cfg.w, cfg.zeta, cfg.rate, cfg.samples, cfg.seed)
        summaries.append({k: v for k, v in st.items() if k != "samples"})
        for r in st["samples"]:
            rows.append({"n": n, **r, "row_threshold": st["row_threshold"],
                         "generator_threshold": st["generator_threshold"]})
    _emit(cfg, WEIGHT_COLUMNS, rows, extra={"summary": summaries})
    return EXIT_OK


def oracle_suite(max_n: int, instances: int, seed: int) -> list[dict]:
    """Small-n exact checks on seeded random graphs and codes with ``2 <= n <= max_n``."""
    tallies = {k: [0, 0] for k in ("definitions", "orthogonality", "measure_lemma", "entropy_rank", "recovery")}

    def record(name, ok):
        tallies[name][0] += 1
        tallies[name][1] += bool(ok)

    for t in range(instances):
        s = [int(v) for v in trial_seeds(seed, t, 5)]
        rng = np.random.default_rng(s[0])
        n = int(rng.integers(2, max_n + 1))
        G = sample_er(n, float(rng.uniform(0.2, 0.8)), s[1])
        amp = oracle.graph_state_vector(G)
        record("definitions", amp == oracle.graph_state_circuit(G) == oracle.graph_state_stabilized(G))
        if n <= 12:
            record("orthogonality", oracle.check_orthogonality(G))
        K = sorted(rng.choice(n, size=int(rng.integers(1, min(3, n - 1) + 1)), replace=False).tolist())
        y = rng.integers(0, 2, len(K)).tolist()
        record("measure_lemma", oracle.check_measure_lemma(G, K, y))
        record("entropy_rank", oracle.schmidt_rank_log2(amp, K) == entanglement_entropy(G, K))
        # dense H with at least n/2 checks keeps k small enough for F to be recoverable often
        m = int(rng.integers((n + 1) // 2, n))
        H = sample_bernoulli_matrix(m, n, 0.5, s[2])
        gc = build_graph_code(G, from_parity_check(H))
        if gc.k and is_recoverable(build_F(gc, K)):
            record("recovery", oracle.end_to_end_recovery_check(gc, K))
    return [{"check": k, "instances": v[0], "passed": v[1]} for k, v in tallies.items()]


def cmd_oracle_verify(cfg: ExperimentConfig) -> int:
    max_n = max(cfg.n)
    if max_n > 12:
        raise UsageError("oracle-verify runs exact statevectors; use --n <= 12")
    rows = oracle_suite(max_n, cfg.samples, cfg.seed)
    _emit(cfg, ORACLE_COLUMNS, rows)
    return EXIT_OK if all(r["instances"] == r["passed"] for r in rows) else EXIT_FAIL


def cmd_distance(cfg: ExperimentConfig) -> int:
    rows = []
    for n in cfg.n:
        rows += analysis.distance_experiment(n, cfg.alpha, cfg.beta, cfg.w, cfg.samples, cfg.seed)
    _emit(cfg, DISTANCE_COLUMNS, rows)
    return EXIT_OK


def cmd_entropy(cfg: ExperimentConfig) -> int:
    rows = []
    for n in cfg.n:
        exp = analysis.entropy_experiment(n, cfg.w, cfg.cut_fraction, cfg.samples, cfg.seed)
        if n <= 12:
            q = edge_probability(n, cfg.w)
            for r in exp:
                s_graph, s_cut = (int(v) for v in trial_seeds(cfg.seed, r["sample"], 2))
                G = sample_er(n, q, s_graph)
                K = np.sort(np.random.default_rng(s_cut).choice(n, size=r["cut"], replace=False)).tolist()
                r["schmidt_log2"] = oracle.schmidt_rank_log2(oracle.graph_state_vector(G), K)
        rows += exp
    _emit(cfg, ENTROPY_COLUMNS, rows)
    if any(r.get("schmidt_log2") is not None and r["schmidt_log2"] != r["entropy"] for r in rows):
        return EXIT_FAIL
    return EXIT_OK


COMMANDS = {
    "simulate": (cmd_simulate, "erasure Monte Carlo over the random ensemble. CSV: " + ",".join(ESTIMATE_COLUMNS)),
    "sweep": (cmd_sweep, "simulate over ascending n plus a log-log slope row. CSV: " + ",".join(SWEEP_COLUMNS)),
    "gcheck": (cmd_gcheck, "g(p) on a grid; fails if any p >= 0.335 is nonnegative. CSV: " + ",".join(GCHECK_COLUMNS)),
    "kolchin": (cmd_kolchin, "non-full-rank fraction of sparse random matrices. CSV: " + ",".join(KOLCHIN_COLUMNS)),
    "weights": (cmd_weights, "H-row, degree and generator weights vs polylog thresholds. CSV: "
                + ",".join(WEIGHT_COLUMNS)),
    "oracle-verify": (cmd_oracle_verify, "exact statevector checks at small n. CSV: " + ",".join(ORACLE_COLUMNS)),
    "distance": (cmd_distance, "exact distances of small sampled codes before and after deletion. CSV: "
                 + ",".join(DISTANCE_COLUMNS)),
    "entropy": (cmd_entropy, "cut-rank entropy across random cuts. CSV: " + ",".join(ENTROPY_COLUMNS)),
}


# ----------------------------------------------------------------------------
# parsing


def _n_list(values: list[str]) -> list[int]:
    out = []
    for v in values:
        out += [int(x) for x in v.split(",") if x.strip()]
    return out


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file of parameters; explicit flags take precedence")
    common.add_argument("--n", nargs="+", default=S, help="block length(s), space or comma separated")
    common.add_argument("--p", type=float, default=S, help="erasure probability")
    common.add_argument("--rate", type=float, default=S, help="code rate R (default 0.25)")
    common.add_argument("--w", type=float, default=S, help="sparsity constant in w ln(n)/n")
    common.add_argument("--zeta", type=float, default=S, help="polylog exponent slack (default 0.25)")
    common.add_argument("--alpha", type=float, default=S, help="row fraction of H (default 0.5)")
    common.add_argument("--beta", type=float, default=S, help="deleted fraction for distance (default 0.2)")
    common.add_argument("--cut-fraction", dest="cut_fraction", type=float, default=S, help="cut size / n")
    common.add_argument("--trials", type=int, default=S, help="Monte Carlo trials per configuration")
    common.add_argument("--samples", type=int, default=S, help="sampled instances for per-sample reports")
    common.add_argument("--seed", type=int, default=S, help="64-bit master seed (default 0)")
    common.add_argument("--threads", type=int, default=S, help="worker threads (default: all cores)")
    common.add_argument("--out", default=S, help="output path, '-' for stdout")
    common.add_argument("--format", choices=("csv", "json"), default=S)

    parser = argparse.ArgumentParser(prog="graphcodes", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if name == "gcheck":
            sp.add_argument("--start", type=float, default=S)
            sp.add_argument("--stop", type=float, default=S)
            sp.add_argument("--step", type=float, default=S)
    return parser


def resolve_config(ns: argparse.Namespace) -> ExperimentConfig:
    values = dict(COMMAND_DEFAULTS[ns.command])
    given = {k: v for k, v in vars(ns).items() if k not in ("command", "config")}
    if getattr(ns, "config", None):
        try:
            with open(ns.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        loaded.pop("command", None)
        unknown = set(loaded) - CONFIG_KEYS
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        values.update(loaded)
    if "n" in given:
        given["n"] = _n_list(given["n"])
    values.update(given)
    if isinstance(values.get("n"), int):
        values["n"] = [values["n"]]
    missing = [k for k in REQUIRED.get(ns.command, ()) if values.get(k) in (None, [])]
    if missing:
        raise UsageError("missing required: " + ", ".join("--" + m for m in missing))
    cfg = ExperimentConfig(command=ns.command, **values)
    _validate(cfg)
    return cfg


def _validate(cfg: ExperimentConfig) -> None:
    if cfg.format not in ("csv", "json"):
        raise UsageError("--format must be csv or json")
    if any(n < 2 for n in cfg.n):
        raise UsageError("--n values must be >= 2")
    if cfg.p is not None and not 0.0 <= cfg.p <= 1.0:
        raise UsageError("--p must lie in [0, 1]")
    if not 0.0 <= cfg.rate < 1.0:
        raise UsageError("--rate must lie in [0, 1)")
    if cfg.trials < 1 or cfg.samples < 1:
        raise UsageError("--trials and --samples must be >= 1")
    if not 0.0 < cfg.alpha < 1.0:
        raise UsageError("--alpha must lie in (0, 1)")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = resolve_config(ns)
        return COMMANDS[cfg.command][0](cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"graphcodes {ns.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DecoderDisagreementError, AssertionError) as exc:
        print(f"graphcodes {ns.command}: assertion failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"graphcodes {ns.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
