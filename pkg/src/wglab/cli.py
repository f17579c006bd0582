"""Command-line front end. Every subcommand delegates to the library."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import __version__
from .arith import classify_grid_labels
from .config import COMMANDS, ExperimentConfig
from .errors import InvalidArgument, OutOfRange, WGLabError
from .expsum import arc_experiment, hypothesis_parameters, refined_parameters
from .hecke import hecke_for, sym_values
from .parallel import ordered_map
from .probmodel import event_counts, goldbach_average_check
from .repcount import count_range, count_single, count_ternary, count_quinary_squares
from .satotate import AngleInterval, equidistribution_report, twisted_sum
from .sieve import _iroot, build_sieve, sieve_for
from .singular import hl_binary, singular_series_quinary, singular_series_ternary

SCHEMA = "wglab-v1"
EXIT_OK, EXIT_USAGE, EXIT_RANGE = 0, 2, 3


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        return format(v, ".12g")
    return str(v)


class Report:
    def __init__(self, columns: Sequence[str], rows: list[Sequence]):
        self.columns = list(columns)
        self.rows = rows

    def csv_lines(self, config: ExperimentConfig) -> list[str]:
        head = [f"# {SCHEMA}", f"# command={config.command} seed={config.seed}", ",".join(self.columns)]
        return head + [",".join(fmt(v) for v in row) for row in self.rows]

    def json_text(self, config: ExperimentConfig) -> str:
        doc = {
            "schema": SCHEMA,
            "seed": config.seed,
            "config": config.to_dict(),
            "columns": self.columns,
            "rows": [[_json_value(v) for v in row] for row in self.rows],
        }
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"

    def render(self, config: ExperimentConfig) -> str:
        if config.format == "json":
            return self.json_text(config)
        return "\n".join(self.csv_lines(config)) + "\n"

    def stdout_text(self, config: ExperimentConfig) -> str:
        if config.format == "json":
            return self.json_text(config)
        return "".join(",".join(fmt(v) for v in row) + "\n" for row in self.rows)


def _json_value(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return None if math.isnan(v) else float(fmt(v))
    return v


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".wglab-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_n_list(path: str) -> list[int]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InvalidArgument(f"cannot read N list: {exc}") from exc
    out = []
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            try:
                out.append(int(line))
            except ValueError as exc:
                raise InvalidArgument(f"bad N value {line!r}") from exc
    if not out:
        raise InvalidArgument("N list is empty")
    return out


def _need(value, name: str):
    if value is None or value == []:
        raise InvalidArgument(f"--{name} is required")
    return value


def _n_values(cfg: ExperimentConfig) -> list[int]:
    if cfg.n_list:
        return read_n_list(cfg.n_list)
    return _need(cfg.N, "N")


def _arc_params(cfg: ExperimentConfig, N: int | None) -> tuple[int, int]:
    if cfg.P is not None and cfg.Q is not None:
        return cfg.P, cfg.Q
    if N is None:
        raise InvalidArgument("give --P and --Q, or --N to derive them")
    return hypothesis_parameters(N, cfg.delta_hypothesis, cfg.k)


# ---------------------------------------------------------------------------
# subcommands


def cmd_sieve(cfg: ExperimentConfig) -> Report:
    table = build_sieve(_need(cfg.limit, "limit"))
    return Report(["p"], [[int(p)] for p in table.primes])


def cmd_count(cfg: ExperimentConfig) -> Report:
    kind = cfg.kind or "ternary"
    if cfg.range is not None:
        table = count_range(kind, cfg.range)
        return Report(["N", "count"], [[n, int(c)] for n, c in enumerate(table.counts)])
    Ns = _n_values(cfg)
    counts = ordered_map(lambda n: count_single(kind, n), Ns, cfg.worker_count())
    return Report(["N", "count"], [[n, c] for n, c in zip(Ns, counts)])


def cmd_arcs(cfg: ExperimentConfig) -> Report:
    M = _need(cfg.grid, "grid")
    N = cfg.N[0] if cfg.N else None
    P, Q = _arc_params(cfg, N)
    refined = None
    if N is not None:
        P2, Q2 = refined_parameters(N)
        if 1 < 2 * P2 < Q2:
            refined = (P2, Q2)
    labels = classify_grid_labels(M, P, Q, refined)
    rows = [[float(Fraction(j, M)), lab.tag(), lab.q, lab.a, lab.offset] for j, lab in enumerate(labels)]
    return Report(["alpha", "kind", "q", "a", "offset"], rows)


def _prime_coeff(name: str, x: int):
    if name == "one":
        return None
    if name.startswith("sym"):
        j = int(name[3:] or 1)
        return sym_values(hecke_for(max(x, 2)), j, x, "sym")
    raise InvalidArgument(f"unknown coefficient {name!r}")


def cmd_expsum(cfg: ExperimentConfig) -> Report:
    N = _need(cfg.N, "N")[0]
    M = _need(cfg.grid, "grid")
    P, Q = _arc_params(cfg, N)
    x = _iroot(N, cfg.k)
    coeff = _prime_coeff(cfg.coeff, x)
    samples = arc_experiment(N, cfg.k, P, Q, M, coeff, eps1=cfg.epsilon1)
    cols = ["alpha", "re", "im", "abs", "arckind", "q", "a", "vino", "harman", "ren"]
    return Report(cols, [[s.row()[c] for c in cols] for s in samples])


def cmd_tau(cfg: ExperimentConfig) -> Report:
    L = _need(cfg.limit, "limit")
    if L < 1:
        raise InvalidArgument("--limit must be >= 1")
    table = hecke_for(L)
    is_prime = sieve_for(L).is_prime
    rows = []
    for n in range(1, L + 1):
        theta = table.theta_at(n) if is_prime[n] else None
        rows.append([n, table.tau_at(n), table.lambda_at(n), theta])
    return Report(["n", "tau", "lambda", "theta"], rows)


def cmd_satotate(cfg: ExperimentConfig) -> Report:
    lo, hi = cfg.interval if cfg.interval is not None else (0.0, math.pi)
    I = AngleInterval(lo, hi)
    Ns = _n_values(cfg)
    rows = ordered_map(lambda n: equidistribution_report([n], I)[0], Ns, cfg.worker_count())
    cols = ["N", "count_J", "count_J_I", "ratio", "pi_ratio", "mu_st", "discrepancy"]
    return Report(cols, [[r[c] for c in cols] for r in rows])


def cmd_twisted(cfg: ExperimentConfig) -> Report:
    Ns = _n_values(cfg)
    k = cfg.k
    u = cfg.u or (3 if k == 1 else 5)
    base = count_ternary if (k, u) == (1, 3) else count_quinary_squares

    def one(n):
        return twisted_sum(n, k, u, cfg.j, cfg.mode), base(n)

    vals = ordered_map(one, Ns, cfg.worker_count())
    return Report(["N", "k", "j", "mode", "twisted", "count_J"], [[n, k, cfg.j, cfg.mode, v, c] for n, (v, c) in zip(Ns, vals)])


def cmd_singular(cfg: ExperimentConfig) -> Report:
    kind = cfg.kind or "ternary"
    Ns = _n_values(cfg)
    if kind == "ternary":
        fn = lambda n: singular_series_ternary(n, cfg.cutoff or 10**5)  # noqa: E731
    elif kind == "binary":
        fn = lambda n: hl_binary(n, cfg.cutoff or 10**4)  # noqa: E731
    elif kind == "quinary":
        fn = lambda n: singular_series_quinary(n, cfg.cutoff or 1000)  # noqa: E731
    else:
        raise InvalidArgument(f"unknown singular kind {kind!r}")
    vals = ordered_map(fn, Ns, cfg.worker_count())
    return Report(["N", "kind", "value", "tail_bound", "cutoff"], [[n, kind, s.value, s.tail_bound, s.cutoff] for n, s in zip(Ns, vals)])


def cmd_conjecture(cfg: ExperimentConfig) -> Report:
    Ns = _n_values(cfg)

    def one(n):
        ev = event_counts(n)
        lhs, rhs, _ = goldbach_average_check(n)
        denom = ev.count_A * ev.count_Aprime
        ratio = ev.count_both * ev.omega_size / denom if denom else math.nan
        return [n, ev.p_A, ev.p_Aprime, ev.p_both, ratio, lhs, rhs]

    rows = ordered_map(one, Ns, cfg.worker_count())
    return Report(["N", "P_A", "P_Aprime", "P_both", "ratio", "goldbach_lhs", "goldbach_rhs"], rows)


HANDLERS = {
    "sieve": cmd_sieve,
    "count": cmd_count,
    "arcs": cmd_arcs,
    "expsum": cmd_expsum,
    "tau": cmd_tau,
    "satotate": cmd_satotate,
    "twisted": cmd_twisted,
    "singular": cmd_singular,
    "conjecture": cmd_conjecture,
}
assert set(HANDLERS) == set(COMMANDS)


def run(config: ExperimentConfig, stdout=None) -> int:
    """Execute ``config``; returns the exit status."""
    stdout = stdout or sys.stdout
    report = HANDLERS[config.command](config)
    if config.out:
        write_atomic(config.out, report.render(config))
    else:
        stdout.write(report.stdout_text(config))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _interval(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("interval must be lo,hi")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--threads", type=int, help="worker cap (falls back to WGLAB_THREADS)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--delta-hypothesis", type=float, default=0.5, dest="delta_hypothesis")
    common.add_argument("--epsilon1", type=float, default=0.01)
    common.add_argument("--save-config", dest="save_config", help="also write the resolved config as JSON")

    parser = argparse.ArgumentParser(prog="wglab", description="Waring-Goldbach numerical laboratory")
    parser.add_argument("--version", action="version", version=f"wglab {__version__}")
    parser.add_argument("--config", help="run a saved JSON config and ignore other arguments")
    sub = parser.add_subparsers(dest="command")

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    p = add("sieve", "list primes up to a limit")
    p.add_argument("--limit", type=int, required=True)

    p = add("count", "exact ordered representation counts")
    p.add_argument("--kind", choices=["ternary", "goldbach2", "quinary"], default="ternary")
    p.add_argument("--N", type=int, nargs="+", default=[])
    p.add_argument("--N-list", dest="n_list")
    p.add_argument("--range", type=int)

    p = add("arcs", "major/minor arc labels on a grid")
    p.add_argument("--N", type=int, nargs=1, default=[])
    p.add_argument("--P", type=int)
    p.add_argument("--Q", type=int)
    p.add_argument("--grid", type=int, required=True)

    p = add("expsum", "exponential sums and bound shapes on a grid")
    p.add_argument("--N", type=int, nargs=1, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--P", type=int)
    p.add_argument("--Q", type=int)
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--coeff", default="one", help="one or symJ")

    p = add("tau", "Ramanujan tau, normalized eigenvalues and angles")
    p.add_argument("--limit", type=int, required=True)

    p = add("satotate", "angle-restricted shares of the ternary set")
    p.add_argument("--N", type=int, nargs="+", default=[])
    p.add_argument("--N-list", dest="n_list")
    p.add_argument("--interval", type=_interval)

    p = add("twisted", "sums of symmetric-power coefficients over the tuple set")
    p.add_argument("--N", type=int, nargs="+", default=[])
    p.add_argument("--N-list", dest="n_list")
    p.add_argument("--k", type=int, choices=[1, 2], default=1)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--mode", choices=["sym", "tensor", "adjoint"], default="sym")

    p = add("singular", "singular series values with tail bounds")
    p.add_argument("--kind", choices=["ternary", "binary", "quinary"], default="ternary")
    p.add_argument("--N", type=int, nargs="+", default=[])
    p.add_argument("--N-list", dest="n_list")
    p.add_argument("--cutoff", type=int)

    p = add("conjecture", "event probabilities and the Goldbach average")
    p.add_argument("--N", type=int, nargs="+", default=[])
    p.add_argument("--N-list", dest="n_list")
    return parser


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    d = {k: v for k, v in vars(ns).items() if k not in {"config", "save_config"}}
    return ExperimentConfig.from_dict(d)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if ns.config:
            with open(ns.config, encoding="utf-8") as fh:
                cfg = ExperimentConfig.from_json(fh.read())
        elif ns.command is None:
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
        else:
            cfg = config_from_args(ns)
        save = getattr(ns, "save_config", None)
        status = run(cfg)
        if save:
            write_atomic(save, cfg.to_json() + "\n")
        return status
    except OutOfRange as exc:
        print(f"wglab: out of range: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except (InvalidArgument, OSError) as exc:
        print(f"wglab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WGLabError as exc:
        print(f"wglab: {exc}", file=sys.stderr)
        return EXIT_RANGE


if __name__ == "__main__":
    sys.exit(main())
