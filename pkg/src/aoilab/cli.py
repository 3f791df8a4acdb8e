"""``aoi-lab`` command line.

Config files for ``aoi-lab run`` are INI files: an ``[experiment]`` section
naming the mode, plus one section with that mode's parameters. See
``docs/config.md`` for the full schema.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
from pathlib import Path

from . import adversarial as adv
from . import experiments as ex
from .bounds import DomainError, bounds_report
from .core import ConfigurationError
from .stochastic import Mobility, Policy, StochasticConfig

OUTPUT_ENV = "AOI_LAB_OUTPUT_DIR"

MODES = ("stochastic", "adversarial", "bounds", "fig1a", "fig1b")

# section -> {key: parser}
_INT = int
_FLOAT = float


def _ints(s: str) -> list[int]:
    return [int(x) for x in s.replace(",", " ").split()]


def _floats(s: str) -> list[float]:
    return [float(x) for x in s.replace(",", " ").split()]


def _bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


SCHEMA = {
    "experiment": {"mode": str, "seed": _INT, "output": str, "workers": _INT},
    "stochastic": {
        "n": _INT,
        "m": _INT,
        "p": _floats,
        "t": _INT,
        "policy": str,
        "mobility": str,
        "replications": _INT,
        "burn_in": _INT,
    },
    "adversarial": {
        "n": _INT,
        "t": _INT,
        "policy": str,
        "w": _INT,
        "adversary": str,
        "trace_file": str,
        "replications": _INT,
        "exact_opt": _bool,
        "state_budget": _INT,
    },
    "bounds": {"n": _INT, "m": _INT, "p": _floats},
    "fig1a": {"ns": _ints, "t": _INT, "replications": _INT, "w": _INT},
    "fig1b": {"ws": _ints, "n": _INT, "t": _INT, "replications": _INT},
}


def load_config(path) -> dict[str, dict]:
    """Parse and type-check a config file. Raises ``ConfigurationError``."""
    cp = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except configparser.Error as e:
        raise ConfigurationError(f"cannot parse {path}: {e}") from None
    unknown_sections = [s for s in cp.sections() if s not in SCHEMA]
    if unknown_sections:
        raise ConfigurationError(f"unknown sections: {', '.join(unknown_sections)}")
    out: dict[str, dict] = {}
    for sec in cp.sections():
        schema = SCHEMA[sec]
        unknown = [k for k in cp[sec] if k not in schema]
        if unknown:
            raise ConfigurationError(f"unknown keys in [{sec}]: {', '.join(unknown)}")
        vals = {}
        for k, raw in cp[sec].items():
            try:
                vals[k] = schema[k](raw)
            except ValueError as e:
                raise ConfigurationError(f"[{sec}] {k}: {e}") from None
        out[sec] = vals
    if "experiment" not in out or "mode" not in out["experiment"]:
        raise ConfigurationError("missing [experiment] mode")
    mode = out["experiment"]["mode"]
    if mode not in MODES:
        raise ConfigurationError(f"[experiment] mode: must be one of {', '.join(MODES)}")
    return out


def _need(sec: dict, key: str, section: str):
    if key not in sec:
        raise ConfigurationError(f"[{section}] {key} is required")
    return sec[key]


def _positive(name: str, value: int, minimum: int = 1) -> int:
    if value < minimum:
        raise ConfigurationError(f"{name} must be >= {minimum}")
    return value


def _expand_p(p: list[float], N: int, section: str) -> tuple[float, ...]:
    if len(p) == 1:
        return tuple(p * N)
    if len(p) != N:
        raise ConfigurationError(f"[{section}] p: give one value or N={N} values")
    return tuple(p)


class Outcome:
    def __init__(self, mode: str, csv_text: str, summary: str):
        self.mode = mode
        self.csv = csv_text
        self.summary = summary


def execute(cfg: dict[str, dict], seed_override: int | None = None) -> Outcome:
    """Run the configured mode and return its CSV and summary text."""
    exp = cfg["experiment"]
    mode = exp["mode"]
    seed = seed_override if seed_override is not None else exp.get("seed", 0)
    workers = exp.get("workers", 1)
    sec = cfg.get(mode, {})
    if mode == "stochastic":
        N = _positive("[stochastic] n", _need(sec, "n", mode))
        try:
            scfg = StochasticConfig(
                N=N,
                M=_need(sec, "m", mode),
                p=_expand_p(_need(sec, "p", mode), N, mode),
                T=_need(sec, "t", mode),
                policy=Policy(sec.get("policy", "MMW").upper()),
                mobility=Mobility(sec.get("mobility", "iid-uniform")),
                replications=sec.get("replications", 1),
                seed=seed,
                burn_in=sec.get("burn_in", 0),
            )
        except ValueError as e:
            raise ConfigurationError(f"[stochastic] {e}") from None
        result, text = ex.run_stochastic(scfg)
        summary = (
            f"stochastic {scfg.policy.value} N={N} M={scfg.M} T={scfg.T} reps={scfg.replications}\n"
            f"mean_time_avg_aoi {result.mean_time_avg_aoi!r}\n"
            f"max_time_avg_aoi {result.max_time_avg_aoi!r}\n"
            f"empirical_g {result.empirical_g()!r}\n"
        )
        return Outcome(mode, text, summary)
    if mode == "adversarial":
        kind = sec.get("adversary", "RANDOM_SUBSET").upper()
        try:
            kind = adv.AdversaryKind(kind)
        except ValueError:
            raise ConfigurationError(f"[adversarial] adversary: unknown kind {kind!r}") from None
        trace = None
        if kind is adv.AdversaryKind.EXPLICIT:
            trace = adv.read_trace(_need(sec, "trace_file", mode))
            T, N = trace.shape
        else:
            N = _positive("[adversarial] n", _need(sec, "n", mode))
            T = _positive("[adversarial] t", _need(sec, "t", mode))
        w = _positive("[adversarial] w", sec.get("w", 0), 0)
        policy = adv.make_policy(sec.get("policy", "MA"), w)
        reps = _positive("[adversarial] replications", sec.get("replications", 1))
        spec = adv.AdversarySpec(kind, seed=seed, trace=trace)
        reports = adv.competitive_harness(
            spec,
            policy,
            N,
            T,
            replications=reps,
            exact=sec.get("exact_opt", True),
            budget=sec.get("state_budget", adv.DEFAULT_STATE_BUDGET),
            workers=workers,
        )
        text = ex.to_csv(ex.ADVERSARIAL_HEADER, ex.adversarial_rows(reports, w))
        lines = [f"adversarial {policy.name} vs {kind.value} N={N} T={T} reps={reps}"]
        for r in reports:
            ratio = r.ratio_vs_exact
            tag = "exact" if ratio is not None else "upper-estimate"
            ratio = ratio if ratio is not None else r.ratio_upper_estimate
            lines.append(
                f"rep {r.replication}: online_cost {r.online_cost} ratio({tag}) {float(ratio)!r} "
                f"online_successes {r.online_successes} opt_successes {r.opt_successes}"
            )
        return Outcome(mode, text, "\n".join(lines) + "\n")
    if mode == "bounds":
        N = _positive("[bounds] n", _need(sec, "n", mode))
        M = _positive("[bounds] m", _need(sec, "m", mode))
        return _bounds_outcome(_expand_p(_need(sec, "p", mode), N, mode), M)
    if mode == "fig1a":
        rows = ex.reproduce_fig1a(
            Ns=sec.get("ns", ex.FIG1A_NS),
            T=_positive("[fig1a] t", sec.get("t", ex.FIG1_T)),
            replications=_positive("[fig1a] replications", sec.get("replications", ex.FIG1_REPLICATIONS)),
            w=_positive("[fig1a] w", sec.get("w", ex.FIG1A_W), 0),
            seed=seed,
            workers=workers,
        )
        return Outcome(mode, ex.to_csv(ex.FIG1A_HEADER, rows), _fig1a_summary(rows))
    rows = ex.reproduce_fig1b(
        ws=sec.get("ws", ex.FIG1B_WS),
        N=_positive("[fig1b] n", sec.get("n", ex.FIG1B_N), 2),
        T=_positive("[fig1b] t", sec.get("t", ex.FIG1_T)),
        replications=_positive("[fig1b] replications", sec.get("replications", ex.FIG1_REPLICATIONS)),
        seed=seed,
        workers=workers,
    )
    return Outcome(mode, ex.to_csv(ex.FIG1B_HEADER, rows), _fig1b_summary(rows))


def _bounds_outcome(p, M) -> Outcome:
    try:
        rep = bounds_report(p, M)
    except DomainError as e:
        raise ConfigurationError(str(e)) from None
    rows = rep.rows()
    width = max(len(k) for k, _ in rows)
    summary = "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)
    if rep.notes:
        summary += "\n" + "\n".join(f"note: {n}" for n in rep.notes)
    return Outcome("bounds", ex.to_csv(("quantity", "value"), rows), summary + "\n")


def _fig1a_summary(rows) -> str:
    out = ["N  policy  w  worst_time_avg_aoi"]
    by_n: dict = {}
    for N, pol, w, v, _ in rows:
        out.append(f"{N:<3}{pol:<8}{w:<3}{float(v):.6f}")
        by_n.setdefault(N, {})[pol] = v
    wins = [N for N, d in by_n.items() if d["RHC"] < d["MA"]]
    out.append(f"RHC below MA for N in {wins}")
    return "\n".join(out) + "\n"


def _fig1b_summary(rows) -> str:
    out = ["w   worst_time_avg_aoi"]
    out.extend(f"{w:<4}{float(v):.6f}" for w, v, _ in rows)
    trend = ex.non_increasing([r[1] for r in rows])
    out.append(f"non-increasing in w: {'yes' if trend else 'no'}")
    return "\n".join(out) + "\n"


def _write(outcome: Outcome, out_dir: str | None) -> None:
    sys.stdout.write(outcome.summary)
    if out_dir:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / f"{outcome.mode}.csv").write_text(outcome.csv)
        (d / f"{outcome.mode}_summary.txt").write_text(outcome.summary)
        sys.stdout.write(f"wrote {d / (outcome.mode + '.csv')}\n")


def _out_dir(arg: str | None, cfg_value: str | None = None) -> str | None:
    return arg or cfg_value or os.environ.get(OUTPUT_ENV)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="aoi-lab", description="Age-of-Information scheduling experiments")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment described by a config file")
    p.add_argument("config")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--out", help=f"output directory (default: config 'output' or ${OUTPUT_ENV})")

    p = sub.add_parser("bounds", help="evaluate the closed-form bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", type=float, nargs="+", required=True, help="one common value or N values")
    p.add_argument("--csv", action="store_true", help="print CSV instead of aligned text")

    p = sub.add_parser("fig1a", help="worst-case AoI of MA and RHC against N")
    p.add_argument("--ns", type=int, nargs="+", default=list(ex.FIG1A_NS))
    p.add_argument("--t", type=int, default=ex.FIG1_T)
    p.add_argument("--replications", type=int, default=ex.FIG1_REPLICATIONS)
    p.add_argument("--w", type=int, default=ex.FIG1A_W)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")

    p = sub.add_parser("fig1b", help="worst-case AoI of RHC against the window size")
    p.add_argument("--ws", type=int, nargs="+", default=list(ex.FIG1B_WS))
    p.add_argument("--n", type=int, default=ex.FIG1B_N)
    p.add_argument("--t", type=int, default=ex.FIG1_T)
    p.add_argument("--replications", type=int, default=ex.FIG1_REPLICATIONS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")

    p = sub.add_parser("trace", help="generate or validate channel trace files")
    tsub = p.add_subparsers(dest="trace_cmd", required=True)
    g = tsub.add_parser("gen")
    g.add_argument("file")
    g.add_argument("--adversary", default="RANDOM_SUBSET", choices=["YAO_UNIFORM", "RANDOM_SUBSET", "ADAPTIVE_THROUGHPUT"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--t", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--replication", type=int, default=0)
    c = tsub.add_parser("check")
    c.add_argument("file")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = load_config(args.config)
            outcome = execute(cfg, args.seed)
            _write(outcome, _out_dir(args.out, cfg["experiment"].get("output")))
        elif args.command == "bounds":
            N = _positive("--n", args.n)
            outcome = _bounds_outcome(_expand_p(args.p, N, "bounds"), _positive("--m", args.m))
            sys.stdout.write(outcome.csv if args.csv else outcome.summary)
        elif args.command == "fig1a":
            cfg = {
                "experiment": {"mode": "fig1a", "seed": args.seed, "workers": args.workers},
                "fig1a": {"ns": args.ns, "t": args.t, "replications": args.replications, "w": args.w},
            }
            _write(execute(cfg), _out_dir(args.out))
        elif args.command == "fig1b":
            cfg = {
                "experiment": {"mode": "fig1b", "seed": args.seed, "workers": args.workers},
                "fig1b": {"ws": args.ws, "n": args.n, "t": args.t, "replications": args.replications},
            }
            _write(execute(cfg), _out_dir(args.out))
        else:
            if args.trace_cmd == "gen":
                spec = adv.AdversarySpec(args.adversary, seed=args.seed)
                gen = adv.generate_trace(spec, args.n, args.t, replication=args.replication)
                adv.write_trace(args.file, gen.trace)
                print(f"wrote {args.file}: N={args.n} T={args.t}")
            else:
                tr = adv.read_trace(args.file)
                # byte-exact round trip
                if adv.format_trace(tr) != Path(args.file).read_text():
                    raise ConfigurationError(f"{args.file}: not in canonical form")
                T, N = tr.shape
                print(f"ok: N={N} T={T} good_per_slot_min={int(tr.sum(1).min())} max={int(tr.sum(1).max())}")
    except (ConfigurationError, adv.InstanceTooLarge, OSError) as e:
        print(f"aoi-lab: error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
