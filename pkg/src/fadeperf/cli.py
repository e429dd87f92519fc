"""Configuration-driven sweep runner.

Reads a JSON sweep description, evaluates the requested methods (closed
hyper-Fox's H form, direct quadrature, the MGF single-integral route, and
Monte Carlo) over an SNR grid, and writes deterministic CSV plot data.

This is the only place where dB and linear units meet: the grid is in dB
and every branch's mean power is set to 10^(dB/10) (for lognormal the grid
value is the dB location parameter itself; for custom mixtures it is a pure
scale factor on the base distribution).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from . import fading, mc, perf
from .fading import ChannelModel, Custom, HyperFoxH
from .mellin import FoxHParams
from .perf import MetricKind, MetricSpec
from .specfn import gauss_hermite_nodes, gcq_nodes

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

METHODS = ("closed", "quadrature", "gcq", "mc")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    metric: MetricSpec
    channels: tuple[ChannelModel, ...]  # base shapes at unit mean power
    snr_start_db: float
    snr_stop_db: float
    snr_step_db: float
    methods: tuple[str, ...]
    gcq_n: int = 64
    mc_samples: int = 10**6
    mc_seed: int = 0
    output_path: str = "sweep.csv"
    threads: int = 1

    def grid_db(self):
        if self.snr_start_db == self.snr_stop_db:
            return [self.snr_start_db]
        count = int(math.floor((self.snr_stop_db - self.snr_start_db) / self.snr_step_db + 1e-9))
        return [self.snr_start_db + k * self.snr_step_db for k in range(count + 1)]


@dataclass(frozen=True)
class SweepRow:
    snr_db: float
    method: str
    value: float
    stderr: float | None = None
    error: str | None = None


@dataclass
class SweepResult:
    rows: list[SweepRow] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(r.error is not None for r in self.rows)

    def to_csv(self) -> str:
        lines = ["snr_db,method,value,stderr"]
        for r in self.rows:
            val = "nan" if r.error is not None else f"{r.value:.17g}"
            err = "" if r.stderr is None else f"{r.stderr:.17g}"
            lines.append(f"{r.snr_db:.17g},{r.method},{val},{err}")
        return "\n".join(lines) + "\n"


def _parse_metric(doc) -> MetricSpec:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ConfigError("metric must be an object with a 'kind'")
    kind = doc["kind"]
    try:
        if kind == "capacity":
            return MetricSpec.capacity(float(doc.get("a", 1.0)))
        if kind == "bep_correlated":
            return MetricSpec.bep_correlated(float(doc["a"]))
        if kind == "custom":
            return MetricSpec.custom(float(doc["a"]), float(doc["b"]), int(doc["n"]))
        factory = {
            "bep_coherent_fsk": MetricSpec.bep_coherent_fsk,
            "bep_noncoherent_fsk": MetricSpec.bep_noncoherent_fsk,
            "bep_coherent_psk": MetricSpec.bep_coherent_psk,
            "bep_dpsk": MetricSpec.bep_dpsk,
        }[kind]
    except KeyError as exc:
        raise ConfigError(f"unknown metric field or kind: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return factory()


def _parse_channel(doc) -> ChannelModel:
    if not isinstance(doc, dict) or "type" not in doc:
        raise ConfigError("each channel must be an object with a 'type'")
    kind = doc["type"]
    try:
        if kind == "one_sided_gaussian":
            return fading.OneSidedGaussian(1.0)
        if kind == "exponential":
            return fading.Exponential(1.0)
        if kind in ("nakagami", "gamma"):
            return fading.Nakagami(float(doc["m"]), 1.0)
        if kind == "weibull":
            return fading.Weibull(float(doc["xi"]), 1.0)
        if kind == "hyper_gamma":
            comps = tuple(
                (float(c["weight"]), float(c["m"]), float(c.get("mean_factor", 1.0)))
                for c in doc["components"]
            )
            base = sum(w * f for w, _, f in comps)
            comps = tuple((w, m, f / base) for w, m, f in comps)
            return fading.HyperGamma(comps)
        if kind == "hoyt":
            return fading.Hoyt(float(doc["q"]), 1.0, int(doc.get("k_trunc", 30)))
        if kind == "rice":
            return fading.Rice(float(doc["n"]), 1.0, int(doc.get("k_trunc", 30)))
        if kind == "maxwell":
            return fading.Maxwell(1.0)
        if kind == "lognormal":
            return fading.Lognormal(
                0.0, float(doc["sigma_db"]), int(doc.get("k_hermite", 20))
            )
        if kind == "k_dist":
            return fading.KDist(float(doc["m_s"]), 1.0)
        if kind == "generalized_k":
            return fading.GeneralizedK(float(doc["m"]), float(doc["m_s"]), 1.0)
        if kind == "generalized_gamma":
            return fading.GeneralizedGamma(float(doc["m"]), float(doc["xi"]), 1.0)
        if kind == "egk":
            return fading.EGK(
                float(doc["m"]),
                float(doc["xi"]),
                float(doc["m_s"]),
                float(doc["xi_s"]),
                1.0,
            )
        if kind == "custom":
            terms = tuple(
                (
                    float(t["eta"]),
                    float(t["c"]),
                    FoxHParams(
                        m=int(t["m"]),
                        n=int(t["n"]),
                        upper=tuple((float(a), float(A)) for a, A in t["upper"]),
                        lower=tuple((float(b), float(B)) for b, B in t["lower"]),
                    ),
                )
                for t in doc["terms"]
            )
            return Custom(HyperFoxH(terms))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad channel spec {doc!r}: {exc}") from exc
    raise ConfigError(f"unknown channel type {kind!r}")


def _model_at_snr(base: ChannelModel, snr_db: float) -> ChannelModel:
    gbar = 10.0 ** (snr_db / 10.0)
    if isinstance(base, Custom):
        # Pure scale on the base mixture: gamma -> gbar * gamma.
        terms = tuple((e * 1.0 / gbar, c / gbar, h) for e, c, h in base.hyper.terms)
        return Custom(HyperFoxH(terms))
    return fading.scale_mean(base, gbar)


def load_config(doc: dict) -> SweepConfig:
    try:
        metric = _parse_metric(doc["metric"])
        channels = tuple(_parse_channel(c) for c in doc["channels"])
        grid = doc["snr_grid_db"]
        start, stop = float(grid["start"]), float(grid["stop"])
        step = float(grid.get("step", 1.0))
        methods = tuple(doc["methods"])
        cfg = SweepConfig(
            metric=metric,
            channels=channels,
            snr_start_db=start,
            snr_stop_db=stop,
            snr_step_db=step,
            methods=methods,
            gcq_n=int(doc.get("gcq_N", 64)),
            mc_samples=int(doc.get("mc_samples", 10**6)),
            mc_seed=int(doc.get("mc_seed", 0)),
            output_path=str(doc.get("output_path", "sweep.csv")),
            threads=int(doc.get("threads", 1)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad sweep config: {exc}") from exc
    validate_config(cfg)
    return cfg


def _identical_nakagami(channels) -> tuple[float, float] | None:
    """(m, relative mean) when every branch is the same Gamma-family shape."""
    shapes = []
    for ch in channels:
        if isinstance(ch, fading.Exponential):
            shapes.append(1.0)
        elif isinstance(ch, fading.OneSidedGaussian):
            shapes.append(0.5)
        elif isinstance(ch, fading.Maxwell):
            shapes.append(1.5)
        elif isinstance(ch, fading.Nakagami):
            shapes.append(ch.m)
        elif isinstance(ch, fading.GeneralizedGamma) and ch.xi == 1.0:
            shapes.append(ch.m)
        else:
            return None
    if len(set(shapes)) != 1:
        return None
    return shapes[0], 1.0


def validate_config(cfg: SweepConfig) -> None:
    if cfg.snr_step_db <= 0.0:
        raise ConfigError("snr_grid_db.step must be positive")
    if cfg.snr_start_db > cfg.snr_stop_db:
        raise ConfigError("snr_grid_db.start must not exceed stop")
    if not cfg.methods:
        raise ConfigError("methods must be a nonempty list")
    for mth in cfg.methods:
        if mth not in METHODS:
            raise ConfigError(f"unknown method {mth!r} (choose from {METHODS})")
    if not cfg.channels:
        raise ConfigError("channels must be a nonempty list")
    L = len(cfg.channels)
    if "quadrature" in cfg.methods and L > 1:
        raise ConfigError("the quadrature method applies to single-link sweeps only")
    if "closed" in cfg.methods and L > 1 and _identical_nakagami(cfg.channels) is None:
        raise ConfigError(
            "the closed method with multiple branches requires identical "
            "Gamma-family channels (the printed combiner closed form)"
        )
    if "mc" in cfg.methods:
        if any(isinstance(ch, Custom) for ch in cfg.channels):
            raise ConfigError("Monte Carlo cannot sample custom mixtures")
        if cfg.metric.n == 2 and cfg.metric.b != 1.0:
            raise ConfigError("Monte Carlo supports BEP metrics and capacity only")
        if cfg.mc_samples < 1000:
            raise ConfigError("mc_samples must be at least 1000")
    if cfg.gcq_n < 1:
        raise ConfigError("gcq_N must be >= 1")
    if cfg.threads < 1:
        raise ConfigError("threads must be >= 1")


def _eval_point(cfg: SweepConfig, snr_db: float, method: str) -> SweepRow:
    models = [_model_at_snr(ch, snr_db) for ch in cfg.channels]
    metric = cfg.metric
    try:
        if method == "closed":
            if len(models) == 1:
                val = perf.aup_single(models[0], metric)
            else:
                m_shape, _ = _identical_nakagami(cfg.channels)
                gbar = 10.0 ** (snr_db / 10.0)
                val = perf.aup_nakagami_identical_mrc(m_shape, gbar, len(models), metric)
            return SweepRow(snr_db, method, val)
        if method == "quadrature":
            return SweepRow(snr_db, method, perf.aup_single_quadrature(models[0], metric))
        if method == "gcq":
            val = perf.aup_mrc_independent(models, metric, N=cfg.gcq_n)
            return SweepRow(snr_db, method, val)
        if method == "mc":
            est = mc.estimate_aup_mc(
                models, metric, cfg.mc_samples, cfg.mc_seed, threads=1
            )
            return SweepRow(snr_db, method, est.value, stderr=est.stderr)
        raise ConfigError(f"unknown method {method!r}")
    except (ValueError, RuntimeError) as exc:
        return SweepRow(snr_db, method, math.nan, error=f"{type(exc).__name__}: {exc}")


def run_sweep(cfg: SweepConfig) -> SweepResult:
    """Evaluate every (grid point, method) pair; rows come back in grid-major
    deterministic order regardless of the worker schedule."""
    points = [(snr, mth) for snr in cfg.grid_db() for mth in cfg.methods]
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            rows = list(pool.map(lambda p: _eval_point(cfg, *p), points))
    else:
        rows = [_eval_point(cfg, snr, mth) for snr, mth in points]
    return SweepResult(rows=rows)


# ---------------------------------------------------------------------------
# Command-line front end.

def _add_common(sub):
    sub.add_argument("--config", required=True, help="sweep config JSON path")
    sub.add_argument("--out", help="output CSV path (overrides config)")
    sub.add_argument("--seed", type=int, help="Monte Carlo seed (overrides config)")
    sub.add_argument("--threads", type=int, help="worker threads (overrides config)")


def _load(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _run_command(args, metric_override=None, methods_override=None) -> int:
    try:
        doc = _load(args.config)
        if metric_override is not None:
            doc["metric"] = metric_override
        if methods_override is not None:
            doc["methods"] = methods_override
        cfg = load_config(doc)
        if args.out:
            cfg = replace(cfg, output_path=args.out)
        if args.seed is not None:
            cfg = replace(cfg, mc_seed=args.seed)
        if args.threads is not None:
            cfg = replace(cfg, threads=args.threads)
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    result = run_sweep(cfg)
    with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(result.to_csv())
    for row in result.rows:
        if row.error is not None:
            print(
                f"error at snr={row.snr_db:g} dB method={row.method}: {row.error}",
                file=sys.stderr,
            )
    if result.failed:
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_abep(args) -> int:
    kinds = {
        "bpsk": "bep_coherent_psk",
        "dpsk": "bep_dpsk",
        "bfsk": "bep_coherent_fsk",
        "ncfsk": "bep_noncoherent_fsk",
    }
    override = {"kind": kinds[args.modulation]} if args.modulation else None
    return _run_command(args, metric_override=override)


def _cmd_capacity(args) -> int:
    override = {"kind": "capacity", "a": args.power}
    return _run_command(args, metric_override=override)


def _cmd_aup(args) -> int:
    override = {"kind": "custom", "a": args.a, "b": args.b, "n": args.n}
    return _run_command(args, metric_override=override)


def _cmd_simulate(args) -> int:
    return _run_command(args, methods_override=["mc"])


def _cmd_nodes(args) -> int:
    try:
        rule = gcq_nodes(args.count) if args.kind == "gcq" else gauss_hermite_nodes(args.count)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    lines = ["node,weight"]
    for s, w in zip(rule.nodes, rule.weights):
        lines.append(f"{s:.17g},{w:.17g}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fadeperf",
        description="Average bit-error probability and capacity over "
        "generalized fading channels",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("abep", help="average bit-error probability sweep")
    _add_common(p)
    p.add_argument(
        "--modulation",
        choices=["bpsk", "dpsk", "bfsk", "ncfsk"],
        help="override the config metric with a named binary modulation",
    )
    p.set_defaults(func=_cmd_abep)

    p = subs.add_parser("capacity", help="average capacity sweep")
    _add_common(p)
    p.add_argument("--power", type=float, default=1.0, help="transmit power a")
    p.set_defaults(func=_cmd_capacity)

    p = subs.add_parser("aup", help="sweep with explicit (a, b, n)")
    _add_common(p)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_aup)

    p = subs.add_parser("simulate", help="Monte Carlo only sweep")
    _add_common(p)
    p.set_defaults(func=_cmd_simulate)

    p = subs.add_parser("nodes", help="dump quadrature rules for debugging")
    p.add_argument("--kind", choices=["gcq", "hermite"], required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_nodes)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
