"""Command-line front end: ``kaclab <subcommand> [flags]``.

Settings resolve as flags > config file > defaults. Every output carries
the resolved settings: CSV files start with ``#@ key=value`` lines and
JSON documents hold a ``config`` object. Both forms are accepted back by
``--config``, so an output file reproduces itself.

Exit codes: 0 success, 2 statistical assertion failed, 3 numeric failure
budget exceeded, 64 usage error, 65 invalid value or config file.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys

from . import __version__
from . import experiments as ex
from . import kac_rice, limit_process, sign_compare
from .coeff_sampling import SeedSpec, moment_report, parse_distribution, sample_coefficients
from .errors import KacLabError
from .kac_poly import KacPolynomial, Region
from .root_count import PartitionSpec

log = logging.getLogger("kaclab")

EXIT_USAGE = 64
EXIT_DATA = 65

SUBCOMMANDS = ("sample", "count", "density", "expect", "process", "compare",
               "concentration", "figure1", "dyadic")

# key -> (type, default); None defaults are filled per subcommand
DEFAULTS = {
    "degree": (int, 1000),
    "dist": (str, "gaussian"),
    "samples": (int, None),
    "seed": (int, 0),
    "interval": (str, None),
    "region": (str, None),
    "eps": (float, 0.5),
    "m": (float, None),
    "ell": (float, None),
    "delta": (float, None),
    "out": (str, None),
    "threads": (int, None),
    "epsilon0": (float, 0.25),
    "index": (int, 0),
    "points": (int, 512),
    "grid_start": (float, 0.0),
    "grid_end": (float, 20.0),
    "grid_step": (float, 1e-2),
    "paths": (int, 1),
    "sampler": (str, "cov"),
    "summary": (bool, False),
    "draws": (int, 10_000),
    "grid_count": (int, None),
    "j_range": (str, "0,5"),
    "h": (str, "1,2,3,5,10"),
    "moments": (int, None),
}

SHARED_KEYS = ("degree", "dist", "samples", "seed", "interval", "region", "eps", "m", "ell",
               "delta", "threads", "epsilon0")
OWN_KEYS = {
    "sample": ("index", "moments"),
    "density": ("points",),
    "process": ("grid_start", "grid_end", "grid_step", "paths", "sampler", "summary"),
    "compare": ("draws", "grid_count"),
    "dyadic": ("j_range", "h"),
}

SAMPLE_DEFAULTS = {"count": 10, "concentration": 2000, "figure1": 100, "dyadic": 1000}


class UsageError(Exception):
    pass


class ConfigError(Exception):
    pass


class CliValueError(KacLabError, ValueError):
    """A flag or environment value that fails validation."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _convert(key: str, raw: str):
    typ = DEFAULTS[key][0]
    if raw == "None":
        return None
    if typ is bool:
        return _bool(raw)
    return typ(raw)


def load_config(path: str) -> dict:
    """Read ``key=value`` lines (``#`` comments, ``#@`` resolved lines) or a JSON report."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError(f"{path}: cannot read config: {e.strerror}") from None
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}:{e.lineno}: malformed JSON: {e.msg}") from None
        items = doc.get("config", doc)
        out = {}
        for k, v in items.items():
            if k in DEFAULTS:
                out[k] = v
        return out
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if s.startswith("#@"):
            s = s[2:].strip()
        elif not s or s.startswith("#"):
            continue
        elif "," in s and "=" not in s:
            break  # CSV body after the header block
        key, sep, val = s.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or not key:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        if key == "command":
            continue  # the subcommand given on the command line decides
        if key not in DEFAULTS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _convert(key, val.strip())
        except ValueError as e:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {e}") from None
    return out


def _shared(p: argparse.ArgumentParser):
    g = p.add_argument_group("shared")
    g.add_argument("--degree", "-n", type=int)
    g.add_argument("--dist", help="gaussian | rademacher | uniform | pareto:<exponent>")
    g.add_argument("--samples", type=int)
    g.add_argument("--seed", type=int, help="master seed (64-bit)")
    g.add_argument("--interval", help="a,b")
    g.add_argument("--region", choices=[r.value for r in Region] + ["all"])
    g.add_argument("--eps", type=float, help="tail scale epsilon")
    g.add_argument("--m", type=float)
    g.add_argument("--ell", type=float)
    g.add_argument("--delta", type=float)
    g.add_argument("--out", help="output path (default stdout)")
    g.add_argument("--threads", type=int, help="worker processes (env KACLAB_THREADS)")
    g.add_argument("--config", help="key=value file or a previous output")
    g.add_argument("--epsilon0", type=float, help="moment margin of the law")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="kaclab", description="Real roots of Kac random polynomials.",
                  argument_default=argparse.SUPPRESS)
    top.add_argument("--version", action="version", version=f"kaclab {__version__}")
    top.add_argument("-v", "--verbose", action="store_true")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        p = sub.add_parser(name, help=help_, description=help_,
                           argument_default=argparse.SUPPRESS)
        _shared(p)
        return p

    p = add("sample", "draw one coefficient vector (CSV i,coeff) or a moment report")
    p.add_argument("--index", type=int, help="sample index within the seed")
    p.add_argument("--moments", type=int, help="report empirical moments from this many draws")
    add("count", "certified root counts of independent draws (CSV + summary)")
    p = add("density", "Kac-Rice density on [0,1] (CSV x,rho1)")
    p.add_argument("--points", type=int)
    add("expect", "expected number of real roots (JSON)")
    p = add("process", "sample the limit process (CSV path_id,t,value or summary JSON)")
    p.add_argument("--grid-start", dest="grid_start", type=float)
    p.add_argument("--grid-end", dest="grid_end", type=float)
    p.add_argument("--grid-step", dest="grid_step", type=float)
    p.add_argument("--paths", type=int)
    p.add_argument("--sampler", choices=["cov", "kernel"])
    p.add_argument("--summary", action="store_const", const=True)
    p = add("compare", "covariance pair, Powers-Stormer and coupling report (JSON)")
    p.add_argument("--draws", type=int)
    p.add_argument("--grid-count", dest="grid_count", type=int, help="fixed number of grid steps")
    add("concentration", "root-count tails against the Kac-Rice mean (JSON)")
    add("figure1", "roots in [0,1] of 100 draws (CSV sample_id,root)")
    p = add("dyadic", "exceedance probabilities on dyadic cells 1-2^-j (JSON)")
    p.add_argument("--j-range", dest="j_range", help="first,last j")
    p.add_argument("--h", help="comma separated thresholds")
    return top


def resolve(ns: argparse.Namespace) -> dict:
    """Defaults < config file < flags."""
    cfg = {k: v for k, (_, v) in DEFAULTS.items()}
    cmd = ns.command
    if cmd in SAMPLE_DEFAULTS:
        cfg["samples"] = SAMPLE_DEFAULTS[cmd]
    if cmd == "count":
        cfg["interval"] = "0,1"
    if cmd == "concentration":
        cfg["interval"] = "0,1"
    if cmd == "dyadic":
        cfg["degree"] = 1000
    path = getattr(ns, "config", None)
    if path:
        cfg.update(load_config(path))
    for k in DEFAULTS:
        if hasattr(ns, k):
            cfg[k] = getattr(ns, k)
    if cfg["threads"] is None:
        env = os.environ.get("KACLAB_THREADS")
        if env:
            try:
                cfg["threads"] = int(env)
            except ValueError:
                raise CliValueError(f"KACLAB_THREADS must be an integer, got {env!r}")
        else:
            cfg["threads"] = 1
    if cfg["threads"] < 1:
        raise CliValueError("threads must be >= 1")
    cfg["command"] = cmd
    return cfg


def _pair(text: str, name: str) -> tuple[float, float]:
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError:
        raise CliValueError(f"--{name} needs two comma separated numbers, got {text!r}")
    return a, b


def _header(cfg: dict) -> str:
    keys = SHARED_KEYS + OWN_KEYS.get(cfg["command"], ())
    lines = [f"#@ command={cfg['command']}\n"]
    lines += [f"#@ {k}={cfg[k]}\n" for k in keys if cfg.get(k) is not None]
    return "".join(lines)


def _emit(cfg: dict, text: str):
    if cfg.get("out"):
        with open(cfg["out"], "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config_view(cfg):
    keys = ("command",) + SHARED_KEYS + OWN_KEYS.get(cfg["command"], ())
    return {k: cfg[k] for k in keys if cfg.get(k) is not None}


def _json_out(cfg, doc):
    _emit(cfg, json.dumps(doc, indent=2) + "\n")
    return doc.get("exit_code", 0)


# ------------------------------------------------------------------ commands

def _dist(cfg):
    return parse_distribution(cfg["dist"], cfg["epsilon0"])


def cmd_sample(cfg):
    dist = _dist(cfg)
    seed = SeedSpec(cfg["seed"])
    if cfg["moments"]:
        rep = moment_report(dist, cfg["moments"], seed)
        return _json_out(cfg, ex.report_document("sample", _config_view(cfg), rep))
    c = sample_coefficients(dist, cfg["degree"], ex.sample_seed(seed, cfg["index"]))
    _emit(cfg, _header(cfg) + KacPolynomial(c).to_csv())
    return 0


def _target(cfg):
    if cfg["region"]:
        return None, cfg["region"]
    return _pair(cfg["interval"] or "0,1", "interval"), None


def cmd_count(cfg):
    interval, region = _target(cfg)
    mc = ex.run_root_count_mc(ex.ExperimentConfig(
        cfg["degree"], _dist(cfg), cfg["samples"], interval, region, cfg["eps"],
        SeedSpec(cfg["seed"]), cfg["threads"]))
    summary = ex.report_document("count", _config_view(cfg), mc.report,
                                 numeric_ok=mc.numeric_ok)
    body = mc.to_csv()
    lines = "".join(f"# {ln}\n" for ln in json.dumps(summary["results"]).splitlines())
    _emit(cfg, _header(cfg) + body + "# summary\n" + lines)
    return summary["exit_code"]


def cmd_density(cfg):
    prof = kac_rice.DensityProfile.default(cfg["degree"], cfg["points"])
    _emit(cfg, _header(cfg) + prof.to_csv())
    return 0


def cmd_expect(cfg):
    n = cfg["degree"]
    if cfg["region"] == "all" or (not cfg["region"] and not cfg["interval"]):
        val = kac_rice.expected_count_real_line(n)
        target = "real_line"
    elif cfg["region"]:
        val = kac_rice.expected_count_region(n, Region.parse(cfg["region"]))
        target = cfg["region"]
    else:
        iv = _pair(cfg["interval"], "interval")
        val = kac_rice.expected_count(n, iv)
        target = list(iv)
    res = {"n": n, "target": target, "expected_count": val,
           "leading_term": 2 / math.pi * math.log(n) if target == "real_line" else None}
    return _json_out(cfg, ex.report_document("expect", _config_view(cfg), res))


def cmd_process(cfg):
    grid = limit_process.ProcessGrid.uniform(cfg["grid_start"], cfg["grid_end"], cfg["grid_step"])
    seed = SeedSpec(cfg["seed"])
    if cfg["sampler"] == "cov":
        smp = limit_process.sample_path_covariance(grid, seed, cfg["paths"])
    else:
        smp = limit_process.sample_path_kernel(grid, seed, paths=cfg["paths"])
    if cfg["summary"]:
        z = smp.zero_counts()
        res = {"paths": int(z.size), "mean_sign_changes": float(z.mean()),
               "std_error": float(z.std(ddof=1) / math.sqrt(z.size)) if z.size > 1 else None,
               "expected_zeros": limit_process.expected_zeros(grid.points[0], grid.points[-1]),
               "sampler": smp.sampler, "diagnostics": smp.diagnostics}
        return _json_out(cfg, ex.report_document("process", _config_view(cfg), res))
    _emit(cfg, _header(cfg) + smp.to_csv())
    return 0


def cmd_compare(cfg):
    n = cfg["degree"]
    m = cfg["m"] if cfg["m"] is not None else 10.0
    ell = cfg["ell"] if cfg["ell"] is not None else 3 * math.log(n)
    spec = PartitionSpec.build(m, ell, n, cfg["delta"], cfg["grid_count"])
    rep = sign_compare.comparison_report(n, spec, cfg["draws"], SeedSpec(cfg["seed"]))
    ok = rep["ps_lhs"] <= rep["ps_rhs"] + sign_compare.PS_SLACK
    return _json_out(cfg, ex.report_document("compare", _config_view(cfg), rep,
                                             {"powers_stormer": ok}))


def cmd_concentration(cfg):
    interval, region = _target(cfg)
    mc = ex.run_root_count_mc(ex.ExperimentConfig(
        cfg["degree"], _dist(cfg), cfg["samples"], interval, region, cfg["eps"],
        SeedSpec(cfg["seed"]), cfg["threads"]))
    rep = mc.report
    checks = {}
    if _dist(cfg).kind == "gaussian":
        checks["mean_within_3se"] = abs(rep.z_score) <= 3
    return _json_out(cfg, ex.report_document("concentration", _config_view(cfg), rep,
                                             checks, mc.numeric_ok))


def cmd_figure1(cfg):
    res = ex.figure1_dataset(cfg["degree"], cfg["samples"], _dist(cfg), SeedSpec(cfg["seed"]),
                             parallelism=cfg["threads"])
    log.info("figure1 summary %s", json.dumps(res.summary()))
    _emit(cfg, _header(cfg) + res.to_csv())
    return 0


def cmd_dyadic(cfg):
    a, b = (int(v) for v in _pair(cfg["j_range"], "j-range"))
    hs = [int(v) for v in str(cfg["h"]).split(",") if v.strip()]
    res = ex.dyadic_tail_scan(cfg["degree"], range(a, b + 1), hs, cfg["samples"],
                              SeedSpec(cfg["seed"]), _dist(cfg), parallelism=cfg["threads"])
    return _json_out(cfg, ex.report_document("dyadic", _config_view(cfg), res))


COMMANDS = {
    "sample": cmd_sample, "count": cmd_count, "density": cmd_density, "expect": cmd_expect,
    "process": cmd_process, "compare": cmd_compare, "concentration": cmd_concentration,
    "figure1": cmd_figure1, "dyadic": cmd_dyadic,
}


def parse_and_dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if getattr(ns, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve(ns)
        log.info("resolved config %s", json.dumps(cfg, sort_keys=True))
        return COMMANDS[cfg["command"]](cfg)
    except ConfigError as e:
        print(f"kaclab: {e}", file=sys.stderr)
        return EXIT_DATA
    except (KacLabError, ValueError) as e:
        print(f"kaclab {ns.command}: invalid value: {e}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(parse_and_dispatch())

