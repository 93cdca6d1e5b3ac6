"""Command-line front end.

    qthreeterm compute-p  --quad k,l,m,n
    qthreeterm compute-qr --quad k,l,m,n
    qthreeterm verify --suite {threeterm,corollary,transforms,summations,contiguity,all}
                      [--grid B] [--order N] [--eps E] [--out FILE]
    qthreeterm --print-config

Every command accepts ``--config FILE`` (JSON); the environment variable
QTHREETERM_CONFIG names a config file when ``--config`` is absent.
Exit codes: 0 success, 1 verification failure, 2 configuration or
genericity error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, replace

from gmpy2 import mpq

from . import threeterm as tt
from .qcore import GenericPoint, NonGenericError, rat, rat_str
from .series import DEFAULT_ORDER
from .suites import SUITES, run_suite
from .transforms import sample_config

CONFIG_ENV = "QTHREETERM_CONFIG"
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    q: mpq = mpq(3, 7)
    a: mpq = mpq(2, 5)
    b: mpq = mpq(3, 11)
    c: mpq = mpq(5, 13)
    window: int = 12
    order: int = DEFAULT_ORDER
    eps: str = "1e-25"
    grid: int = 3
    contiguity_grid: int = 1
    suites: tuple = ("all",)
    out: str | None = None
    seed: int | None = None
    timing: bool = False

    @property
    def point(self) -> GenericPoint:
        return GenericPoint(self.q, self.a, self.b, self.c, self.window)

    @property
    def eps_value(self) -> mpq:
        try:
            v = rat(self.eps)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"eps {self.eps!r} is not a rational number") from exc
        if v <= 0:
            raise ConfigError(f"eps must be positive, got {self.eps!r}")
        return v

    def suite_names(self) -> list[str]:
        names = []
        for s in self.suites:
            if s == "all":
                names.extend(SUITES)
            elif s in SUITES:
                names.append(s)
            else:
                raise ConfigError(f"unknown suite {s!r}; choose from {', '.join(SUITES)}, all")
        return list(dict.fromkeys(names))

    def to_json(self, include_out: bool = True) -> dict:
        out = {
            "point": {"q": rat_str(self.q), "a": rat_str(self.a), "b": rat_str(self.b),
                      "c": rat_str(self.c)},
            "window": self.window,
            "order": self.order,
            "eps": self.eps,
            "grid": self.grid,
            "contiguity_grid": self.contiguity_grid,
            "suites": list(self.suites),
            "out": self.out,
            "seed": self.seed,
            "samples": sample_config(),
        }
        if not include_out:
            del out["out"]
        return out


_KEYS = {"point", "window", "order", "eps", "grid", "contiguity_grid", "suites", "out", "seed",
         "samples"}


def config_from_json(data: dict, base: RunConfig | None = None) -> RunConfig:
    """Overlay a parsed JSON config on ``base`` (defaults when None)."""
    cfg = base or RunConfig()
    unknown = set(data) - _KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    changes = {}
    try:
        for name, value in data.get("point", {}).items():
            if name not in ("q", "a", "b", "c"):
                raise ConfigError(f"unknown point parameter {name!r}")
            changes[name] = rat(value)
        for name in ("window", "order", "grid", "contiguity_grid"):
            if name in data:
                changes[name] = int(data[name])
        if "eps" in data:
            changes["eps"] = str(data["eps"])
        if "suites" in data:
            suites = data["suites"]
            changes["suites"] = tuple([suites] if isinstance(suites, str) else suites)
        if "out" in data:
            changes["out"] = data["out"]
        if "seed" in data:
            changes["seed"] = None if data["seed"] is None else int(data["seed"])
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad config value: {exc}") from exc
    return replace(cfg, **changes)


def load_config(path: str | None) -> RunConfig:
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return RunConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return config_from_json(data)


def validate(cfg: RunConfig) -> GenericPoint:
    """Check order, eps, grid and genericity; returns the point."""
    if cfg.order < 0:
        raise ConfigError("order must be non-negative")
    if cfg.grid < 0 or cfg.contiguity_grid < 0:
        raise ConfigError("grid bounds must be non-negative")
    cfg.eps_value
    cfg.suite_names()
    point = cfg.point
    bad = point.violations()
    if bad:
        raise NonGenericError("point is not generic: " + "; ".join(bad))
    return point


def max_degree(bound: int) -> int:
    """Largest d over canonical quads of the grid."""
    return max((q if q.k <= q.l else tt.ShiftQuad(q.l, q.k, q.m, q.n)).d for q in tt.grid(bound))


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# commands


def _coeff_list(p) -> str:
    return "[" + ", ".join(rat_str(c) for c in p.coeffs) + "]"


def cmd_compute_p(quad: tt.ShiftQuad, cfg: RunConfig, as_json: bool = False) -> int:
    point = validate(cfg)
    canon, cpoint, swapped = quad.canonical(point)
    p1 = tt.compute_P_theorem(canon, cpoint)
    p2 = tt.compute_P_proposition(canon, cpoint)
    same = p1 == p2
    if as_json:
        sys.stdout.write(dumps({"quad": list(quad.as_tuple()), "d": canon.d, "swapped": swapped,
                                "theorem": p1.to_json(), "proposition": p2.to_json(),
                                "paths_agree": same}))
    else:
        print(f"quad {quad}  d = {canon.d}" + ("  (a, b and k, l swapped)" if swapped else ""))
        if p1.is_zero() and p2.is_zero():
            print("P = 0")
        else:
            print(f"theorem:     {_coeff_list(p1)}")
            print(f"proposition: {_coeff_list(p2)}")
        print(f"paths agree: {str(same).lower()}")
    return EXIT_OK if same else EXIT_FAIL


def cmd_compute_qr(quad: tt.ShiftQuad, cfg: RunConfig, as_json: bool = False) -> int:
    point = validate(cfg)
    Q, R = tt.compute_Q(quad, point), tt.compute_R(quad, point)
    res = tt.verify_three_term(quad, point, cfg.order)
    if as_json:
        sys.stdout.write(dumps({"quad": list(quad.as_tuple()), "Q": Q.to_json(), "R": R.to_json(),
                                "residual_zero_through_order": cfg.order if res["passed"] else None,
                                "first_mismatch": res["first_mismatch"]}))
    else:
        for name, f in (("Q", Q), ("R", R)):
            print(f"{name} = {_coeff_list(f.num)} / {_coeff_list(f.den)}")
        if res["passed"]:
            print(f"relation residual: 0 through x^{cfg.order}")
        else:
            print(f"relation residual: first nonzero coefficient at x^{res['first_mismatch']}")
    return EXIT_OK if res["passed"] else EXIT_FAIL


def cmd_verify(cfg: RunConfig) -> int:
    point = validate(cfg)
    names = cfg.suite_names()
    if "threeterm" in names or "corollary" in names:
        need = max_degree(cfg.grid) + 5
        if cfg.order < need:
            print(f"warning: order {cfg.order} is below max d + 5 = {need}; "
                  "the relations are still checked through that order", file=sys.stderr)
    report = {"config": cfg.to_json(include_out=False), "suites": {}}
    for name in names:
        t0 = time.perf_counter()
        result = run_suite(name, point, cfg.order, cfg.eps_value, cfg.grid, cfg.contiguity_grid)
        if cfg.timing:
            result["seconds"] = round(time.perf_counter() - t0, 3)
        report["suites"][name] = result
        status = "pass" if result["pass"] else "FAIL"
        print(f"{name}: {result['count']} cases, {len(result['failures'])} failures ({status})",
              file=sys.stderr)
        for key in result["failures"][:20]:
            print(f"  failed {key}: {_failure_detail(result['cases'][key])}", file=sys.stderr)
    report["pass"] = all(s["pass"] for s in report["suites"].values())
    text = dumps(report)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report["pass"] else EXIT_FAIL


def _failure_detail(case: dict) -> str:
    for key in ("first_mismatch", "margin", "failing_j", "checks"):
        if key in case and case[key] not in (None, []):
            return f"{key} = {case[key]}"
    return "see report"


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qthreeterm",
                                     description="Exact three-term relations for 2phi1 and their checks.")
    parser.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    parser.add_argument("--print-config", action="store_true",
                        help="print the effective configuration as JSON and exit")
    sub = parser.add_subparsers(dest="command")
    for name, helptext in (("compute-p", "print P on both computation paths"),
                           ("compute-qr", "print Q and R as reduced fractions in x")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--quad", required=True, help="shifts k,l,m,n")
        p.add_argument("--config", dest="sub_config", help="JSON config file")
        p.add_argument("--order", type=int, help="series order for the residual check")
        p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", action="append", help=f"one of {', '.join(SUITES)}, all (repeatable)")
    v.add_argument("--grid", type=int, help="bound B on |k|, |l|, |m|, |n|")
    v.add_argument("--contiguity-grid", type=int, help="grid bound for the contiguity suite")
    v.add_argument("--order", type=int, help="truncation order N")
    v.add_argument("--eps", help="tolerance, e.g. 1e-25 or 1/10^25 as num/den")
    v.add_argument("--out", help="write the JSON report here instead of stdout")
    v.add_argument("--config", dest="sub_config", help="JSON config file")
    v.add_argument("--timing", action="store_true", help="add wall-clock seconds per suite")
    return parser


def _effective_config(args) -> RunConfig:
    cfg = load_config(getattr(args, "sub_config", None) or args.config)
    over = {}
    for name in ("grid", "contiguity_grid", "order", "eps", "out"):
        value = getattr(args, name, None)
        if value is not None:
            over[name] = value
    if getattr(args, "suite", None):
        over["suites"] = tuple(args.suite)
    if getattr(args, "timing", False):
        over["timing"] = True
    return replace(cfg, **over)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _effective_config(args)
        if args.print_config:
            sys.stdout.write(dumps(cfg.to_json()))
            return EXIT_OK
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_CONFIG
        if args.command == "verify":
            return cmd_verify(cfg)
        try:
            quad = tt.ShiftQuad.parse(args.quad)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if args.command == "compute-p":
            return cmd_compute_p(quad, cfg, args.json)
        return cmd_compute_qr(quad, cfg, args.json)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonGenericError as exc:
        print(f"genericity error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
