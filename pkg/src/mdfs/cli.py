"""Command-line interface: ``mdfs {asymptotic,exact,sweep,curve,validate}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from mdfs.exact import observables
from mdfs.laplace import corrections
from mdfs.params import CoexistenceError, CriticalPointError, ModelParams, NoRootError, from_jh
from mdfs.phasemap import QUANTITIES, numeric_monotonicity_curve, sign_change_curve
from mdfs.validation import SUITES, run_suites

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: ModelParams | None
    n: int | None
    n_list: tuple[int, ...]
    quantities: tuple[str, ...]
    methods: tuple[str, ...]
    j_grid: tuple[float, ...]
    h_bracket: tuple[float, float]
    tol: float
    suites: tuple[str, ...]
    output: str
    output_path: str | None


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_point_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--parametrization", "--parameterization", choices=("ab", "jh"), default=None)
    sp.add_argument("--a", type=float)
    sp.add_argument("--b", type=float)
    sp.add_argument("--j", type=float)
    sp.add_argument("--h", type=float)


def _add_output_args(sp: argparse.ArgumentParser, default: str) -> None:
    sp.add_argument("--format", dest="output", choices=("json", "csv"), default=default)
    sp.add_argument("--output", dest="output_path", default=None, help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mdfs", description="Finite-size corrections of the mean-field monomer-dimer model.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("asymptotic", help="thermodynamic limits and 1/N corrections at one point")
    _add_point_args(sp)
    _add_output_args(sp, "json")

    sp = sub.add_parser("exact", help="exact finite-N observables")
    _add_point_args(sp)
    sp.add_argument("--n", type=int, required=True)
    _add_output_args(sp, "json")

    sp = sub.add_parser("sweep", help="exact observables and N*(q_N - q*) over a list of sizes")
    _add_point_args(sp)
    sp.add_argument("--n-list", type=_int_list, default=(256, 512, 1024, 2048, 4096))
    _add_output_args(sp, "csv")

    sp = sub.add_parser("curve", help="(J, h) curves where the corrections change sign")
    sp.add_argument("--quantity", choices=QUANTITIES + ("all",), default="all")
    sp.add_argument("--method", choices=("analytic", "numeric", "both"), default="analytic")
    sp.add_argument("--j-grid", type=_float_list, default=None, help="comma-separated J values")
    sp.add_argument("--j-min", type=float, default=0.05)
    sp.add_argument("--j-max", type=float, default=2.5)
    sp.add_argument("--j-count", type=int, default=50)
    sp.add_argument("--h-min", type=float, default=-3.0)
    sp.add_argument("--h-max", type=float, default=1.5)
    sp.add_argument("--n-list", type=_int_list, default=(256, 512, 1024))
    sp.add_argument("--tol", type=float, default=1e-6)
    _add_output_args(sp, "csv")

    sp = sub.add_parser("validate", help="run built-in consistency checks")
    sp.add_argument("--suite", action="append", choices=SUITES, default=None)
    _add_output_args(sp, "json")
    return parser


def _resolve_params(ns: argparse.Namespace) -> ModelParams:
    has_ab = ns.a is not None or ns.b is not None
    has_jh = ns.j is not None or ns.h is not None
    mode = ns.parametrization or ("jh" if has_jh and not has_ab else "ab")
    if mode == "ab":
        if has_jh or ns.a is None or ns.b is None:
            raise UsageError("the ab parametrization needs exactly --a and --b")
        return ModelParams(ns.a, ns.b)
    if has_ab or ns.j is None or ns.h is None:
        raise UsageError("the jh parametrization needs exactly --j and --h")
    return from_jh(ns.j, ns.h)


def config_from_args(argv: Sequence[str] | None = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    if ns.verbose:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    params = _resolve_params(ns) if ns.command in ("asymptotic", "exact", "sweep") else None
    n_list = tuple(getattr(ns, "n_list", ()) or ())
    if n_list and (any(n < 1 for n in n_list) or any(b <= a for a, b in zip(n_list, n_list[1:]))):
        raise UsageError("--n-list must be strictly increasing positive sizes")
    j_grid: tuple[float, ...] = ()
    quantities: tuple[str, ...] = ()
    methods: tuple[str, ...] = ()
    h_bracket = (-3.0, 1.5)
    tol = 1e-6
    if ns.command == "curve":
        if ns.tol <= 0:
            raise UsageError("--tol must be positive")
        if ns.h_max <= ns.h_min:
            raise UsageError("--h-max must exceed --h-min")
        j_grid = ns.j_grid or tuple(float(j) for j in np.linspace(ns.j_min, ns.j_max, ns.j_count))
        if any(j <= 0 for j in j_grid):
            raise UsageError("J values must be positive")
        quantities = QUANTITIES if ns.quantity == "all" else (ns.quantity,)
        methods = ("analytic", "numeric") if ns.method == "both" else (ns.method,)
        h_bracket = (ns.h_min, ns.h_max)
        tol = ns.tol
        if "numeric" in methods and len(n_list) < 3:
            raise UsageError("numeric curves need at least 3 sizes in --n-list")
    n = getattr(ns, "n", None)
    if n is not None and n < 1:
        raise UsageError("--n must be >= 1")
    if params is not None and ns.command != "exact" and params.a <= 0:
        raise UsageError("asymptotic quantities need a > 0")
    if params is not None and params.a < 0:
        raise UsageError("a must be >= 0")
    return RunConfig(
        command=ns.command,
        params=params,
        n=n,
        n_list=n_list,
        quantities=quantities,
        methods=methods,
        j_grid=tuple(j_grid),
        h_bracket=h_bracket,
        tol=tol,
        suites=tuple(ns.suite or ()) if ns.command == "validate" else (),
        output=ns.output,
        output_path=ns.output_path,
    )


def _render(rows: list[dict], output: str) -> str:
    if output == "json":
        payload = rows[0] if len(rows) == 1 else rows
        return json.dumps(payload, indent=2) + "\n"
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\r\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _fmt(v) for k, v in row.items()})
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".mdfs-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, path: str | None) -> None:
    if path:
        write_atomic(path, text)
    else:
        sys.stdout.write(text)


def _asymptotic_row(p: ModelParams) -> dict:
    cs = corrections(p)
    return {
        "a": p.a,
        "b": p.b,
        "y_star": cs.m_star,
        "m_star": cs.m_star,
        "p_star": cs.p_star,
        "chi_star": cs.chi_star,
        "Lambda": cs.Lambda,
        "Lambda1": cs.Lambda1,
        "Lambda2": cs.Lambda2,
        "D": cs.D,
    }


def _exact_row(p: ModelParams, n: int) -> dict:
    ob = observables(p, n)
    return {"n": n, "log_z": ob.log_z, "p_n": ob.pressure, "mu_n": ob.monomer_mean, "chi_n": ob.susceptibility}


def _sweep_rows(p: ModelParams, n_list: Sequence[int]) -> list[dict]:
    cs = corrections(p)
    rows = []
    for n in n_list:
        row = _exact_row(p, n)
        row["r_p"] = n * (row["p_n"] - cs.p_star)
        row["r_mu"] = n * (row["mu_n"] - cs.m_star)
        row["r_chi"] = n * (row["chi_n"] - cs.chi_star)
        rows.append(row)
    return rows


def _curve_rows(cfg: RunConfig) -> list[dict]:
    rows = []
    for q in cfg.quantities:
        for method in cfg.methods:
            if method == "analytic":
                pts = sign_change_curve(q, cfg.j_grid, cfg.h_bracket, cfg.tol)
            else:
                pts = numeric_monotonicity_curve(q, cfg.j_grid, cfg.h_bracket, cfg.n_list, cfg.tol)
            rows.extend(
                {"quantity": pt.quantity, "method": pt.method, "j": pt.j, "h": pt.h, "bracket_width": pt.bracket_width}
                for pt in pts
            )
    return rows


def run(cfg: RunConfig) -> int:
    if cfg.command == "asymptotic":
        _emit(_render([_asymptotic_row(cfg.params)], cfg.output), cfg.output_path)
    elif cfg.command == "exact":
        _emit(_render([_exact_row(cfg.params, cfg.n)], cfg.output), cfg.output_path)
    elif cfg.command == "sweep":
        _emit(_render(_sweep_rows(cfg.params, cfg.n_list), cfg.output), cfg.output_path)
    elif cfg.command == "curve":
        _emit(_render(_curve_rows(cfg), cfg.output), cfg.output_path)
    elif cfg.command == "validate":
        checks = run_suites(list(cfg.suites) or None)
        for c in checks:
            print(f"{'PASS' if c.passed else 'FAIL'} [{c.suite}] {c.name}: {c.detail}", file=sys.stderr)
        rows = [{"suite": c.suite, "name": c.name, "passed": c.passed, "detail": c.detail} for c in checks]
        if cfg.output == "json":
            _emit(json.dumps({"passed": all(c.passed for c in checks), "checks": rows}, indent=2) + "\n", cfg.output_path)
        else:
            _emit(_render(rows, "csv"), cfg.output_path)
        return EXIT_OK if all(c.passed for c in checks) else EXIT_VALIDATION
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
    except UsageError as exc:
        print(f"mdfs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(cfg)
    except (CoexistenceError, CriticalPointError, NoRootError) as exc:
        print(f"mdfs: domain error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"mdfs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
