"""
qlimits command line.

    python -m qlimits eval --family racah -n 2
    python -m qlimits verify orthogonality racah
    python -m qlimits limit-study to-big-jacobi

Exit codes: 0 success, 1 a residual or verdict failed, 2 invalid input,
3 numerical breakdown.
"""

import argparse
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional

from mpmath import mp
from pydantic import ValidationError

from .config import DEFAULT_SCHEDULES, DESK_PARAMETERS, settings, working_precision
from .errors import NumericalError, ParameterError
from .families import BigJacobiFamily, RacahFamily, as_family, orthogonality_report, ttrr_report
from .families.bigjacobi import bigjacobi_weight
from .families.racah import racah_delta_mu, racah_weight, racah_weight_closed_form
from .krall import KrallFamily, kernel, kernel_reproducing_residual
from .limits import run_limit_study
from .qcore import jackson_qintegral
from .schemas import (
    BigJacobiParams,
    DualHahnParams,
    LimitKind,
    MassPoints,
    PrecisionContext,
    QBase,
    QHahnParams,
    RacahParams,
    RunConfig,
)
from .services import reports
from .utils import relative_error

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

FAMILIES = ("racah", "bigjacobi", "dualhahn", "qhahn")
KRALL_FAMILIES = ("racah", "bigjacobi")
SUITES = ("orthogonality", "ttrr", "kernel", "krall", "normalization")

LIMIT_TARGETS = {
    LimitKind.TO_BIG_JACOBI: "bigjacobi",
    LimitKind.TO_DUAL_HAHN: "dualhahn",
    LimitKind.TO_Q_HAHN: "qhahn",
}

# distinct points used by the kernel suite; 5 points give 10 pairs
KERNEL_POINTS = 5


# ---------- Parameters ----------
def parse_pairs(items: Optional[List[str]]) -> Dict[str, str]:
    pairs = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ParameterError(f"expected KEY=VALUE, got {item!r}")
        pairs[key.strip()] = value.strip()
    return pairs


def build_params(family: str, q: str, overrides: Dict[str, str]):
    """Desk parameters of a family with overrides applied, validated."""
    if family not in FAMILIES:
        raise ParameterError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    desk = DESK_PARAMETERS[family]
    unknown = sorted(set(overrides) - set(desk))
    if unknown:
        raise ParameterError(f"{family} has no parameter(s) {', '.join(unknown)}; known: {', '.join(desk)}")
    values = {**desk, **overrides}
    if family == "racah":
        return RacahParams.from_exponents(q, values["alpha"], values["beta"], values["a"], values["b"])
    base = QBase(q=q)
    if family == "bigjacobi":
        return BigJacobiParams(base=base, a_t=values["a"], b_t=values["b"], c_t=values["c"])
    try:
        N = int(values["N"])
    except ValueError:
        raise ParameterError(f"N must be an integer, got {values['N']!r}")
    if family == "dualhahn":
        return DualHahnParams(base=base, gamma=values["gamma"], delta=values["delta"], N=N)
    return QHahnParams(base=base, alpha_t=values["alpha"], beta_t=values["beta"], N=N)


def build_masses(config: RunConfig) -> MassPoints:
    desk = DESK_PARAMETERS["masses"]
    return MassPoints(
        A=desk["A"] if config.mass_A is None else config.mass_A,
        B=desk["B"] if config.mass_B is None else config.mass_B,
    )


def _n_max(config: RunConfig, default: int) -> int:
    return default if config.n_max is None else config.n_max


def _default_points(family) -> List:
    if isinstance(family, BigJacobiFamily):
        left, right = family.endpoints()
        q = family.base.q
        return [left, left * q, mp.zero, right * q, right]
    return [point for point, _ in family.support()]


def _points(family, config: RunConfig) -> List:
    classical = family.family if isinstance(family, KrallFamily) else family
    if not config.points:
        return _default_points(classical)
    if isinstance(classical, BigJacobiFamily):
        return [mp.mpf(p) for p in config.points]
    try:
        return [int(p) for p in config.points]
    except ValueError:
        raise ParameterError(f"{classical.name} points are integer grid offsets, got {config.points}")


def _heaviest(family, count: int) -> List:
    ranked = sorted(family.support(), key=lambda item: -item[1])
    return [point for point, _ in ranked[:count]]


# ---------- Output ----------
def _emit(config: RunConfig, stem: str, frame, payload: Dict):
    print(reports.render(frame, config.format, payload), end="")
    if config.out is not None:
        reports.write_report(config.out, stem, frame, payload, formats=(config.format,))


def _echo(config: RunConfig) -> Dict:
    return config.model_dump(mode="json")


# ---------- eval ----------
def cmd_eval(config: RunConfig) -> int:
    if not config.family:
        raise ParameterError("eval needs --family")
    name = config.family
    krall = config.krall or name.endswith("-krall")
    name = name.removesuffix("-krall")
    family = as_family(build_params(name, config.q, config.params))
    if krall:
        if name not in KRALL_FAMILIES:
            raise ParameterError(f"mass points are only defined for {' and '.join(KRALL_FAMILIES)}")
        family = KrallFamily(family, build_masses(config))
    rows = [
        {"point": point, "abscissa": family.abscissa(point), "value": family.evaluate(config.degree, point)}
        for point in _points(family, config)
    ]
    frame = reports.values_frame(family.name, config.degree, rows)
    payload = {
        "config": _echo(config),
        "values": json.loads(frame.to_json(orient="records")),
        "flags": family.flags(),
    }
    _emit(config, "eval", frame, payload)
    return EXIT_OK


# ---------- verify ----------
def _suite_orthogonality(family, config: RunConfig) -> List[Dict]:
    report = orthogonality_report(family, _n_max(config, 4))
    return reports.orthogonality_rows("orthogonality", report, config.rel_tol)


def _suite_ttrr(family, config: RunConfig) -> List[Dict]:
    report = ttrr_report(family, max(_n_max(config, 4) - 1, 0))
    return reports.ttrr_rows("ttrr", report, config.rel_tol)


def _suite_kernel(family, config: RunConfig) -> List[Dict]:
    points = _heaviest(family, KERNEL_POINTS)
    pairs = [(s1, s2) for i, s1 in enumerate(points) for s2 in points[i + 1:]]
    rows = []
    for n in range(max(_n_max(config, 4) - 1, 0) + 1):
        worst = max(kernel(family, n, s1, s2).cd_residual for s1, s2 in pairs)
        rows.append(reports.check_row("kernel", family.name, f"christoffel-darboux n={n}", worst, config.rel_tol))
        reproducing = kernel_reproducing_residual(family, n, points[0])
        rows.append(reports.check_row("kernel", family.name, f"reproducing n={n}", reproducing, config.rel_tol))
    return rows


def _suite_krall(family, config: RunConfig) -> List[Dict]:
    n_max = _n_max(config, 4)
    modified = KrallFamily(family, build_masses(config))
    rows = reports.orthogonality_rows("krall", orthogonality_report(modified, n_max), config.rel_tol)
    rows += reports.ttrr_rows("krall", ttrr_report(modified, max(n_max - 1, 0)), config.rel_tol)
    bare = KrallFamily(family, MassPoints())
    gap = max(
        relative_error(bare.evaluate(n, point), family.evaluate(n, point))
        for n in range(n_max + 1)
        for point in _heaviest(family, KERNEL_POINTS)
    )
    rows.append(reports.check_row("krall", modified.name, "A=B=0 reduction", gap, config.rel_tol))
    return rows


def _suite_normalization(family, config: RunConfig) -> List[Dict]:
    tol = config.rel_tol
    if isinstance(family, RacahFamily):
        params = family.params
        total = mp.fsum(racah_weight(params, s) * racah_delta_mu(params, s) for s in range(params.N))
        first = racah_weight_closed_form(params, 0) / racah_weight(params, 0)
        shape = max(
            relative_error(racah_weight_closed_form(params, s) / first, racah_weight(params, s))
            for s in range(params.N)
        )
        return [
            reports.check_row("normalization", family.name, "sum rho Delta mu", abs(total - 1), tol),
            reports.check_row("normalization", family.name, "closed-form weight shape", shape, tol),
        ]
    if isinstance(family, BigJacobiFamily):
        params = family.params
        left, right = family.endpoints()
        total = jackson_qintegral(lambda z: bigjacobi_weight(params, z), left, right, params.base)
        return [reports.check_row("normalization", family.name, "Jackson integral of rho", abs(total - 1), tol)]
    total = mp.fsum(mass for _, mass in family.support())
    return [reports.check_row("normalization", family.name, "sum rho Delta x", abs(total - 1), tol)]


SUITE_RUNNERS = {
    "orthogonality": _suite_orthogonality,
    "ttrr": _suite_ttrr,
    "kernel": _suite_kernel,
    "krall": _suite_krall,
    "normalization": _suite_normalization,
}


def cmd_verify(config: RunConfig) -> int:
    if config.suite != "all" and config.suite not in SUITES:
        raise ParameterError(f"unknown suite {config.suite!r}; choose from all, {', '.join(SUITES)}")
    suites = list(SUITES) if config.suite == "all" else [config.suite]
    names = [config.family] if config.family else list(FAMILIES)
    if config.suite == "krall" and config.family and config.family not in KRALL_FAMILIES:
        raise ParameterError(f"the krall suite needs {' or '.join(KRALL_FAMILIES)}")
    rows = []
    for name in names:
        # overrides only make sense for a named family
        family = as_family(build_params(name, config.q, config.params if config.family else {}))
        for suite in suites:
            if suite == "krall" and name not in KRALL_FAMILIES:
                continue
            rows.extend(SUITE_RUNNERS[suite](family, config))
    frame = reports.checks_frame(rows)
    passed = all(row["passed"] for row in rows)
    payload = {
        "config": _echo(config),
        "checks": json.loads(frame.to_json(orient="records")),
        "passed": passed,
    }
    _emit(config, "verify", frame, payload)
    for row in rows:
        if not row["passed"]:
            logger.warning(f"{row['suite']} {row['family']}: {row['check']} residual {mp.nstr(row['residual'], 3)}")
    return EXIT_OK if passed else EXIT_FAILED


# ---------- limit-study ----------
def cmd_limit_study(config: RunConfig) -> int:
    if config.kind is None:
        raise ParameterError(f"limit-study needs a kind: {', '.join(k.value for k in LimitKind)}")
    kind = config.kind
    target = build_params(LIMIT_TARGETS[kind], config.q, config.params)
    schedule = config.schedule or DEFAULT_SCHEDULES[kind.value]
    mass = build_masses(config) if kind is LimitKind.TO_BIG_JACOBI else None
    results = run_limit_study(kind, target, schedule, _n_max(config, 3), config.sample_points, mass)
    frame = reports.study_frame(results)
    payload = reports.study_payload(_echo(config), results)
    reports.write_report(config.out or settings.output_dir, kind.value, frame, payload)
    print(reports.render(frame, config.format, payload), end="")
    return EXIT_OK if payload["passed"] else EXIT_FAILED


COMMANDS = {
    "eval": cmd_eval,
    "verify": cmd_verify,
    "limit-study": cmd_limit_study,
}


# ---------- Entry point ----------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON file with RunConfig fields; flags override it")
    common.add_argument("--q", type=str, help="base q in (0, 1), default 0.5")
    common.add_argument("--param", action="append", metavar="KEY=VALUE", help="override one family parameter")
    common.add_argument("--digits", type=int, help="working precision in significant digits")
    common.add_argument("--rel-tol", type=float, help="verification tolerance, default 1e-12")
    common.add_argument("--n-max", type=int, help="highest degree checked")
    common.add_argument("--mass-A", type=str, help="mass at the left endpoint")
    common.add_argument("--mass-B", type=str, help="mass at the right endpoint")
    common.add_argument("--out", type=Path, help="directory for report files")
    common.add_argument("--format", choices=["json", "csv", "text"], help="stdout format, default text")
    common.add_argument("--log-level", type=str, help="overrides QLIMITS_LOG_LEVEL")

    parser = argparse.ArgumentParser(
        prog="qlimits",
        description="Non-standard q-Racah polynomials, their Krall modifications and limit transitions.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    evaluate = commands.add_parser("eval", parents=[common], help="evaluate p_n at lattice points")
    evaluate.add_argument("--family", type=str, help="racah, bigjacobi, dualhahn, qhahn, or racah-krall / bigjacobi-krall")
    evaluate.add_argument("-n", "--degree", type=int, help="polynomial degree")
    evaluate.add_argument("--points", nargs="+", help="grid offsets, or z values for bigjacobi")
    evaluate.add_argument("--krall", action="store_true", default=None, help="add the endpoint masses")

    verify = commands.add_parser("verify", parents=[common], help="run verification suites")
    verify.add_argument("suite", nargs="?", choices=["all", *SUITES])
    verify.add_argument("family", nargs="?", choices=FAMILIES)

    study = commands.add_parser("limit-study", parents=[common], help="sweep a limit transition")
    study.add_argument("kind", choices=[k.value for k in LimitKind])
    study.add_argument("--schedule", nargs="+", help="control values, N for to-big-jacobi")
    study.add_argument("--samples", dest="sample_points", type=int, help="sample points per branch")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    data = {}
    if args.config is not None:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise ParameterError(f"cannot read config file {args.config}: {exc}")
    flags = {
        key: value
        for key, value in vars(args).items()
        if value is not None and key not in ("config", "param", "log_level")
    }
    params = {**data.get("params", {}), **parse_pairs(args.param)}
    return RunConfig(**{**data, **flags, "params": params})


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = (args.log_level or settings.log_level).upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO), format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args)
        digits = config.digits or (settings.study_digits if config.command == "limit-study" else settings.digits)
        config = config.model_copy(update={"digits": digits})
        with working_precision(PrecisionContext(digits=digits)):
            return COMMANDS[config.command](config)
    except (ValidationError, ParameterError) as exc:
        logger.error(f"invalid input: {exc}")
        return EXIT_INVALID
    except NumericalError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return EXIT_NUMERICAL
    except mp.NoConvergence as exc:
        logger.error(f"NonConvergence: {exc}")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
