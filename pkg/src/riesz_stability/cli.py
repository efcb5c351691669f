"""Command-line front end: minimize, constants, certify, verify, scan.

Machine output is JSON (sorted keys, two-space indent, no timestamps), so
identical arguments and seed give byte-identical bytes.  When --out is given
the JSON goes to the file and a small aligned table goes to stdout; without
--out the JSON itself is the stdout payload and the table moves to stderr.
Scans emit CSV instead, per the one machine format per shape rule.

Exit codes: 0 success (for certify: classification S, SS, or SSS), 1
computation error, 2 certified Unknown, 3 certified Unstable, 64 usage
error.  verify exits 0 only when the harness ran and found no violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .certifier import (
    StabilityCertificate,
    certify,
    check_ss_condition,
    empirical_bound_test,
)
from .geometry import configuration_to_csv
from .minimizer import ball_domain, cube_domain, minimize_configuration
from .potentials import (
    PairPotential,
    lj_like_potential,
    riesz_potential,
    square_well_potential,
    table_potential,
)
from .riesz import (
    critical_growth_constant,
    energy_integral_ball,
    hypersingular_growth_constant,
    regime_tag,
    zeta_limit_1d,
)

__all__ = [
    "main",
    "run",
    "constants_record",
    "load_potential_config",
]

USAGE_ERROR = 64


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reserves exit code 64 for usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(USAGE_ERROR)


def _parse_domain(text: str, dimension: int):
    kind, sep, size_text = text.partition(":")
    size = float(size_text) if sep else 1.0
    if kind == "cube":
        return cube_domain(dimension, size)
    if kind == "ball":
        return ball_domain(dimension, size)
    raise ValueError(f"domain must be cube:SIZE or ball:SIZE, got {text!r}")


def _float_list(text: str):
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad float list {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty grid")
    return values


def _parse_scalar(text: str):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def load_potential_config(path) -> PairPotential:
    """Build a potential from a key = value config file.

    Lines are `key = value`; blank lines and lines starting with # are
    skipped.  `kind` selects the constructor: riesz (d, s, core_strength,
    tail_strength, tail_exponent, core_radius, tail_radius), square_well
    (d, height, well_range), lj_like (d, s, core_radius), or table (d,
    path to a two-column r,phi CSV, plus the structural metadata
    core_exponent, core_strength, core_radius, tail_radius, tail_strength,
    tail_exponent).  Paths are resolved relative to the config file.
    """
    path = Path(path)
    cfg: dict = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        cfg[key.strip()] = _parse_scalar(value.strip())

    kind = cfg.pop("kind", None)
    if kind is None:
        raise ValueError(f"{path}: missing kind")

    def take(key, default=None):
        if key in cfg:
            return cfg.pop(key)
        if default is None:
            raise ValueError(f"{path}: {kind} potential needs {key}")
        return default

    if kind == "riesz":
        p = riesz_potential(
            int(take("d")), float(take("s")),
            core_strength=float(take("core_strength", 1.0)),
            tail_strength=float(take("tail_strength", 1.0)),
            tail_exponent=float(take("tail_exponent", 1.0)),
            core_radius=float(take("core_radius", 1.0)),
            tail_radius=float(take("tail_radius", 2.0)),
        )
    elif kind == "square_well":
        p = square_well_potential(
            int(take("d")), float(take("height", 1.0)),
            float(take("well_range", 1.0)),
        )
    elif kind == "lj_like":
        p = lj_like_potential(
            int(take("d")), float(take("s")),
            core_radius=float(take("core_radius", 0.8)),
        )
    elif kind == "table":
        table_path = path.parent / str(take("path"))
        rows = [r for r in csv.reader(io.StringIO(table_path.read_text()))
                if r and not r[0].lstrip().startswith("#")]
        try:
            radii = [float(r[0]) for r in rows]
            values = [float(r[1]) for r in rows]
        except (IndexError, ValueError):
            raise ValueError(f"{table_path}: need two numeric columns r,phi")
        p = table_potential(
            radii, values, int(take("d")),
            core_exponent=float(take("core_exponent")),
            core_strength=float(take("core_strength")),
            core_radius=float(take("core_radius")),
            tail_radius=float(take("tail_radius")),
            tail_strength=float(take("tail_strength")),
            tail_exponent=float(take("tail_exponent")),
        )
    else:
        raise ValueError(
            f"{path}: unknown kind {kind!r} "
            "(expected riesz, square_well, lj_like, or table)"
        )
    if cfg:
        raise ValueError(f"{path}: unknown keys {sorted(cfg)}")
    return p


def _dumps(record) -> str:
    return json.dumps(record, sort_keys=True, indent=2) + "\n"


def _table(pairs, extra_lines=()) -> str:
    rows = [(str(k), str(v)) for k, v in pairs]
    if not rows:
        return ""
    width = max(len(k) for k, _ in rows)
    lines = [f"{k:<{width}}  {v}" for k, v in rows]
    lines.extend(extra_lines)
    return "\n".join(lines) + "\n"


def _emit(record, out, table_text: str) -> None:
    if out:
        Path(out).write_text(_dumps(record))
        sys.stdout.write(table_text)
    else:
        sys.stdout.write(_dumps(record))
        sys.stderr.write(table_text)


def _emit_csv(header, rows, out) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    if out:
        Path(out).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def _cmd_minimize(args) -> int:
    domain = _parse_domain(args.domain, args.d)
    result = minimize_configuration(
        args.N, domain, args.s, starts=args.starts,
        max_iters=args.max_iters, grad_tol=args.tol, seed=args.seed,
    )
    record = result.as_json_dict()
    csv_path = args.csv
    if csv_path is None and args.out:
        csv_path = str(Path(args.out).with_suffix(".csv"))
    if csv_path:
        configuration_to_csv(result.points, csv_path)
    table = _table([
        ("points", args.N),
        ("dimension", args.d),
        ("s", args.s),
        ("energy", result.energy),
        ("normalized_energy", result.normalized),
        ("iterations", result.iterations),
        ("grad_norm", result.grad_norm),
        ("starts", result.starts),
        ("best_start", result.best_start),
    ])
    _emit(record, args.out, table)
    return 0


def constants_record(d: int, s: float, phi0: float = 1.0,
                     rib: float = 1.0) -> dict:
    """The closed-form constants available at (d, s), regime-gated.

    I_s_ball (unit ball, finite only for s < d), C_d (s = d), C_sd (s > d),
    and the d=1 zeta limit (s > 1); absent keys mean out of regime.
    """
    record = {"d": d, "s": s, "regime": regime_tag(d, s).value}
    if s < d:
        record["I_s_ball"] = energy_integral_ball(d, s, 1.0)
    if s == d:
        record["C_d"] = critical_growth_constant(d, rib, phi0)
    if s > d:
        record["C_sd"] = hypersingular_growth_constant(d, s, rib, phi0)
    if d == 1 and s > 1:
        record["zeta_limit"] = zeta_limit_1d(s)
    return record


def _cmd_constants(args) -> int:
    record = constants_record(args.d, args.s, phi0=args.phi0, rib=args.rib)
    table = _table(sorted(record.items()))
    _emit(record, args.out, table)
    return 0


_CERTIFY_EXIT = {"S": 0, "SS": 0, "SSS": 0, "Unknown": 2, "Unstable": 3}


def _certificate_table(cert: StabilityCertificate) -> str:
    pairs = [
        ("classification", cert.classification),
        ("A", cert.a),
        ("B", cert.b),
        ("p", cert.p),
        ("lambda", cert.rib),
        ("epsilon", cert.epsilon),
        ("N0", cert.n0),
    ]
    if cert.v0 is not None:
        pairs.append(("v0", f"{cert.v0.value} (+{cert.v0.remainder} tail)"))
    extra = [
        f"evidence  {e.name} = {e.value} [{'ok' if e.holds else 'FAIL'}]"
        for e in cert.evidence
    ]
    extra.extend(f"note      {n}" for n in cert.notes)
    return _table(pairs, extra)


def _cmd_certify(args) -> int:
    p = load_potential_config(args.potential)
    cert = certify(p, rib_grid=args.rib_grid, eps=args.eps,
                   budget=args.budget)
    _emit(cert.as_json_dict(), args.out, _certificate_table(cert))
    return _CERTIFY_EXIT[cert.classification]


def _cmd_verify(args) -> int:
    p = load_potential_config(args.potential)
    cert = StabilityCertificate.from_json_dict(
        json.loads(Path(args.certificate).read_text())
    )
    report = empirical_bound_test(
        p, cert, trials=args.trials, n_max=args.n_max,
        box_rib=args.box_rib, seed=args.seed,
    )
    table = _table([
        ("trials", report.trials),
        ("violations", report.violations),
        ("min_slack", report.min_slack),
        ("passed", report.passed),
    ], [f"note      {report.note}"])
    _emit(report.as_json_dict(), args.out, table)
    return 0 if report.passed else 1


def _cmd_scan(args) -> int:
    if args.param == "rib":
        if not args.potential:
            raise ValueError("scan over rib needs --potential")
        p = load_potential_config(args.potential)
        rows = []
        for rib in args.grid:
            chk = check_ss_condition(p, rib)
            bud = chk.budget
            rows.append([
                rib, bud.value, bud.remainder, chk.lhs, chk.rhs,
                "true" if chk.holds else "false",
            ])
        _emit_csv(
            ["rib", "v0_value", "v0_remainder", "lhs", "rhs", "holds"],
            rows, args.out,
        )
        return 0

    # param == "s": sweep the closed-form constants at fixed d
    rows = []
    for s in args.grid:
        record = constants_record(args.d, s, phi0=args.phi0, rib=args.rib)
        rows.append([
            s, record["regime"],
            record.get("I_s_ball", ""), record.get("C_d", ""),
            record.get("C_sd", ""), record.get("zeta_limit", ""),
        ])
    _emit_csv(
        ["s", "regime", "I_s_ball", "C_d", "C_sd", "zeta_limit"],
        rows, args.out,
    )
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="riesz-stab",
        description=(
            "Minimal Riesz s-energy configurations, potential-theory "
            "constants, and stability certification of pair potentials."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    m = sub.add_parser(
        "minimize", help="minimize the Riesz s-energy of N points",
        description=(
            "Multistart projected gradient descent; writes the result JSON "
            "and, when a file output is in play, the configuration CSV."
        ),
    )
    m.add_argument("-d", type=int, required=True, help="space dimension")
    m.add_argument("-s", type=float, required=True, help="Riesz exponent")
    m.add_argument("-N", type=int, required=True, help="number of points")
    m.add_argument("--domain", default="cube:1.0", type=_check_domain_text,
                   help="cube:SIZE or ball:SIZE (default cube:1.0)")
    m.add_argument("--starts", type=int, default=None,
                   help="multistart count (default 8 + 2N)")
    m.add_argument("--seed", type=int, default=1, help="RNG seed (default 1)")
    m.add_argument("--tol", type=float, default=None,
                   help="projected-gradient tolerance (default 1e-9 * N)")
    m.add_argument("--max-iters", type=int, default=50_000,
                   help="iteration cap per start (default 50000)")
    m.add_argument("--out", default=None, help="write JSON here")
    m.add_argument("--csv", default=None,
                   help="write the configuration CSV here "
                        "(default: alongside --out)")
    m.set_defaults(handler=_cmd_minimize)

    c = sub.add_parser(
        "constants", help="closed-form constants at (d, s)",
        description="Regime-gated record; out-of-regime fields are omitted.",
    )
    c.add_argument("-d", type=int, required=True, help="space dimension")
    c.add_argument("-s", type=float, required=True, help="Riesz exponent")
    c.add_argument("--phi0", type=float, default=1.0,
                   help="core strength for C_d / C_sd (default 1)")
    c.add_argument("--rib", type=float, default=1.0,
                   help="cell rib for C_d / C_sd (default 1)")
    c.add_argument("--out", default=None, help="write JSON here")
    c.set_defaults(handler=_cmd_constants)

    ce = sub.add_parser(
        "certify", help="certify a pair potential from a config file",
        description=(
            "Exit 0 when classified S/SS/SSS, 2 for Unknown, 3 for "
            "Unstable.  The config format is key = value; see the README."
        ),
    )
    ce.add_argument("--potential", required=True,
                    help="key = value potential config file")
    ce.add_argument("--rib-grid", type=_float_list, default=None,
                    help="comma-separated cell ribs to try "
                         "(default: core_radius/sqrt(d) halved 8 times)")
    ce.add_argument("--eps", type=float, default=None,
                    help="energy-gap threshold for N0 (default: regime pick)")
    ce.add_argument("--budget", type=int, default=32,
                    help="max minimizer calls for the energy ladder "
                         "(default 32)")
    ce.add_argument("--out", default=None, help="write the certificate here")
    ce.set_defaults(handler=_cmd_certify)

    v = sub.add_parser(
        "verify", help="run the falsification harness on a certificate",
        description=(
            "Random configurations against the certified bound; exit 0 "
            "only on zero violations."
        ),
    )
    v.add_argument("--potential", required=True,
                   help="key = value potential config file")
    v.add_argument("--certificate", required=True,
                   help="certificate JSON written by certify")
    v.add_argument("--trials", type=int, default=10_000,
                   help="random configurations to draw (default 10000)")
    v.add_argument("--n-max", type=int, default=20,
                   help="largest configuration size (default 20)")
    v.add_argument("--box-rib", type=float, default=None,
                   help="sampling box size (default 10 certificate cells)")
    v.add_argument("--seed", type=int, default=1, help="RNG seed (default 1)")
    v.add_argument("--out", default=None, help="write the report here")
    v.set_defaults(handler=_cmd_verify)

    sc = sub.add_parser(
        "scan", help="sweep rib or s and emit a CSV",
        description=(
            "rib: cell-condition margins and attraction budgets for a "
            "potential; s: the closed-form constants at fixed d."
        ),
    )
    sc.add_argument("--param", choices=("rib", "s"), required=True,
                    help="sweep variable")
    sc.add_argument("--grid", type=_float_list, required=True,
                    help="comma-separated values")
    sc.add_argument("--potential", default=None,
                    help="potential config (required for --param rib)")
    sc.add_argument("-d", type=int, default=None,
                    help="space dimension (required for --param s)")
    sc.add_argument("--phi0", type=float, default=1.0,
                    help="core strength for constants (default 1)")
    sc.add_argument("--rib", type=float, default=1.0,
                    help="cell rib for constants (default 1)")
    sc.add_argument("--out", default=None, help="write CSV here")
    sc.set_defaults(handler=_cmd_scan)

    return parser


def _check_domain_text(text: str) -> str:
    kind, _, size_text = text.partition(":")
    if kind not in ("cube", "ball"):
        raise argparse.ArgumentTypeError(
            f"domain must be cube:SIZE or ball:SIZE, got {text!r}"
        )
    if size_text:
        try:
            float(size_text)
        except ValueError:
            raise argparse.ArgumentTypeError(
                f"bad domain size {size_text!r}"
            )
    return text


def run(argv=None) -> int:
    """Parse argv, dispatch, and return the exit code."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.handler is _cmd_scan:
        if args.param == "s" and args.d is None:
            parser.error("scan over s needs -d")
        if args.param == "rib" and args.potential is None:
            parser.error("scan over rib needs --potential")
    try:
        return args.handler(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"riesz-stab: error: {exc}\n")
        return 1


def main() -> int:
    return run()


if __name__ == "__main__":
    sys.exit(main())
