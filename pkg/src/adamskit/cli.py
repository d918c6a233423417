"""Command-line front end.

Subcommands: constants, level, t0, hardy, rearrange, cc, extremal-sweep.
Output is JSON (17 significant digits per numeric field) or RFC-4180 CSV
(shortest round-trip floats), written with LF endings to stdout or
--output.  Exit codes: 0 success, 2 domain error, 3 quadrature
nonconvergence, 4 probe/assertion violation, 64 malformed arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from typing import Sequence

from .constants import (
    AdamsParams,
    SphereConstants,
    beta0,
    beta0_product_form,
    concentration_level,
    t_zero,
)
from .errors import DegenerateTrialError, DomainError, QuadratureError
from .extremal import sweep as extremal_sweep
from .hardy import (
    HardySetup,
    Side,
    rayleigh_probe,
    sandwich,
    second_order_constant,
    second_order_probe,
)
from .moser1d import cc_functional, concentration_maximizer, energy, moser_family
from .quadrature import QuadratureSpec
from .rearrange import SampledFunction, decreasing_rearrangement, symmetrize, talenti_radial_solution
from .specfun import EULER_GAMMA, digamma

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_QUADRATURE = 3
EXIT_ASSERTION = 4
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # malformed arguments -> exit 64
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _json_scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"cannot serialize non-finite value {value}")
        return format(value, ".17g")
    if isinstance(value, int):
        return str(value)
    if value is None:
        return "null"
    escaped = str(value).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def to_json(obj, indent: int = 0) -> str:
    """JSON with every float at 17 significant digits, insertion-ordered."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (f'{inner}"{k}": {to_json(v, indent + 1)}' for k, v in obj.items())
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = (f"{inner}{to_json(v, indent + 1)}" for v in obj)
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    return _json_scalar(obj)


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([_csv_cell(cell) for cell in row])
    return buffer.getvalue()


def _emit(text: str, output_path: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if output_path is None:
        sys.stdout.write(text)
    else:
        with open(output_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def _record_output(record: dict, fmt: str, output_path: str | None) -> None:
    if fmt == "json":
        _emit(to_json(record), output_path)
    else:
        _emit(to_csv(list(record.keys()), [list(record.values())]), output_path)


# ---------------------------------------------------------------------------
# argument schema
# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(
        prog="adamskit",
        description="Sharp constants, concentration levels, Hardy sandwiches,"
        " rearrangements, and the extremal-gap pipeline, at desk scale.",
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized probes")
    parser.add_argument(
        "--rtol",
        type=float,
        default=float(os.environ.get("ADAMS_QUAD_RTOL", "1e-10")),
        help="quadrature relative tolerance (env ADAMS_QUAD_RTOL overrides the default)",
    )
    parser.add_argument(
        "--truncation-eps", type=float, default=1e-12, help="improper-tail truncation epsilon"
    )
    parser.add_argument("--output", default=None, help="write to this path instead of stdout")
    parser.add_argument(
        "--format", choices=("json", "csv"), default=None, help="output format"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p_constants = commands.add_parser("constants", help="critical exponent and sphere constants")
    p_constants.add_argument("--m", type=int, required=True)
    p_constants.add_argument("--n", type=int, required=True)

    p_level = commands.add_parser("level", help="concentration-level bound")
    p_level.add_argument("--m", type=int, required=True)
    p_level.add_argument("--n", type=int, required=True)
    p_level.add_argument("--measure", type=float, default=1.0)

    commands.add_parser("t0", help="dimension threshold of the extremal construction")

    p_hardy = commands.add_parser("hardy", help="power-weight sandwich and probes")
    p_hardy.add_argument("--p", type=float)
    p_hardy.add_argument("--q", type=float)
    p_hardy.add_argument("--alpha", type=float)
    p_hardy.add_argument("--theta", type=float)
    p_hardy.add_argument("--R", type=float, default=1.0)
    p_hardy.add_argument("--side", choices=("left", "right"), default="left")
    p_hardy.add_argument("--trials", type=int, default=0, help="rayleigh probe trials")
    p_hardy.add_argument(
        "--second-order", action="store_true", help="probe the iterated radial inequality"
    )
    p_hardy.add_argument("--n-dim", type=int, help="dimension for --second-order")

    p_rearrange = commands.add_parser("rearrange", help="step-function rearrangement tools")
    p_rearrange.add_argument("--input", required=True, help="CSV of measure,value rows")
    p_rearrange.add_argument(
        "--mode", choices=("rearrange", "symmetrize", "talenti"), default="rearrange"
    )
    p_rearrange.add_argument("--n", type=int, default=2, help="dimension for radial modes")
    p_rearrange.add_argument("--radius", type=float, default=None, help="ball radius for talenti")

    p_cc = commands.add_parser("cc", help="exponential functional on 1-D profiles")
    p_cc.add_argument("--p", type=float, required=True)
    p_cc.add_argument("--q", type=float, default=None, help="defaults to p/(p-1)")
    p_cc.add_argument("--family", choices=("moser",), default=None)
    p_cc.add_argument("--a", type=float, default=None, help="family scale")
    p_cc.add_argument("--maximize", action="store_true")
    p_cc.add_argument("--A", type=float, default=5.0, help="concentration window endpoint")
    p_cc.add_argument("--epsilon", type=float, default=0.01)
    p_cc.add_argument("--knots", type=int, default=48)

    p_sweep = commands.add_parser("extremal-sweep", help="gap verdicts over a dimension range")
    p_sweep.add_argument("--n-from", type=int, required=True)
    p_sweep.add_argument("--n-to", type=int, required=True)
    p_sweep.add_argument("--step", type=int, default=2)

    return parser


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


# ---------------------------------------------------------------------------
# command bodies
# ---------------------------------------------------------------------------

def _quad_spec(args: argparse.Namespace) -> QuadratureSpec:
    return QuadratureSpec(
        rel_tol=args.rtol,
        abs_tol=min(1e-13, args.rtol),
        truncation_epsilon=args.truncation_eps,
    )


def _cmd_constants(args) -> int:
    params = AdamsParams(args.m, args.n)
    spheres = SphereConstants.for_dimension(args.n)
    record = {
        "m": args.m,
        "n": args.n,
        "beta0": beta0(params),
        "beta0_product_form": beta0_product_form(params),
        "omega_sphere": spheres.omega_sphere,
        "omega_ball": spheres.omega_ball,
    }
    _record_output(record, args.format or "json", args.output)
    return EXIT_OK


def _cmd_level(args) -> int:
    params = AdamsParams(args.m, args.n)
    record = {
        "m": args.m,
        "n": args.n,
        "measure": args.measure,
        "level": concentration_level(params, args.measure),
        "psi_plus_gamma": digamma(args.n / args.m) + EULER_GAMMA,
    }
    _record_output(record, args.format or "json", args.output)
    return EXIT_OK


def _cmd_t0(args) -> int:
    result = t_zero()
    record = {"raw": result.raw, "T0": result.integer, "n_threshold": 2 * result.integer}
    _record_output(record, args.format or "json", args.output)
    return EXIT_OK


def _cmd_hardy(args) -> int:
    spec = _quad_spec(args)
    if args.second_order:
        if args.n_dim is None or args.q is None:
            raise DomainError("--second-order requires --n-dim and --q")
        p = args.p if args.p is not None else 2.0
        constant = second_order_constant(args.n_dim, args.q)
        record = {
            "n": args.n_dim,
            "p": p,
            "q": args.q,
            "R": args.R,
            "constant": constant,
        }
        status = EXIT_OK
        if args.trials > 0:
            max_ratio = second_order_probe(
                args.n_dim, p, args.q, args.R, args.trials, args.seed, spec
            )
            record["max_ratio"] = max_ratio
            record["probe_ok"] = max_ratio <= constant * (1.0 + 1e-6)
            if not record["probe_ok"]:
                status = EXIT_ASSERTION
        _record_output(record, args.format or "json", args.output)
        return status
    if args.p is None or args.q is None or args.alpha is None or args.theta is None:
        raise DomainError("hardy requires --p, --q, --alpha, --theta")
    side = Side.LEFT_VANISHING if args.side == "left" else Side.RIGHT_VANISHING
    setup = HardySetup(
        p=args.p, q=args.q, alpha=args.alpha, theta=args.theta, R=args.R, side=side
    )
    sw = sandwich(setup)
    record = {
        "p": args.p,
        "q": args.q,
        "alpha": args.alpha,
        "theta": args.theta,
        "R": args.R,
        "side": args.side,
        "lower": sw.lower,
        "upper": sw.upper,
        "k_factor": sw.k_factor,
    }
    status = EXIT_OK
    if args.trials > 0:
        result = rayleigh_probe(setup, args.trials, args.seed, spec=spec)
        record["max_ratio"] = result.max_ratio
        record["probe_ok"] = bool(result.max_ratio <= sw.upper + 1e-9)
        if not record["probe_ok"]:
            status = EXIT_ASSERTION
    _record_output(record, args.format or "json", args.output)
    return status


def _read_cells(path: str) -> SampledFunction:
    cells = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        for row in csv.reader(handle):
            if not row or row[0].strip().lower() in ("measure", ""):
                continue
            if len(row) < 2:
                raise DomainError(f"malformed cell row {row!r}; expected measure,value")
            cells.append((float(row[0]), float(row[1])))
    return SampledFunction(cells=tuple(cells))


def _cmd_rearrange(args) -> int:
    f = _read_cells(args.input)
    if args.mode == "rearrange":
        sharp = decreasing_rearrangement(f)
        _emit(to_csv(("measure", "value"), [list(c) for c in sharp.cells]), args.output)
        return EXIT_OK
    if args.mode == "symmetrize":
        radial = symmetrize(f, args.n)
        knots = radial.profile.knots
        rows = [
            [knots[i + 1], float(piece.value(knots[i + 1]))]
            for i, piece in enumerate(radial.profile.pieces)
        ]
        _emit(to_csv(("outer_radius", "value"), rows), args.output)
        return EXIT_OK
    sharp = decreasing_rearrangement(f)
    radius = args.radius
    if radius is None:
        raise DomainError("--mode talenti requires --radius")
    v = talenti_radial_solution(sharp, args.n, radius)
    rows = [[r, float(v.value(r))] for r in v.profile.knots]
    _emit(to_csv(("radius", "value"), rows), args.output)
    return EXIT_OK


def _cmd_cc(args) -> int:
    spec = _quad_spec(args)
    q = args.q if args.q is not None else args.p / (args.p - 1.0)
    bound = 1.0 + math.exp(digamma(args.p) + EULER_GAMMA)
    if args.maximize:
        result = concentration_maximizer(
            args.p, args.A, args.epsilon, args.knots, args.seed, spec=spec
        )
        record = {
            "p": args.p,
            "q": q,
            "A": args.A,
            "epsilon": args.epsilon,
            "knots": args.knots,
            "seed": args.seed,
            "J": result.functional_value,
            "concentration_level": bound,
            "energy": energy(result.profile, args.p),
            "window_energy": energy(result.profile, args.p, (0.0, args.A)),
            "profile": result.profile.to_json_obj(),
        }
        _record_output(record, "json", args.output)
        return EXIT_OK
    if args.family != "moser" or args.a is None:
        raise DomainError("cc requires --family moser with --a (or --maximize)")
    g = moser_family(args.a, args.p)
    j = cc_functional(g, q, spec)
    record = {
        "p": args.p,
        "q": q,
        "a": args.a,
        "J": j,
        "energy": energy(g, args.p),
        "concentration_level": bound,
        "within_level": j <= bound,
    }
    _record_output(record, args.format or "json", args.output)
    return EXIT_OK


def _cmd_extremal_sweep(args) -> int:
    spec = _quad_spec(args)
    rows = extremal_sweep(args.n_from, args.n_to, args.step, spec)
    fmt = args.format or "csv"
    if fmt == "csv":
        header = (
            "n",
            "norm_chain",
            "norm_quad",
            "J_lower",
            "J_quad",
            "level",
            "gap_analytic",
            "gap_numeric",
        )
        table = [
            [
                row.n,
                row.norm_chain_bound,
                row.norm_quadrature,
                row.functional_lower,
                row.functional_quadrature,
                row.level,
                row.gap_analytic,
                row.gap_numeric,
            ]
            for row in rows
        ]
        _emit(to_csv(header, table), args.output)
    else:
        from .extremal import make_params

        payload = []
        for row in rows:
            params = make_params(row.n)
            payload.append(
                {
                    "n": row.n,
                    "params": {"b": params.b, "s": params.s, "lambda": params.lam},
                    "norm_chain": row.norm_chain_bound,
                    "norm_quad": row.norm_quadrature,
                    "J_lower": row.functional_lower,
                    "J_quad": row.functional_quadrature,
                    "level": row.level,
                    "gap_analytic": row.gap_analytic,
                    "gap_numeric": row.gap_numeric,
                }
            )
        _emit(to_json(payload), args.output)
    return EXIT_OK


_COMMANDS = {
    "constants": _cmd_constants,
    "level": _cmd_level,
    "t0": _cmd_t0,
    "hardy": _cmd_hardy,
    "rearrange": _cmd_rearrange,
    "cc": _cmd_cc,
    "extremal-sweep": _cmd_extremal_sweep,
}


def run(args: argparse.Namespace) -> int:
    """Execute a parsed configuration; returns the process exit status."""
    try:
        return _COMMANDS[args.command](args)
    except DomainError as exc:
        print(f"adamskit: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except QuadratureError as exc:
        print(f"adamskit: quadrature failure: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE
    except (DegenerateTrialError, AssertionError) as exc:
        print(f"adamskit: probe failure: {exc}", file=sys.stderr)
        return EXIT_ASSERTION
    except OverflowError as exc:
        print(f"adamskit: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main(argv: Sequence[str] | None = None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":
    raise SystemExit(main())
