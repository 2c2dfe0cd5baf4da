"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 non-convergence (or a failed
selftest criterion).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .asymptotics import asymptotic_eval, select_method
from .errors import (CancellationError, DegenerateNu, MissingField, NonConvergence,
                     NucratesError, OutOfRegime)
from .evaluate import evaluate, series_eval
from .model import Depletion, IntegralKind, IntegralParams, Resonance, validate
from .quadrature import oracle_eval
from .rates import (CONSTANTS_VERSION, Bare, Cutoff, Depleted, ReactionSystem, Screened,
                    rate_breakdown)

EXIT_OK, EXIT_INVALID, EXIT_NONCONVERGED = 0, 1, 2

_INTEGRAL_FLAGS = ("nu", "a", "z", "rho", "d", "b", "delta", "t", "c", "g", "pow")
_RATE_FLAGS = ("zi", "zj", "mi", "mj", "s0", "s1", "s2", "ni", "nj", "same_species",
               "tmin", "tmax", "n", "mode", "d", "b", "delta", "ue")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".17g")
    return "" if x is None else str(x)


def _add_integral_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", required=True, help="I1 .. I7")
    p.add_argument("--nu", type=float, required=True, help="exponent of y")
    p.add_argument("--a", type=float, required=True, help="linear decay rate")
    p.add_argument("--z", type=float, required=True, help="barrier strength")
    p.add_argument("--rho", type=float, default=0.5, help="barrier exponent (default 0.5)")
    p.add_argument("--d", type=float, help="upper cut-off (I2)")
    p.add_argument("--b", type=float, help="depletion strength (I3, I6, I7)")
    p.add_argument("--delta", type=float, help="depletion exponent")
    p.add_argument("--t", type=float, help="screening shift (I4)")
    p.add_argument("--c", type=float, help="resonance centre (I5-I7)")
    p.add_argument("--g", type=float, help="resonance width")
    p.add_argument("--pow", type=float, help="power of the resonance denominator (I7)")


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nucrates", description="Gamow-peak integrals and nuclear fusion rates.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate one integral")
    _add_integral_flags(p)
    p.add_argument("--method", choices=("auto", "quadrature", "series", "asymptotic"),
                   default="auto")
    _add_format(p)

    p = sub.add_parser("compare", help="quadrature, series and asymptotic side by side")
    _add_integral_flags(p)
    _add_format(p)

    p = sub.add_parser("rate-table", help="nonresonant rate over a temperature grid")
    p.add_argument("--zi", type=int, default=1)
    p.add_argument("--zj", type=int, default=1)
    p.add_argument("--mi", type=float, default=1.0, help="mass in amu")
    p.add_argument("--mj", type=float, default=1.0, help="mass in amu")
    p.add_argument("--s0", type=float, default=1.0, help="S(0) in keV barn")
    p.add_argument("--s1", type=float, default=0.0, help="S'(0) in barn")
    p.add_argument("--s2", type=float, default=0.0, help="S''(0) in barn/keV")
    p.add_argument("--ni", type=float, default=1.0, help="density per cm^3")
    p.add_argument("--nj", type=float, default=1.0, help="density per cm^3")
    p.add_argument("--same-species", action="store_true")
    p.add_argument("--tmin", type=float, default=1e6, help="kelvin")
    p.add_argument("--tmax", type=float, default=1e8, help="kelvin")
    p.add_argument("--n", type=int, default=9, help="number of log-spaced temperatures")
    p.add_argument("--mode", choices=("bare", "cutoff", "depleted", "screened"), default="bare")
    p.add_argument("--d", type=float, help="cut-off in units of kT")
    p.add_argument("--b", type=float, help="depletion strength")
    p.add_argument("--delta", type=float, help="depletion exponent")
    p.add_argument("--ue", type=float, help="screening energy in keV")
    _add_format(p)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    _add_format(p)
    return parser


def config_of(ns: argparse.Namespace) -> dict:
    """The echoed configuration: command plus every flag that was set."""
    if ns.command in ("eval", "compare"):
        keys = ("kind",) + _INTEGRAL_FLAGS + (("method",) if ns.command == "eval" else ())
    elif ns.command == "rate-table":
        keys = _RATE_FLAGS
    else:
        keys = ()
    cfg = {"command": ns.command}
    for k in keys:
        v = getattr(ns, k)
        if v is not None:
            cfg[k] = v
    return cfg


def params_of(ns: argparse.Namespace) -> tuple[IntegralKind, IntegralParams]:
    kind = IntegralKind.parse(ns.kind)
    depletion = None
    if ns.b is not None or ns.delta is not None:
        if ns.b is None or ns.delta is None:
            raise MissingField("depletion needs both --b and --delta")
        depletion = Depletion(ns.b, ns.delta)
    resonance = None
    if ns.c is not None or ns.g is not None or ns.pow is not None:
        if ns.c is None or ns.g is None:
            raise MissingField("resonance needs both --c and --g")
        resonance = Resonance(ns.c, ns.g, 1.0 if ns.pow is None else ns.pow)
    params = IntegralParams(ns.nu, ns.a, ns.z, ns.rho, cutoff_d=ns.d, depletion=depletion,
                            screening_t=ns.t, resonance=resonance)
    return kind, validate(kind, params)


def _render(fmt: str, config: dict, columns: list[str], rows: list[dict], out) -> None:
    if fmt == "json":
        payload = {"config": config, "constants_version": CONSTANTS_VERSION, "rows": rows}
        out.write(json.dumps(payload, indent=2, allow_nan=False, default=str) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(row.get(c)) for c in columns])
        out.write(buf.getvalue())
    else:
        width = max(len(c) for c in columns)
        for i, row in enumerate(rows):
            if i:
                out.write("\n")
            for c in columns:
                out.write(f"{c:<{width}}  {_fmt(row.get(c))}\n")


def _result_row(res) -> dict:
    return {"value": res.value, "abs_error": res.abs_error, "method": res.method.value,
            "terms_used": res.terms_used, "converged": res.converged,
            "warnings": "; ".join(res.warnings)}


def cmd_eval(ns, out) -> int:
    kind, params = params_of(ns)
    res = evaluate(kind, params, ns.method)
    cols = ["value", "abs_error", "method", "terms_used", "converged", "warnings"]
    _render(ns.format, config_of(ns), cols, [_result_row(res)], out)
    return EXIT_OK if res.converged else EXIT_NONCONVERGED


def cmd_compare(ns, out) -> int:
    kind, params = params_of(ns)
    routes = (("quadrature", lambda: oracle_eval(kind, params)),
              ("series", lambda: series_eval(kind, params)),
              ("asymptotic", lambda: asymptotic_eval(kind, params)))
    rows = []
    ref = None
    for name, run in routes:
        row = {"method": name}
        try:
            res = run()
        except (OutOfRegime, DegenerateNu) as exc:
            row.update(status="n/a", note=str(exc))
        except (NonConvergence, CancellationError) as exc:
            row.update(status="failed", note=f"{type(exc).__name__}: {exc}")
        else:
            row.update(status="ok", value=res.value, abs_error=res.abs_error,
                       terms_used=res.terms_used, note="; ".join(res.warnings))
            if name == "quadrature":
                ref = res.value
            if ref:
                row["rel_dev"] = abs(res.value - ref) / ref
        rows.append(row)
    choice = select_method(kind, params)
    selected = {"method": "auto", "status": choice.method.value, "note": choice.reason}
    cols = ["method", "status", "value", "abs_error", "rel_dev", "terms_used", "note"]
    _render(ns.format, config_of(ns), cols, rows + [selected], out)
    return EXIT_OK if rows[0]["status"] == "ok" else EXIT_NONCONVERGED


def _mode_of(ns):
    if ns.mode == "bare":
        return Bare()
    if ns.mode == "cutoff":
        if ns.d is None:
            raise MissingField("mode cutoff needs --d")
        return Cutoff(ns.d)
    if ns.mode == "depleted":
        if ns.b is None or ns.delta is None:
            raise MissingField("mode depleted needs --b and --delta")
        return Depleted(ns.b, ns.delta)
    if ns.ue is None:
        raise MissingField("mode screened needs --ue")
    return Screened(ns.ue)


def cmd_rate_table(ns, out) -> int:
    if ns.n < 2:
        raise ValueError("--n must be at least 2")
    if not (0 < ns.tmin < ns.tmax):
        raise ValueError("need 0 < --tmin < --tmax")
    mode = _mode_of(ns)
    rows = []
    for T in np.geomspace(ns.tmin, ns.tmax, ns.n):
        system = ReactionSystem(ns.zi, ns.zj, ns.mi, ns.mj, float(T), (ns.s0, ns.s1, ns.s2),
                                ns.ni, ns.nj, ns.same_species)
        rows.append(rate_breakdown(system, mode).as_dict())
    cols = ["T", "z", "N0", "N1", "N2", "sigma_v", "rate", "rate_distinct"]
    _render(ns.format, config_of(ns), cols, rows, out)
    return EXIT_OK


def cmd_selftest(ns, out) -> int:
    from .selftest import run_all

    results = run_all()
    rows = [{"criterion": r.name, "passed": r.passed, "seconds": round(r.seconds, 3),
             "detail": r.detail} for r in results]
    if ns.format == "text":
        for r in results:
            out.write(r.line + "\n")
        out.write(f"{sum(r.passed for r in results)}/{len(results)} criteria passed\n")
    else:
        _render(ns.format, config_of(ns), ["criterion", "passed", "seconds", "detail"], rows, out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_NONCONVERGED


_COMMANDS = {"eval": cmd_eval, "compare": cmd_compare, "rate-table": cmd_rate_table,
             "selftest": cmd_selftest}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    ns = build_parser().parse_args(argv)
    try:
        return _COMMANDS[ns.command](ns, out)
    except (NonConvergence, CancellationError) as exc:
        print(f"nucrates: not converged: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except (NucratesError, ValueError) as exc:
        # includes DegenerateNu and OutOfRegime for an explicitly requested method
        print(f"nucrates: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
