"""Command-line front end: ``rmflab <subcommand> ...``.

Exit status 0 on success, 1 for domain or runtime errors (one JSON line on
stderr), 2 for usage errors.
"""

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone
from decimal import ROUND_FLOOR, Decimal, InvalidOperation
from pathlib import Path

from . import __version__
from .characters import ResidueSet, decompose_indicator
from .cyclotomic import splitting_type
from .errors import InvalidArgument, RmfError
from .experiments import (DEFAULT_Z, CyclotomicModel, ResidueModel, Steering, TauModel,
                          TrialConfig, decay_reference, run_probability_experiment)
from .multiplicative import build_spf_sieve, steer_signs
from .numtheory import primes_up_to
from .tau import HeckeWeight, tau_series

CSV_COLUMNS = ("x", "count", "trials", "p_hat", "wilson_lo", "wilson_hi", "model", "seed")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def parse_int_list(text):
    """'1e2,1e3,500' -> [100, 1000, 500]; scientific notation allowed, values floored."""
    out = []
    for item in text.split(","):
        item = item.strip()
        try:
            v = Decimal(item)
        except InvalidOperation:
            raise argparse.ArgumentTypeError(f"not a number: {item!r}") from None
        if not v.is_finite():
            raise argparse.ArgumentTypeError(f"not finite: {item!r}")
        out.append(int(v.to_integral_value(rounding=ROUND_FLOOR)))
    return out


def _residues(text):
    try:
        return [int(a) for a in text.split(",") if a.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad residue list {text!r}") from None


def _now():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _fmt(v):
    return repr(float(v))


def _write_text(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="")


# --- subcommands -------------------------------------------------------------------

def cmd_classify(args):
    report = decompose_indicator(ResidueSet(args.m, args.set))
    print(json.dumps(report.to_dict()))


def _model_from(params):
    kind = params["model"]
    if kind == "residue":
        return ResidueModel.of(params["m"], params["set"])
    if kind == "cyclotomic":
        return CyclotomicModel(params["n"])
    return TauModel(HeckeWeight(params["weight"]))


def simulate_csv(params, workers=None):
    """CSV text for a simulate parameter set (the manifest's ``params``)."""
    model = _model_from(params)
    steering = None
    if params.get("steer") is not None:
        steering = Steering(*params["steer"])
    config = TrialConfig(model, tuple(params["x_grid"]), params["trials"], params["seed"],
                         steering, params["z"])
    rows = run_probability_experiment(config, workers)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([r.x, r.count, r.trials, _fmt(r.p_hat), _fmt(r.wilson_lo), _fmt(r.wilson_hi),
                    model.label, params["seed"]])
    return buf.getvalue()


def _simulate_params(args):
    params = {"model": args.model, "x_grid": args.x_grid, "trials": args.trials,
              "seed": args.seed, "z": args.z, "steer": None}
    if args.model == "residue":
        params.update(m=args.m, set=args.set)
    elif args.model == "cyclotomic":
        if args.n is None:
            raise InvalidArgument("--n is required for the cyclotomic model")
        params["n"] = args.n
    else:
        params["weight"] = args.weight
    if args.steer_z is not None:
        if args.model != "residue":
            raise InvalidArgument("steering applies to the residue model only")
        params["steer"] = [args.steer_z, args.steer_a, args.steer_m]
    return params


def _run_simulate(params, out, manifest_path, workers, command="simulate"):
    started = _now()
    text = simulate_csv(params, workers)
    _write_text(out, text)
    if manifest_path is None and out is not None:
        manifest_path = str(out) + ".manifest.json"
    if manifest_path is not None:
        manifest = {"command": command, "params": params, "seed": params["seed"],
                    "version": __version__, "started": started, "finished": _now(),
                    "outputs": [str(out)] if out is not None else []}
        Path(manifest_path).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


def cmd_simulate(args):
    _run_simulate(_simulate_params(args), args.out, args.manifest, args.workers)


def cmd_replay(args):
    try:
        manifest = json.loads(Path(args.manifest_file).read_text(encoding="utf-8"))
        params = manifest["params"]
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise InvalidArgument(f"unreadable manifest: {exc}") from None
    if manifest.get("command") != "simulate":
        raise InvalidArgument(f"cannot replay command {manifest.get('command')!r}")
    _run_simulate(params, args.out, args.manifest, args.workers, "simulate")


def cmd_splitting(args):
    if args.pmax < 2:
        raise InvalidArgument("--pmax must be >= 2")
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(("p", "v_p", "e", "f", "r", "norm"))
    for p in primes_up_to(args.pmax):
        w.writerow(splitting_type(args.n, p).as_row())


def cmd_steer(args):
    result = steer_signs(args.z, args.a, args.m, build_spf_sieve(args.x))
    print(json.dumps({
        "target": args.z, "a": args.a, "m": args.m, "x": args.x,
        "primes": result.primes.tolist(), "signs": result.values.tolist(),
        "turning_points": [{"index": t.index, "prime": t.prime, "partial": t.partial,
                            "residual": t.residual(args.z)} for t in result.turning_points],
        "final_sum": result.final_sum,
    }))


def cmd_bounds(args):
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(("x", "C", "decay_reference"))
    for x in args.x_grid:
        w.writerow((x, _fmt(args.C), _fmt(decay_reference(x, args.C))))


def cmd_tau_fixture(args):
    sys.stdout.write(tau_series(args.n).to_text())


def build_parser():
    p = _Parser(prog="rmflab", description="Random multiplicative function laboratory.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="character expansion and branch verdict of S mod m")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--set", type=_residues, required=True, help="comma-separated residues")
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("simulate", help="Monte Carlo estimate of P(sum < 0) on an x grid")
    s.add_argument("--model", choices=("residue", "cyclotomic", "tau"), required=True)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--set", type=_residues, default=[1])
    s.add_argument("--n", type=int)
    s.add_argument("--weight", type=int, default=11)
    s.add_argument("--x-grid", type=parse_int_list, required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--z", type=float, default=DEFAULT_Z, help="Wilson z-score")
    s.add_argument("--steer-z", type=float)
    s.add_argument("--steer-a", type=int)
    s.add_argument("--steer-m", type=int)
    s.add_argument("--workers", type=int)
    s.add_argument("--out")
    s.add_argument("--manifest")
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("replay", help="re-run a simulate manifest")
    r.add_argument("manifest_file")
    r.add_argument("--out")
    r.add_argument("--manifest")
    r.add_argument("--workers", type=int)
    r.set_defaults(func=cmd_replay)

    sp = sub.add_parser("splitting", help="splitting data of primes in Q(zeta_n)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--pmax", type=int, required=True)
    sp.set_defaults(func=cmd_splitting)

    st = sub.add_parser("steer", help="greedy sign choice on p = a mod m aimed at z")
    st.add_argument("--z", type=float, required=True)
    st.add_argument("--a", type=int, required=True)
    st.add_argument("--m", type=int, required=True)
    st.add_argument("--x", type=int, required=True)
    st.set_defaults(func=cmd_steer)

    b = sub.add_parser("bounds", help="double-exponential reference curve")
    b.add_argument("--x-grid", type=parse_int_list, required=True)
    b.add_argument("--C", type=float, required=True)
    b.set_defaults(func=cmd_bounds)

    t = sub.add_parser("tau-fixture", help="tau(1..N) from the Delta product")
    t.add_argument("--n", type=int, required=True)
    t.set_defaults(func=cmd_tau_fixture)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "steer_z", None) is not None and (args.steer_a is None or args.steer_m is None):
        build_parser().error("--steer-z needs --steer-a and --steer-m")
    try:
        args.func(args)
    except (RmfError, ValueError, ArithmeticError, OSError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "command": args.command}
        sys.stderr.write(json.dumps(err) + "\n")
        return 1
    return 0
