"""Command-line front end: ``qheights <command> [options]``.

Exit codes: 0 success, 2 invalid input, 3 undecided emptiness or exhausted
search budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

from . import chow, harness, heights, ideals, position
from .ideals import PolyIdeal, VarietySpec
from .polyring import monomial_str, parse_point, parse_poly
from .qarith import PlaceSet, format_rat

EXIT_OK, EXIT_INVALID, EXIT_UNDECIDED = 0, 2, 3
SEED_ENV = "QHEIGHTS_SEED"


def _resolve(path: str) -> Path:
    """A file path, or the name of a bundled example fixture."""
    p = Path(path)
    if p.exists():
        return p
    bundled = resources.files("qheights") / "examples" / p.name
    if bundled.is_file():
        return Path(str(bundled))
    raise ValueError(f"no such file or bundled example: {path}")


def _load_json(spec: str) -> dict:
    if spec.lstrip().startswith("{"):
        return json.loads(spec)
    with open(_resolve(spec)) as fh:
        return json.load(fh)


def _load_ideal(spec: str) -> PolyIdeal:
    data = _load_json(spec)
    return PolyIdeal.from_json(data.get("variety", data))


def _emit(args, text: str, payload) -> None:
    print(json.dumps(payload, sort_keys=True) if args.json else text)


# --- commands ---------------------------------------------------------------------------

def cmd_height(args) -> int:
    target = args.target.strip()
    if target.startswith("("):
        hv = heights.height_point(parse_point(target))
    else:
        hv = heights.height_poly(parse_poly(target))
    text = format_rat(hv.exact_norm_product) if args.exact else heights.format_height(hv.log_value)
    _emit(args, text, {"log": hv.log_value, "norm_product": format_rat(hv.exact_norm_product)})
    return EXIT_OK


def cmd_weil(args) -> int:
    x = parse_point(args.point)
    Q = parse_poly(args.poly, len(x.coords))
    places = PlaceSet.parse(args.places) if args.places else heights.weil_places(Q, x)
    values = {str(v): heights.weil(Q, v, x) for v in places}
    total = sum(values.values())
    lines = [f"{v}\t{heights.format_height(val)}" for v, val in values.items()]
    lines.append(f"sum\t{heights.format_height(total)}")
    _emit(args, "\n".join(lines), {"places": values, "sum": total})
    return EXIT_OK


def cmd_hilbert_fn(args) -> int:
    I = _load_ideal(args.ideal)
    H = ideals.hilbert_function(I, args.u)
    _emit(args, str(H), {"u": args.u, "H": H})
    return EXIT_OK


def cmd_hilbert_weight(args) -> int:
    I = _load_ideal(args.ideal)
    S, basis = chow.hilbert_weight(I, args.u, chow.WeightVector.parse(args.c))
    names = [monomial_str(a) for a in basis]
    _emit(args, f"{format_rat(S)}\n" + " ".join(names), {"S": format_rat(S), "basis": names})
    return EXIT_OK


def cmd_chow_weight(args) -> int:
    c = chow.WeightVector.parse(args.c)
    if args.point:
        result = chow.chow_weight(chow.chow_form_point(parse_point(args.point)), c)
    elif args.linear:
        vecs = [parse_point(s).coords for s in args.linear.split(";")]
        result = chow.chow_weight(chow.chow_form_linear(vecs), c)
    elif args.hypersurface:
        F = parse_poly(args.hypersurface, len(c))
        result = chow.chow_weight(chow.chow_form_hypersurface(F), c)
    elif args.ideal:
        if args.u is None:
            raise ValueError("--u is required for an estimate")
        result = chow.chow_weight_estimate(_load_ideal(args.ideal), c, args.u, args.convention)
    else:
        raise ValueError("give one of --point, --linear, --hypersurface, --ideal")
    _emit(args, str(result), {"lo": format_rat(result.lo), "hi": format_rat(result.hi),
                              "method": result.method})
    return EXIT_OK


def _variety_and_polys(data: dict) -> tuple[VarietySpec, list]:
    ideal = PolyIdeal.from_json(data["variety"])
    polys = [parse_poly(s, ideal.nvars) for s in data["polys"]]
    return VarietySpec.from_ideal(ideal), polys


def cmd_check_position(args) -> int:
    data = _load_json(args.input)
    V, Qs = _variety_and_polys(data)
    N = args.N if args.N is not None else int(data["N"])
    rep = position.check_subgeneral(V, Qs, N)
    witness = None if rep.witness is None else [i + 1 for i in rep.witness]
    text = f"N={N} holds" if rep.holds else f"N={N} fails; witness {witness}"
    _emit(args, text, {"N": N, "holds": rep.holds, "witness": witness})
    return EXIT_OK


def cmd_replace(args) -> int:
    data = _load_json(args.input)
    V, Qs = _variety_and_polys(data)
    Qs, d = harness.normalize_degrees(Qs)
    N = args.N if args.N is not None else int(data.get("N", len(Qs) - 1))
    res = position.replace_hypersurfaces(V, Qs[: N + 1], seed=args.seed, max_attempts=args.max_attempts)
    lines = [f"P{t + 1} = {P}" for t, P in enumerate(res.P)]
    lines.append(f"attempts = {res.attempts}")
    coeffs = {f"c{t}{j}": format_rat(c) for (t, j), c in sorted(res.coeffs.items())}
    _emit(args, "\n".join(lines), {"P": [str(P) for P in res.P], "coeffs": coeffs,
                                   "attempts": res.attempts})
    return EXIT_OK


def _config(args) -> harness.ExperimentConfig:
    cfg = harness.ExperimentConfig.from_json(_load_json(args.config))
    changes = {}
    if args.H is not None:
        changes["height_bound"] = args.H
    if getattr(args, "mode", None):
        changes["mode"] = args.mode
    if args.places:
        changes["places"] = PlaceSet.parse(args.places)
    return cfg.with_(**changes) if changes else cfg


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    cfg = _config(args)
    records, summary = harness.main_theorem_report(cfg, threads=args.threads)
    _write(args.csv, harness.records_to_csv(records))
    payload = summary.to_json()
    payload["coefficient"] = cfg.coefficient
    print(("# summary " if not args.csv else "") + json.dumps(payload, sort_keys=True))
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = _config(args)
    coeffs, rows = harness.compare_bounds(cfg)
    _write(args.csv, harness.comparison_csv(coeffs, rows))
    print(("# coefficients " if not args.csv else "") + json.dumps(coeffs, sort_keys=True))
    return EXIT_OK


def cmd_eliminate(args) -> int:
    I = _load_ideal(args.ideal)
    maps = [parse_poly(s, I.nvars) for s in args.map.split(";")]
    J = ideals.image_ideal(I, maps)
    print(J.dumps())
    return EXIT_OK


def cmd_ineq(args) -> int:
    cfg = _config(args)
    scan = harness.ineq_3_2_scan(cfg, cfg.height_bound, seed=args.seed)
    text = "\n".join(f"{k}\t{heights.format_height(v)}" for k, v in scan.items())
    _emit(args, text, {str(k): v for k, v in scan.items()})
    return EXIT_OK


# --- parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=int(os.environ.get(SEED_ENV, "0")))
    common.add_argument("--places", default=None, help="comma-separated places, e.g. inf,2,3")
    common.add_argument("--threads", type=int, default=1)

    parser = argparse.ArgumentParser(prog="qheights",
                                     description="Heights, Chow weights and subspace-type checks over Q.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("height", parents=[common], help="height of a point or polynomial")
    p.add_argument("target")
    p.add_argument("--exact", action="store_true", help="print the norm product")
    p.set_defaults(func=cmd_height)

    p = sub.add_parser("weil", parents=[common], help="local Weil functions")
    p.add_argument("--poly", required=True)
    p.add_argument("--point", required=True)
    p.set_defaults(func=cmd_weil)

    p = sub.add_parser("hilbert-fn", parents=[common], help="Hilbert function value")
    p.add_argument("--ideal", required=True)
    p.add_argument("--u", type=int, required=True)
    p.set_defaults(func=cmd_hilbert_fn)

    p = sub.add_parser("hilbert-weight", parents=[common], help="u-th Hilbert weight")
    p.add_argument("--ideal", required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--c", required=True)
    p.set_defaults(func=cmd_hilbert_weight)

    p = sub.add_parser("chow-weight", parents=[common], help="Chow weight, exact or estimated")
    p.add_argument("--c", required=True)
    p.add_argument("--point")
    p.add_argument("--linear", help="basis points separated by ';'")
    p.add_argument("--hypersurface")
    p.add_argument("--ideal")
    p.add_argument("--u", type=int)
    p.add_argument("--convention", choices=chow.CONVENTIONS, default="dimension")
    p.set_defaults(func=cmd_chow_weight)

    for name, func in (("check-position", cmd_check_position), ("replace", cmd_replace)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--input", required=True, help="JSON with variety, polys and N")
        p.add_argument("--N", type=int)
        if name == "replace":
            p.add_argument("--max-attempts", type=int, default=position.MAX_ATTEMPTS)
        p.set_defaults(func=func)

    for name, func in (("verify", cmd_verify), ("compare", cmd_compare), ("ineq", cmd_ineq)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--config", required=True)
        p.add_argument("--H", type=int)
        p.add_argument("--csv", help="write the table here instead of stdout")
        if name == "verify":
            p.add_argument("--mode", choices=harness.MODES)
        p.set_defaults(func=func)

    p = sub.add_parser("eliminate", parents=[common], help="ideal of the image of a map")
    p.add_argument("--ideal", required=True)
    p.add_argument("--map", required=True, help="components separated by ';'")
    p.set_defaults(func=cmd_eliminate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ideals.EmptinessUndecided, position.ReplacementNotFound) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except (ValueError, KeyError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
