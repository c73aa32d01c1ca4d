"""Command-line surface: means, conjugate, constants, lemma-check, green,
gfun, extremal, theorem, report.  Flags are long-form only; exit code 0
means every check passed (skips count as failures only under --strict).
Setting QRMEANS_DEEP=1 extends boundary ladders to 1 - 10^-6.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .conjugation import decompose
from .constants import build_constant_set
from .gallery import sharpness_experiment_derivative, sharpness_experiment_growth
from .gfunction import angular_norm, g_function, g_norm_ratio
from .harness import ExperimentConfig, dumps_canonical, render_report, run_experiment, version_string
from .means import means_table, radius_ladder
from .sector import GreenQuad, f_p_field, green_identity_residual, lemma_check
from .series import map_from_spec


def _deep_default() -> bool:
    return os.environ.get("QRMEANS_DEEP", "") == "1"


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


def _load_map(path: str):
    return map_from_spec(json.loads(Path(path).read_text()))


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_means(args) -> int:
    m = _load_map(args.map)
    radii = _floats(args.radii) if args.radii else list(radius_ladder(6 if args.deep else 4))
    table = means_table(m, radii, _floats(args.p), n_theta=args.n_theta, target=args.map)
    if args.format == "csv":
        _emit(table.to_csv(), args.output)
    else:
        _emit(dumps_canonical(table.to_json_dict()), args.output)
    return 0


def _cmd_conjugate(args) -> int:
    m = _load_map(args.map)
    pair = decompose(m)
    out = {
        "u_analytic": pair.u_analytic.to_spec(),
        "v_analytic": pair.v_analytic.to_spec(),
        "v_at_origin": [float(x) for x in (0.0, complex(pair.v_analytic.coeffs[0]).imag)],
    }
    if args.at:
        z = complex(args.at)
        out["f_at"] = [m(z).real, m(z).imag]
        out["u_at"] = pair.u_analytic(z).real
        out["v_at"] = pair.v_analytic(z).imag
    _emit(dumps_canonical(out), args.output)
    return 0


def _cmd_constants(args) -> int:
    ps = _floats(args.p)
    ks = _floats(args.K)
    if args.format == "csv" or len(ps) * len(ks) > 1:
        lines = ["p,K,pstar,pichorides,verbitsky_upper,verbitsky_lower,a_p,b_p,c_p,m_p,n_p,C_Kp,c_Kp,f_valid,v_valid"]
        for p in ps:
            for k in ks:
                cs = build_constant_set(p, k).to_json_dict()
                lines.append(
                    ",".join(
                        str(cs[key])
                        for key in (
                            "p", "K", "pstar", "pichorides", "verbitsky_upper", "verbitsky_lower",
                            "a_p", "b_p", "c_p", "m_p", "n_p", "C_Kp", "c_Kp",
                        )
                    )
                    + f",{cs['validity']['f_bound']},{cs['validity']['v_bound']}"
                )
        _emit("\n".join(lines) + "\n", args.output)
    else:
        _emit(dumps_canonical(build_constant_set(ps[0], ks[0]).to_json_dict()), args.output)
    return 0


def _cmd_lemma_check(args) -> int:
    sweep = lemma_check(args.p, args.ineq, r=args.r, n_angles=args.angles)
    _emit(
        dumps_canonical(
            {
                "p": sweep.p,
                "ineq": sweep.which,
                "r": sweep.r,
                "max_deficit": sweep.max_deficit,
                "scaled_max_deficit": sweep.scaled_max_deficit,
                "argmax_point": {"r": sweep.r, "t": sweep.argmax_t},
            }
        ),
        args.output,
    )
    return 0


def _cmd_green(args) -> int:
    m = _load_map(args.map)
    field, lap = f_p_field(m, args.p)
    rep = green_identity_residual(field, lap, GreenQuad(n_theta=args.n_theta, n_radial=args.n_radial))
    _emit(
        dumps_canonical(
            {
                "p": args.p,
                "residual": rep.residual,
                "value_at_origin": rep.value_at_origin,
                "boundary_mean": rep.boundary_mean,
                "area_term": rep.area_term,
                "converged": rep.converged,
                "n_theta": rep.n_theta,
                "n_radial": rep.n_radial,
            }
        ),
        args.output,
    )
    return 0


def _cmd_gfun(args) -> int:
    m = _load_map(args.map)
    pair = decompose(m)
    gs = g_function(pair.u_analytic, n_theta=args.n_theta)
    ratio = g_norm_ratio(pair.u_analytic, args.p, n_theta=args.n_theta)
    _emit(
        dumps_canonical(
            {
                "p": args.p,
                "n_radial": gs.n_radial,
                "converged": gs.converged,
                "angular_norm": angular_norm(gs.values, args.p),
                "hardy_norm": ratio.hardy_value,
                "ratio": ratio.ratio,
                "ratio_centered": ratio.ratio_centered,
                "bracket": list(ratio.bracket) if ratio.bracket else None,
                "in_bracket": ratio.in_bracket,
                "samples": [float(v) for v in gs.values[:: max(1, len(gs.values) // 64)]],
            }
        ),
        args.output,
    )
    return 0


def _cmd_extremal(args) -> int:
    deep = args.deep or _deep_default()
    if args.family == "hl_growth":
        rep = sharpness_experiment_growth(
            args.j, args.K, ladder=radius_ladder(6 if deep else 4), control=args.control
        )
        payload = {
            "family": "hl_growth", "j": rep.j, "K": rep.K, "control": rep.control,
            "radii": list(rep.radii), "ratios": list(rep.ratios), "window": list(rep.window),
            "dropped_radii": list(rep.dropped_radii), "passed": rep.passed,
        }
        ok = rep.passed
    else:
        rep = sharpness_experiment_derivative(args.p, args.epsilon, args.K, deep=deep)
        payload = {
            "family": "hl_derivative", "p": rep.p, "epsilon": rep.epsilon, "K": rep.K,
            "q_nominal": rep.q_nominal, "q_critical": rep.q_critical,
            "bracket": list(rep.bracket) if rep.bracket else None,
            "gradient_ladder_bounded": rep.gradient_ladder_bounded,
            "no_blowup_detected": rep.no_blowup_detected,
            "probes": [list(t) for t in rep.probes], "passed": rep.passed,
        }
        ok = rep.passed
    _emit(dumps_canonical(payload), args.output)
    return 0 if ok else 1


def _cmd_theorem(args) -> int:
    maps = ()
    if args.maps:
        maps = tuple(json.loads(Path(args.maps).read_text()))
    cfg = ExperimentConfig(
        theorem_id=args.id,
        p=tuple(_floats(args.p)),
        K=args.K,
        kprime=args.kprime,
        corpus_size=args.size,
        degree=args.degree,
        seed=args.seed,
        deep=args.deep or _deep_default(),
        epsilon=args.epsilon,
        maps=maps,
    )
    verdict = run_experiment(cfg)
    text = render_report(verdict, args.format)
    _emit(text, args.output)
    if args.strict and verdict.n_skipped() > 0:
        return 1
    return 0 if verdict.passed else 1


def _cmd_report(args) -> int:
    payload = json.loads(Path(args.input).read_text())
    if args.format == "json":
        _emit(dumps_canonical(payload), args.output)
        return 0
    lines = ["map_id,skipped,passed,metric,value"]
    for rec in payload.get("records", []):
        base = f"{rec['map_id']},{rec['skipped']},{rec['passed']}"
        if rec.get("skipped"):
            lines.append(f"{base},skip_reason,{rec.get('skip_reason', '')}")
        for key in sorted(rec.get("slacks", {})):
            lines.append(f"{base},{key},{rec['slacks'][key]!r}")
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qrmeans", description=__doc__)
    ap.add_argument("--version", action="version", version=version_string())
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--output", default=None, help="write the report here instead of stdout")

    sp = sub.add_parser("means", help="integral-mean table of a map")
    sp.add_argument("--map", required=True, help="JSON map spec file")
    sp.add_argument("--p", required=True, help="comma-separated exponents")
    sp.add_argument("--radii", default=None, help="comma-separated radii (default: boundary ladder)")
    sp.add_argument("--n-theta", type=int, default=None, dest="n_theta")
    sp.add_argument("--format", choices=("json", "csv"), default="csv")
    sp.add_argument("--deep", action="store_true")
    add_common(sp)
    sp.set_defaults(fn=_cmd_means)

    sp = sub.add_parser("conjugate", help="sum/difference completions of a map")
    sp.add_argument("--map", required=True)
    sp.add_argument("--at", default=None, help="evaluation point, e.g. 0.3+0.2j")
    add_common(sp)
    sp.set_defaults(fn=_cmd_conjugate)

    sp = sub.add_parser("constants", help="constant catalogue at (p, K)")
    sp.add_argument("--p", required=True)
    sp.add_argument("--K", default="1.0")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    add_common(sp)
    sp.set_defaults(fn=_cmd_constants)

    sp = sub.add_parser("lemma-check", help="sweep one sector inequality")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--ineq", type=int, choices=(1, 2, 3, 4), required=True)
    sp.add_argument("--angles", type=int, default=10_000)
    sp.add_argument("--r", type=float, default=1.0)
    add_common(sp)
    sp.set_defaults(fn=_cmd_lemma_check)

    sp = sub.add_parser("green", help="disk identity residual of the power field")
    sp.add_argument("--map", required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--n-theta", type=int, default=1024, dest="n_theta")
    sp.add_argument("--n-radial", type=int, default=512, dest="n_radial")
    add_common(sp)
    sp.set_defaults(fn=_cmd_green)

    sp = sub.add_parser("gfun", help="square-functional samples and norms")
    sp.add_argument("--map", required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--n-theta", type=int, default=1024, dest="n_theta")
    add_common(sp)
    sp.set_defaults(fn=_cmd_gfun)

    sp = sub.add_parser("extremal", help="sharpness experiments on witness families")
    sp.add_argument("--family", choices=("hl_growth", "hl_derivative"), required=True)
    sp.add_argument("--j", type=int, default=0)
    sp.add_argument("--K", type=float, default=1.0)
    sp.add_argument("--p", type=float, default=0.5)
    sp.add_argument("--epsilon", type=float, default=0.05)
    sp.add_argument("--deep", action="store_true")
    sp.add_argument("--control", action="store_true", help="run the constant-map control instead")
    add_common(sp)
    sp.set_defaults(fn=_cmd_extremal)

    sp = sub.add_parser("theorem", help="run a theorem-level experiment")
    sp.add_argument("--id", choices=("riesz_kk", "riesz_sharp", "kolmogorov", "zygmund", "hl_growth", "hl_derivative", "prop2"), required=True)
    sp.add_argument("--p", default="2.0")
    sp.add_argument("--K", type=float, default=1.0)
    sp.add_argument("--kprime", type=float, default=0.0)
    sp.add_argument("--size", type=int, default=20)
    sp.add_argument("--degree", type=int, default=16)
    sp.add_argument("--seed", type=int, default=7)
    sp.add_argument("--epsilon", type=float, default=0.05)
    sp.add_argument("--maps", default=None, help="JSON file with a list of map specs")
    sp.add_argument("--deep", action="store_true")
    sp.add_argument("--strict", action="store_true", help="treat skipped maps as failures")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    add_common(sp)
    sp.set_defaults(fn=_cmd_theorem)

    sp = sub.add_parser("report", help="re-render a stored verdict")
    sp.add_argument("--input", required=True)
    sp.add_argument("--format", choices=("json", "csv"), default="csv")
    add_common(sp)
    sp.set_defaults(fn=_cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
