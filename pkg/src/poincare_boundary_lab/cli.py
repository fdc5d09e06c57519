"""Batch command-line front end: every operation behind one subcommand,
emitting deterministic machine-readable reports.

Exit codes: 0 success, 2 invalid arguments, 3 evaluation failure or an
inconclusive verdict, 4 a check-style verdict that is not satisfied
(not_equivalent, violated, no_convergence, failed selftest).

Reports carry the seed and the arguments but no wall-clock data, so repeated
runs with the same seed are byte-identical; the timestamp only names the file.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import analysis as an
from . import curves as cv
from . import functions as fn
from . import geometry as ge
from . import selftest as sft
from . import stolz as st

OUTPUT_DIR_ENV = "PBLAB_OUTPUT_DIR"

# named tolerances: default value and which direction counts as tightening
TOLERANCES = {
    "algebraic": (1e-12, "down"),
    "composed": (1e-9, "down"),
    "plateau_ratio": (1.05, "down"),
    "growth_factor": (2.0, "up"),
    "converge": (1e-3, "down"),
    "margin_rel": (1e-9, "down"),
}


@dataclass
class RunConfig:
    seed: int = sft.DEFAULT_SEED
    max_level: int = 12
    output_dir: str = "pblab-reports"
    format: str = "json"
    tolerances: dict = field(default_factory=dict)

    def tolerance(self, name: str) -> float:
        return self.tolerances.get(name, TOLERANCES[name][0])


class CliError(ValueError):
    pass


def _parse_config_file(path: str) -> dict:
    out = {}
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise CliError(f"bad config line: {line!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            out[key] = val
    return out


def _apply_tolerance(cfg: RunConfig, name: str, value: float):
    if name not in TOLERANCES:
        raise CliError(f"unknown tolerance {name!r}; choices: {sorted(TOLERANCES)}")
    default, direction = TOLERANCES[name]
    tighter = value <= default if direction == "down" else value >= default
    if not tighter:
        raise CliError(
            f"tolerance {name!r} may only tighten its default {default!r}")
    cfg.tolerances[name] = value


def build_config(args) -> RunConfig:
    cfg = RunConfig()
    env_dir = os.environ.get(OUTPUT_DIR_ENV)
    if env_dir:
        cfg.output_dir = env_dir
    if args.config:
        for key, val in _parse_config_file(args.config).items():
            if key == "seed":
                cfg.seed = int(val)
            elif key == "max_level":
                cfg.max_level = int(val)
            elif key == "output_dir":
                cfg.output_dir = val
            elif key == "format":
                cfg.format = val
            elif key.startswith("tolerance."):
                _apply_tolerance(cfg, key.split(".", 1)[1], float(val))
            else:
                raise CliError(f"unknown config key {key!r}")
    if args.seed is not None:
        cfg.seed = args.seed
    if args.max_level is not None:
        cfg.max_level = args.max_level
    if args.output_dir is not None:
        cfg.output_dir = args.output_dir
    if args.format is not None:
        cfg.format = args.format
    for item in args.set_tolerance or []:
        if "=" not in item:
            raise CliError(f"bad --set-tolerance {item!r}; expected NAME=VALUE")
        name, val = item.split("=", 1)
        _apply_tolerance(cfg, name.strip(), float(val))
    if cfg.format not in ("json", "csv"):
        raise CliError(f"unknown format {cfg.format!r}")
    return cfg


# ---------------------------------------------------------------------------
# argument grammars


def parse_complex(text: str) -> complex:
    if text.strip().lower() in ("inf", "infinity"):
        return complex(math.inf, 0.0)
    parts = text.split(",")
    if len(parts) != 2:
        raise CliError(f"bad complex {text!r}; expected re,im")
    return complex(float(parts[0]), float(parts[1]))


def parse_curve(spec: str) -> cv.BoundaryCurve:
    """kind:theta[:param], or @path to a curve exchange JSON file."""
    if spec.startswith("@"):
        with open(spec[1:], "r", encoding="utf-8") as f:
            return cv.curve_from_exchange(json.load(f))
    parts = spec.split(":")
    kind = parts[0]
    if kind not in ("radius", "chord", "hypercycle", "horocycle"):
        raise CliError(f"unknown curve kind {kind!r}")
    if len(parts) < 2:
        raise CliError(f"curve spec {spec!r} needs kind:theta[:param]")
    theta = float(parts[1])
    param = float(parts[2]) if len(parts) > 2 else None
    return cv.canonical_curve(kind, theta, param)


def parse_function(spec: str) -> fn.FunctionHandle:
    parts = spec.split(":")
    name = parts[0]
    if name == "identity":
        return fn.identity_function()
    if name == "constant":
        return fn.constant_function(parse_complex(parts[1]) if len(parts) > 1 else 0.0)
    if name == "automorphism":
        w = parse_complex(parts[1]) if len(parts) > 1 else 0.3 + 0.0j
        return fn.automorphism_function(ge.mobius_translation(w))
    if name in fn.gallery_names():
        return fn.gallery(name)
    if name in ("pole_series", "damped_pole_series"):
        k = int(parts[1]) if len(parts) > 1 else 20
        sch = fn.PoleSchedule.default(0.0, max(k, 4))
        if name == "pole_series":
            return fn.pole_sequence_function(sch, k)
        return fn.damped_pole_sequence_function(sch, k)
    raise CliError(f"unknown function {spec!r}; gallery: {fn.gallery_names()}, "
                   f"also identity, constant:c, automorphism:w, "
                   f"pole_series[:K], damped_pole_series[:K]")


def parse_profile(spec: str) -> st.DecayProfile:
    parts = spec.split(":")
    kind = parts[0]
    try:
        if kind == "log":
            shift = float(parts[1]) if len(parts) > 1 else math.e
            expo = float(parts[2]) if len(parts) > 2 else 1.0
            return st.DecayProfile.log_form(shift, expo)
        if kind == "pow":
            s = float(parts[1])
            expo = float(parts[2]) if len(parts) > 2 else 1.0
            return st.DecayProfile.power_form(s, expo)
        if kind == "super":
            return st.DecayProfile.super_exponential(int(parts[1]))
    except (IndexError, ValueError) as exc:
        raise CliError(f"bad profile spec {spec!r}: {exc}") from None
    raise CliError(f"unknown profile kind {kind!r}; use log[:shift[:e]], "
                   f"pow:s[:e], super:n")


def _enc(v):
    """JSON-encodable rendering of numbers, complexes, extended values."""
    if isinstance(v, ge.ExtendedComplex):
        if v.is_infinity:
            return "infinity"
        return [v.value.real, v.value.imag]
    if isinstance(v, complex):
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            return "infinity"
        return [v.real, v.imag]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


# ---------------------------------------------------------------------------
# report output


def _report_rows(report: dict):
    """Rows for the CSV rendering: (index-name, index, value) triples plus
    scalar metadata repeated on each row."""
    for key in ("levels", "shells", "rows"):
        if key in report and isinstance(report[key], list):
            rows = []
            if key == "levels" and "values" in report:
                for lv, val in zip(report["levels"], report["values"]):
                    rows.append({"level": lv, "value": val})
            elif key == "levels" and "sups" in report:
                for lv, val in zip(report["levels"], report["sups"]):
                    rows.append({"level": lv, "value": val})
            elif key == "shells":
                for sh in report["shells"]:
                    rows.append({"shell": sh.get("shell"),
                                 "value": sh.get("diameter"),
                                 "n": sh.get("n")})
            elif key == "rows":
                for i, r in enumerate(report["rows"]):
                    rec = {"index": i}
                    rec.update({k: v for k, v in r.items()
                                if isinstance(v, (int, float, str))})
                    rows.append(rec)
            if rows:
                return rows
    return [{"value": json.dumps(report.get("value"))}] \
        if "value" in report else [{"note": "no tabular data"}]


def write_report(cfg: RunConfig, subcommand: str, report: dict) -> str:
    os.makedirs(cfg.output_dir, exist_ok=True)
    stamp = time.strftime("%Y%m%dT%H%M%S", time.gmtime()) + f"{time.time_ns() % 1_000_000_000:09d}"
    path = os.path.join(cfg.output_dir, f"{subcommand}-{stamp}.{cfg.format}")
    if cfg.format == "json":
        payload = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        rows = _report_rows(report)
        meta = {"subcommand": subcommand, "seed": report.get("seed", cfg.seed)}
        fields = list(rows[0].keys()) + list(meta.keys())
        writer = csv.DictWriter(buf, fieldnames=fields)
        writer.writeheader()
        for r in rows:
            r = dict(r)
            r.update(meta)
            writer.writerow(r)
        payload = buf.getvalue()
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as f:
        f.write(payload)
    os.replace(tmp, path)
    return path


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (exit_code, report_dict, stdout_text)


def cmd_metric(args, cfg):
    z = parse_complex(args.z)
    w = parse_complex(args.w)
    if args.kind == "ph":
        value = ge.pseudo_hyperbolic_distance(z, w)
    elif args.kind == "h":
        value = ge.hyperbolic_distance(z, w)
    elif args.kind == "s":
        value = ge.spherical_distance(z, w)
    else:
        raise CliError(f"unknown metric kind {args.kind!r}")
    return 0, {"kind": args.kind, "z": _enc(z), "w": _enc(w), "value": value}, f"{value:.12g}"


def cmd_curve_dist(args, cfg):
    c1 = parse_curve(args.curve1)
    c2 = parse_curve(args.curve2)
    level = args.level or cfg.max_level
    fwd = cv.directed_curve_distance(c1, c2, level)
    bwd = cv.directed_curve_distance(c2, c1, level)
    rep = {"curve1": c1.label, "curve2": c2.label, "level": level,
           "forward": fwd, "backward": bwd}
    return 0, rep, f"forward {fwd:.6g}  backward {bwd:.6g}"


def cmd_frechet(args, cfg):
    c1 = parse_curve(args.curve1)
    c2 = parse_curve(args.curve2)
    level = args.level or cfg.max_level
    value = cv.curve_frechet(c1, c2, level)
    return 0, {"curve1": c1.label, "curve2": c2.label, "level": level,
               "value": value}, f"{value:.6g}"


def cmd_equiv(args, cfg):
    c1 = parse_curve(args.curve1)
    c2 = parse_curve(args.curve2)
    verdict = cv.are_equivalent(c1, c2, args.max_level or cfg.max_level)
    rep = {"curve1": c1.label, "curve2": c2.label}
    rep.update(verdict.to_dict())
    code = {"equivalent": 0, "not_equivalent": 4}.get(verdict.verdict, 3)
    return code, rep, verdict.verdict


def cmd_lemma4(args, cfg):
    g1, g2, mk = cv.build_zigzag_pair(args.r, args.n_zigzags)
    values = []
    for n in range(1, args.n_zigzags + 1):
        a, b, m = cv.build_zigzag_pair(args.r, n)
        level = int(math.ceil((m["z_anchors_s"][-1] + 2.0) / math.log(2.0))) + 1
        values.append(cv.curve_frechet(a, b, level))
    if args.n_zigzags:
        s2, t2 = g2.strip_refine(
            int(math.ceil((mk["z_anchors_s"][-1] + 2.0) / math.log(2.0))) + 1)
        band = ge.radius_convert(args.r / 2.0, "ph_to_h")
        contained = bool(np.all(np.abs(t2) <= band + 1e-12))
    else:
        contained = True
    increasing = all(a < b for a, b in zip(values, values[1:]))
    mk_enc = {k: [_enc(v) for v in val] if isinstance(val, list) else _enc(val)
              for k, val in mk.items()}
    exch = cv.curve_to_exchange(g2, min(12, cfg.max_level))
    rep = {"r": args.r, "n_zigzags": args.n_zigzags, "markers": mk_enc,
           "frechet_by_prefix": values, "contained": contained,
           "strictly_increasing": increasing, "curve2_exchange": exch}
    ok = contained and (increasing or not values)
    return (0 if ok else 4), rep, \
        f"frechet by prefix: {['%.3f' % v for v in values]} contained={contained}"


def cmd_normality(args, cfg):
    f = parse_function(args.function)
    curve = parse_curve(args.curve)
    region = cv.CurvilinearAngle(curve, args.deflection)
    rep = an.normality_sup(f, region, args.max_level or max(cfg.max_level, 4))
    rep.seed = cfg.seed
    code = 0 if rep.verdict in ("bounded", "diverging") else 3
    d = rep.to_dict()
    d["function"] = f.label
    return code, d, f"verdict {rep.verdict}  sup[{rep.levels[-1]}]={rep.sups[-1]:.6g}"


def _build_sequence(spec: str, sch: fn.PoleSchedule):
    parts = spec.split(":")
    kind = parts[0]
    n = int(parts[1]) if len(parts) > 1 else 8
    if kind == "radial":
        return np.array([1.0 - 2.0 ** (-k) for k in range(1, n + 1)]), None
    if kind == "poles":
        return sch.pole_points[:n], sch.hyperbolic_diameters[:n]
    if kind == "pole-adjacent":
        return sch.pole_points[:n] + sch.radii[:n] ** 2 * 1e-3, None
    if kind == "pole-offset":
        return sch.pole_points[:n] + sch.radii[:n], None
    raise CliError(f"unknown sequence spec {spec!r}")


def cmd_pseq(args, cfg):
    sch = fn.PoleSchedule.default(0.0, 20)
    f = parse_function(args.function)
    if args.mode == "pointwise":
        seq, _ = _build_sequence(args.sequence, sch)
        rep = an.pseq_indicator_pointwise(f, seq)
    elif args.mode == "local-sup":
        seq, radii = _build_sequence(args.sequence, sch)
        if radii is None:
            radii = np.array([0.5 * 0.7 ** i for i in range(len(seq))])
        rep = an.pseq_indicator_local_sup(f, seq, radii)
    elif args.mode == "split-pair":
        n = int(args.sequence.split(":")[1]) if ":" in args.sequence else 8
        seq_a = sch.pole_points[:n] + sch.radii[:n]
        seq_b = sch.pole_points[:n] + sch.radii[:n] ** 2 * 1e-3
        alpha = parse_complex(args.alpha) if args.alpha else \
            complex(f.eval_array(np.array([seq_a[-1]]))[0])
        rep = an.pseq_indicator_split_pair(f, seq_a, seq_b, alpha, args.delta)
    else:
        raise CliError(f"unknown pseq mode {args.mode!r}")
    d = rep.to_dict()
    d["function"] = f.label
    d["seed"] = cfg.seed
    code = 0 if rep.verdict in ("positive", "negative", "bounded", "diverging") else 3
    return code, d, f"{args.mode}: {rep.verdict}"


def _parse_region(spec: str):
    parts = spec.split(":")
    if parts[0] != "radius-angle":
        raise CliError("region spec must be radius-angle:R[:theta]")
    r = float(parts[1])
    theta = float(parts[2]) if len(parts) > 2 else 0.0
    return an.radial_angle_membership(r, theta), theta, r


def cmd_cluster(args, cfg):
    f = parse_function(args.function)
    member, theta, r = _parse_region(args.region)
    lo, hi = (int(x) for x in args.shells.split(":"))
    rep = an.cluster_estimate(f, member, theta, range(lo, hi + 1),
                              seed=cfg.seed, record_values=not args.no_values)
    d = rep.to_dict()
    d["function"] = f.label
    d["region"] = args.region
    code = 3 if rep.verdict == "inconclusive" else 0
    cand = d["limit_candidate"]
    return code, d, f"verdict {rep.verdict}  candidate {cand}"


def cmd_family(args, cfg):
    f = parse_function(args.function)
    lo, hi = (int(x) for x in args.depths.split(":"))
    ws = [1.0 - 2.0 ** (-k) for k in range(lo, hi + 1)]
    target = parse_complex(args.target)
    rep = an.renormalized_family_check(f, ws, args.r1, target)
    rep.seed = cfg.seed
    d = rep.to_dict()
    d["function"] = f.label
    code = {"converges": 0, "no_convergence": 4}.get(rep.verdict, 3)
    return code, d, f"verdict {rep.verdict}  final sup {rep.sup_ds[-1]:.3e}"


def cmd_stolz_map(args, cfg):
    m = st.stolz_map(args.alpha, args.rho)
    if args.z:
        z = parse_complex(args.z)
        try:
            w = m.apply(z)
        except st.StolzMapDomainError as exc:
            raise CliError(str(exc)) from None
        back = m.invert(w)
        rep = {"alpha": args.alpha, "rho": m.rho, "z": _enc(z), "w": _enc(w),
               "roundtrip_error": abs(back - z)}
        return 0, rep, f"w = {w:.12g}"
    ang = st.StolzAngle(0.0, args.alpha, m.rho)
    z = ang.sample(args.grid, seed=cfg.seed, margin=1e-9)
    w = m.forward_steps(z)
    rt = float(np.max(np.abs(m.invert(w) - z)))
    closed = float(np.max(np.abs(w - m.closed_form(z))))
    rep = {"alpha": args.alpha, "rho": m.rho, "samples": args.grid,
           "max_roundtrip_error": rt, "max_closed_form_error": closed,
           "image_in_disk": bool(np.all(np.abs(w) < 1.0)), "seed": cfg.seed}
    return 0, rep, f"roundtrip {rt:.2e}  closed-form {closed:.2e}"


def cmd_lemma6(args, cfg):
    m_hat, big_m, ok = st.stolz_distortion_bounds(
        args.alpha, args.beta, args.samples, seed=cfg.seed)
    rep = {"alpha": args.alpha, "beta": args.beta, "samples": args.samples,
           "m": m_hat, "M": big_m, "holdout_pass": ok, "seed": cfg.seed}
    return (0 if ok else 4), rep, f"m={m_hat:.6g} M={big_m:.6g} pass={ok}"


def cmd_decay(args, cfg):
    f = parse_function(args.function)
    curve = parse_curve(args.curve)
    profile = parse_profile(args.profile)
    rep = st.decay_margin(f, curve, profile, args.level or cfg.max_level)
    d = rep.to_dict()
    d["function"] = f.label
    d["curve"] = curve.label
    d["seed"] = cfg.seed
    code = 0 if rep.verdict == "satisfied" else 4
    return code, d, f"verdict {rep.verdict}  threshold {rep.violation_threshold}"


def cmd_gallery(args, cfg):
    f = parse_function(args.name)
    points = [parse_complex(p) for p in (args.at or ["0,0"])]
    values = []
    for p in points:
        v = f.eval(p)
        values.append({"z": _enc(p), "value": _enc(v), "saturated": v.saturated})
    rep = {"name": f.label, "values": values}
    return 0, rep, " ".join(str(v["value"]) for v in values)


def cmd_selftest(args, cfg):
    res = sft.run_all(cfg.seed)
    res["tolerances"] = {k: cfg.tolerance(k) for k in TOLERANCES}
    lines = [f"{'PASS' if c['passed'] else 'FAIL'} {c['criterion']}"
             for c in res["criteria"]]
    return (0 if res["all_passed"] else 4), res, "\n".join(lines)


HANDLERS = {}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="pblab",
        description="numerical laboratory for boundary behavior on the unit disk")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--max-level", type=int, default=None)
    p.add_argument("--output-dir", default=None)
    p.add_argument("--format", choices=["json", "csv"], default=None)
    p.add_argument("--config", default=None, help="flat key=value config file")
    p.add_argument("--set-tolerance", action="append", metavar="NAME=VALUE",
                   help="tighten a named tolerance (repeatable)")
    p.add_argument("--no-report", action="store_true",
                   help="skip writing the report file")
    sub = p.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("metric", help="evaluate a point distance")
    sp.add_argument("--kind", required=True, choices=["ph", "h", "s"])
    sp.add_argument("--z", required=True)
    sp.add_argument("--w", required=True)
    HANDLERS["metric"] = cmd_metric

    for name, help_text in [("curve-dist", "directed curve distance"),
                            ("frechet", "discrete Frechet distance")]:
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--curve1", required=True)
        sp.add_argument("--curve2", required=True)
        sp.add_argument("--level", type=int, default=None)
    HANDLERS["curve-dist"] = cmd_curve_dist
    HANDLERS["frechet"] = cmd_frechet

    sp = sub.add_parser("equiv", help="curve equivalence verdict")
    sp.add_argument("--curve1", required=True)
    sp.add_argument("--curve2", required=True)
    sp.add_argument("--max-level", type=int, default=None, dest="max_level_local")
    HANDLERS["equiv"] = lambda a, c: cmd_equiv(_alias(a), c)

    sp = sub.add_parser("lemma4", help="zigzag pair construction and growth")
    sp.add_argument("--r", type=float, default=0.5)
    sp.add_argument("--n-zigzags", type=int, default=5)
    HANDLERS["lemma4"] = cmd_lemma4

    sp = sub.add_parser("normality", help="normality sup over a deflection region")
    sp.add_argument("--function", required=True)
    sp.add_argument("--curve", required=True)
    sp.add_argument("--deflection", type=float, required=True)
    sp.add_argument("--max-level", type=int, default=None, dest="max_level_local")
    HANDLERS["normality"] = lambda a, c: cmd_normality(_alias(a), c)

    sp = sub.add_parser("pseq", help="blow-up sequence indicators")
    sp.add_argument("--function", required=True)
    sp.add_argument("--mode", required=True,
                    choices=["pointwise", "local-sup", "split-pair"])
    sp.add_argument("--sequence", default="poles:8")
    sp.add_argument("--alpha", default=None)
    sp.add_argument("--delta", type=float, default=0.5)
    HANDLERS["pseq"] = cmd_pseq

    sp = sub.add_parser("cluster", help="cluster-set estimate on boundary shells")
    sp.add_argument("--function", required=True)
    sp.add_argument("--region", required=True, help="radius-angle:R[:theta]")
    sp.add_argument("--shells", default="2:14", help="lo:hi shell levels")
    sp.add_argument("--no-values", action="store_true")
    HANDLERS["cluster"] = cmd_cluster

    sp = sub.add_parser("family", help="renormalized family convergence")
    sp.add_argument("--function", required=True)
    sp.add_argument("--r1", type=float, default=0.5)
    sp.add_argument("--target", required=True)
    sp.add_argument("--depths", default="1:16", help="lo:hi dyadic depths of w_n")
    HANDLERS["family"] = cmd_family

    sp = sub.add_parser("stolz-map", help="sector-to-disk conformal map")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--rho", type=float, default=None)
    sp.add_argument("--z", default=None)
    sp.add_argument("--grid", type=int, default=1000)
    HANDLERS["stolz-map"] = cmd_stolz_map

    sp = sub.add_parser("lemma6", help="boundary-distance distortion bounds")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--samples", type=int, default=10000)
    HANDLERS["lemma6"] = cmd_lemma6

    sp = sub.add_parser("decay", help="decay-bound margin table")
    sp.add_argument("--function", required=True)
    sp.add_argument("--curve", required=True)
    sp.add_argument("--profile", required=True, help="log[:shift[:e]] | pow:s[:e] | super:n")
    sp.add_argument("--level", type=int, default=None)
    HANDLERS["decay"] = cmd_decay

    sp = sub.add_parser("gallery", help="evaluate a gallery function")
    sp.add_argument("--name", required=True)
    sp.add_argument("--at", action="append", help="point re,im (repeatable)")
    HANDLERS["gallery"] = cmd_gallery

    sub.add_parser("selftest", help="run the full acceptance battery")
    HANDLERS["selftest"] = cmd_selftest

    # let values like -0.5,0 pass as option arguments rather than flags
    matcher = re.compile(r"^-\d+(\.\d+)?(,-?\d+(\.\d+)?)?(e-?\d+)?$|^-\.\d+.*$")
    p._negative_number_matcher = matcher
    for action in p._subparsers._group_actions:
        for sp_ in getattr(action, "choices", {}).values():
            sp_._negative_number_matcher = matcher
    return p


def _alias(args):
    # merge the per-subcommand --max-level into the shared attribute name
    if getattr(args, "max_level_local", None) is not None:
        args.max_level = args.max_level_local
    elif not hasattr(args, "max_level") or args.max_level is None:
        args.max_level = None
    return args


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        handler = HANDLERS[args.subcommand]
        code, report, text = handler(args, cfg)
        report = {"subcommand": args.subcommand, "seed": cfg.seed,
                  "arguments": {k: v for k, v in sorted(vars(args).items())
                                if k not in ("config",) and v is not None},
                  **report}
        if "seed" not in report:
            report["seed"] = cfg.seed
        if not args.no_report:
            path = write_report(cfg, args.subcommand, report)
            print(text)
            print(f"report: {path}", file=sys.stderr)
        else:
            print(text)
        return code
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (cv.CurveEndpointMismatch, ge.DiskDomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except fn.EvaluationError as exc:
        print(f"evaluation failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
