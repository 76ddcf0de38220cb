"""Command-line front end.

Each subcommand runs one suite of checks and writes a JSON report
``{command, parameters, verdicts, wall_time}``.  Exit status is 0 when every
verdict is ``match``, 1 on any mismatch or I/O failure, 2 on a usage error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .ahlfors_bers import SolverConfig, constant_annulus, frechet_check, principal_solution, radial_stretch
from .errors import DomainError, WanderlabError
from .herman import build_herman, herman_distortion, lattice_point, orbit, render_escape, semiconjugacy_residual, write_ppm
from .hyperbolic import hyp_distortion
from .inner_dynamics import InnerSystem, Tail, classify, distortion_sequence, track_pair
from .koenigs import linearizer, linearizer_inverse
from .surgery import InterpolationParams, dnu_dlambda, interpolate, max_modulus
from .verify import (VerdictRecord, chain_with_derived, end_to_end_derivative, newchain_identity,
                     paper_integral_reproduction, residue_check_first, residue_check_second)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SUITES = ("beltrami", "classify", "distortion", "herman", "integrals", "koenigs", "newchain", "surgery")

DEFAULTS = {
    "classify": {"horizon": 200},
    "distortion": {"alpha": 0.5, "horizon": 10},
    "koenigs": {"alpha": 0.5, "tol": 1e-13},
    "surgery": {"alpha": 0.5, "R": 0.1, "lambda_re": 0.5, "lambda_im": 0.0},
    "integrals": {"alpha": 0.5, "R": 0.1},
    "beltrami": {"grid": 1024, "tol": 1e-12},
    "newchain": {"alpha": 0.5, "R": 0.5, "grid": 1024, "tol": 1e-12},
    "herman": {"a_re": -0.5, "a_im": 0.0, "horizon": 10},
    "herman-render": {"a_re": -0.5, "a_im": 0.0, "grid": 512, "max_iter": 100,
                      "x0": -4.0, "x1": 4.0, "y0": -4.0, "y1": 4.0, "escape_radius": 50.0},
}
# report accepts any suite key and applies it to every suite that uses it
REPORT_KEYS = {k: v for s in SUITES for k, v in DEFAULTS[s].items()}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    parameters: dict
    output_path: Path | None = None
    csv_path: Path | None = None
    timing: bool = False
    action: str | None = None

    @property
    def key(self) -> str:
        return f"{self.command}-{self.action}" if self.action else self.command


# -- validation ----------------------------------------------------------------

def _validate(p: dict) -> None:
    if "alpha" in p and not 0.0 < abs(p["alpha"]) < 1.0:
        raise UsageError(f"alpha = {p['alpha']} violates 0 < |alpha| < 1")
    if "R" in p and not 0.0 < p["R"] < 1.0:
        raise UsageError(f"R = {p['R']} violates 0 < R < 1")
    if "lambda_re" in p and not abs(complex(p["lambda_re"], p["lambda_im"])) < 1.0:
        raise UsageError("lambda violates |lambda| < 1")
    if "a_re" in p and not abs(1 + complex(p["a_re"], p["a_im"])) < 1.0:
        raise UsageError(f"a = {complex(p['a_re'], p['a_im'])} violates |1 + a| < 1")
    if "grid" in p:
        g = p["grid"]
        if g < 8 or g & (g - 1):
            raise UsageError(f"grid = {g} must be a power of two >= 8")
    if "horizon" in p and p["horizon"] < 1:
        raise UsageError("horizon must be >= 1")
    if "tol" in p and not p["tol"] > 0:
        raise UsageError("tol must be positive")
    if "max_iter" in p and p["max_iter"] < 0:
        raise UsageError("max_iter must be >= 0")


def _coerce(key, value, default):
    try:
        if isinstance(default, int) and not isinstance(default, bool):
            if isinstance(value, float) and not value.is_integer():
                raise ValueError
            return int(value)
        return float(value)
    except (TypeError, ValueError):
        raise UsageError(f"bad value for {key}: {value!r}") from None


def _fill(defaults: dict, given: dict) -> dict:
    params = dict(defaults)
    for k, v in given.items():
        if k in defaults:
            params[k] = _coerce(k, v, defaults[k])
    _validate(params)
    return params


def parse_config(command: str, action: str | None = None, config: dict | None = None,
                 flags: dict | None = None, output=None, csv_path=None, timing=False) -> RunConfig:
    key = f"{command}-{action}" if action else command
    if key != "report" and key not in DEFAULTS:
        raise UsageError(f"unknown command {key!r}")
    allowed = REPORT_KEYS if key == "report" else DEFAULTS[key]
    given = {}
    for source in (config or {}, flags or {}):
        for k, v in source.items():
            if v is None:
                continue
            if k not in allowed:
                raise UsageError(f"unknown key {k!r} for {key}")
            given[k] = v
    if key == "report":
        params = {suite: _fill(DEFAULTS[suite], given) for suite in SUITES}
    else:
        params = _fill(DEFAULTS[key], given)
    return RunConfig(command, params, Path(output) if output else None,
                     Path(csv_path) if csv_path else None, timing, action)


# -- record helpers ---------------------------------------------------------------

def _check(name, computed, expected, ok, tol, **details) -> VerdictRecord:
    gap = None
    if not isinstance(computed, str) and not isinstance(expected, str):
        gap = abs(complex(computed) - complex(expected))
    return VerdictRecord(name, computed, expected, gap, "match" if ok else "mismatch", (), tol, details)


def _solver(p) -> SolverConfig:
    return SolverConfig(n=int(p["grid"]), fix_tol=float(p["tol"]))


# -- suites --------------------------------------------------------------------------

def suite_classify(p):
    N = int(p["horizon"])
    families = [
        ("contracting", InnerSystem.linear(lambda n: 1 - 1 / n, Tail.SUM_DIVERGES), "contracting"),
        ("isometric", InnerSystem.linear(1.0, Tail.EVENTUALLY_ONE), "eventually-isometric"),
        ("semi", InnerSystem.linear(lambda n: 1 - 2.0 ** -n, Tail.SUM_CONVERGES), "semi-contracting"),
    ]
    out = []
    for name, system, expected in families:
        label = classify(distortion_sequence(system, N), system.tail).value
        out.append(_check(f"classify/{name}", label, expected, label == expected, 0.0, horizon=N))

    rng = np.random.default_rng(20240607)
    worst = -math.inf
    for _ in range(100):
        kind = rng.integers(3)
        if kind == 0:
            cs = rng.uniform(0.2, 1.0, N) * np.exp(2j * np.pi * rng.uniform(size=N))
            sys_ = InnerSystem.linear(lambda n, cs=cs: cs[n - 1])
        elif kind == 1:
            cs = rng.uniform(0, 0.95, N) * np.exp(2j * np.pi * rng.uniform(size=N))
            sys_ = InnerSystem.blaschke(lambda n, cs=cs: cs[n - 1])
        else:
            cs = rng.uniform(0.3, 0.6, N)
            sys_ = InnerSystem.polynomial(lambda n, cs=cs: cs[n - 1], lambda n: 0.4, 1.0)
        z, w = (0.8 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform()) for _ in range(2))
        d = track_pair(sys_, complex(z), complex(w), N)
        worst = max(worst, float(np.max(np.diff(d))) if d.size > 1 else -math.inf)
    out.append(_check("schwarz-pick-monotone", worst, 0.0, worst <= 1e-12, 1e-12, systems=100, horizon=N))
    return out


def suite_distortion(p):
    alpha, N = p["alpha"], int(p["horizon"])
    out = []
    for fam, system in (("linear", InnerSystem.linear(alpha)), ("blaschke", InnerSystem.blaschke(alpha))):
        seq = distortion_sequence(system, N).entries
        gap = float(np.max(np.abs(seq - alpha)))
        out.append(_check(f"distortion/{fam}", complex(seq[-1]), alpha, gap == 0.0, 0.0, horizon=N))
    hd = hyp_distortion(lambda z: alpha * z, lambda z: alpha, 0j)
    out.append(_check("hyperbolic-distortion-at-0", hd, abs(alpha), abs(hd - abs(alpha)) < 1e-15, 1e-15))
    return out


def suite_koenigs(p):
    alpha = p["alpha"]
    model = linearizer(lambda z: alpha * z + z * z, alpha, tol=p["tol"])
    c2 = complex(model.coeffs[2])
    target = 1 / (alpha - alpha ** 2)
    w = 0.5 * model.L
    z = linearizer_inverse(model, w)
    return [
        _check("koenigs/residual", model.residual, 0.0, model.residual < 1e-9, 1e-9, radius=model.radius),
        _check("koenigs/c2", c2, target, abs(c2 - target) < 1e-9, 1e-9),
        _check("koenigs/inverse", complex(model(z)), w, abs(complex(model(z)) - w) < 1e-12, 1e-12),
    ]


def suite_surgery(p):
    alpha, R = p["alpha"], p["R"]
    lam = complex(p["lambda_re"], p["lambda_im"])
    pr = InterpolationParams(alpha, R, lam)
    th = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    zi, zo = pr.r * np.exp(1j * th), R * np.exp(1j * th)
    b_in = float(np.max(np.abs(interpolate(pr, zi) - pr.alpha_tilde * zi)))
    b_out = float(np.max(np.abs(interpolate(pr, zo) - pr.alpha * zo)))
    mx = max_modulus(pr)
    z0 = 0.5 * (pr.r + R) * np.exp(0.7j)
    rep = dnu_dlambda(pr.with_lambda(0), z0)
    out = [
        _check("surgery/boundary", max(b_in, b_out), 0.0, max(b_in, b_out) < 1e-12, 1e-12),
        _check("surgery/mu-bound", mx, abs(lam), mx <= abs(lam) + 1e-9, 1e-9),
        _check("surgery/dbar", rep.dbar, 0.0, abs(rep.dbar) < 1e-8, 1e-8),
    ]
    for label, printed, flag in (("2theta", rep.printed_2theta, "matches_2theta"),
                                 ("1theta", rep.printed_1theta, "matches_1theta")):
        out.append(_check(f"surgery/dnu-vs-printed-{label}", rep.value, printed, rep.flags[flag],
                          1e-9 * abs(rep.value), point=z0, flags=rep.flags))
    return out


def suite_integrals(p):
    alpha, R = p["alpha"], p["R"]
    return [residue_check_first(alpha, R), residue_check_second(alpha, R),
            *paper_integral_reproduction(alpha, R), newchain_identity(alpha, R)]


def suite_beltrami(p):
    cfg = _solver(p)
    F = principal_solution(radial_stretch(2.0), cfg)
    rng = np.random.default_rng(7)
    probes = np.sqrt(rng.uniform(0.04, 0.81, 20)) * np.exp(2j * np.pi * rng.uniform(size=20))
    vals = F(probes)
    exact = probes * np.abs(probes)
    rel = float(np.max(np.abs(vals - exact) / np.abs(exact)))
    f1 = F(1.0)
    ident = principal_solution(constant_annulus(0.0, 0.25, 0.5), cfg)
    pts = np.array([0.3, 0.4j, 1 + 1j, -2.0])
    id_err = float(np.max(np.abs(ident(pts) - pts)))
    fr = frechet_check(constant_annulus(1.0, 0.25, 0.5), (0.2, 0.1, 0.05), cfg)
    return [
        _check("beltrami/radial-stretch", F(0.5), 0.25, rel < 5e-3, 5e-3, max_rel_error=rel, probes=20),
        _check("beltrami/radial-stretch-F1", f1, 1.0, abs(f1 - 1) < 5e-3, 5e-3),
        _check("beltrami/identity", id_err, 0.0, id_err < 1e-12, 1e-12),
        _check("beltrami/frechet-slope", fr.slope, 2.0, abs(fr.slope - 2) <= 0.3, 0.3,
               scales=fr.scales, errors=fr.errors, p_nu=fr.p_nu),
    ]


def suite_newchain(p):
    cfg = _solver(p)
    alpha, R = p["alpha"], p["R"]
    derived = chain_with_derived(alpha, R)
    rec = end_to_end_derivative(alpha, R, cfg=cfg)
    return [
        newchain_identity(alpha, R),
        _check("newchain/derived-chain", derived, rec.computed, abs(derived - rec.computed) < rec.tolerance,
               rec.tolerance, note="chain rule evaluated on the directly differentiated coefficient"),
        rec,
    ]


def suite_herman(p):
    a = complex(p["a_re"], p["a_im"])
    N = int(p["horizon"])
    m = build_herman(a)
    rng = np.random.default_rng(11)
    z = rng.uniform(-3, 3, 10_000) + 1j * rng.uniform(-3, 3, 10_000)
    res = semiconjugacy_residual(m, z)
    lat = max(abs(complex(m.f(lattice_point(k))) - lattice_point(k + 1)) for k in range(-100, 101))
    orb = orbit(m, 0, 3)
    out = [
        _check("herman/semiconjugacy", res.value, 0.0, res.value < 1e-10, 1e-10, skipped=res.skipped),
        _check("herman/lattice-orbit", lat, 0.0, lat < 1e-12, 1e-12, first_steps=list(orb.points)),
    ]
    if m.superattracting:
        return out
    seq = herman_distortion(m, N)
    label = classify(seq, Tail.SUM_DIVERGES).value
    out.append(_check("herman/distortion", complex(seq[0]), m.multiplier,
                      bool(np.all(seq.entries == m.multiplier)), 0.0, horizon=N))
    out.append(_check("herman/classify", label, "contracting", label == "contracting", 0.0))
    W = (-4.0, 4.0, -4.0, 4.0)
    A = render_escape(m, W, (128, 128))
    B = render_escape(m, (W[0], W[1], W[2] + 2 * math.pi, W[3] + 2 * math.pi), (128, 128))
    agree = float(np.mean(A == B))
    out.append(_check("herman/render-equivariance", agree, 1.0, agree >= 0.99, 0.01, resolution=128))
    return out


SUITE_FUNCS = {
    "beltrami": suite_beltrami, "classify": suite_classify, "distortion": suite_distortion,
    "herman": suite_herman, "integrals": suite_integrals, "koenigs": suite_koenigs,
    "newchain": suite_newchain, "surgery": suite_surgery,
}


# -- run ------------------------------------------------------------------------------

def _render(cfg: RunConfig) -> int:
    p = cfg.parameters
    m = build_herman(complex(p["a_re"], p["a_im"]))
    n = int(p["grid"])
    img = render_escape(m, (p["x0"], p["x1"], p["y0"], p["y1"]), (n, n), int(p["max_iter"]), p["escape_radius"])
    path = cfg.output_path or Path("herman.ppm")
    write_ppm(path, img)
    print(f"wrote {path} ({n}x{n})")
    return EXIT_OK


def build_report(cfg: RunConfig) -> tuple[dict, list[VerdictRecord]]:
    start = time.perf_counter()
    suites = SUITES if cfg.command == "report" else (cfg.command,)
    records, verdicts = [], []
    for suite in suites:
        params = cfg.parameters[suite] if cfg.command == "report" else cfg.parameters
        for rec in SUITE_FUNCS[suite](params):
            records.append(rec)
            verdicts.append({"suite": suite, **rec.to_dict()})
    wall = time.perf_counter() - start
    report = {
        "command": cfg.command,
        "parameters": cfg.parameters,
        "verdicts": verdicts,
        "wall_time": wall if cfg.timing else None,
    }
    return report, records


def write_csv(path, report: dict) -> None:
    cols = ["suite", "name", "verdict", "computed", "paper_value", "abs_gap", "tolerance"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for v in report["verdicts"]:
            w.writerow([json.dumps(v[c]) if isinstance(v[c], list) else v[c] for c in cols])


def run(cfg: RunConfig) -> int:
    if cfg.action == "render":
        return _render(cfg)
    report, records = build_report(cfg)
    text = json.dumps(report, indent=2) + "\n"
    if cfg.output_path:
        cfg.output_path.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if cfg.csv_path:
        write_csv(cfg.csv_path, report)
    bad = [r.name for r in records if not r.passed]
    for name in bad:
        print(f"not matched: {name}", file=sys.stderr)
    return EXIT_OK if not bad else EXIT_FAIL


# -- argument parsing ------------------------------------------------------------------

_FLAG_KEYS = ("alpha", "R", "lambda_re", "lambda_im", "a_re", "a_im", "grid", "tol", "horizon", "max_iter")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wanderlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("classify", "distortion", "koenigs", "surgery", "integrals", "beltrami", "newchain",
                 "herman", "report"):
        sp = sub.add_parser(name)
        if name == "herman":
            sp.add_argument("action", nargs="?", choices=["render"])
        sp.add_argument("--alpha", type=float)
        sp.add_argument("--R", type=float)
        sp.add_argument("--lambda-re", dest="lambda_re", type=float)
        sp.add_argument("--lambda-im", dest="lambda_im", type=float)
        sp.add_argument("--a-re", dest="a_re", type=float)
        sp.add_argument("--a-im", dest="a_im", type=float)
        sp.add_argument("--a", dest="a_re", type=float, help="real shortcut for --a-re")
        sp.add_argument("--grid", type=int)
        sp.add_argument("--tol", type=float)
        sp.add_argument("--horizon", type=int)
        sp.add_argument("--max-iter", dest="max_iter", type=int)
        sp.add_argument("--out")
        sp.add_argument("--csv")
        sp.add_argument("--config", help="JSON file of parameters")
        sp.add_argument("--timing", action="store_true", help="record wall time in the report")
    return parser


def main(argv=None) -> int:
    try:
        ns = make_parser().parse_args(argv)
        config = {}
        if ns.config:
            try:
                config = json.loads(Path(ns.config).read_text(encoding="utf-8"))
            except OSError as exc:
                print(f"error: cannot read config: {exc}", file=sys.stderr)
                return EXIT_FAIL
            except json.JSONDecodeError as exc:
                raise UsageError(f"config is not valid JSON: {exc}") from None
            if not isinstance(config, dict):
                raise UsageError("config must be a JSON object")
        flags = {k: getattr(ns, k) for k in _FLAG_KEYS}
        cfg = parse_config(ns.command, getattr(ns, "action", None), config, flags, ns.out, ns.csv, ns.timing)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(cfg)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (DomainError, WanderlabError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
