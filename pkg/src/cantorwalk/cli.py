"""Scenario batch front end.

A scenario is a JSON document (rationals as "p/q") naming a space, the
generators and the budgets; each invocation runs one scenario and writes
its report, certificate and optional CSV series atomically.  Exit codes:
0 certificate produced or diagnostics completed, 1 bad input, 2 undecided
within budget.  Reports carry no timestamps (a sibling .meta.json does),
so equal runs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .rational import rat, rat_str
from .space import CompactSet, Region, SpaceError, ternary_cantor
from .maps import MapError, PrefixTable, from_prefix_table, image, invert
from .giet import GietError, blow_up
from .walk import (Trajectory, WalkError, estimate_entropy,
                   estimate_stationary_measure, forward_word,
                   global_contraction_report, invariance_residual, make_model,
                   measure_cells)
from .certify import (Budgets, CertifyError, assemble_free_pair,
                      find_morse_smale, solve_invariant_measure)
from . import serialize as ser

KINDS = ("simulate", "certify-free", "find-measure", "morse-smale",
         "giet-blowup", "verify")

DEFAULT_BUDGETS = {"n": 40, "runs": 100, "eps": "1/27", "max_len": 6,
                   "d_max": 6, "depth": None}

BUDGET_ENV = "CANTORWALK_BUDGET"


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    kind: str
    space: dict
    generators: tuple = ()
    include_inverses: bool = False
    probabilities: object = None  # list, name dict, or None for uniform
    seed: int = 0
    budgets: dict = field(default_factory=dict)
    giets: tuple = ()
    blowup: dict = field(default_factory=dict)
    output: str = "scenario"


def _env_budgets() -> dict:
    raw = os.environ.get(BUDGET_ENV, "")
    out = {}
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ScenarioError(f"bad {BUDGET_ENV} entry {part!r}")
        k, v = part.split("=", 1)
        if k not in DEFAULT_BUDGETS:
            raise ScenarioError(f"unknown budget key {k!r} in {BUDGET_ENV}")
        out[k] = v if k == "eps" else int(v)
    return out


def parse_scenario(text: str) -> Scenario:
    import json
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"not valid JSON: {e}")
    kind = obj.get("kind")
    if kind not in KINDS:
        raise ScenarioError(f"field 'kind': {kind!r} not one of {KINDS}")
    space = obj.get("space")
    if kind != "verify" and not isinstance(space, dict):
        raise ScenarioError("field 'space': missing or not an object")
    gens = tuple(obj.get("generators", ()))
    names = []
    for i, g in enumerate(gens):
        if "name" not in g:
            raise ScenarioError(f"generator {i}: missing 'name'")
        if "table" not in g and "branches" not in g:
            raise ScenarioError(f"generator {g['name']}: needs 'table' or 'branches'")
        names.append(g["name"])
    if len(set(names)) != len(names):
        raise ScenarioError("duplicate generator names")
    if obj.get("include_inverses"):
        names += [n + "^-1" for n in names]
    probs = obj.get("probabilities")
    if probs is not None:
        if isinstance(probs, dict):
            for n in probs:
                if n not in names:
                    raise ScenarioError(f"probability for unknown generator {n!r}")
            vals = [rat(v) for v in probs.values()]
        else:
            vals = [rat(v) for v in probs]
        total = sum(vals)
        if total != 1:
            raise ScenarioError(f"probabilities sum {rat_str(total)}, not 1")
    budgets = dict(obj.get("budgets", {}))
    for k in budgets:
        if k not in DEFAULT_BUDGETS and k != "generators":
            raise ScenarioError(f"unknown budget key {k!r}")
    for n in budgets.get("generators", ()):
        if n not in names:
            raise ScenarioError(f"budget section names unknown generator {n!r}")
    if space and "ifs" in space and isinstance(space["ifs"], str) \
            and space["ifs"] != "ternary":
        raise ScenarioError(f"unknown space shorthand {space['ifs']!r}")
    depth = space.get("depth") if space else None
    if depth is not None:
        for g in gens:
            for row in g.get("table", ()):
                if max(len(row[0]), len(row[1])) > depth:
                    raise ScenarioError(
                        f"generator {g['name']}: table needs depth "
                        f">= {max(len(row[0]), len(row[1]))}, space has {depth}")
    return Scenario(kind=kind, space=dict(space or {}), generators=gens,
                    include_inverses=bool(obj.get("include_inverses", False)),
                    probabilities=probs, seed=int(obj.get("seed", 0)),
                    budgets=budgets, giets=tuple(obj.get("giets", ())),
                    blowup=dict(obj.get("blowup", {})),
                    output=obj.get("output", "scenario"))


def serialize_scenario(s: Scenario) -> dict:
    obj = {"kind": s.kind, "space": s.space, "seed": s.seed,
           "output": s.output}
    if s.generators:
        obj["generators"] = list(s.generators)
    if s.include_inverses:
        obj["include_inverses"] = True
    if s.probabilities is not None:
        obj["probabilities"] = s.probabilities
    if s.budgets:
        obj["budgets"] = s.budgets
    if s.giets:
        obj["giets"] = list(s.giets)
    if s.blowup:
        obj["blowup"] = s.blowup
    return obj


# ---------------------------------------------------------------------------
# scenario execution


def _build_space(spec: dict) -> CompactSet:
    if spec.get("ifs") == "ternary":
        return ternary_cantor(int(spec.get("depth", 3)))
    return ser.space_from_obj(spec)


def _build_generators(s: Scenario, space: CompactSet) -> dict:
    gens = {}
    for spec in s.generators:
        name = spec["name"]
        if "table" in spec:
            table = PrefixTable(tuple(
                (row[0], row[1], int(row[2])) for row in spec["table"]))
            gens[name] = from_prefix_table(table, space, label=(name,))
        else:
            gens[name] = ser.map_from_obj(
                space, {"label": [name], "branches": spec["branches"]})
    if s.include_inverses:
        for name in list(gens):
            gens[name + "^-1"] = invert(gens[name])
    return gens


def _probs(s: Scenario, names) -> list:
    if s.probabilities is None:
        return None
    if isinstance(s.probabilities, dict):
        return [rat(s.probabilities[n]) for n in names]
    return [rat(p) for p in s.probabilities]


def _budget(s: Scenario, overrides: dict) -> dict:
    out = dict(DEFAULT_BUDGETS)
    out.update(_env_budgets())
    out.update({k: v for k, v in s.budgets.items() if k in DEFAULT_BUDGETS})
    out.update({k: v for k, v in overrides.items() if v is not None})
    return out


def _write(out_dir: str, stem: str, suffix: str, obj) -> str:
    path = os.path.join(out_dir, f"{stem}_{suffix}.json")
    ser.write_json_atomic(path, obj)
    return path


def run_scenario(s: Scenario, out_dir: str = ".", emit_series: bool = False,
                 seed: int = None, runs: int = None, depth: int = None):
    """(exit_code, verdict line); writes report/certificate/meta files."""
    bud = _budget(s, {"runs": runs, "depth": depth})
    seed = s.seed if seed is None else seed
    stem = s.output
    eps = rat(bud["eps"])

    if s.kind == "giet-blowup":
        giets = [ser.giet_from_obj(g) for g in s.giets]
        if not giets:
            raise ScenarioError("giet-blowup needs at least one giet")
        L = int(s.blowup.get("L", 3))
        rho = rat(s.blowup.get("rho", "1/3"))
        result = blow_up(giets, L, rho)
        _write(out_dir, stem, "report",
               {"kind": s.kind, "seed": seed,
                "blown_points": len(result.blown_points),
                "exact": result.exact, "defects": list(result.defects)})
        _write(out_dir, stem, "blowup", ser.blowup_to_scenario(result))
        ser.write_meta(os.path.join(out_dir, f"{stem}_meta.json"),
                       {"scenario_kind": s.kind})
        tag = "exact" if result.exact else "inexact"
        return 0, f"BLOWUP ({len(result.blown_points)} points, {tag})"

    space = _build_space(s.space)
    gens = _build_generators(s, space)
    names = list(gens)
    model = make_model(space, gens, _probs(s, names), seed)
    depth_eff = bud["depth"]
    if depth_eff is None:
        depth_eff = space.depth if space.depth is not None else 0
    meta_path = os.path.join(out_dir, f"{stem}_meta.json")

    if s.kind == "simulate":
        mu = estimate_stationary_measure(model, bud["n"] * 25, depth_eff)
        avg, per_gen, skipped = invariance_residual(mu, model)
        ent = estimate_entropy(mu, model)
        t = Trajectory(model, stream=0)
        rep = global_contraction_report(t, depth_eff, bud["n"], eps)
        report = {"kind": s.kind, "seed": seed, "depth": depth_eff,
                  "stationary_masses": [float(m) for m in mu.masses],
                  "residual": {"averaged": float(avg),
                               "per_generator": float(per_gen),
                               "skipped": skipped},
                  "entropy": ent.h_estimate,
                  "contraction": {"F": [rat_str(f) for f in rep.F],
                                  "p": rep.p, "lambda": rep.lambda_fit}}
        _write(out_dir, stem, "report", report)
        if emit_series:
            _emit_diameter_series(out_dir, stem, t, depth_eff, bud["n"])
        ser.write_meta(meta_path, {"scenario_kind": s.kind})
        return 0, (f"SIMULATED (entropy {ent.h_estimate:.4f}, "
                   f"p {'inf' if rep.p is None else rep.p})")

    if s.kind == "certify-free":
        budgets = Budgets(max_len=bud["max_len"], runs=bud["runs"],
                          d_max=bud["d_max"], n_max=bud["n"])
        cert = assemble_free_pair(model, eps, budgets)
        if cert:
            _write(out_dir, stem, "certificate", ser.certificate_to_obj(cert))
            _write(out_dir, stem, "report",
                   {"kind": s.kind, "seed": seed, "verified": True,
                    "a1": list(cert.a1.label), "a2": list(cert.a2.label)})
            ser.write_meta(meta_path, {"scenario_kind": s.kind})
            return 0, "FREE (ping-pong verified)"
        _write(out_dir, stem, "report",
               {"kind": s.kind, "seed": seed, "verified": False,
                "stage": cert.stage, "flag": cert.flag})
        ser.write_meta(meta_path, {"scenario_kind": s.kind})
        return 2, "undecided within budget"

    if s.kind == "find-measure":
        res = solve_invariant_measure(gens, depth_eff, bud["d_max"])
        if res:
            _write(out_dir, stem, "certificate",
                   ser.certificate_to_obj(res, gens))
            _write(out_dir, stem, "report",
                   {"kind": s.kind, "seed": seed, "depth": res.depth,
                    "masses": [rat_str(m) for m in res.measure.masses],
                    "consistency_depth": res.consistency_depth})
            ser.write_meta(meta_path, {"scenario_kind": s.kind})
            return 0, (f"INVARIANT MEASURE (depth {res.depth}, "
                       f"consistent to {res.consistency_depth})")
        _write(out_dir, stem, "report",
               {"kind": s.kind, "seed": seed, "depth": res.depth,
                "infeasible": True, "gap": rat_str(res.gap)})
        ser.write_meta(meta_path, {"scenario_kind": s.kind})
        return 0, f"INFEASIBLE (no invariant cell measure at depth {res.depth})"

    if s.kind == "morse-smale":
        cert = find_morse_smale(model, eps, n_max=bud["n"], runs=bud["runs"])
        if cert:
            _write(out_dir, stem, "certificate", ser.certificate_to_obj(cert))
            _write(out_dir, stem, "report",
                   {"kind": s.kind, "seed": seed, "word": list(cert.g.label),
                    "periodic": [[rat_str(x), p, rat_str(m)]
                                 for x, p, m in cert.periodic]})
            ser.write_meta(meta_path, {"scenario_kind": s.kind})
            return 0, f"MORSE-SMALE ({len(cert.periodic)} periodic points)"
        _write(out_dir, stem, "report",
               {"kind": s.kind, "seed": seed, "found": False})
        ser.write_meta(meta_path, {"scenario_kind": s.kind})
        return 2, "undecided within budget"

    raise ScenarioError(f"cannot run scenario of kind {s.kind!r}")


def _emit_diameter_series(out_dir, stem, t, depth, n):
    """Per-step image diameter of every depth-d cell, as plot-ready CSV."""
    from .space import Piece
    K = t.model.space
    cells = measure_cells(K, depth)
    regions = [Region.from_pieces(K, (Piece(l, r, True, True),))
               for l, r in cells]
    path = os.path.join(out_dir, f"{stem}_series.csv")
    tmp = path + ".tmp"
    with open(tmp, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["step"] + [f"diam_cell_{i}" for i in range(len(cells))])
        for k in range(n + 1):
            word = forward_word(t, k)
            w.writerow([k] + [float(image(word, reg).diameter())
                              for reg in regions])
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# entry point


def _load_scenario_text(name: str) -> str:
    if os.path.exists(name):
        with open(name) as fh:
            return fh.read()
    base = name if name.endswith(".json") else name + ".json"
    pkg = resources.files("cantorwalk") / "scenarios" / base
    if pkg.is_file():
        return pkg.read_text()
    raise ScenarioError(f"scenario {name!r} not found on disk or bundled")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="cantorwalk",
        description="Random-walk diagnostics and Tits-alternative "
                    "certificates on compact subsets of the line.")
    sub = ap.add_subparsers(dest="command", required=True)
    for kind in ("simulate", "certify-free", "find-measure", "morse-smale",
                 "giet-blowup"):
        p = sub.add_parser(kind)
        p.add_argument("scenario", help="scenario file or bundled name")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--runs", type=int, default=None)
        p.add_argument("--depth", type=int, default=None)
        p.add_argument("--out", default=".", metavar="DIR")
        p.add_argument("--emit-series", action="store_true")
    pv = sub.add_parser("verify")
    pv.add_argument("certificate", help="certificate file to re-check")
    args = ap.parse_args(argv)

    try:
        if args.command == "verify":
            import json
            with open(args.certificate) as fh:
                obj = json.load(fh)
            verdict = ser.verify_certificate(obj)
            if verdict:
                print("VERIFIED")
                return 0
            print(f"INVALID ({verdict.reason})")
            return 1
        scn = parse_scenario(_load_scenario_text(args.scenario))
        if scn.kind != args.command:
            raise ScenarioError(
                f"scenario kind {scn.kind!r} does not match "
                f"command {args.command!r}")
        code, line = run_scenario(scn, out_dir=args.out,
                                  emit_series=args.emit_series,
                                  seed=args.seed, runs=args.runs,
                                  depth=args.depth)
        print(line)
        return code
    except (ScenarioError, SpaceError, MapError, GietError, WalkError,
            CertifyError, ser.SerializeError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
