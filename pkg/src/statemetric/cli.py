"""Command-line front end.

Subcommands: validate, metric, grid, curvature, verify, models.  Exit codes:
0 success, 1 domain failure (non-Hermitian generators, open algebra,
degenerate section, failed verification), 2 usage or parse failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import geometry, liealg, linalg, manifest, models, oracle, verify
from .errors import (
    DegenerateSection,
    ManifestError,
    MissingParameter,
    StatemetricError,
    UnknownModel,
)
from .geometry import GridSpec, metric_at

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


def _emit_json(obj):
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _parse_at(pairs, parameter_names, defaults_zero=False):
    point = {}
    for item in pairs or ():
        if "=" not in item:
            raise ManifestError(f"--at expects name=value, got {item!r}")
        name, _, value = item.partition("=")
        if name not in parameter_names:
            raise MissingParameter(f"unknown parameter {name!r}; "
                                   f"circuit has {list(parameter_names)}")
        try:
            point[name] = float(value)
        except ValueError:
            raise ManifestError(f"--at {name}: {value!r} is not a number") from None
    missing = [p for p in parameter_names if p not in point]
    if missing:
        if not defaults_zero:
            raise MissingParameter(
                f"parameters {missing} unbound; pass --at or --defaults-zero")
        point.update({p: 0.0 for p in missing})
    return point


def cmd_validate(args) -> int:
    doc = manifest.loads(open(args.manifest, encoding="utf-8").read())
    # structural pass first so Hermiticity failures come out as domain errors
    for key in ("name", "dimension", "generators"):
        if key not in doc:
            raise ManifestError(f"missing required field {key!r}")
    try:
        model = manifest.parse_manifest(doc)
    except StatemetricError as exc:
        if isinstance(exc, ManifestError):
            raise
        print(f"FAIL: {exc}")
        return EXIT_DOMAIN
    rep = model.rep
    print(f"manifest: {model.name} (dimension {rep.dim}, {rep.size} generators)")
    ok = True
    for name, G in zip(rep.names, rep.generators):
        defect = linalg.hermiticity_defect(G)
        status = "ok" if defect <= 1e-10 else "FAIL"
        ok = ok and defect <= 1e-10
        print(f"  hermiticity {name}: {defect:.3e} [{status}]")
    print(f"  closure residual: {rep.closure_residual:.3e} "
          f"[{'ok' if rep.closure_residual <= 1e-9 else 'FAIL'}]")
    jac = rep.jacobi_residual()
    ok = ok and rep.closure_residual <= 1e-9 and jac <= 1e-10
    print(f"  jacobi residual: {jac:.3e} [{'ok' if jac <= 1e-10 else 'FAIL'}]")
    print(f"  structure-constant purity |Re c|: {rep.constant_purity():.3e}")
    print(f"  detected kind: {liealg.detect_kind(rep)}")
    return EXIT_OK if ok else EXIT_DOMAIN


def cmd_metric(args) -> int:
    model = manifest.load_model(args.manifest)
    point = _parse_at(args.at, model.parameter_names, args.defaults_zero)
    g = metric_at(model, point)
    g_fd = oracle.fd_metric(model.circuit, point, model.initial_state, model.gamma)
    rank, _ = geometry.rank_analysis(g)
    # constancy probe: compare against a few shifted points
    rng = np.random.default_rng(0)
    flat = all(
        np.max(np.abs(metric_at(model, {p: v + dv for (p, v), dv in
                                        zip(point.items(), rng.uniform(-0.5, 0.5, len(point)))}).g
                      - g.g)) <= 1e-9
        for _ in range(3))
    _emit_json({
        "name": model.name,
        "point": {p: point[p] for p in model.parameter_names},
        "gamma": model.gamma,
        "parameters": list(model.parameter_names),
        "g": [[float(v) for v in row] for row in g.g],
        "rank": rank,
        "flat": flat,
        "oracle_max_diff": float(np.max(np.abs(g.g - g_fd.g))),
    })
    return EXIT_OK


def _parse_sweeps(items):
    sweeps = {}
    for item in items:
        try:
            name, _, rng = item.partition("=")
            lo, hi, count = rng.split(":")
            sweeps[name] = (float(lo), float(hi), int(count))
        except ValueError:
            raise ManifestError(
                f"--sweep expects name=min:max:count, got {item!r}") from None
    return sweeps


def cmd_grid(args) -> int:
    model = manifest.load_model(args.manifest)
    sweeps = _parse_sweeps(args.sweep)
    fixed = _parse_at(args.at, model.parameter_names, defaults_zero=True)
    fixed = {p: v for p, v in fixed.items() if p not in sweeps}
    field = geometry.metric_field(model, GridSpec(sweeps, fixed))
    names = list(sweeps)
    dim = field.tensors[0].dim
    upper = [(i, j) for i in range(dim) for j in range(i, dim)]
    if args.format == "csv":
        lines = [",".join(names + [f"g_{i + 1}{j + 1}" for i, j in upper])]
        for point, tensor in zip(field.grid.points(), field.tensors):
            row = [repr(point[n]) for n in names]
            row += [repr(float(tensor.g[i, j])) for i, j in upper]
            lines.append(",".join(row))
        payload = "\n".join(lines) + "\n"
    else:
        payload = json.dumps({
            "name": model.name,
            "gamma": model.gamma,
            "parameters": list(model.parameter_names),
            "sweeps": {n: list(sweeps[n]) for n in names},
            "fixed": fixed,
            "nodes": [
                {"point": {p: pt[p] for p in model.parameter_names},
                 "g": [[float(v) for v in row] for row in tensor.g]}
                for pt, tensor in zip(field.grid.points(), field.tensors)
            ],
        }, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def cmd_curvature(args) -> int:
    model = manifest.load_model(args.manifest)
    point = _parse_at(args.at, model.parameter_names, args.defaults_zero)
    section = tuple(args.section.split(","))
    if len(section) != 2:
        raise ManifestError(f"--section expects two comma-separated parameters, got {args.section!r}")
    for p in section:
        if p not in model.parameter_names:
            raise MissingParameter(f"unknown section parameter {p!r}")
    k = geometry.gauss_curvature(model, point, section)
    # constancy probe along the section decides flat/sphere/generic
    probe = dict(point)
    probe[section[0]] += 0.3
    probe[section[1]] -= 0.2
    try:
        k2 = geometry.gauss_curvature(model, probe, section)
    except DegenerateSection:
        k2 = None
    if abs(k) <= 1e-5 and (k2 is None or abs(k2) <= 1e-5):
        cls = "flat"
    elif k > 0 and k2 is not None and abs(k2 - k) <= 1e-3 * abs(k):
        cls = "sphere"
    else:
        cls = "generic"
    _emit_json({
        "name": model.name,
        "point": {p: point[p] for p in model.parameter_names},
        "section": list(section),
        "gaussian_curvature": k,
        "radius": float(1 / np.sqrt(k)) if cls == "sphere" else None,
        "classification": cls,
    })
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verify.run_checks(only=args.only)
    if not results:
        print(f"no checks match {args.only!r}", file=sys.stderr)
        return EXIT_USAGE
    width = max(len(r.check_id) for r in results)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.check_id:<{width}}  {r.detail}")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_DOMAIN


def _complex_list(text: str):
    return tuple(complex(tok) for tok in text.split(","))


def cmd_models(args) -> int:
    if args.action == "list":
        for model_id in models.MODEL_IDS:
            print(model_id)
        return EXIT_OK
    if not args.model_id:
        raise UnknownModel("models emit requires a model id")
    model_id = args.model_id
    if model_id == "spin":
        params = {"s": args.s, "gamma": args.gamma}
        if args.coeffs:
            params["coefficients"] = _complex_list(args.coeffs)
        else:
            params["m"] = args.m
        model = models.build_model("spin", **params)
    elif model_id == "oscillator":
        model = models.build_model("oscillator", mass=args.mass, omega=args.omega,
                                   n=args.n, truncation=args.trunc, gamma=args.gamma)
    elif model_id in ("two_spin_dm_xx", "two_spin_sum", "two_spin_directional"):
        model = models.build_model(model_id, j1=args.J1, j2=args.J2, hz=args.hz,
                                   eta=args.eta, chi=args.chi,
                                   initial=args.initial, gamma=args.gamma)
    else:
        raise UnknownModel(f"unknown model id {model_id!r}; known: {models.MODEL_IDS}")
    sys.stdout.write(manifest.dumps(manifest.model_to_manifest(model)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="statemetric",
        description="Fubini-Study metrics and curvature of quantum state "
                    "manifolds generated by Lie-algebra circuits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a manifest's generators and algebra")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("metric", help="metric tensor at one parameter point")
    p.add_argument("manifest")
    p.add_argument("--at", action="append", metavar="NAME=VALUE")
    p.add_argument("--defaults-zero", action="store_true",
                   help="treat unbound parameters as 0")
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("grid", help="metric field over a parameter grid")
    p.add_argument("manifest")
    p.add_argument("--sweep", action="append", required=True,
                   metavar="NAME=MIN:MAX:COUNT")
    p.add_argument("--at", action="append", metavar="NAME=VALUE")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("curvature", help="Gaussian curvature of a 2-parameter section")
    p.add_argument("manifest")
    p.add_argument("--at", action="append", metavar="NAME=VALUE")
    p.add_argument("--defaults-zero", action="store_true")
    p.add_argument("--section", required=True, metavar="P,Q")
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("verify", help="run the built-in verification suite")
    p.add_argument("--only", metavar="SUBSTRING",
                   help="run only checks whose id contains SUBSTRING")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("models", help="list catalog models or emit a manifest")
    p.add_argument("action", choices=("list", "emit"))
    p.add_argument("model_id", nargs="?")
    p.add_argument("--s", type=float, default=0.5)
    p.add_argument("--m", type=float, default=None)
    p.add_argument("--coeffs", help="comma-separated complex amplitudes, ascending m")
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--trunc", type=int, default=64)
    p.add_argument("--J1", type=float, default=1.0)
    p.add_argument("--J2", type=float, default=1.0)
    p.add_argument("--hz", type=float, default=1.0)
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--chi", type=float, default=0.0)
    p.add_argument("--initial", default="up_down")
    p.add_argument("--gamma", type=float, default=1.0)
    p.set_defaults(func=cmd_models)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ManifestError, MissingParameter) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StatemetricError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
