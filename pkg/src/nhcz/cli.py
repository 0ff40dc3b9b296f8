"""Command-line front end.

Subcommands: gen, normalize, eval, opnorm, decompose, verify. Exit codes:
0 success, 1 a verification failure (hard-bound violation or an unusable
fit), 2 malformed input. The environment variable NHCZ_SEED, when set,
overrides --seed everywhere. Identical configurations produce
byte-identical outputs, including under --jobs > 1.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import verify as V
from .decomposition import cz_disks, dumps_decomposition
from .kernel import get_kernel
from .measure import (GeneratorSpec, ahlfors_constant, generate, load_measure,
                      normalize_ahlfors, save_measure, total_variation)
from .ball_index import build_index
from .maximal import maximal_field
from .transform import opnorm_l2, transform_field


class InputError(Exception):
    pass


def _load_points(path) -> np.ndarray:
    with open(path, "r", encoding="ascii") as fh:
        doc = json.load(fh)
    if isinstance(doc, dict):
        doc = doc.get("points", [])
    pts = np.asarray([complex(p[0], p[1]) for p in doc], dtype=np.complex128)
    return pts


def _load_phi(path, n) -> np.ndarray:
    with open(path, "r", encoding="ascii") as fh:
        doc = json.load(fh)
    vals = [complex(v[0], v[1]) if isinstance(v, list) else complex(v)
            for v in doc]
    if len(vals) != n:
        raise InputError(f"phi length {len(vals)} != atom count {n}")
    return np.asarray(vals, dtype=np.complex128)


def _seed(args) -> int:
    env = os.environ.get("NHCZ_SEED")
    return int(env) if env is not None else args.seed


def _instance(args, mu) -> dict:
    return {
        "measure": getattr(args, "measure", None),
        "n_atoms": len(mu),
        "total_mass": mu.total_mass,
        "kernel": getattr(args, "kernel", None),
        "seed": _seed(args),
    }


# ---------------------------------------------------------------------------
# subcommands


def _cmd_gen(args) -> int:
    densities = tuple(float(x) for x in args.densities.split(",")) \
        if args.densities else tuple()
    spec = GeneratorSpec(shape=args.shape, count=args.n, seed=args.seed,
                         ratio=args.ratio, depth=args.depth,
                         densities=densities)
    mu = generate(spec)
    if args.normalize:
        mu = normalize_ahlfors(mu)
    save_measure(mu, args.out)
    print(f"gen: wrote {len(mu)} atoms to {args.out}")
    return 0


def _cmd_normalize(args) -> int:
    mu = load_measure(args.measure)
    c0, floor = ahlfors_constant(mu)
    save_measure(normalize_ahlfors(mu), args.out)
    print(f"normalize: C0={c0!r} resolution_floor={floor!r} -> {args.out}")
    return 0


def _cmd_eval(args) -> int:
    mu = load_measure(args.measure)
    k = get_kernel(args.kernel)
    pts = _load_points(args.points)
    phi = _load_phi(args.phi, len(mu)) if args.phi else None
    complex_ops = {"T", "Tr", "Tstar"}
    if args.op in complex_ops or args.op == "Tsharp":
        idx = build_index(mu, pts)
        vals = transform_field(k, mu, idx, op=args.op, r=args.r, phi=phi,
                               jobs=args.jobs)
    elif args.op in ("M", "Mprime", "Mtilde"):
        idx = build_index(mu, pts)
        use_phi = np.ones(len(mu)) if phi is None else phi
        vals = maximal_field(mu, use_phi, idx, kind=args.op, beta=args.beta,
                             jobs=args.jobs)
    else:
        raise InputError(f"unknown operation {args.op!r}")
    out = sys.stdout if args.out is None else open(args.out, "w", newline="")
    try:
        wr = csv.writer(out, lineterminator="\n")
        if args.op in complex_ops:
            wr.writerow(["point_re", "point_im", "value_re", "value_im"])
            for p, v in zip(pts, vals):
                wr.writerow([repr(float(p.real)), repr(float(p.imag)),
                             repr(float(v.real)), repr(float(v.imag))])
        else:
            wr.writerow(["point_re", "point_im", "value"])
            for p, v in zip(pts, vals):
                wr.writerow([repr(float(p.real)), repr(float(p.imag)),
                             repr(float(v))])
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_opnorm(args) -> int:
    mu = load_measure(args.measure)
    k = get_kernel(args.kernel)
    est = opnorm_l2(k, mu, tol=args.tol, max_iter=args.max_iter,
                    seed=_seed(args))
    doc = {"value": est.value, "iterations": est.iterations,
           "residual": est.residual, "converged": est.converged}
    print(f"opnorm: value={est.value!r} iterations={est.iterations} "
          f"residual={est.residual:.3g} converged={est.converged}")
    if args.report:
        with open(args.report, "w", encoding="ascii") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    return 0


def _cmd_decompose(args) -> int:
    mu = load_measure(args.measure)
    nu = load_measure(args.nu)
    dec = cz_disks(nu, mu, args.t)
    text = dumps_decomposition(dec)
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(f"decompose: {dec.n_disks} disks exhausted={dec.exhausted}",
          file=sys.stderr)
    return 0


def _cmd_verify(args) -> int:
    mu = load_measure(args.measure)
    k = get_kernel(args.kernel)
    seed = _seed(args)
    inst = _instance(args, mu)
    jobs = args.jobs
    check = args.check
    if check == "obvious":
        rep = V.check_obvious(mu, k, trials=args.trials, seed=seed, jobs=jobs,
                              instance=inst)
    elif check == "trunc81":
        rep = V.check_truncation81(mu, k, trials=args.trials, seed=seed,
                                   jobs=jobs, instance=inst)
    elif check == "key-lemma":
        rep = V.check_key_lemma(mu, k, n_sets=args.sets,
                                n_points=args.n_points, seed=seed, jobs=jobs,
                                instance=inst)
    elif check == "theorem2":
        rep, _ = V.check_theorem2(mu, k, beta=args.beta,
                                  n_points=args.n_points, seed=seed,
                                  jobs=jobs, instance=inst)
    elif check in ("weak-T", "weak-Tsharp"):
        nu = load_measure(args.nu) if args.nu else V.default_nu(
            mu, args.nu_atoms, seed)
        fn = V.check_weak_type_T if check == "weak-T" \
            else V.check_weak_type_Tsharp
        rep = fn(nu, mu, k, jobs=jobs, instance=inst)
    elif check == "star":
        nu = load_measure(args.nu) if args.nu else V.default_nu(
            mu, args.nu_atoms, seed)
        t = args.t if args.t is not None else \
            2.0 * total_variation(nu) / mu.total_mass
        dec = cz_disks(nu, mu, t)
        pts = _load_points(args.points) if args.points else \
            V.default_probes(mu, args.n_points, seed, V.CHECK_CODES["star"])
        rep = V.check_star(dec, k, mu, t, pts, jobs=jobs, instance=inst)
    elif check == "cotlar":
        rep, _ = V.check_cotlar(mu, k, p=args.p, n_points=args.n_points,
                                seed=seed, restricted=args.restricted,
                                jobs=jobs, instance=inst)
    elif check == "sublemma":
        rep = V.check_sublemma(mu, trials=args.trials, seed=seed, jobs=jobs,
                               instance=inst)
    elif check == "maximal":
        rep = V.check_maximal_bounds(mu, trials=args.trials, seed=seed,
                                     jobs=jobs, instance=inst)
    else:
        raise InputError(f"unknown check {check!r}")
    print(V.summary_line(rep))
    if args.report:
        V.write_report(rep, args.report)
    return 0 if rep.passed else 1


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nhcz",
        description="singular integral operators and inequality checks "
                    "over discrete planar measures")
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a test measure")
    g.add_argument("--shape", required=True,
                   choices=["segment", "circle", "cantor", "comb"])
    g.add_argument("--n", type=int, default=100)
    g.add_argument("--ratio", type=float, default=0.25)
    g.add_argument("--depth", type=int, default=3)
    g.add_argument("--densities", default="")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--normalize", action="store_true")
    g.add_argument("--out", required=True)
    g.set_defaults(fn=_cmd_gen)

    n = sub.add_parser("normalize", help="scale weights to unit growth constant")
    n.add_argument("--measure", required=True)
    n.add_argument("--out", required=True)
    n.set_defaults(fn=_cmd_normalize)

    e = sub.add_parser("eval", help="evaluate an operator at points")
    e.add_argument("--op", required=True,
                   choices=["T", "Tr", "Tsharp", "Tstar", "M", "Mprime",
                            "Mtilde"])
    e.add_argument("--kernel", default="cauchy",
                   choices=["cauchy", "cauchy_re", "cauchy_im"])
    e.add_argument("--measure", required=True)
    e.add_argument("--points", required=True)
    e.add_argument("--phi")
    e.add_argument("--r", type=float)
    e.add_argument("--beta", type=float, default=1.0)
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--out")
    e.set_defaults(fn=_cmd_eval)

    o = sub.add_parser("opnorm", help="estimate the L2 operator norm")
    o.add_argument("--measure", required=True)
    o.add_argument("--kernel", default="cauchy",
                   choices=["cauchy", "cauchy_re", "cauchy_im"])
    o.add_argument("--tol", type=float, default=1e-8)
    o.add_argument("--max-iter", type=int, default=5000)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--report")
    o.set_defaults(fn=_cmd_opnorm)

    d = sub.add_parser("decompose", help="threshold disk decomposition")
    d.add_argument("--measure", required=True)
    d.add_argument("--nu", required=True)
    d.add_argument("--t", type=float, required=True)
    d.add_argument("--out")
    d.set_defaults(fn=_cmd_decompose)

    v = sub.add_parser("verify", help="run an inequality check")
    v.add_argument("--check", required=True,
                   choices=["obvious", "trunc81", "key-lemma", "theorem2",
                            "weak-T", "weak-Tsharp", "star", "cotlar",
                            "sublemma", "maximal"])
    v.add_argument("--measure", required=True)
    v.add_argument("--kernel", default="cauchy",
                   choices=["cauchy", "cauchy_re", "cauchy_im"])
    v.add_argument("--trials", type=int, default=500)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--sets", type=int, default=20)
    v.add_argument("--n-points", type=int, default=200)
    v.add_argument("--beta", type=float, default=2.0)
    v.add_argument("--p", type=float, default=0.5)
    v.add_argument("--t", type=float)
    v.add_argument("--nu")
    v.add_argument("--nu-atoms", type=int, default=8)
    v.add_argument("--points")
    v.add_argument("--restricted", action="store_true")
    v.add_argument("--report")
    v.set_defaults(fn=_cmd_verify)

    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (InputError, FileNotFoundError, json.JSONDecodeError,
            ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
