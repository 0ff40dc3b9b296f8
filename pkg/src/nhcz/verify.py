"""Executable inequality checks with explicit or fitted constants.

Two tiers:

  * hard checks (dipole tail bound, triadic truncation bound, sublemma,
    L2 bound of the maximal operator, mass-field integral): the proofs
    assemble explicit constants, so violations are failures;
  * fitted checks (weak-type constants, pointwise domination of the
    maximal truncation, the comparison-field inequality): no numeric
    constant exists, so the minimal constants are fitted and reported;
    what is judged is their stability across instance size, which the
    acceptance suite performs.

Every check draws its randomness from generators derived from
(master seed, check code, trial index), so trials are order-independent
and reports are byte-reproducible for a fixed configuration, including
under parallel evaluation.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .ball_index import BallIndex, build_index
from .decomposition import (CZDecomposition, mass_function, sigma_sharp,
                            sigma_values)
from .kernel import KernelSpec, kernel_values
from .maximal import doubling_stop, hl_maximal, radial_maximal, \
    restricted_maximal
from .measure import (DiscreteMeasure, ahlfors_constant, diameter,
                      distribution_function, total_variation, weak_l1_norm)
from .transform import (apply_Tr, apply_Tsharp, opnorm_l2, transform_field)
from . import core

CHECK_CODES = {
    "obvious": 1,
    "trunc81": 2,
    "key-lemma": 3,
    "theorem2": 4,
    "weak-T": 5,
    "weak-Tsharp": 6,
    "star": 7,
    "cotlar": 8,
    "sublemma": 9,
    "maximal": 10,
}


@dataclass
class CheckReport:
    check: str
    instance: dict
    trials: int
    statistic: float
    witness: dict
    bound_formula: str | None
    bound_value: float | None
    passed: bool
    extras: dict = field(default_factory=dict)
    runtime_s: float = 0.0  # not serialized: reports must be byte-stable


@dataclass(frozen=True)
class ConstantFit:
    A: float
    B: float
    residual: float
    sentinel_count: int = 0


def _py(x):
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, np.ndarray):
        return [_py(v) for v in x]
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {k: _py(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_py(v) for v in x]
    return x


def report_json(rep: CheckReport) -> str:
    doc = {
        "check": rep.check,
        "instance": _py(rep.instance),
        "trials": int(rep.trials),
        "statistic": float(rep.statistic),
        "witness": _py(rep.witness),
        "bound_formula": rep.bound_formula,
        "bound_value": None if rep.bound_value is None else float(rep.bound_value),
        "passed": bool(rep.passed),
        "extras": _py(rep.extras),
    }
    return json.dumps(doc, indent=1) + "\n"


def write_report(rep: CheckReport, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(report_json(rep))


def summary_line(rep: CheckReport) -> str:
    verdict = "PASS" if rep.passed else "FAIL"
    bound = "-" if rep.bound_value is None else f"{rep.bound_value:.6g}"
    return (f"{rep.check}: {verdict} statistic={rep.statistic:.6g} "
            f"bound={bound} trials={rep.trials} runtime={rep.runtime_s:.2f}s")


# ---------------------------------------------------------------------------
# randomness helpers


def _rng(seed, code, *more):
    return np.random.default_rng([int(seed), int(code), *map(int, more)])


def _box(mu: DiscreteMeasure, pad: float = 0.1):
    r0, r1, i0, i1 = (float(mu.z.real.min()), float(mu.z.real.max()),
                      float(mu.z.imag.min()), float(mu.z.imag.max()))
    d = max(diameter(mu), 1.0)
    return r0 - pad * d, r1 + pad * d, i0 - pad * d, i1 + pad * d


def _box_point(rng, box) -> complex:
    return complex(rng.uniform(box[0], box[1]), rng.uniform(box[2], box[3]))


def _disk_point(rng, x: complex, rho: float) -> complex:
    rad = rho * math.sqrt(rng.uniform())
    ang = rng.uniform(0.0, 2.0 * math.pi)
    return x + rad * complex(math.cos(ang), math.sin(ang))


def _log_radius(rng, scale, lo=1e-3, hi=0.6) -> float:
    return float(scale * 10.0 ** rng.uniform(math.log10(lo), math.log10(hi)))


def _ball_union_mask(rng, mu: DiscreteMeasure, box, scale) -> np.ndarray:
    """Random atom set: union of random closed balls, atoms inside."""
    mask = np.zeros(len(mu), dtype=bool)
    for _ in range(int(rng.integers(1, 4))):
        c = _box_point(rng, box)
        rad = _log_radius(rng, scale, lo=1e-2, hi=0.8)
        mask |= np.abs(mu.z - c) <= rad
    return mask


def default_probes(mu: DiscreteMeasure, n: int, seed: int, code: int = 0):
    """Deterministic probe points: half uniform in the padded bounding box,
    half near random atoms (where truncation suprema are largest)."""
    rng = _rng(seed, code, 0xB0)
    box = _box(mu)
    diam = max(diameter(mu), 1.0)
    pts = [_box_point(rng, box) for _ in range(n // 2)]
    while len(pts) < n:
        a = complex(mu.z[rng.integers(len(mu))])
        off = _log_radius(rng, diam, lo=1e-4, hi=3e-2)
        ang = rng.uniform(0.0, 2.0 * math.pi)
        pts.append(a + off * complex(math.cos(ang), math.sin(ang)))
    return np.asarray(pts, dtype=np.complex128)


def default_nu(mu: DiscreteMeasure, n_atoms: int, seed: int) -> DiscreteMeasure:
    """Random positive data measure of total mass 1, disjoint from mu."""
    rng = _rng(seed, 0xDA)
    box = _box(mu, pad=0.02)
    for _ in range(64):
        z = np.asarray([_box_point(rng, box) for _ in range(n_atoms)],
                       dtype=np.complex128)
        if len(np.unique(z)) == n_atoms and not np.isin(z, mu.z).any():
            w = rng.uniform(0.5, 1.5, n_atoms)
            return DiscreteMeasure(z, w / w.sum(), nonnegative=True)
    raise RuntimeError("could not draw data atoms disjoint from the measure")


def _pmap(fn, items, jobs):
    if jobs <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _atom_index(mu: DiscreteMeasure, index=None) -> BallIndex:
    return index if index is not None else build_index(mu, mu.z)


# ---------------------------------------------------------------------------
# minimax constant fit


DEFAULT_FIT_GRID = np.concatenate([[0.0], np.geomspace(1e-3, 1e3, 121)])


def fit_constants(lhs, term1, term2, grid=None,
                  sentinel_count: int = 0) -> ConstantFit:
    """Minimal (A, B) with lhs <= A*term1 + B*term2 pointwise.

    For each B on the grid, A(B) is the smallest admissible A (clamped at
    0); points with term1 == 0 make B infeasible unless lhs <= B*term2
    there. Returns the pair minimizing A + B, ties broken toward the
    smallest B by scanning the grid in ascending order.
    """
    lhs = np.asarray(lhs, dtype=np.float64)
    t1 = np.asarray(term1, dtype=np.float64)
    t2 = np.asarray(term2, dtype=np.float64)
    if not lhs.shape == t1.shape == t2.shape:
        raise ValueError("fit arrays must be aligned")
    if grid is None:
        grid = DEFAULT_FIT_GRID
    grid = np.sort(np.asarray(grid, dtype=np.float64))
    pos = t1 > 0.0
    zero = ~pos
    best = None
    for b in grid:
        slack = lhs - b * t2
        if np.any(slack[zero] > 0.0):
            continue
        a = float(max(0.0, np.max(slack[pos] / t1[pos]))) if pos.any() else 0.0
        if best is None or a + b < best[0] + best[1]:
            best = (a, float(b))
    if best is None:
        raise ValueError("constant fit infeasible on the whole grid")
    a, b = best
    residual = float(max(0.0, np.max(lhs - a * t1 - b * t2, initial=0.0)))
    return ConstantFit(a, b, residual, sentinel_count)


# ---------------------------------------------------------------------------
# hard checks


def check_obvious(mu: DiscreteMeasure, k: KernelSpec, trials: int = 1000,
                  seed: int = 0, jobs: int = 1, instance=None) -> CheckReport:
    """Tail integral of T applied to a mean-zero dipole.

    For a dipole supported in a disk of radius rho around x, the integral
    of |T dipole| over the atoms at distance >= 2 rho from x is at most
    holder_const * C0 * (1 + 1/eps) times the dipole's total variation.
    The generalized form weighted by a random field phi is checked against
    the same constant times the radial maximal function at x (valid at the
    normalized scale C0 ~ 1).
    """
    t0 = time.perf_counter()
    code = CHECK_CODES["obvious"]
    c0, _ = ahlfors_constant(mu)
    bound = k.holder_const * c0 * (1.0 + 1.0 / k.eps)
    box = _box(mu)
    diam = max(diameter(mu), 1.0)

    def one(i):
        rng = _rng(seed, code, i)
        x = _box_point(rng, box)
        rho = _log_radius(rng, diam)
        a = _disk_point(rng, x, rho)
        b = _disk_point(rng, x, rho)
        wgt = 10.0 ** rng.uniform(-1.0, 1.0)
        phi = rng.standard_normal(len(mu))
        d = np.abs(mu.z - x)
        mask = d >= 2.0 * rho
        if not mask.any():
            return None
        ys = mu.z[mask]
        tvals = np.abs(wgt * (kernel_values(k, a, ys, transposed=True)
                              - kernel_values(k, b, ys, transposed=True)))
        eta_norm = 2.0 * wgt
        ratio = float(np.sum(tvals * mu.w[mask])) / eta_norm
        gen_ratio = None
        mp = radial_maximal(mu, phi, x)
        if math.isfinite(mp) and mp > 0.0:
            lhs2 = float(np.sum(tvals * np.abs(phi[mask]) * mu.w[mask])) / eta_norm
            gen_ratio = lhs2 / mp
        return {"i": i, "x": x, "rho": rho, "a": a, "b": b, "w": wgt,
                "ratio": ratio, "gen_ratio": gen_ratio}

    rows = _pmap(one, range(trials), jobs)
    skipped = sum(1 for r in rows if r is None)
    rows = [r for r in rows if r is not None]
    if not rows:
        raise ValueError("every trial left no atoms outside the doubled disk")
    stat_row = max(rows, key=lambda r: r["ratio"])
    gen = [r["gen_ratio"] for r in rows if r["gen_ratio"] is not None]
    gen_max = max(gen) if gen else 0.0
    passed = stat_row["ratio"] <= bound and gen_max <= bound
    rep = CheckReport(
        check="obvious",
        instance=instance or {},
        trials=trials,
        statistic=stat_row["ratio"],
        witness={"trial": stat_row["i"], "x": stat_row["x"],
                 "rho": stat_row["rho"], "a": stat_row["a"],
                 "b": stat_row["b"], "weight": stat_row["w"]},
        bound_formula="holder_const*C0*(1+1/eps)",
        bound_value=bound,
        passed=bool(passed),
        extras={"skipped_trials": skipped, "C0": c0,
                "generalized_max_ratio": gen_max,
                "generalized_pass": bool(gen_max <= bound)},
    )
    rep.runtime_s = time.perf_counter() - t0
    return rep


def check_truncation81(mu: DiscreteMeasure, k: KernelSpec, trials: int = 500,
                       seed: int = 0, jobs: int = 1,
                       instance=None) -> CheckReport:
    """Truncation gap across the one-step doubling stop.

    |T_r - T_3R| of a set indicator is at most 81 * size_const * C0, with
    R the one-step stopping radius. The stop's minimality is re-verified
    by an independent mass scan in every trial.
    """
    t0 = time.perf_counter()
    code = CHECK_CODES["trunc81"]
    c0, _ = ahlfors_constant(mu)
    bound = 81.0 * k.size_const * c0
    box = _box(mu)
    diam = max(diameter(mu), 1.0)

    def one(i):
        rng = _rng(seed, code, i)
        x = _box_point(rng, box)
        r = _log_radius(rng, diam, lo=1e-4, hi=1.0)
        fmask = _ball_union_mask(rng, mu, box, diam)
        stop = doubling_stop(mu, x, r)
        # independent mass scan (distance-ordered accumulation, so the
        # recomputed masses match the stop's sequence bit for bit)
        d = np.abs(mu.z - x)
        order = np.argsort(d, kind="stable")
        ds = d[order]
        cw = np.cumsum(mu.w[order])
        rad = r
        masses = []
        for _ in range(stop.k + 1):
            kk = int(np.searchsorted(ds, rad, side="right"))
            masses.append(float(cw[kk - 1]) if kk > 0 else 0.0)
            rad *= 3.0
        ok = all(masses[j] == stop.mu_sequence[j] for j in range(stop.k + 1))
        ok = ok and all(masses[j] > 9.0 * masses[j - 1]
                        for j in range(1, stop.k))
        ok = ok and masses[stop.k] <= 9.0 * masses[stop.k - 1]
        phi = fmask.astype(np.float64)
        val = abs(apply_Tr(k, mu, x, r, phi)
                  - apply_Tr(k, mu, x, 3.0 * stop.R, phi))
        return {"i": i, "x": x, "r": r, "k": stop.k, "R": stop.R,
                "value": float(val), "scan_ok": ok}

    rows = _pmap(one, range(trials), jobs)
    stat_row = max(rows, key=lambda r: r["value"])
    scans_ok = all(r["scan_ok"] for r in rows)
    passed = stat_row["value"] <= bound and scans_ok
    rep = CheckReport(
        check="trunc81",
        instance=instance or {},
        trials=trials,
        statistic=stat_row["value"],
        witness={"trial": stat_row["i"], "x": stat_row["x"],
                 "r": stat_row["r"], "k": stat_row["k"], "R": stat_row["R"]},
        bound_formula="81*size_const*C0",
        bound_value=bound,
        passed=bool(passed),
        extras={"C0": c0, "minimality_scans_ok": scans_ok},
    )
    rep.runtime_s = time.perf_counter() - t0
    return rep


def check_key_lemma(mu: DiscreteMeasure, k: KernelSpec, n_sets: int = 20,
                    n_points: int = 50, seed: int = 0, opnorm=None,
                    index: BallIndex | None = None, jobs: int = 1,
                    instance=None) -> CheckReport:
    """Pointwise gap between the maximal truncation of a set indicator and
    the maximal average of its transform, against the assembled constant
    81*C0 + 2*A1 + 3*opnorm with A1 = holder_const*C0*(1+1/eps)."""
    t0 = time.perf_counter()
    code = CHECK_CODES["key-lemma"]
    c0, _ = ahlfors_constant(mu)
    if opnorm is None:
        opnorm = opnorm_l2(k, mu, tol=1e-6, max_iter=3000)
    a1 = k.holder_const * c0 * (1.0 + 1.0 / k.eps)
    bound = 81.0 * k.size_const * c0 + 2.0 * a1 + 3.0 * opnorm.value
    box = _box(mu)
    diam = max(diameter(mu), 1.0)
    idx = _atom_index(mu, index)
    rng = _rng(seed, code, 0xA)
    pts = [_box_point(rng, box) for _ in range(n_points // 2)]
    n_atom_pts = min(n_points - len(pts), len(mu))
    pts += [complex(z) for z in
            mu.z[rng.choice(len(mu), size=n_atom_pts, replace=False)]]

    best = {"excess": -math.inf}
    for s in range(n_sets):
        rng_s = _rng(seed, code, 1, s)
        fmask = _ball_union_mask(rng_s, mu, box, diam)
        phi = fmask.astype(np.float64)
        tf = np.abs(transform_field(k, mu, idx, op="T", phi=phi, jobs=jobs))

        def one(x):
            ts = apply_Tsharp(k, mu, x, phi)
            mv = hl_maximal(mu, tf, x)
            return ts - mv

        for x, exc in zip(pts, _pmap(one, pts, jobs)):
            if exc > best["excess"]:
                best = {"excess": float(exc), "set": s, "x": x}
    passed = best["excess"] <= bound
    rep = CheckReport(
        check="key-lemma",
        instance=instance or {},
        trials=n_sets * len(pts),
        statistic=best["excess"],
        witness={"set": best["set"], "x": best["x"]},
        bound_formula="81*size_const*C0 + 2*holder_const*C0*(1+1/eps) + 3*opnorm",
        bound_value=bound,
        passed=bool(passed),
        extras={"C0": c0, "A1": a1, "opnorm": opnorm.value,
                "opnorm_iterations": opnorm.iterations,
                "opnorm_converged": opnorm.converged},
    )
    rep.runtime_s = time.perf_counter() - t0
    return rep


def check_sublemma(mu: DiscreteMeasure, trials: int = 1000,
                   p_list=(0.25, 0.5, 0.75), seed: int = 0, jobs: int = 1,
                   instance=None) -> CheckReport:
    """Restricted p-th moment against the weak-L1 norm.

    For random fields phi and random atom sets B,
    sum_B |phi|^p w <= (1/(1-p)) * mass(B)^(1-p) * weaknorm(phi)^p.
    A constant field over the full space realizes the fraction (1-p) of
    the bound, which is recorded as the sharpness witness.
    """
    t0 = time.perf_counter()
    code = CHECK_CODES["sublemma"]
    for p in p_list:
        if not 0.0 < p < 1.0:
            raise ValueError("p must lie in (0, 1)")
    box = _box(mu)
    diam = max(diameter(mu), 1.0)

    def one(i):
        rng = _rng(seed, code, i)
        phi = rng.standard_normal(len(mu))
        mask = _ball_union_mask(rng, mu, box, diam)
        wn = weak_l1_norm(phi, mu)
        mb = float(np.sum(mu.w[mask]))
        out = []
        for p in p_list:
            lhs = float(np.sum(np.abs(phi[mask]) ** p * mu.w[mask]))
            rhs = (1.0 / (1.0 - p)) * mb ** (1.0 - p) * wn ** p
            out.append((p, lhs, rhs))
        return {"i": i, "rows": out}

    rows = _pmap(one, range(trials), jobs)
    stat = 0.0
    witness = {}
    violations = 0
    for r in rows:
        for p, lhs, rhs in r["rows"]:
            if lhs > rhs * (1.0 + 1e-12):
                violations += 1
            ratio = lhs / rhs if rhs > 0.0 else 0.0
            if ratio > stat:
                stat = ratio
                witness = {"trial": r["i"], "p": p, "lhs": lhs, "rhs": rhs}
    # sharpness: constant field over the full atom set
    sharp = {}
    wn = weak_l1_norm(np.ones(len(mu)), mu)
    mb = mu.total_mass
    sharp_ok = True
    for p in p_list:
        lhs = float(np.sum(mu.w))  # |1|^p = 1
        rhs = (1.0 / (1.0 - p)) * mb ** (1.0 - p) * wn ** p
        frac = lhs / rhs if rhs > 0 else 0.0
        sharp[str(p)] = frac
        sharp_ok = sharp_ok and frac >= (1.0 - p) * (1.0 - 1e-12)
    passed = violations == 0 and sharp_ok
    rep = CheckReport(
        check="sublemma",
        instance=instance or {},
        trials=trials * len(p_list),
        statistic=stat,
        witness=witness,
        bound_formula="(1/(1-p)) * mass(B)^(1-p) * weaknorm^p (ratio <= 1)",
        bound_value=1.0,
        passed=bool(passed),
        extras={"violations": violations, "sharpness_fraction": sharp,
                "sharpness_ok": bool(sharp_ok), "p_list": list(p_list)},
    )
    rep.runtime_s = time.perf_counter() - t0
    return rep


def check_maximal_bounds(mu: DiscreteMeasure, trials: int = 200,
                         seed: int = 0, n_thresholds: int = 16,
                         index: BallIndex | None = None, jobs: int = 1,
                         instance=None) -> CheckReport:
    """L2 bound of the maximal operators and the superlevel-mass trick.

    (a) For random fields, the L2(mu) norms of the maximal average and of
        its doubling-restricted variant never exceed 100 times the norm of
        the field.
    (b) For random positive fields F, the ratio
        t * mass{MF > t} / integral of F over {F > t/2} is reported as an
        empirical constant.
    """
    t0 = time.perf_counter()
    code = CHECK_CODES["maximal"]
    if mu.total_mass <= 0.0:
        raise ValueError("maximal bounds need positive total mass")
    idx = _atom_index(mu, index)
    rng = _rng(seed, code, 0)
    n = len(mu)
    phis = np.abs(rng.standard_normal((trials, n)))

    m_out = np.empty((trials, n))
    mt_out = np.empty((trials, n))

    def one(i):
        t = idx.table(i)
        num2d = np.ascontiguousarray(phis[:, t.order] * mu.w[t.order])
        den = np.ascontiguousarray(mu.w[t.order])
        return (core.batch_prefix_ratio_max(num2d, den, t.ev_end),
                core.batch_restricted_ratio_max(num2d, den, t.dist, t.ev_dist))

    for i, (mv, mtv) in zip(range(n), _pmap(one, range(n), jobs)):
        m_out[:, i] = mv
        mt_out[:, i] = mtv

    phi_norms = np.sqrt(phis ** 2 @ mu.w)
    m_norms = np.sqrt(m_out ** 2 @ mu.w)
    mt_norms = np.sqrt(mt_out ** 2 @ mu.w)
    ok = phi_norms > 0.0
    ratios_m = m_norms[ok] / phi_norms[ok]
    ratios_mt = mt_norms[ok] / phi_norms[ok]
    stat = float(max(np.max(ratios_m), np.max(ratios_mt)))
    wit_i = int(np.argmax(ratios_m))

    # (b) superlevel-mass comparison on a subset of the same fields
    emp_c = 0.0
    for row in range(min(20, trials)):
        f = phis[row]
        mf = m_out[row]
        pos = mf[mf > 0.0]
        if len(pos) == 0:
            continue
        tg = np.geomspace(max(pos.min(), pos.max() * 1e-6), pos.max(), n_thresholds)
        for tt in tg:
            num = tt * distribution_function(mf, mu, tt)
            den = float(np.sum(f[f > tt / 2.0] * mu.w[f > tt / 2.0]))
            if den > 0.0:
                emp_c = max(emp_c, num / den)

    passed = stat <= 100.0
    rep = CheckReport(
        check="maximal",
        instance=instance or {},
        trials=trials,
        statistic=stat,
        witness={"field": wit_i},
        bound_formula="100 (L2 norm ratio)",
        bound_value=100.0,
        passed=bool(passed),
        extras={"max_ratio_M": float(np.max(ratios_m)),
                "max_ratio_Mtilde": float(np.max(ratios_mt)),
                "superlevel_constant": emp_c},
    )
    rep.runtime_s = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# fitted / empirical checks


def _weak_type(check_name, op, nu, mu, k, t_grid=None, n_thresholds=32,
               jobs=1, instance=None) -> CheckReport:
    t0 = time.perf_counter()
    if np.isin(nu.z, mu.z).any():
        raise ValueError("singular evaluation: data atoms meet measure atoms")
    if not mu.nonnegative:
        raise ValueError("background measure must be nonnegative")
    idx = build_index(nu, mu.z)
    if op == "T":
        vals = np.abs(transform_field(k, nu, idx, op="T", jobs=jobs))
    else:
        vals = transform_field(k, nu, idx, op="Tsharp", jobs=jobs)
    tv = total_variation(nu)
    pos = vals[vals > 0.0]
    if t_grid is None:
        if len(pos) == 0:
            t_grid = np.zeros(0)
        else:
            lo = max(float(pos.min()), float(pos.max()) * 1e-12)
            t_grid = np.geomspace(lo, float(pos.max()), n_thresholds)
    const = 0.0
    wit_t = None
    for tt in t_grid:
        v = float(tt) * distribution_function(vals, mu, float(tt)) / tv
        if v > const:
            const = v
            wit_t = float(tt)
    rep = CheckReport(
        check=check_name,
        instance=instance or {},
        trials=len(t_grid),
        statistic=const,
        witness={"t": wit_t},
        bound_formula=None,
        bound_value=None,
        passed=True,  # empirical constant; stability is judged across sizes
        extras={"nu_total_variation": tv,
                "field_max": float(vals.max()) if len(vals) else 0.0},
    )
    rep.runtime_s = time.perf_counter() - t0
    return rep


def check_weak_type_T(nu, mu, k, t_grid=None, n_thresholds=32, jobs=1,
                      instance=None) -> CheckReport:
    """Empirical weak-type constant sup_t t*mass{|T nu| > t}/|nu|."""
    return _weak_type("weak-T", "T", nu, mu, k, t_grid, n_thresholds,
                      jobs, instance)


def check_weak_type_Tsharp(nu, mu, k, t_grid=None, n_thresholds=32, jobs=1,
                           instance=None) -> CheckReport:
    """Empirical weak-type constant for the maximal truncation of nu."""
    return _weak_type("weak-Tsharp", "Tsharp", nu, mu, k, t_grid,
                      n_thresholds, jobs, instance)


def check_theorem2(mu: DiscreteMeasure, k: KernelSpec, phi=None,
                   beta: float = 2.0, points=None, n_points: int = 200,
                   seed: int = 0, grid=None, index: BallIndex | None = None,
                   jobs: int = 1, instance=None):
    """Fit (B, B') in the pointwise domination of the maximal truncation by
    the restricted maximal average of the transform plus power-variant
    maximal terms. Points where the radial term blows up are excluded and
    counted as sentinels."""
    t0 = time.perf_counter()
    code = CHECK_CODES["theorem2"]
    if not beta > 1.0:
        raise ValueError("beta must exceed 1")
    if phi is None:
        phi = _rng(seed, code, 0).standard_normal(len(mu))
    phi = np.asarray(phi, dtype=np.float64)
    if points is None:
        points = default_probes(mu, n_points, seed, code)
    idx = _atom_index(mu, index)
    tf = np.abs(transform_field(k, mu, idx, op="T", phi=phi, jobs=jobs))

    def one(x):
        lhs = apply_Tsharp(k, mu, x, phi)
        base = restricted_maximal(mu, tf, x)[0]
        t1 = restricted_maximal(mu, phi, x, beta=beta)[0]
        t2 = radial_maximal(mu, phi, x, beta=beta)
        return lhs, base, t1, t2

    rows = _pmap(one, list(points), jobs)
    lhs = np.array([r[0] - r[1] for r in rows])
    t1 = np.array([r[2] for r in rows])
    t2 = np.array([r[3] for r in rows])
    finite = np.isfinite(t2)
    sentinels = int(np.sum(~finite))
    if sentinels == len(rows):
        raise ValueError("every point is a sentinel for the radial term")
    fit = fit_constants(lhs[finite], t1[finite], t2[finite], grid,
                        sentinel_count=sentinels)
    frac = sentinels / len(rows)
    wit = int(np.argmax(np.where(finite, lhs - fit.A * t1 - fit.B * t2,
                                 -np.inf)))
    rep = CheckReport(
        check="theorem2",
        instance=instance or {},
        trials=len(rows),
        statistic=fit.A + fit.B,
        witness={"point": complex(points[wit])},
        bound_formula=None,
        bound_value=None,
        passed=bool(frac <= 0.05),
        extras={"B": fit.A, "Bprime": fit.B, "residual": fit.residual,
                "beta": beta, "sentinels": sentinels,
                "sentinel_fraction": frac},
    )
    rep.runtime_s = time.perf_counter() - t0
    return rep, fit


def check_cotlar(mu: DiscreteMeasure, k: KernelSpec, phi=None, p: float = 0.5,
                 points=None, n_points: int = 200, seed: int = 0,
                 restricted: bool = False, grid=None,
                 index: BallIndex | None = None, jobs: int = 1,
                 instance=None):
    """Fit the two pointwise domination forms of the maximal truncation.

    First form: lhs <= A_p * {M(|T phi|^p)}^(1/p) + B_p * M phi, p in (0,1).
    Second form: lhs <= A * M(|T phi|) + B * M phi. The averaging factor
    may be the doubling-restricted variant when ``restricted`` is set.
    """
    t0 = time.perf_counter()
    code = CHECK_CODES["cotlar"]
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    if phi is None:
        phi = _rng(seed, code, 0).standard_normal(len(mu))
    phi = np.asarray(phi, dtype=np.float64)
    if points is None:
        rng = _rng(seed, code, 1)
        ids = np.sort(rng.choice(len(mu), size=min(n_points, len(mu)),
                                 replace=False))
        points = mu.z[ids]
    idx = _atom_index(mu, index)
    tf = np.abs(transform_field(k, mu, idx, op="T", phi=phi, jobs=jobs))
    tfp = tf ** p

    def one(x):
        lhs = apply_Tsharp(k, mu, x, phi)
        if restricted:
            m1 = restricted_maximal(mu, tfp, x)[0] ** (1.0 / p)
            mt = restricted_maximal(mu, tf, x)[0]
        else:
            m1 = hl_maximal(mu, tfp, x) ** (1.0 / p)
            mt = hl_maximal(mu, tf, x)
        m2 = hl_maximal(mu, phi, x)
        return lhs, m1, mt, m2

    rows = _pmap(one, list(points), jobs)
    lhs = np.array([r[0] for r in rows])
    m1 = np.array([r[1] for r in rows])
    mt = np.array([r[2] for r in rows])
    m2 = np.array([r[3] for r in rows])
    fit1 = fit_constants(lhs, m1, m2, grid)
    fit2 = fit_constants(lhs, mt, m2, grid)
    wit = int(np.argmax(lhs - fit1.A * m1 - fit1.B * m2))
    rep = CheckReport(
        check="cotlar",
        instance=instance or {},
        trials=len(rows),
        statistic=fit1.A + fit1.B,
        witness={"point": complex(points[wit])},
        bound_formula=None,
        bound_value=None,
        passed=True,
        extras={"p": p, "Ap": fit1.A, "Bp": fit1.B,
                "residual_p": fit1.residual,
                "A": fit2.A, "B": fit2.B, "residual": fit2.residual,
                "restricted": bool(restricted)},
    )
    rep.runtime_s = time.perf_counter() - t0
    return rep, fit1


def check_star(dec: CZDecomposition, k: KernelSpec, mu: DiscreteMeasure,
               t: float, points, index: BallIndex | None = None,
               jobs: int = 1, instance=None) -> CheckReport:
    """Comparison-field inequality at a decomposition threshold.

    (a) The pointwise excess of the maximal truncation of sigma over the
        restricted maximal average of sigma plus (2/t) times the mass
        field is reported as the fitted additive constant.
    (b) t times the squared L2(mu) norm of sigma is reported.
    """
    t0 = time.perf_counter()
    points = np.asarray(points, dtype=np.complex128)
    idx = _atom_index(mu, index)
    sig = sigma_values(dec, k, mu, index=idx, jobs=jobs)
    asig = np.abs(sig)
    mvals = mass_function(dec, points) if dec.n_disks else np.zeros(len(points))

    def one(i):
        x = complex(points[i])
        ss = sigma_sharp(dec, k, mu, x)
        mt = restricted_maximal(mu, asig, x)[0]
        return ss - mt - (2.0 / t) * mvals[i]

    exc = np.asarray(_pmap(one, range(len(points)), jobs))
    a5 = float(np.max(exc)) if len(exc) else 0.0
    wit = int(np.argmax(exc)) if len(exc) else -1
    sigma_l2 = float(t * np.dot(asig ** 2, mu.w))
    rep = CheckReport(
        check="star",
        instance=instance or {},
        trials=len(points),
        statistic=a5,
        witness={"point": complex(points[wit]) if wit >= 0 else None},
        bound_formula=None,
        bound_value=None,
        passed=True,
        extras={"A5": a5, "sigma_l2_scaled": sigma_l2, "t": float(t),
                "n_disks": dec.n_disks, "exhausted": bool(dec.exhausted),
                "max_overshoot": float(np.max(dec.overshoots))
                if dec.n_disks else 0.0},
    )
    rep.runtime_s = time.perf_counter() - t0
    return rep
