"""Greedy disk decomposition at a threshold, comparison field, mass field.

Given a positive atomic data measure nu and a background measure mu, the
construction picks for each nu-atom the smallest closed-ball radius whose
not-yet-taken mu-mass reaches weight/t, takes those atoms, and moves on.
Exact equality of the achieved mass is unattainable for atomic mu, so the
overshoot of each disk is recorded; it enters reports as a quality metric.
When the total mass cannot cover the remaining targets the construction
stops and the decomposition is marked exhausted (if mu(C) < |nu|/t that
happens immediately and no disk is built).

From a decomposition two derived objects are computed:

  * sigma: at a point z, the sum over disks with |z - x_j| > 2 r_j of
    T applied to the indicator of the disk's atom set;
  * the mass field m(x) = sum over disks of (weight_j / r_j) on the open
    ball of radius 10 r_j around x_j.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import core
from .ball_index import BallIndex, build_table
from .kernel import KernelSpec, kernel_values
from .measure import DiscreteMeasure, total_variation


@dataclass(frozen=True)
class CZDecomposition:
    t: float
    centers: np.ndarray          # nu-atom positions, input order
    radii: np.ndarray            # chosen closed-ball radii
    esets: tuple                 # per-disk int arrays of taken mu-atom ids
    targets: np.ndarray          # weight_j / t
    achieved: np.ndarray         # taken mu-mass per disk
    exhausted: bool

    @property
    def n_disks(self) -> int:
        return len(self.radii)

    @property
    def overshoots(self) -> np.ndarray:
        return self.achieved - self.targets

    def atom_disk_map(self, n_atoms: int) -> np.ndarray:
        """Disk index per mu-atom (-1 when the atom was never taken)."""
        m = np.full(n_atoms, -1, dtype=np.int64)
        for j, e in enumerate(self.esets):
            m[e] = j
        return m


def cz_disks(nu: DiscreteMeasure, mu: DiscreteMeasure, t: float) -> CZDecomposition:
    """Greedy construction of disks and disjoint atom sets at threshold t.

    nu-atoms are processed in their canonical (lexicographic) order, which
    fixes the arbitrary enumeration and makes runs reproducible.
    """
    if not t > 0.0:
        raise ValueError("threshold must be positive")
    if np.any(nu.w <= 0.0):
        raise ValueError("data measure must have strictly positive weights")
    n = len(mu)
    centers, radii, esets, targets, achieved = [], [], [], [], []
    if mu.total_mass < total_variation(nu) / t:
        return CZDecomposition(t, np.zeros(0, np.complex128), np.zeros(0),
                               tuple(), np.zeros(0), np.zeros(0), True)
    taken = np.zeros(n, dtype=bool)
    remaining = mu.total_mass
    exhausted = False
    for xj, aj in zip(nu.z, nu.w):
        target = aj / t
        if remaining < target:
            exhausted = True
            break
        tab = build_table(mu, complex(xj))
        avail = np.ascontiguousarray(
            np.where(taken[tab.order], 0.0, mu.w[tab.order])
        )
        ei, got = core.greedy_event_take(avail, tab.ev_end, target)
        if ei < 0:
            # the running float total disagreed with the prefix sums by a
            # sliver; treat as exhaustion rather than fail
            exhausted = True
            break
        end = int(tab.ev_end[ei])
        ids = tab.order[: end + 1]
        new = ids[~taken[ids]]
        taken[new] = True
        centers.append(complex(xj))
        radii.append(float(tab.ev_dist[ei]))
        esets.append(np.sort(new).astype(np.int64))
        targets.append(target)
        achieved.append(got)
        remaining -= got
    return CZDecomposition(
        t,
        np.asarray(centers, dtype=np.complex128),
        np.asarray(radii, dtype=np.float64),
        tuple(esets),
        np.asarray(targets, dtype=np.float64),
        np.asarray(achieved, dtype=np.float64),
        exhausted,
    )


def _masked_contributions(dec: CZDecomposition, k: KernelSpec,
                          mu: DiscreteMeasure, tab, disk_of) -> np.ndarray:
    """Per-atom kernel contributions at tab.center, masked by the cut rule.

    An atom contributes when it belongs to some disk j whose center is
    strictly farther than 2 r_j from the evaluation point.
    """
    if dec.n_disks == 0:
        return np.zeros(len(tab.order), dtype=np.complex128)
    qualifies = np.abs(tab.center - dec.centers) > 2.0 * dec.radii
    keep_disk = np.concatenate([qualifies, [False]])  # -1 maps to False
    keep = keep_disk[disk_of[tab.order]]
    zs = mu.z[tab.order]
    v = kernel_values(k, tab.center, zs)
    c = np.where(keep, v * mu.w[tab.order], 0.0 + 0.0j)
    if len(tab.dist) and tab.dist[0] == 0.0:
        c[0] = 0.0
    return np.ascontiguousarray(c)


def sigma_values(dec: CZDecomposition, k: KernelSpec, mu: DiscreteMeasure,
                 index: BallIndex | None = None, jobs: int = 1) -> np.ndarray:
    """sigma at every mu-atom (complex array in canonical atom order)."""
    disk_of = dec.atom_disk_map(len(mu))

    def one(i):
        tab = index.table(i) if index is not None else build_table(mu, complex(mu.z[i]))
        c = _masked_contributions(dec, k, mu, tab, disk_of)
        return complex(np.cumsum(c)[-1]) if len(c) else 0j

    if jobs <= 1:
        vals = [one(i) for i in range(len(mu))]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            vals = list(ex.map(one, range(len(mu))))
    return np.asarray(vals, dtype=np.complex128)


def sigma_r(dec: CZDecomposition, k: KernelSpec, mu: DiscreteMeasure,
            x, r: float) -> complex:
    """sigma with each disk's atom set truncated to distance >= r from x."""
    if not r > 0.0:
        raise ValueError("truncation radius must be positive")
    tab = build_table(mu, complex(x))
    c = _masked_contributions(dec, k, mu, tab, dec.atom_disk_map(len(mu)))
    cum = np.cumsum(c)
    total = cum[-1] if len(cum) else 0j
    kpos = int(np.searchsorted(tab.dist, r, side="left"))
    return complex(total - (cum[kpos - 1] if kpos > 0 else 0j))


def sigma_sharp(dec: CZDecomposition, k: KernelSpec, mu: DiscreteMeasure,
                x) -> float:
    """sup over r > 0 of |sigma_r(x)|, exact over event radii of x."""
    tab = build_table(mu, complex(x))
    c = _masked_contributions(dec, k, mu, tab, dec.atom_disk_map(len(mu)))
    val, _ = core.suffix_abs_max(
        np.ascontiguousarray(c.real), np.ascontiguousarray(c.imag),
        tab.ev_start,
    )
    return val


def mass_function(dec: CZDecomposition, points) -> np.ndarray:
    """m at each query point: sum of weight_j/r_j over open 10 r_j balls."""
    pts = np.asarray(points, dtype=np.complex128)
    if dec.n_disks == 0:
        return np.zeros(len(pts))
    if np.any(dec.radii == 0.0):
        raise ValueError("disk of radius zero (data atom sits on a heavy "
                         "background atom); mass field undefined")
    rates = (dec.targets * dec.t) / dec.radii  # weight_j / r_j
    inside = (np.abs(pts[:, None] - dec.centers[None, :])
              < 10.0 * dec.radii[None, :])
    return inside @ rates


def mass_integral(dec: CZDecomposition, mu: DiscreteMeasure) -> float:
    """Integral of the mass field against mu."""
    if dec.n_disks == 0:
        return 0.0
    if np.any(dec.radii == 0.0):
        raise ValueError("disk of radius zero; mass field undefined")
    total = 0.0
    for j in range(dec.n_disks):
        tab = build_table(mu, complex(dec.centers[j]))
        total += (dec.targets[j] * dec.t / dec.radii[j]) \
            * tab.open_prefix(10.0 * dec.radii[j])
    return float(total)


# ---------------------------------------------------------------------------
# serialization (reports embed decompositions for replay)


def dumps_decomposition(dec: CZDecomposition) -> str:
    doc = {
        "t": dec.t,
        "exhausted": dec.exhausted,
        "disks": [
            {
                "center": [float(c.real), float(c.imag)],
                "radius": float(r),
                "target": float(tg),
                "achieved": float(a),
                "atom_ids": [int(i) for i in e],
            }
            for c, r, tg, a, e in zip(dec.centers[: dec.n_disks], dec.radii,
                                      dec.targets, dec.achieved, dec.esets)
        ],
    }
    return json.dumps(doc, indent=1)
