"""Maximal functions and the triadic doubling-radius stopping rules.

Four operators share the per-center sweep machinery:

  * ``hl_maximal``          sup of ball averages of |phi|;
  * ``radial_maximal``      sup of ball integrals divided by the radius
                            (the natural object under linear growth), with
                            power variants; infinite at a charged atom;
  * ``restricted_maximal``  ball averages over radii passing the 81-fold
                            doubling test mass(3r) <= 81 * mass(r) only;
  * ``doubling_stop``       the first triadic scale at which ball mass
                            grows by at most 9 (one-step) or, looking two
                            steps ahead, by at most 81.

Every supremum is evaluated exactly: the quantities are piecewise
constant in r between event distances, so a max over events (and, for the
restricted operator, over events and events/3) equals the sup over all
r > 0. All operators consume |phi|.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import core
from .ball_index import BallIndex, CenterTable, build_table
from .measure import DiscreteMeasure


def _abs_phi(phi, n):
    a = np.abs(np.asarray(phi, dtype=np.complex128))
    if a.shape != (n,):
        raise ValueError("phi must give one value per atom")
    return a


def _num_den(mu: DiscreteMeasure, t: CenterTable, aphi: np.ndarray):
    num = np.ascontiguousarray(aphi[t.order] * mu.w[t.order])
    den = np.ascontiguousarray(mu.w[t.order])
    return num, den


def hl_maximal(mu: DiscreteMeasure, phi, x) -> float:
    """Centered maximal average of |phi| over balls around x."""
    if mu.total_mass <= 0.0:
        raise ValueError("maximal average needs positive total mass")
    t = build_table(mu, complex(x))
    num, den = _num_den(mu, t, _abs_phi(phi, len(mu)))
    return core.prefix_ratio_max(num, den, t.ev_end)[0]


def radial_maximal(mu: DiscreteMeasure, phi, x, beta: float = 1.0) -> float:
    """sup over r of r^-1 * integral of |phi| over B(x, r); power variant.

    For beta > 1 returns {M'[|phi|^beta]}^(1/beta). The value is +inf when
    x itself carries an atom with a nonzero value of phi there (shrinking
    balls blow up); callers treat that as a sentinel, not an error.
    """
    if beta < 1.0:
        raise ValueError("beta must be >= 1")
    aphi = _abs_phi(phi, len(mu))
    if beta != 1.0:
        aphi = aphi ** beta
    t = build_table(mu, complex(x))
    num, den = _num_den(mu, t, aphi)
    if len(t.dist) and t.dist[0] == 0.0 and num[0] > 0.0:
        return math.inf
    val = core.radial_ratio_max(num, t.ev_end, t.ev_dist)[0]
    return val if beta == 1.0 else val ** (1.0 / beta)


def restricted_maximal(mu: DiscreteMeasure, phi, x, beta: float = 1.0):
    """Maximal average over doubling radii only; power variant as above.

    Returns (value, witness_radius, admissible). ``admissible`` is False
    only when no radius carries mass (then the value is 0); with positive
    total mass the largest event always passes the test.
    """
    if beta < 1.0:
        raise ValueError("beta must be >= 1")
    aphi = _abs_phi(phi, len(mu))
    if beta != 1.0:
        aphi = aphi ** beta
    t = build_table(mu, complex(x))
    num, den = _num_den(mu, t, aphi)
    val, rad = core.restricted_ratio_max(num, den, t.dist, t.ev_dist)
    ok = rad >= 0.0
    if beta != 1.0:
        val = val ** (1.0 / beta)
    return val, rad, ok


def maximal_field(mu: DiscreteMeasure, phi, index: BallIndex,
                  kind: str = "M", beta: float = 1.0,
                  jobs: int = 1) -> np.ndarray:
    """M / Mprime / Mtilde of phi at every indexed center."""
    if kind not in ("M", "Mprime", "Mtilde"):
        raise ValueError(f"unknown maximal operator {kind!r}")
    if beta < 1.0:
        raise ValueError("beta must be >= 1")
    aphi = _abs_phi(phi, len(mu))
    if beta != 1.0:
        aphi = aphi ** beta

    def one(i):
        t = index.table(i)
        num = np.ascontiguousarray(aphi[t.order] * mu.w[t.order])
        den = np.ascontiguousarray(mu.w[t.order])
        if kind == "M":
            v = core.prefix_ratio_max(num, den, t.ev_end)[0]
        elif kind == "Mprime":
            if len(t.dist) and t.dist[0] == 0.0 and num[0] > 0.0:
                return math.inf
            v = core.radial_ratio_max(num, t.ev_end, t.ev_dist)[0]
        else:
            v = core.restricted_ratio_max(num, den, t.dist, t.ev_dist)[0]
        return v

    def run(i):
        v = one(i)
        if beta != 1.0 and math.isfinite(v):
            v = v ** (1.0 / beta)
        return v

    if jobs <= 1:
        vals = [run(i) for i in range(len(index))]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            vals = list(ex.map(run, range(len(index))))
    return np.asarray(vals, dtype=np.float64)


# ---------------------------------------------------------------------------
# doubling stops


@dataclass(frozen=True)
class DoublingStop:
    k: int
    R: float
    mu_sequence: tuple
    two_step: bool


def doubling_stop(mu: DiscreteMeasure, x, r: float,
                  two_step: bool = False) -> DoublingStop:
    """First triadic index k where ball growth slows below the cap.

    Ball masses are closed-ball masses at radii r, 3r, 9r, ... (computed
    by repeated multiplication). One-step: smallest k >= 1 with
    mass_k <= 9 * mass_(k-1); two-step: smallest k >= 1 with
    mass_(k+1) <= 81 * mass_(k-1). R = 3^(k-1) * r. Termination is
    guaranteed because the masses stabilize at the total.
    """
    if not r > 0.0:
        raise ValueError("radius must be positive")
    t = build_table(mu, complex(x))
    max_d = float(t.dist[-1]) if len(t.dist) else 0.0
    cap = 4
    if max_d > r:
        cap += int(math.ceil(math.log(max_d / r, 3.0)))
    radii = [float(r)]
    seq = [t.closed_prefix(r)]
    k = 0
    while True:
        k += 1
        radii.append(radii[-1] * 3.0)
        seq.append(t.closed_prefix(radii[-1]))
        if two_step:
            nxt = t.closed_prefix(radii[-1] * 3.0)
            if nxt <= 81.0 * seq[k - 1]:
                seq.append(nxt)
                break
        elif seq[k] <= 9.0 * seq[k - 1]:
            break
        if k > cap:
            raise AssertionError("doubling stop failed to terminate")
    return DoublingStop(k, radii[k - 1], tuple(seq), two_step)
