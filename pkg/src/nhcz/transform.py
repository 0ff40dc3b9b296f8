"""The operator T, truncations, maximal truncation, adjoint, L2 norm.

T integrates K(x, .) against phi dmu (or against a signed atomic measure
when ``phi`` is omitted). At an atom the integrand is singular; the
self-term is dropped, which makes T at atoms the r -> 0 limit of the
truncated operators T_r and keeps the whole maximal machinery consistent.

All sums run in sorted-distance order around the evaluation point.
T_r keeps atoms at distance >= r; the maximal truncation is the exact max
of |T_r| over the event radii of the point.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import core
from .ball_index import BallIndex, CenterTable, build_table
from .kernel import KernelSpec, kernel_values
from .measure import DiscreteMeasure


def _contributions(k: KernelSpec, src: DiscreteMeasure, t: CenterTable,
                   phi=None, transposed=False) -> np.ndarray:
    """K(x, y_i) * phi_i * w_i in table order, zeroed on the center atom."""
    zs = src.z[t.order]
    v = kernel_values(k, t.center, zs, transposed=transposed)
    c = v * src.w[t.order]
    if phi is not None:
        c = c * np.asarray(phi, dtype=np.complex128)[t.order]
    if len(t.dist) and t.dist[0] == 0.0:
        c[: t.ev_end[0] + 1][t.dist[: t.ev_end[0] + 1] == 0.0] = 0.0
    return np.ascontiguousarray(c)


def _seq_total(c: np.ndarray) -> complex:
    return complex(np.cumsum(c)[-1]) if len(c) else 0j


def apply_T(k: KernelSpec, src: DiscreteMeasure, x, phi=None) -> complex:
    """T(phi dmu)(x), self-atom excluded."""
    t = build_table(src, complex(x))
    return _seq_total(_contributions(k, src, t, phi))


def apply_Tstar(k: KernelSpec, src: DiscreteMeasure, x, phi=None) -> complex:
    """Adjoint: the kernel arguments transposed."""
    t = build_table(src, complex(x))
    return _seq_total(_contributions(k, src, t, phi, transposed=True))


def apply_Tr(k: KernelSpec, src: DiscreteMeasure, x, r: float,
             phi=None) -> complex:
    """Truncation: atoms at distance >= r only."""
    if not r > 0.0:
        raise ValueError("truncation radius must be positive")
    t = build_table(src, complex(x))
    c = _contributions(k, src, t, phi)
    cum = np.cumsum(c)
    total = cum[-1] if len(cum) else 0j
    kpos = int(np.searchsorted(t.dist, r, side="left"))
    return complex(total - (cum[kpos - 1] if kpos > 0 else 0j))


def _tsharp_from_table(k, src, t, phi=None, transposed=False):
    c = _contributions(k, src, t, phi, transposed=transposed)
    val, ei = core.suffix_abs_max(
        np.ascontiguousarray(c.real), np.ascontiguousarray(c.imag), t.ev_start
    )
    radius = float(t.ev_dist[ei]) if ei >= 0 else 0.0
    return val, radius


def apply_Tsharp(k: KernelSpec, src: DiscreteMeasure, x, phi=None) -> float:
    """sup over r > 0 of |T_r|, exact over the event radii of x."""
    t = build_table(src, complex(x))
    return _tsharp_from_table(k, src, t, phi)[0]


def tsharp_with_witness(k: KernelSpec, src: DiscreteMeasure, x, phi=None):
    """(value, achieving radius) version of the maximal truncation."""
    t = build_table(src, complex(x))
    return _tsharp_from_table(k, src, t, phi)


def _pmap(fn, items, jobs):
    if jobs <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def transform_field(k: KernelSpec, src: DiscreteMeasure, index: BallIndex,
                    op: str = "T", r: float | None = None, phi=None,
                    jobs: int = 1) -> np.ndarray:
    """Evaluate T / Tr / Tsharp / Tstar at every indexed center.

    Complex array for T, Tr, Tstar; real array for Tsharp. Results are
    assembled in center order regardless of ``jobs``.
    """
    if op == "Tr" and not (r is not None and r > 0.0):
        raise ValueError("Tr needs a positive radius")

    def one(i):
        t = index.table(i)
        if op == "Tsharp":
            return _tsharp_from_table(k, src, t, phi)[0]
        c = _contributions(k, src, t, phi, transposed=(op == "Tstar"))
        cum = np.cumsum(c)
        total = cum[-1] if len(cum) else 0j
        if op in ("T", "Tstar"):
            return complex(total)
        kpos = int(np.searchsorted(t.dist, r, side="left"))
        return complex(total - (cum[kpos - 1] if kpos > 0 else 0j))

    vals = _pmap(one, range(len(index)), jobs)
    if op == "Tsharp":
        return np.asarray(vals, dtype=np.float64)
    return np.asarray(vals, dtype=np.complex128)


# ---------------------------------------------------------------------------
# L2(mu) operator norm


@dataclass(frozen=True)
class OperatorNormEstimate:
    value: float
    iterations: int
    residual: float
    converged: bool


def _weighted_matrix(k: KernelSpec, mu: DiscreteMeasure) -> np.ndarray:
    """sqrt(w_i) K(x_i, x_j) sqrt(w_j) with zero diagonal.

    The largest singular value of this matrix equals the operator norm of
    phi -> T(phi dmu) on L2(mu).
    """
    n = len(mu)
    sq = np.sqrt(mu.w)
    m = np.empty((n, n), dtype=np.complex128)
    for i in range(n):
        row = kernel_values(k, complex(mu.z[i]), mu.z)
        row[i] = 0.0
        bad = ~np.isfinite(row)
        if bad.any():
            row[bad] = 0.0
        m[i] = sq[i] * row * sq
    if np.all(m.imag == 0.0):
        return np.ascontiguousarray(m.real)
    return m


def opnorm_l2(k: KernelSpec, mu: DiscreteMeasure, tol: float = 1e-8,
              max_iter: int = 5000, seed: int = 0) -> OperatorNormEstimate:
    """Largest singular value by power iteration on the Gram operator."""
    if not mu.nonnegative:
        raise ValueError("operator norm is taken over a nonnegative measure")
    n = len(mu)
    if n < 2:
        return OperatorNormEstimate(0.0, 0, 0.0, True)
    m = _weighted_matrix(k, mu)
    rng = np.random.default_rng([seed, 0x6E68])
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    if m.dtype == np.float64:
        v = v.real
    v = v / np.linalg.norm(v)
    mh = m.conj().T
    sigma = 0.0
    res = np.inf
    it = 0
    while it < max_iter:
        it += 1
        u = m @ v
        s = float(np.linalg.norm(u))
        res = abs(s - sigma) / max(s, 1e-300)
        sigma = s
        if s == 0.0:
            return OperatorNormEstimate(0.0, it, 0.0, True)
        w = mh @ u
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return OperatorNormEstimate(sigma, it, res, True)
        v = w / nw
        if res <= tol:
            return OperatorNormEstimate(sigma, it, res, True)
    return OperatorNormEstimate(sigma, it, res, False)


def opnorm_dense(k: KernelSpec, mu: DiscreteMeasure) -> float:
    """Exact largest singular value (dense decomposition, small N only)."""
    if len(mu) < 2:
        return 0.0
    return float(np.linalg.svd(_weighted_matrix(k, mu), compute_uv=False)[0])
