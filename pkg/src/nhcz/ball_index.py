"""Per-center sorted-distance tables with cumulative weights.

A :class:`CenterTable` holds, for one center, the source atoms sorted by
(distance, atom id) together with prefix sums. Every ball measure,
truncation and maximal supremum downstream is a prefix/suffix query on
such a table, and the event distances (the distinct values in ``dist``)
are the only radii at which anything changes, so suprema over r > 0 are
exact maxima over events.

A :class:`BallIndex` manages tables for a declared set of centers. For
small center sets the sort orders are precomputed; above a size budget
they are rebuilt on demand so that memory stays O(N) per query.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measure import DiscreteMeasure

_CACHE_BUDGET = 32_000_000  # cached int32 entries (centers x atoms)


@dataclass
class CenterTable:
    center: complex
    order: np.ndarray      # atom ids by (distance, id) ascending
    dist: np.ndarray       # sorted distances
    wpre: np.ndarray       # prefix sums of weights: wpre[k] = first k atoms
    ev_end: np.ndarray     # inclusive end index of each event group
    ev_start: np.ndarray   # start index of each event group
    ev_dist: np.ndarray    # distinct distances
    fpre: np.ndarray | None = None  # prefix sums of |phi| * weight

    def closed_prefix(self, r: float) -> float:
        """Mass of atoms with distance <= r."""
        k = int(np.searchsorted(self.dist, r, side="right"))
        return float(self.wpre[k])

    def open_prefix(self, r: float) -> float:
        """Mass of atoms with distance < r."""
        k = int(np.searchsorted(self.dist, r, side="left"))
        return float(self.wpre[k])


def build_table(mu: DiscreteMeasure, x: complex, phi=None,
                order=None) -> CenterTable:
    """Sorted-distance table of ``mu``'s atoms around one center."""
    d = np.abs(mu.z - x)
    if order is None:
        order = np.argsort(d, kind="stable").astype(np.int32)
    ds = np.ascontiguousarray(d[order])
    wpre = np.empty(len(ds) + 1)
    wpre[0] = 0.0
    np.cumsum(mu.w[order], out=wpre[1:])
    ends = np.flatnonzero(np.diff(ds) != 0.0)
    ev_end = np.concatenate([ends, [len(ds) - 1]]).astype(np.int64) \
        if len(ds) else np.zeros(0, np.int64)
    ev_start = np.concatenate([[0], ev_end[:-1] + 1]).astype(np.int64) \
        if len(ds) else np.zeros(0, np.int64)
    ev_dist = ds[ev_end] if len(ds) else np.zeros(0)
    fpre = None
    if phi is not None:
        f = np.abs(np.asarray(phi, dtype=np.complex128))
        fpre = np.empty(len(ds) + 1)
        fpre[0] = 0.0
        np.cumsum(f[order] * mu.w[order], out=fpre[1:])
    return CenterTable(complex(x), order, ds, wpre, ev_end, ev_start,
                       ev_dist, fpre)


class BallIndex:
    """Tables for a fixed center set over one source measure."""

    def __init__(self, mu: DiscreteMeasure, centers, phi=None):
        centers = np.asarray(centers, dtype=np.complex128)
        if centers.ndim != 1:
            raise ValueError("centers must be a 1-d point array")
        if len(np.unique(centers)) != len(centers):
            raise ValueError("duplicate centers")
        self.mu = mu
        self.centers = centers
        self.phi = None if phi is None else np.asarray(phi)
        self._pos = {complex(c): i for i, c in enumerate(centers)}
        self._orders = None
        if len(centers) * max(len(mu), 1) <= _CACHE_BUDGET:
            self._orders = [None] * len(centers)

    def __len__(self):
        return len(self.centers)

    def locate(self, x) -> int:
        """Index of an exactly matching center."""
        try:
            return self._pos[complex(x)]
        except KeyError:
            raise KeyError(f"unindexed center {x!r}") from None

    def table(self, i: int) -> CenterTable:
        x = complex(self.centers[i])
        if self._orders is not None:
            if self._orders[i] is None:
                d = np.abs(self.mu.z - x)
                self._orders[i] = np.argsort(d, kind="stable").astype(np.int32)
            return build_table(self.mu, x, self.phi, order=self._orders[i])
        return build_table(self.mu, x, self.phi)


def build_index(mu: DiscreteMeasure, centers, phi=None) -> BallIndex:
    """Index ``mu`` for ball queries from the given distinct centers."""
    return BallIndex(mu, centers, phi)


def ball_mass(idx: BallIndex, x, r: float, closed: bool = True) -> float:
    """Measure of the ball around an indexed center (r = inf gives total)."""
    if not (r > 0.0 or math.isinf(r)):
        raise ValueError("radius must be positive")
    t = idx.table(idx.locate(x))
    return t.closed_prefix(r) if closed else t.open_prefix(r)


def suffix_sum(idx: BallIndex, x, r: float, values) -> complex:
    """Sum of per-atom ``values`` over atoms at distance >= r from x.

    Evaluated as total minus open prefix, both as sequential cumulative
    sums in sorted-distance order.
    """
    t = idx.table(idx.locate(x))
    v = np.asarray(values, dtype=np.complex128)[t.order]
    cum = np.cumsum(v)
    total = cum[-1] if len(cum) else 0.0 + 0j
    k = int(np.searchsorted(t.dist, r, side="left"))
    return complex(total - (cum[k - 1] if k > 0 else 0.0 + 0j))
