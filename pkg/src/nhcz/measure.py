"""Discrete measures on the plane: construction, generators, functionals.

Points of the plane are represented as Python/NumPy complex numbers. A
:class:`DiscreteMeasure` is a finite list of weighted atoms kept in a
canonical order (lexicographic by (re, im)); every summation in the
package iterates in a fixed order derived from this one, which makes all
results bit-reproducible.

Ball convention: suprema over radii are realized in the limit as the
radius decreases to an inter-atom distance, so everything downstream is
computed from closed-ball prefix sums at those event distances.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np


class MeasureError(ValueError):
    """Invalid measure construction or query."""


@dataclass(frozen=True)
class DiscreteMeasure:
    """Weighted atoms in the plane, canonically ordered.

    ``z`` holds atom locations as complex128, ``w`` the weights. When
    ``nonnegative`` is set every weight must be >= 0; signed measures
    (used as the data measure of the operators) clear the flag.
    """

    z: np.ndarray
    w: np.ndarray
    nonnegative: bool = True

    def __post_init__(self):
        z = np.ascontiguousarray(np.asarray(self.z, dtype=np.complex128))
        w = np.ascontiguousarray(np.asarray(self.w, dtype=np.float64))
        if z.ndim != 1 or w.shape != z.shape:
            raise MeasureError("atoms and weights must be 1-d and aligned")
        if not (np.all(np.isfinite(z.view(np.float64))) and np.all(np.isfinite(w))):
            raise MeasureError("atom coordinates and weights must be finite")
        order = np.lexsort((z.imag, z.real))
        z = z[order]
        w = w[order]
        if len(z) > 1 and np.any(z[1:] == z[:-1]):
            raise MeasureError("atom points must be pairwise distinct")
        if self.nonnegative and np.any(w < 0):
            raise MeasureError("negative weight in a nonnegative measure")
        z.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "w", w)

    def __len__(self):
        return len(self.z)

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.w))

    def scaled(self, factor: float) -> "DiscreteMeasure":
        return DiscreteMeasure(self.z, self.w * factor, self.nonnegative)


def from_atoms(atoms, nonnegative=True) -> DiscreteMeasure:
    """Build a measure from an iterable of (re, im, weight) triples."""
    arr = np.asarray(list(atoms), dtype=np.float64)
    if arr.size == 0:
        return DiscreteMeasure(np.zeros(0, np.complex128), np.zeros(0), nonnegative)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise MeasureError("expected (re, im, weight) triples")
    return DiscreteMeasure(arr[:, 0] + 1j * arr[:, 1], arr[:, 2], nonnegative)


def bounding_box(mu: DiscreteMeasure):
    """(re_min, re_max, im_min, im_max) over the atoms."""
    if len(mu) == 0:
        raise MeasureError("empty measure has no bounding box")
    return (
        float(mu.z.real.min()),
        float(mu.z.real.max()),
        float(mu.z.imag.min()),
        float(mu.z.imag.max()),
    )


def diameter(mu: DiscreteMeasure) -> float:
    """Diagonal of the bounding box (upper bound on the true diameter)."""
    r0, r1, i0, i1 = bounding_box(mu)
    return float(math.hypot(r1 - r0, i1 - i0))


# ---------------------------------------------------------------------------
# functionals


def total_variation(nu: DiscreteMeasure) -> float:
    """Sum of absolute atom weights."""
    return float(np.sum(np.abs(nu.w)))


def ahlfors_constant(mu: DiscreteMeasure):
    """Smallest C with mu(closed ball) <= C * radius at atom centers.

    Returns ``(c0, resolution_floor)`` where ``c0`` maximizes
    mass(closed ball of radius d) / d over atoms and their distinct
    positive distances d to other atoms, and ``resolution_floor`` is the
    largest single atom weight (below that scale an atomic measure cannot
    grow linearly, so radius-0 balls are excluded by construction).
    """
    if not mu.nonnegative:
        raise MeasureError("Ahlfors constant requires a nonnegative measure")
    if len(mu) < 2:
        raise MeasureError("degenerate measure")
    c0 = 0.0
    for i in range(len(mu)):
        d = np.abs(mu.z - mu.z[i])
        order = np.argsort(d, kind="stable")
        ds = d[order]
        pre = np.cumsum(mu.w[order])
        # event boundaries: last index of each distinct distance
        ends = np.flatnonzero(np.diff(ds) != 0.0)
        ends = np.concatenate([ends, [len(ds) - 1]])
        edist = ds[ends]
        keep = edist > 0.0
        if np.any(keep):
            c0 = max(c0, float(np.max(pre[ends[keep]] / edist[keep])))
    return c0, float(np.max(mu.w))


def normalize_ahlfors(mu: DiscreteMeasure) -> DiscreteMeasure:
    """Scale weights so the recomputed Ahlfors constant equals 1."""
    c0, _ = ahlfors_constant(mu)
    if c0 == 0.0:
        raise MeasureError("zero-mass measure cannot be normalized")
    return mu.scaled(1.0 / c0)


def weak_l1_norm(phi, mu: DiscreteMeasure) -> float:
    """sup over t > 0 of t * mu{|phi| > t} for atom values ``phi``.

    For an atomic measure the sup equals the max over the distinct values
    v of |phi| of v * mu{|phi| >= v}.
    """
    if not mu.nonnegative:
        raise MeasureError("weak norm requires a nonnegative measure")
    a = np.abs(np.asarray(phi, dtype=np.complex128))
    if a.shape != mu.w.shape:
        raise MeasureError("phi must give one value per atom")
    order = np.argsort(-a, kind="stable")
    av = a[order]
    pre = np.cumsum(mu.w[order])
    # last occurrence of each distinct value in the descending ordering
    ends = np.flatnonzero(np.diff(av) != 0.0)
    ends = np.concatenate([ends, [len(av) - 1]]) if len(av) else ends
    best = 0.0
    for e in ends:
        if av[e] > 0.0:
            best = max(best, float(av[e] * pre[e]))
    return best


def distribution_function(phi, mu: DiscreteMeasure, t: float) -> float:
    """mu-mass of the strict superlevel set {|phi| > t}, t > 0."""
    if not mu.nonnegative:
        raise MeasureError("distribution function requires a nonnegative measure")
    if not t > 0.0:
        raise MeasureError("threshold must be positive")
    a = np.abs(np.asarray(phi, dtype=np.complex128))
    return float(np.sum(mu.w[a > t]))


# ---------------------------------------------------------------------------
# generators


@dataclass(frozen=True)
class GeneratorSpec:
    """Deterministic test-instance family.

    shape:
      * ``segment``: ``count`` equispaced atoms j/count on [0,1), equal weights.
      * ``circle``: ``count`` equispaced atoms on the unit circle, equal weights.
      * ``cantor``: centers of the depth-``depth`` generation squares of the
        planar corner Cantor set with contraction ``ratio``; 4**depth atoms of
        equal weight, total mass 1 (``count`` is ignored).
      * ``comb``: one unit vertical tooth per entry of ``densities`` at
        re = 2*i, ``count`` atoms per tooth, tooth i carrying linear density
        densities[i].

    ``seed`` is recorded for interface uniformity; all four shapes are fully
    deterministic.
    """

    shape: str
    count: int = 1
    seed: int = 0
    ratio: float = 0.25
    depth: int = 3
    densities: tuple = field(default_factory=tuple)


def generate(spec: GeneratorSpec) -> DiscreteMeasure:
    """Instantiate a generator spec (pure: identical spec, identical atoms)."""
    if spec.count < 1:
        raise MeasureError("count must be >= 1")
    if spec.shape == "segment":
        n = spec.count
        z = np.arange(n, dtype=np.float64) / n + 0j
        return DiscreteMeasure(z, np.full(n, 1.0 / n))
    if spec.shape == "circle":
        n = spec.count
        ang = 2.0 * np.pi * np.arange(n, dtype=np.float64) / n
        return DiscreteMeasure(np.cos(ang) + 1j * np.sin(ang), np.full(n, 1.0 / n))
    if spec.shape == "cantor":
        lam, d = spec.ratio, spec.depth
        if not 0.0 < lam <= 0.5:
            raise MeasureError("cantor ratio must lie in (0, 1/2]")
        if d < 0:
            raise MeasureError("cantor depth must be >= 0")
        offs = np.array([0.0, 1.0 - lam])
        xs = np.zeros(1)
        ys = np.zeros(1)
        scale = 1.0
        for _ in range(d):
            xs = (xs[:, None] + scale * offs[None, :]).ravel()
            ys = (ys[:, None] + scale * offs[None, :]).ravel()
            scale *= lam
        # all corner combinations at depth d, then square centers
        half = scale / 2.0
        gx = np.repeat(xs, len(ys)) + half
        gy = np.tile(ys, len(xs)) + half
        n = len(gx)
        return DiscreteMeasure(gx + 1j * gy, np.full(n, 1.0 / n))
    if spec.shape == "comb":
        if not spec.densities:
            raise MeasureError("comb needs a density sequence")
        rho = np.asarray(spec.densities, dtype=np.float64)
        if np.any(rho <= 0) or np.any(rho > 1.0):
            raise MeasureError("comb densities must lie in (0, 1]")
        n = spec.count
        ys = np.arange(n, dtype=np.float64) / n
        zs = []
        ws = []
        for i, r in enumerate(rho):
            zs.append(2.0 * i + 1j * ys)
            ws.append(np.full(n, r / n))
        return DiscreteMeasure(np.concatenate(zs), np.concatenate(ws))
    raise MeasureError(f"unknown shape {spec.shape!r}")


# ---------------------------------------------------------------------------
# serialization: {"atoms": [[re, im, weight], ...], "nonnegative": bool}
# with doubles printed to 17 significant digits (exact round trip)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def dumps_measure(mu: DiscreteMeasure) -> str:
    rows = ",\n".join(
        f"    [{_fmt(z.real)}, {_fmt(z.imag)}, {_fmt(w)}]"
        for z, w in zip(mu.z, mu.w)
    )
    body = f"[\n{rows}\n  ]" if len(mu) else "[]"
    flag = "true" if mu.nonnegative else "false"
    return f'{{\n  "atoms": {body},\n  "nonnegative": {flag}\n}}\n'


def save_measure(mu: DiscreteMeasure, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps_measure(mu))


def load_measure(path) -> DiscreteMeasure:
    with open(path, "r", encoding="ascii") as fh:
        doc = json.load(fh)
    try:
        atoms = doc["atoms"]
        nonneg = bool(doc.get("nonnegative", True))
    except (KeyError, TypeError) as exc:
        raise MeasureError(f"malformed measure file {path}") from exc
    return from_atoms(atoms, nonnegative=nonneg)
