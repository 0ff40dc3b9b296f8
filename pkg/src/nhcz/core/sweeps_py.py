"""NumPy implementations of the per-center sweep kernels.

Every function here has a compiled twin in ``_sweeps.pyx`` with identical
semantics. Inputs are arrays already gathered into sorted-distance order
for one center; "events" are the groups of equal distance. All prefix sums
are sequential left-to-right accumulations, so both lanes perform the same
IEEE operations in the same order.

Conventions shared by both lanes:
  * prefix P[k] = sum of the first k entries (P[0] = 0);
  * a closed ball of radius q covers entries with distance <= q, i.e. the
    first ``searchsorted(dist, q, side="right")`` entries;
  * suffix sums are evaluated as total minus open prefix.
"""

import numpy as np


def _prefix(x):
    out = np.empty(len(x) + 1, dtype=x.dtype)
    out[0] = 0
    np.cumsum(x, out=out[1:])
    return out


def suffix_abs_max(cre, cim, starts):
    """Max modulus of suffix sums starting at each event start index.

    Returns (value, event_index); (0.0, -1) when there are no entries.
    """
    if len(cre) == 0 or len(starts) == 0:
        return 0.0, -1
    pre_re = _prefix(cre)
    pre_im = _prefix(cim)
    tot_re = pre_re[-1]
    tot_im = pre_im[-1]
    vals = np.hypot(tot_re - pre_re[starts], tot_im - pre_im[starts])
    ei = int(np.argmax(vals))
    return float(vals[ei]), ei


def prefix_ratio_max(num, den, ends):
    """Max over events of prefix(num)/prefix(den), skipping zero-mass radii.

    ``ends`` holds the inclusive end index of each event group.
    Returns (value, event_index); (0.0, -1) if no event has positive mass.
    """
    if len(ends) == 0:
        return 0.0, -1
    pn = _prefix(num)[ends + 1]
    pd = _prefix(den)[ends + 1]
    ok = pd > 0.0
    if not np.any(ok):
        return 0.0, -1
    vals = np.where(ok, pn / np.where(ok, pd, 1.0), -np.inf)
    ei = int(np.argmax(vals))
    return float(vals[ei]), ei


def radial_ratio_max(num, ends, edist):
    """Max over positive event distances of prefix(num)/distance.

    Returns (value, event_index); (0.0, -1) when no positive event exists.
    """
    if len(ends) == 0:
        return 0.0, -1
    pn = _prefix(num)[ends + 1]
    ok = edist > 0.0
    if not np.any(ok):
        return 0.0, -1
    vals = np.where(ok, pn / np.where(ok, edist, 1.0), -np.inf)
    ei = int(np.argmax(vals))
    return float(vals[ei]), ei


def restricted_ratio_max(num, den, dist, edist):
    """Max prefix average over radii passing the 81-fold doubling test.

    Candidate radii are every event distance e and every e/3 (the
    breakpoints of the two ball masses involved in the test). A candidate c
    is admissible when the closed mass at 3c is at most 81 times the closed
    mass at c and the latter is positive. Products and quotients by 3 use
    plain IEEE arithmetic; the brute-force oracle applies the same ops.

    Returns (value, radius); (0.0, -1.0) if no candidate is admissible.
    """
    if len(edist) == 0:
        return 0.0, -1.0
    pn = _prefix(num)
    pd = _prefix(den)
    cand = np.concatenate([edist / 3.0, edist])
    kc = np.searchsorted(dist, cand, side="right")
    k3 = np.searchsorted(dist, 3.0 * cand, side="right")
    mass = pd[kc]
    ok = (mass > 0.0) & (pd[k3] <= 81.0 * mass)
    if not np.any(ok):
        return 0.0, -1.0
    vals = np.where(ok, pn[kc] / np.where(ok, mass, 1.0), -np.inf)
    ci = int(np.argmax(vals))
    return float(vals[ci]), float(cand[ci])


def greedy_event_take(avail, ends, target):
    """Smallest event index whose running available mass reaches target.

    Returns (event_index, achieved_mass); (-1, total) when the target is
    never reached.
    """
    if len(ends) == 0:
        return -1, 0.0
    pa = _prefix(avail)[ends + 1]
    hit = np.flatnonzero(pa >= target)
    if len(hit) == 0:
        return -1, float(pa[-1])
    ei = int(hit[0])
    return ei, float(pa[ei])


def batch_prefix_ratio_max(num2d, den, ends):
    """prefix_ratio_max applied to each row of num2d against a shared den."""
    b = num2d.shape[0]
    if len(ends) == 0:
        return np.zeros(b)
    pd = _prefix(den)[ends + 1]
    ok = pd > 0.0
    if not np.any(ok):
        return np.zeros(b)
    pn = np.cumsum(num2d, axis=1)[:, ends]
    vals = np.where(ok, pn / np.where(ok, pd, 1.0), -np.inf)
    out = np.max(vals, axis=1)
    return np.where(np.isfinite(out), out, 0.0)


def batch_restricted_ratio_max(num2d, den, dist, edist):
    """restricted_ratio_max applied to each row of num2d."""
    b = num2d.shape[0]
    if len(edist) == 0:
        return np.zeros(b)
    pd = _prefix(den)
    cand = np.concatenate([edist / 3.0, edist])
    kc = np.searchsorted(dist, cand, side="right")
    k3 = np.searchsorted(dist, 3.0 * cand, side="right")
    mass = pd[kc]
    ok = (mass > 0.0) & (pd[k3] <= 81.0 * mass)
    if not np.any(ok):
        return np.zeros(b)
    pn = np.concatenate(
        [np.zeros((b, 1)), np.cumsum(num2d, axis=1)], axis=1
    )[:, kc]
    vals = np.where(ok, pn / np.where(ok, mass, 1.0), -np.inf)
    out = np.max(vals, axis=1)
    return np.where(np.isfinite(out), out, 0.0)
