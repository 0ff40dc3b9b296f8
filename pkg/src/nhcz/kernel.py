"""Singular kernels with size and smoothness constants.

Built-in kernels: the Cauchy kernel 1/(x - y) and its real and imaginary
parts. A kernel carries its size constant (|K(x,y)| <= size_const/|x-y|),
its smoothness exponent ``eps`` and the smoothness constant used when a
difference |K(x,y) - K(x',y)| is bounded for |x - x'| <= |x - y|/2. For
the Cauchy kernel the derived smoothness constant is 2, and that measured
value (not a normalized 1) is what every verification bound uses.

Custom kernels are supplied as vectorized evaluators with declared
constants; the axioms are then spot-checked, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


class KernelError(ValueError):
    pass


@dataclass(frozen=True)
class KernelSpec:
    id: str
    eps: float = 1.0
    size_const: float = 1.0
    holder_const: float = 2.0
    func: Optional[Callable] = None  # custom: f(x, y) -> complex, broadcasting

    def __post_init__(self):
        if not 0.0 < self.eps <= 1.0:
            raise KernelError("smoothness exponent must lie in (0, 1]")
        if self.size_const <= 0 or self.holder_const <= 0:
            raise KernelError("kernel constants must be positive")
        if self.id == "custom" and self.func is None:
            raise KernelError("custom kernel needs an evaluator")


def cauchy() -> KernelSpec:
    return KernelSpec("cauchy")


def cauchy_re() -> KernelSpec:
    return KernelSpec("cauchy_re")


def cauchy_im() -> KernelSpec:
    return KernelSpec("cauchy_im")


def custom_kernel(func, eps, size_const, holder_const) -> KernelSpec:
    return KernelSpec("custom", eps, size_const, holder_const, func)


_BUILTIN = {"cauchy": cauchy, "cauchy_re": cauchy_re, "cauchy_im": cauchy_im}


def get_kernel(name: str) -> KernelSpec:
    try:
        return _BUILTIN[name]()
    except KeyError:
        raise KernelError(f"unknown kernel {name!r}") from None


def kernel_values(k: KernelSpec, x, ys, transposed=False) -> np.ndarray:
    """Vectorized K(x, y) over an array of y (K(y, x) when transposed).

    Entries with y == x come out non-finite and must be masked by the
    caller; the transform layer zeroes them (self-exclusion).
    """
    ys = np.asarray(ys, dtype=np.complex128)
    with np.errstate(divide="ignore", invalid="ignore"):
        if k.id == "custom":
            v = k.func(ys, x) if transposed else k.func(x, ys)
            return np.asarray(v, dtype=np.complex128)
        d = (ys - x) if transposed else (x - ys)
        v = 1.0 / d
    if k.id == "cauchy_re":
        v = v.real + 0j
    elif k.id == "cauchy_im":
        v = v.imag + 0j
    return v


def eval_kernel(k: KernelSpec, x: complex, y: complex) -> complex:
    """K(x, y) for a single pair; x == y is a singularity."""
    if complex(x) == complex(y):
        raise KernelError("kernel singularity")
    return complex(kernel_values(k, complex(x), np.array([complex(y)]))[0])


def size_ratio(k: KernelSpec, pairs) -> float:
    """max |K(x,y)| * |x-y| over sampled pairs (0 for an empty sample)."""
    best = 0.0
    for x, y in pairs:
        if complex(x) == complex(y):
            raise KernelError("size ratio needs distinct pairs")
        best = max(best, abs(eval_kernel(k, x, y)) * abs(complex(x) - complex(y)))
    return best


def holder_ratio(k: KernelSpec, triples) -> float:
    """Worst smoothness quotient over triples (x, x', y).

    Each triple must satisfy |x - x'| <= |x - y|/2; the quotient
    |K(x,y) - K(x',y)| * |x-y|^(1+eps) / |x-x'|^eps is evaluated both as
    written and with the kernel arguments transposed, and the max over the
    sample is returned.
    """
    best = 0.0
    for x, xp, y in triples:
        x, xp, y = complex(x), complex(xp), complex(y)
        if abs(x - xp) > 0.5 * abs(x - y):
            raise KernelError("triple violates the half-distance constraint")
        if x == xp:
            continue
        scale = abs(x - y) ** (1.0 + k.eps) / abs(x - xp) ** k.eps
        d1 = abs(eval_kernel(k, x, y) - eval_kernel(k, xp, y))
        d2 = abs(eval_kernel(k, y, x) - eval_kernel(k, y, xp))
        best = max(best, d1 * scale, d2 * scale)
    return best
