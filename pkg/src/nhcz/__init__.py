"""Singular integral operators over discrete non-doubling planar measures.

The package evaluates the operator T(phi dmu)(x) = sum K(x, y) phi(y) w(y)
for singular kernels under a linear-growth (rather than doubling)
condition, together with its truncations, maximal variants, a threshold
disk decomposition, and an executable suite of the inequalities that
govern them. Hot per-center sweeps run on a compiled core when available
(``nhcz.core.BACKEND`` tells which lane is active).
"""

from .core import BACKEND
from .measure import (DiscreteMeasure, GeneratorSpec, ahlfors_constant,
                      distribution_function, from_atoms, generate,
                      load_measure, normalize_ahlfors, save_measure,
                      total_variation, weak_l1_norm)
from .kernel import (KernelSpec, cauchy, cauchy_im, cauchy_re, custom_kernel,
                     eval_kernel, get_kernel, holder_ratio, kernel_values,
                     size_ratio)
from .ball_index import BallIndex, ball_mass, build_index, build_table, \
    suffix_sum
from .transform import (OperatorNormEstimate, apply_T, apply_Tr, apply_Tsharp,
                        apply_Tstar, opnorm_dense, opnorm_l2, transform_field,
                        tsharp_with_witness)
from .maximal import (DoublingStop, doubling_stop, hl_maximal, maximal_field,
                      radial_maximal, restricted_maximal)
from .decomposition import (CZDecomposition, cz_disks, dumps_decomposition,
                            mass_function, mass_integral, sigma_r,
                            sigma_sharp, sigma_values)
from .verify import (CheckReport, ConstantFit, check_cotlar, check_key_lemma,
                     check_maximal_bounds, check_obvious, check_star,
                     check_sublemma, check_theorem2, check_truncation81,
                     check_weak_type_T, check_weak_type_Tsharp, default_nu,
                     default_probes, fit_constants, report_json,
                     summary_line, write_report)

__version__ = "0.1.0"
