"""Root perturbation under linear operators on polynomials of bounded degree.

The algebra generated by differentiation, star products and apolarity, four
distances between root multisets, worst-case displacement constants and a
classifier for operators that move roots by a bounded amount.
"""

from .dalgebra import (DAlgOperator, MatrixOperator, apply, apply_operator, compose, factor,
                       hk_operator, identity, invert, matrix_of, membership, shift_operator,
                       varpi, varpi_inv)
from .distances import bottleneck_matching, dist_F, dist_F_bruteforce, dist_h, dist_H, dist_m
from .kfunctionals import (k_bounds_t13, k_F_vs_k_H_factor, k_H_exact, k_h_exact,
                           k_h_inverse_h1_bracket, k_hk_exact, quadratic_image_roots)
from .poly import Poly, degree, from_phi, from_roots, monomial, phi, phi_coords
from .roots import RootMultiset, find_roots
from .search import SearchConfig, classify, divergence_witness, empirical_sup
from .star import (ClosedDisk, ClosedHalfPlane, DiskExterior, check_composite_containment,
                   check_grace, check_operator_grace, is_apolar, star_m, star_n)

__version__ = "0.1.0"
