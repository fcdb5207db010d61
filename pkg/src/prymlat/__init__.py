"""Exact computations with integer lattices carrying an involution."""

from .exact_linalg import (FinAbGroup, IntegerMatrix, SmithDecomposition, cokernel_structure,
                           kernel_basis, saturate, smith_normal_form, solve_integer)
from .gmodule import (FiniteGModule, FreeGModule, GModuleDecomposition, anti_invariants,
                      decompose, group_cohomology, invariants, prym_part, torsion_prym_check)
from .lattice import (BilinearLattice, DiscriminantGModule, InvolutionLattice, PrymLattice,
                      brauer_K, discriminant_group, lattice_determinant, modify,
                      orthogonal_complement, prym_lattice, scale, verify_brauer_sequences,
                      verify_det_formula, verify_prym_correspondence, verify_rank_formula)

__version__ = "0.1.0"
