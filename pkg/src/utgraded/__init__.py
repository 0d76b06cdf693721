"""Exact canonical forms for group gradings on upper block triangular
matrix algebras: validation, decomposition into an elementary-graded block
triangular algebra tensored with a graded division algebra, and independent
verification of the resulting graded isomorphism.
"""

from .algebras import AbstractGradedAlgebra, GradedDivisionAlgebra
from .construct import (Cocycle, division_realization_2x2, elementary_grading,
                        matrix_realization, pauli_cocycle,
                        quadratic_realization_2x2, tensor_grading,
                        trivial_cocycle, twisted_group_algebra,
                        validate_cocycle)
from .decompose import (BlockDecomposition, CanonicalForm, build_eta,
                        build_psi, compose_chain, decompose, decompose_block,
                        homogeneous_left_unit, homogenize_idempotents,
                        tensor_block_algebra, weak_iso)
from .errors import AlgebraError
from .fields import PrimeField, Rationals, char_precondition, field_from_json
from .grading import (BlockStructure, UTGrading, apply_inner_automorphism,
                      homogeneous_component, is_subspace_graded,
                      jacobson_radical, project_homogeneous,
                      radical_subspace, right_annihilator, validate_grading)
from .groups import (FiniteGroup, FreeAbelianGroup, ProductGroup, cyclic_group,
                     dihedral_group_4, free_abelian_group, group_from_json,
                     group_validate, klein_four_group, product_group,
                     quaternion_group, symmetric_group_3)
from .matrices import Matrix, Subspace, invert_or_rank, kernel_basis, kronecker, solve
from .verify import (GradedLinearMap, InstancePlan, check_graded_iso,
                     compose_with_inverse, generate_instance,
                     radical_gradedness_sweep)

__version__ = "0.1.0"
