"""Maximally localized Gabor windows on finite abelian groups.

Groups are products of cyclic groups, phase space is ``A x A^``, and the
maximally localized windows are the multiples of translated subcharacters of
second degree, whose ambiguity functions live on maximal isotropic subgroups.
"""

from .gabor import (
    ClassificationVerdict,
    GaborSystem,
    build_max_localized_basis,
    classify_optimizer,
    classify_pair,
    common_eigenfunction_basis,
    is_orthonormal_basis,
    tiling_check,
)
from .groups import GroupSpec, Homomorphism, Subgroup, annihilator, parse_group, phase_space, transversal
from .lieb import equality_diagnose, lieb_check, matched_subcharacter_pair, p_to_zero_bridge
from .phase import ExactScalar, UnitPhase
from .second_degree import (
    ambiguity_closed_form,
    construct_second_degree,
    cyclic_subcharacter,
    enumerate_second_degree,
    subcharacter,
    verify_second_degree,
)
from .symplectic import (
    IsotropicTriple,
    enumerate_maximal_isotropic,
    is_isotropic,
    is_maximal_isotropic,
    saturate,
    subgroup_from_triple,
    triple_from_subgroup,
)
from .tf import Window, ambiguity, stft, support, tf_shift

__version__ = "0.1.0"

__all__ = [
    "ClassificationVerdict",
    "GaborSystem",
    "build_max_localized_basis",
    "classify_optimizer",
    "classify_pair",
    "common_eigenfunction_basis",
    "is_orthonormal_basis",
    "tiling_check",
    "GroupSpec",
    "Homomorphism",
    "Subgroup",
    "annihilator",
    "parse_group",
    "phase_space",
    "transversal",
    "equality_diagnose",
    "lieb_check",
    "matched_subcharacter_pair",
    "p_to_zero_bridge",
    "ExactScalar",
    "UnitPhase",
    "ambiguity_closed_form",
    "construct_second_degree",
    "cyclic_subcharacter",
    "enumerate_second_degree",
    "subcharacter",
    "verify_second_degree",
    "IsotropicTriple",
    "enumerate_maximal_isotropic",
    "is_isotropic",
    "is_maximal_isotropic",
    "saturate",
    "subgroup_from_triple",
    "triple_from_subgroup",
    "Window",
    "ambiguity",
    "stft",
    "support",
    "tf_shift",
]
