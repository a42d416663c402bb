"""Exact intersection theory of genus-0 boundary divisors and its Kunneth engine."""

from .basis import (
    BasisElement,
    PairingMatrices,
    dual_basis_coeffs,
    enumerate_basis,
    gram,
    precedes,
    star,
    star_sign,
    t_entry,
    t_entry_bilinear,
    tree_expansion,
)
from .cohft import (
    FormalPotential,
    FrobeniusData,
    correlators_from_potential,
    cubic_theory,
    higher_product,
    kunneth_potential,
    operadic_correlator,
    point_theory,
    potential_from_correlators,
    tensor_correlators,
    tensor_frobenius,
    tensor_higher_product,
    wdvv_check,
)
from .errors import CapabilityError, InputError, VerificationError
from .intersection import good_orientation, pairing, pairing_bilinear
from .keelring import (
    RingElement,
    graded_dimensions,
    integral,
    normal_form,
    oracle_pairing,
    rewrite_square,
)
from .trees import (
    DivisorMonomial,
    LabelSet,
    MultiplicityTree,
    StableTree,
    contract_edge,
    depth_and_omega,
    enumerate_stable_trees,
    family_from_tree,
    partition_profile,
    tree_from_family,
)

__version__ = "0.1.0"
