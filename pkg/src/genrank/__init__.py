"""Irredundant generating sets of finite and arithmetic groups.

The package measures two ranks of a group: the largest size of an
irredundant generating set (every element is needed) and the largest
size of a Nielsen-irredundant generating tuple (no elementary move
sequence produces a redundant entry).  For rational matrix tuples it
certifies Zariski density by reduction modulo primes and replays the
certificates bytewise.
"""

from .fp import (FpMatrix, FpScalar, ProjectiveMatrix, element_order,
                 is_prime, projective_canonicalize)
from .groups import (CayleyTableGroup, CyclicPower, GeneratingTuple,
                     GenerationReport, GroupIsomorphism, GroupSpec, Integers,
                     ProductGenerationReport, ProductGroup, ProjSpecialLinear,
                     SpecialLinear, SubgroupClosure, closure,
                     enumerate_isomorphisms, is_generating,
                     is_generating_sl2_fast, is_simple_finite, project_to_psl,
                     product_generates, sl2_fast_applicable,
                     sl2_generation_report)
from .indexed import IndexedGroup
from .redundancy import (InvolutionPairReport, RankSearchResult,
                         RedundancyReport, SearchLimits, WitnessSearchResult,
                         cyclic_power_rank_witness, involution_pair_is_proper,
                         irredundant_witness, is_redundant,
                         max_irredundant_size, z_witness)
from .nielsen import (NielsenMove, OrbitReport, OrbitStatistics, all_moves,
                      apply_move, is_nielsen_redundant, mu_rank,
                      orbit_statistics)
from .arithmetic import (DenominatorClash, DensityCertificate,
                         IrredundancyEvidence, NielsenEvidence,
                         NotCertifiedReport, PlanConfig, PrimePlan,
                         RationalMatrix, RationalTuple, apply_move_rational,
                         assess_irredundancy, assess_nielsen_irredundancy,
                         certify_density, deserialize_certificate,
                         plan_primes, reduce_matrix_mod_p, reduce_tuple_mod_p,
                         replay_certificate, serialize_certificate)

__all__ = [
    "FpMatrix", "FpScalar", "ProjectiveMatrix", "element_order", "is_prime",
    "projective_canonicalize",
    "CayleyTableGroup", "CyclicPower", "GeneratingTuple", "GenerationReport",
    "GroupIsomorphism", "GroupSpec", "Integers", "ProductGenerationReport",
    "ProductGroup", "ProjSpecialLinear", "SpecialLinear", "SubgroupClosure",
    "closure", "enumerate_isomorphisms", "is_generating",
    "is_generating_sl2_fast", "is_simple_finite", "project_to_psl",
    "product_generates", "sl2_fast_applicable", "sl2_generation_report",
    "IndexedGroup",
    "InvolutionPairReport", "RankSearchResult", "RedundancyReport",
    "SearchLimits", "WitnessSearchResult", "cyclic_power_rank_witness",
    "involution_pair_is_proper", "irredundant_witness", "is_redundant",
    "max_irredundant_size", "z_witness",
    "NielsenMove", "OrbitReport", "OrbitStatistics", "all_moves",
    "apply_move", "is_nielsen_redundant", "mu_rank", "orbit_statistics",
    "DenominatorClash", "DensityCertificate", "IrredundancyEvidence",
    "NielsenEvidence", "NotCertifiedReport", "PlanConfig", "PrimePlan",
    "RationalMatrix", "RationalTuple", "apply_move_rational",
    "assess_irredundancy", "assess_nielsen_irredundancy", "certify_density",
    "deserialize_certificate", "plan_primes", "reduce_matrix_mod_p",
    "reduce_tuple_mod_p", "replay_certificate", "serialize_certificate",
]

__version__ = "0.1.0"
