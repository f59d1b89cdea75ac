"""Homotopical structures on finite categories.

Check axioms I-IV of a cylinder-style structure by witness search, compute
the induced homotopy congruence and quotient, and run the same theory in a
finite-dimensional matrix model of Banach spaces.
"""

from .errors import (
    BudgetExceeded,
    CategoryError,
    CongruenceError,
    ContractError,
    DomainError,
    HomotopicalError,
    ParseError,
    StructureError,
    WitnessError,
)
from .fincat import FinCategory, Morphism, ValidationReport, compose, hom_set, load_category, validate_category
from .homotopy import (
    HomotopyPartition,
    HomotopyWitness,
    find_homotopy,
    homotopy_classes,
    verify_congruence,
    witness_reflexive,
    witness_symmetric,
    witness_transitive,
    witness_whisker,
)
from .hstruct import AxiomReport, HomotopicalStructure, check_axioms, load_structure
from .instances import FiniteGroupoid, gen_groupoid_cylinder, gen_trivial
from .quotient import QuotientCategory, homotopy_equivalences, is_contractible, quotient_category

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "CategoryError",
    "CongruenceError",
    "ContractError",
    "DomainError",
    "HomotopicalError",
    "ParseError",
    "StructureError",
    "WitnessError",
    "FinCategory",
    "Morphism",
    "ValidationReport",
    "compose",
    "hom_set",
    "load_category",
    "validate_category",
    "HomotopyPartition",
    "HomotopyWitness",
    "find_homotopy",
    "homotopy_classes",
    "verify_congruence",
    "witness_reflexive",
    "witness_symmetric",
    "witness_transitive",
    "witness_whisker",
    "AxiomReport",
    "HomotopicalStructure",
    "check_axioms",
    "load_structure",
    "FiniteGroupoid",
    "gen_groupoid_cylinder",
    "gen_trivial",
    "QuotientCategory",
    "homotopy_equivalences",
    "is_contractible",
    "quotient_category",
]
