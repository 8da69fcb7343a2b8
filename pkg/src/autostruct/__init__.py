"""Automatic structures on finitely generated groups.

A structure pairs a finitely generated group (free abelian, free, or given
by a finite multiplication table) with a regular language over an
inverse-closed generating alphabet.  The package checks the fellow-traveler
conditions that make such a structure automatic or biautomatic, searches
for violating witnesses, certifies conditions inside metric balls, decides
finite-to-one-ness of the evaluation map, and computes the length-difference
and propagated constants that connect the conditions to each other.
"""

from .alphabet import GeneratorAlphabet
from .automata import (FiniteAutomaton, compile_regex, equivalent,
                       reverse_invert, reverse_invert_word)
from .checkers import (BIAUTOMATIC, FINITE_TO_ONE, INVERSE_RIGHT_FT,
                       LENGTH_DIFFERENCE, RIGHT_FT, TWO_SIDED_FT, FTWitness,
                       LengthBound, PropagatedBounds, Status, Structure,
                       Verdict, certify_ft, check_biautomatic_bounded,
                       check_finite_to_one, check_length_difference_bounded,
                       check_right_ft_bounded, check_surjective_bounded,
                       check_two_sided_ft_bounded, length_difference_bound,
                       propagate_constants, search_witness,
                       verify_ft_witness, verify_pump_witness)
from .errors import (AlphabetError, AutomatonError, AutostructError,
                     CheckError, GroupError, PlotError, RegexError,
                     StructureError, StructureFileError)
from .finiteness import PumpWitness, finite_to_one_analysis
from .fixtures import (Fixture, fixture, fixture_control, fixture_file,
                       fixture_z, fixture_z2, two_sided_family,
                       witness_family_z2)
from .groups import (Ball, FiniteTableBackend, FreeAbelianBackend,
                     FreeGroupBackend, GroupBackend, free_reduce,
                     standard_free_abelian, standard_free_group)
from .paths import (HatPath, distance_profile, path_of, reverse_path_word,
                    synchronous_distance, synchronous_distance_at)
from .structfile import (parse_structure, parse_structure_file,
                         serialize_structure, write_structure_file)
from .svgplot import plot_svg

__version__ = "0.1.0"

__all__ = [
    "AlphabetError", "AutomatonError", "AutostructError", "BIAUTOMATIC",
    "Ball", "CheckError", "FINITE_TO_ONE", "FTWitness", "FiniteAutomaton",
    "FiniteTableBackend", "Fixture", "FreeAbelianBackend", "FreeGroupBackend",
    "GeneratorAlphabet", "GroupBackend", "GroupError", "HatPath",
    "INVERSE_RIGHT_FT", "LENGTH_DIFFERENCE", "LengthBound", "PlotError",
    "PropagatedBounds", "PumpWitness", "RIGHT_FT", "RegexError", "Status",
    "Structure", "StructureError", "StructureFileError", "TWO_SIDED_FT",
    "Verdict", "certify_ft", "check_biautomatic_bounded",
    "check_finite_to_one", "check_length_difference_bounded",
    "check_right_ft_bounded", "check_surjective_bounded",
    "check_two_sided_ft_bounded", "compile_regex", "distance_profile",
    "equivalent", "finite_to_one_analysis", "fixture", "fixture_control",
    "fixture_file", "fixture_z", "fixture_z2", "free_reduce",
    "length_difference_bound", "parse_structure", "parse_structure_file",
    "path_of", "plot_svg", "propagate_constants", "reverse_invert",
    "reverse_invert_word", "reverse_path_word", "search_witness",
    "serialize_structure", "standard_free_abelian", "standard_free_group",
    "synchronous_distance", "synchronous_distance_at", "two_sided_family",
    "verify_ft_witness", "verify_pump_witness", "witness_family_z2",
    "write_structure_file",
]
