"""Integral Khovanov homology of braid closures, with torsion surveys."""

__version__ = "0.1.0"

from .diagram import (SmoothedBraidWord, TorusFamilySpec, WordError, flat_two_cabling_word,
                      parse_word, stats, torus, torus_word)
from .cube import ResourceLimitExceeded, build_differential, generator_count, kauffman_bracket
from .homology import (AbelianGroup, ClassicalHomologyTable, FramedHomologyTable,
                       classical_homology, euler_polynomial, full_homology, reduced_homology,
                       to_classical)
from .les import (critical_pairs, les_instance, torus_les_instance, verify_general,
                  verify_instance, verify_unknot_case)
