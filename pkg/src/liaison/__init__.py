"""Exact computations for liaison of homogeneous ideals over prime fields."""

from .ideal import (HVector, Ideal, IdealError, degree_slice_basis, groebner_basis, hilbert_series,
                    ideal_product, ideal_quotient, ideal_sum, intersect, minimal_generators,
                    minimalized, normal_form, saturate)
from .io import ideal_from_text, ideal_to_text, read_ideal, write_ideal
from .liaison import (CompleteIntersection, GorensteinReport, LinkageError, LinkStep, LinkTrace,
                      SamplingError, basic_double_link, gorenstein_double_link, is_regular_sequence,
                      least_ci_degrees, link, minimal_licci_run, minimal_link, sample_ci)
from .pfaffian import (SkewSymmetricMatrix, buchsbaum_eisenbud_ideal, determinant, pfaffian,
                       random_be_matrix, submaximal_pfaffians, watanabe_u)
from .resolution import (BettiTable, DeficiencyProfile, FreeResolution, GradedFreeModule, GradedMap,
                         betti_table, deficiency_profile, free_resolution, minimal_generator_degrees,
                         minimal_resolution, minimize, syzygies)
from .ring import DEFAULT_PRIME, Polynomial, Ring, RingError

__version__ = "0.1.0"
