"""Abelian closures of infinite words: exact rotations, membership up to a
length bound, heavy/light factors and forbidden-factor subshifts."""
from .exactnum import QuadExt, CircleInterval
from .words import (Alphabet, FiniteWord, InfiniteWord, WindowError, AbelianIndex, abelian_complexity,
                    abelian_equiv, corridor, factor_complexity, is_balanced, parikh, stabilized_index)
from .generators import (ArnouxRauzy, BinaryRotationSpec, BinaryRotationWord, Champernowne, Interleave,
                         InterleaveSpec, MorphicFixedPoint, MorphicImage, MorphismSpec, Periodic, SpecError,
                         TernaryRotationSpec, TernaryRotationWord, arnoux_rauzy, fibonacci,
                         fm_min_complexity_word, palindromic_closure, periodic, preperiodic,
                         thue_morse, tribonacci)
from .closure import (MembershipVerdict, abelian_member, corridor_member, exists_hl_factor,
                      offset_order_member, periodic_census)
from .subshift import ForbiddenSet, abelian_legal, bounded_language, legal, minimal_forbidden
from .grammar import SpecSyntaxError, build, parse_spec, render

__version__ = "0.1.0"
