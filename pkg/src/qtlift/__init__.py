"""Quantum tori, sl_l over them, interlaced extensions and lifts of Int(g)."""
from __future__ import annotations

from .errors import *  # noqa: F401,F403
from .scalars import FieldSpec, Scalar, field
from .qtorus import (TorusContext, TorusElement, center_membership, central_grading_group,
                     format_element, is_fgc, is_unit, parse_element, split_center_commutator,
                     torus_mul, unit_inverse)
from .matlie import MatrixOverTorus, beta_eps, lie_torus_axioms_check, mat_bracket, sl2_triple
from .dergroup import DerivationAlgebra, DerivationSpec, der_apply, der_bracket, skew_check
from .glwords import (DiagUnit, Elementary, GLWord, hd_membership, normalize_word, parse_word,
                      stabilize, whitehead_pair, word_to_matrix)
from .interlace import (EALA, Functional, IEContext, IEElement, eala_axiom_check, eala_build,
                        ie_bracket, sigma, tau_bgk)
from .lift import (CompositeAut, ElementaryLift, SpecialAut, compose, conjugacy_pipeline,
                   enlarge_context, lift_elementary, lift_int_word, special_apply, special_verify)

__version__ = "0.1.0"
