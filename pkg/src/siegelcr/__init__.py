"""Exact computations for model almost complex structures on the Siegel half-plane.

Modules: ``algebra`` (exact polynomials in z, zbar), ``structures`` (model
structures, frames, Nijenhuis tensor), ``levi`` (Levi form), ``maps``
(pseudo-holomorphy and boundary checks), ``autgroup`` (automorphism group),
``jets`` (2-jet reconstruction), ``sampling`` (floating-point oracle) and
``cli``.
"""

from .algebra import ComplexRational, Poly, reduce_mod_boundary, rho
from .autgroup import Automorphism, compose, invert, make_dilation, make_isotropy, make_translation
from .errors import (AutomorphismError, BoundaryError, ConstraintViolation, DimensionError, IntegrableCaseError,
                     ParseError, SiegelCRError, TruncationError, ValidationError)
from .jets import extract_jet2, normalize_basepoints, reconstruct, verify_constraints, verify_extension
from .levi import levi_form, levi_matrix
from .maps import PolyMap, check_boundary_invariance, check_component_system, check_cr_on_boundary, check_pseudoholomorphic
from .structures import ModelStructure, SimpleModelStructure, complexify, tangent_frame, verify_structure

__version__ = "0.1.0"
