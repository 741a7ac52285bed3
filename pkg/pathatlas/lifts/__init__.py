from .trivialization import (
    PathTrivialization, build_trivialization, tangent_trivialization,
    represent_section, section_pieces, transport, holonomy
)
from .fields import FieldRep, NormEquivalence, represent_field, field_components, covariant_derivative, norm_equivalence
from .compat import AutomorphismField, LiftAutomorphismField, compatibility_automorphisms, lift_compatibility
from .deformation import Deformation, deformation_tangent, transport_deformation
