"""hullab: polynomial hulls, separation certificates, and automorphism
dynamics on C* x C, at desk scale."""

from .geometry import (
    ComplexPoint,
    CurveSpec,
    SceneGeometry,
    SetLabel,
    SetSample,
    build_default_geometry,
    sample_set,
    set_membership,
    set_separation,
    totally_real_defect,
    validate_geometry,
    winding_number,
)

__all__ = [
    "ComplexPoint",
    "CurveSpec",
    "SceneGeometry",
    "SetLabel",
    "SetSample",
    "build_default_geometry",
    "sample_set",
    "set_membership",
    "set_separation",
    "totally_real_defect",
    "validate_geometry",
    "winding_number",
]
