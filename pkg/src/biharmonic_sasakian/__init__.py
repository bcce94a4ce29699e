"""Construction and numerical verification of proper-biharmonic Legendre
curves in Sasakian space forms and of biharmonic Hopf cylinders over Takagi
hypersurfaces."""

from .models import (
    DeformedSphere,
    FlatSasakian,
    SpaceFormModel,
    UnitSphere,
    deformed_sphere_for,
    model_from_descriptor,
)

__all__ = [
    "DeformedSphere",
    "FlatSasakian",
    "SpaceFormModel",
    "UnitSphere",
    "deformed_sphere_for",
    "model_from_descriptor",
]
__version__ = "0.1.0"
