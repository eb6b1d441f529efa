"""Binary proximity localization: grid-mapped uncertainty and Monte Carlo sweeps."""

from bpsloc.geometry import Beacon, Deployment, Domain, Point, Signature, detects, signature_at
from bpsloc.sigmap import (
    GridSpec,
    LocalizationResult,
    SignatureMap,
    build_signature_map,
    expected_uncertainty,
    localize,
    uncertainty_for_reading,
)

__version__ = "0.1.0"

__all__ = [
    "Beacon",
    "Deployment",
    "Domain",
    "GridSpec",
    "LocalizationResult",
    "Point",
    "Signature",
    "SignatureMap",
    "build_signature_map",
    "detects",
    "expected_uncertainty",
    "localize",
    "signature_at",
    "uncertainty_for_reading",
]
