"""Structural similarity: circular fingerprints and edge-overlap distance."""

from .fingerprints import Fingerprint, IncomparableFingerprints, morgan_fingerprint, tanimoto
from .mces import McesResult, mces, mces_dissimilarity

__all__ = [
    "Fingerprint",
    "IncomparableFingerprints",
    "McesResult",
    "mces",
    "mces_dissimilarity",
    "morgan_fingerprint",
    "tanimoto",
]
