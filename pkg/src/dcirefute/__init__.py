"""Certified refutation of the DCI property for A x| C8 via 2-closed permutation groups."""

__version__ = "0.1.0"

from .errors import CapacityError, DomainError, VerificationError
from .perm import Permutation, decode, encode
from .groups import PermGroup
from .construction import ConstructionParams, build, verify_bundle
from .dci import babai_refutation, dci_brute
from .certificate import DciCertificate, verify_certificate

__all__ = [
    "CapacityError", "DomainError", "VerificationError",
    "Permutation", "encode", "decode", "PermGroup",
    "ConstructionParams", "build", "verify_bundle",
    "babai_refutation", "dci_brute", "DciCertificate", "verify_certificate",
]
