"""Certifiers: sound upper bounds on the number of large values."""

from typing import Any

from ..errors import InvalidParameter
from .base import SCHEMA_VERSION, Certificate, LVBound, evaluate
from .mmstar import MMStarCertificate, cert_mmstar
from .operator import OperatorNormCertificate, cert_operator
from .power import PowerCertificate, cert_power, duplicated_index_vector, tensor_power
from .schatten import (
    SchattenCertificate,
    cert_schatten,
    flat_norm,
    flattening_operator,
    schatten_flattening,
    schatten_form,
)

CERTIFICATE_TYPES: dict[str, type[Certificate]] = {
    OperatorNormCertificate.method: OperatorNormCertificate,
    PowerCertificate.method: PowerCertificate,
    MMStarCertificate.method: MMStarCertificate,
    SchattenCertificate.method: SchattenCertificate,
}


def certificate_from_dict(record: dict[str, Any]) -> Certificate:
    """Rebuild a certificate from its JSON record."""
    method = record.get("method")
    if method not in CERTIFICATE_TYPES:
        raise InvalidParameter(f"Unknown certificate method: {method}")
    if record.get("schema_version") != SCHEMA_VERSION:
        raise InvalidParameter(
            f"Unsupported certificate schema_version {record.get('schema_version')}"
        )
    T, N = record["dims"]
    return CERTIFICATE_TYPES[method](T=int(T), N=int(N), **record["constants"])


__all__ = [
    "CERTIFICATE_TYPES",
    "Certificate",
    "LVBound",
    "MMStarCertificate",
    "OperatorNormCertificate",
    "PowerCertificate",
    "SchattenCertificate",
    "cert_mmstar",
    "cert_operator",
    "cert_power",
    "cert_schatten",
    "certificate_from_dict",
    "duplicated_index_vector",
    "evaluate",
    "flat_norm",
    "flattening_operator",
    "schatten_flattening",
    "schatten_form",
    "tensor_power",
]
