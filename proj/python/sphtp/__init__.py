"""Spherical tensor products: exact angular momentum algebra, spherical
harmonic transforms and Clebsch-Gordan, Gaunt and vector signal tensor
products."""

import json as _json

from ._core import (
    cg,
    cg_exact,
    cgtp_path,
    expressivity_count,
    find_valid_ells,
    generalized_gaunt,
    projected_flops,
    sh,
    simulate_cgtp_path,
    vstp_rules,
    wigner_9j,
    wigner_9j_exact,
    wigner_d,
)
from ._core import transform_forward as _transform_forward
from ._core import transform_inverse as _transform_inverse
from ._core import verify as _verify

__all__ = [
    "cg",
    "cg_exact",
    "cgtp_path",
    "expressivity_count",
    "find_valid_ells",
    "generalized_gaunt",
    "projected_flops",
    "sh",
    "simulate_cgtp_path",
    "transform_forward",
    "transform_inverse",
    "verify",
    "vstp_rules",
    "wigner_9j",
    "wigner_9j_exact",
    "wigner_d",
]


def transform_inverse(coeffs, Lg=None):
    """Coefficient document (dict) to a sample dump (dict)."""
    return _json.loads(_transform_inverse(_json.dumps(coeffs), -1 if Lg is None else Lg))


def transform_forward(samples, L=None):
    """Sample dump (dict) to a coefficient document (dict)."""
    return _json.loads(_transform_forward(_json.dumps(samples), -1 if L is None else L))


def verify(level="quick", filter="", seed=42, tolerance=1e-10):
    """Run the invariant suites and return the parsed report."""
    return _json.loads(_verify(level, filter, seed, tolerance))
