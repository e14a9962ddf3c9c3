"""Python access to the bmsfield library.

Geometry functions take and return plain coefficient lists; series and other
documents are passed as dicts in the same JSON layout the CLI reads.
"""

import json

from ._bmsfield import (
    SL2C,
    ConfigError,
    ConstraintError,
    CoverageError,
    DegreeCapError,
    DomainError,
    InputShapeError,
    SchemaError,
    UnsupportedDirectionError,
    conformal_factor,
    covering_map,
    evaluate,
    lorentz_act_function,
    mass_squared,
    mobius,
    orbit_fixed_point,
    project_T4,
    suite_names,
    unitarity_check,
)
from . import _bmsfield

__all__ = [
    "SL2C", "ConfigError", "ConstraintError", "CoverageError", "DegreeCapError", "DomainError",
    "InputShapeError", "SchemaError", "UnsupportedDirectionError", "conformal_factor", "covering_map",
    "document_kind", "evaluate", "fourier_gauss", "gaussian_norm", "lorentz_act_function", "mass_squared",
    "mobius", "orbit_fixed_point", "project_T4", "roundtrip", "run_suite", "suite_names", "unitarity_check",
]


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def fourier_gauss(a, b, psi):
    """Apply G_{a,b} to a Hermite-series document."""
    return json.loads(_bmsfield.fourier_gauss_json(complex(a), complex(b), _text(psi)))


def gaussian_norm(psi):
    return _bmsfield.gaussian_norm_json(_text(psi))


def document_kind(doc):
    return _bmsfield.document_kind(_text(doc))


def roundtrip(doc):
    """True iff the document survives parse -> serialize -> parse bit for bit."""
    return _bmsfield.roundtrip_text(_text(doc))


def run_suite(name, config=None):
    """Run a verification suite and return its report as a dict."""
    return json.loads(_bmsfield.run_suite_json(name, _text(config or {})))
