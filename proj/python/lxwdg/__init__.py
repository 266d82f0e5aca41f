"""Lax-Wendroff discontinuous Galerkin solver for 1D conservation laws."""

import json

from . import _core
from ._core import ConfigError, DomainError, LimiterFailure, default_cfl, gauss_legendre, legendre_phi

__all__ = [
    "ConfigError",
    "DomainError",
    "LimiterFailure",
    "convergence",
    "default_cfl",
    "gauss_legendre",
    "legendre_phi",
    "riemann",
    "riemann_exact",
    "run",
]


def _settings(settings, overrides):
    merged = dict(settings or {})
    merged.update(overrides)
    return {str(k): _text(v) for k, v in merged.items()}


def _text(value):
    if isinstance(value, bool):
        return "on" if value else "off"
    if isinstance(value, (list, tuple)):
        return ",".join(str(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def run(settings=None, **overrides):
    """Run one simulation; returns the summary dict and sampled x, q arrays."""
    out = _core.run(_settings(settings, overrides))
    out["summary"] = json.loads(out["summary"])
    return out


def convergence(settings=None, **overrides):
    """Relative L2 errors as (order, N, error, rate) rows."""
    return _core.convergence(_settings(settings, overrides))


def riemann(settings=None, **overrides):
    """Run a Riemann problem; returns the L1 error and sampled numerical and exact profiles."""
    out = _core.riemann(_settings(settings, overrides))
    out["summary"] = json.loads(out["summary"])
    return out


def riemann_exact(equation, left, right, speeds, constant=None):
    """Exact primitive states at the similarity coordinates x/t."""
    if constant is None:
        constant = 1.4 if equation == "euler" else 1.0
    return _core.riemann_exact(equation, list(left), list(right), list(speeds), float(constant))
