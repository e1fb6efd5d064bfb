"""Diffusion coefficients, periodic-orbit asymptotics, and escape rates for
one-dimensional piecewise-linear maps with holes."""

from .diffusion import (
    ChildDiffusion,
    DiffusionResult,
    PositionRow,
    ScanFamily,
    T_approx,
    T_exact,
    child_configs,
    child_diffusion,
    diffusion_coefficient,
    phi_cumulative,
    position_scan,
    scan_config,
    scan_mean,
    t_single,
)
from .maps import (
    ConfigError,
    MapKind,
    ModelConfig,
    OrbitDecomposition,
    Placement,
    decompose_orbit,
    jump,
    step_lifted,
    step_reduced,
)
from .rational import ExactRational, float17, format_rational, parse_rational

__all__ = [
    "ChildDiffusion",
    "ConfigError",
    "DiffusionResult",
    "ExactRational",
    "MapKind",
    "ModelConfig",
    "OrbitDecomposition",
    "Placement",
    "PositionRow",
    "ScanFamily",
    "T_approx",
    "T_exact",
    "child_configs",
    "child_diffusion",
    "decompose_orbit",
    "diffusion_coefficient",
    "float17",
    "format_rational",
    "jump",
    "parse_rational",
    "phi_cumulative",
    "position_scan",
    "scan_config",
    "scan_mean",
    "step_lifted",
    "step_reduced",
    "t_single",
]

__version__ = "0.1.0"
