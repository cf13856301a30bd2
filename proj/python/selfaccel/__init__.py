"""Accelerating waves under complex comoving potentials.

Thin Python layer over the C++ core: closed-form families, split-step and
Crank-Nicolson propagation, diagnostics, residual adjudication and scenarios.
"""

import json

from ._core import (
    DARK_SOLITON_MU_SIGN,
    NONLINEAR_MU_SHIFT_COEFFICIENT,
    Error,
    FrameParams,
    Grid1D,
    Potential,
    SolutionFamily,
    airy_ai,
    airy_ai_prime,
    assemble_lab_frame,
    centroid,
    compare_fields,
    fit_parabola,
    intensity_flatness,
    nonlinear_mu_shift,
    norm,
    normalize_config,
    ode_residuals,
    pde_residual,
    peak_position,
    preset_config,
    preset_names,
    propagate,
    synthesize_table,
)
from . import _core


def adjudicate_dark_soliton_mu():
    """Decision record (dict) for the dark-soliton frame constant sign."""
    return json.loads(_core.adjudicate_dark_soliton_mu_json())


def adjudicate_nonlinear_shift():
    """Decision record (dict) for the nonlinear mu-shift coefficient."""
    return json.loads(_core.adjudicate_nonlinear_shift_json())


def run_config(text, out_dir, base_dir=".", resolution_scale=1.0):
    """Run a scenario given as config text; returns the manifest as a dict."""
    return json.loads(_core.run_config_json(text, str(out_dir), str(base_dir), resolution_scale))


def describe_family(name):
    return json.loads(_core.describe_family_json(name))


__all__ = [name for name in dir() if not name.startswith("_") and name != "json"]
