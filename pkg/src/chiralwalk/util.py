"""Small shared helpers: angle reduction and deterministic float formatting."""

from __future__ import annotations

import math

import numpy as np

TWO_PI = 2.0 * math.pi


def wrap_angle(phi):
    """Reduce an angle (scalar or array) to the interval (-pi, pi]."""
    r = np.remainder(np.asarray(phi, dtype=float) + math.pi, TWO_PI) - math.pi
    # remainder maps exact odd multiples of pi to -pi; fold them back to +pi
    r = np.where(r <= -math.pi, r + TWO_PI, r)
    if np.ndim(phi) == 0:
        return float(r)
    return r


def fmt_float(x) -> str:
    """Format a float with 12 significant digits for byte-stable CSV output."""
    return f"{float(x):.12g}"
