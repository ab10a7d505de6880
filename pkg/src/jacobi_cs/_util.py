from __future__ import annotations

import math
import os
from fractions import Fraction


def rel_err(a, b) -> float:
    """Absolute error below magnitude 1, relative error above it."""
    return abs(a - b) / max(1.0, abs(a), abs(b))


def wrap_angle(theta: float) -> float:
    """Map an angle into (-pi, pi]."""
    t = math.remainder(theta, 2 * math.pi)
    return math.pi if t == -math.pi else t


def parse_number(text: str) -> Fraction | float:
    """Parse ``3/2``, ``0.75`` (both exact) or ``1e-3`` style reals."""
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        return float(text)


def parse_complex(text: str) -> complex:
    """Parse ``1.5``, ``-2+0.5j``, ``0.3-1i`` or ``re,im``."""
    s = text.strip().replace(" ", "")
    if "," in s:
        re, im = s.split(",", 1)
        return complex(float(re), float(im))
    return complex(s.replace("i", "j"))


def complex_json(c) -> dict:
    c = complex(c)
    return {"re": c.real, "im": c.imag}


def thread_cap(default: int | None = None) -> int:
    env = os.environ.get("JACOBI_CS_THREADS")
    if env:
        return max(1, int(env))
    return default or min(8, os.cpu_count() or 1)
