"""Tolerance defaults and the run configuration used by the command line."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

BOUNDARY_EPS = 1e-12
SU11_TOL = 1e-12
SERIES_CUTOFF = 1e-4  # below this |z| the removable singularities use Taylor series
LAMBDA_SERIES_CUTOFF = 1e-8


@dataclass(frozen=True)
class Tolerances:
    boundary: float = BOUNDARY_EPS
    group: float = 1e-12
    cocycle: float = 1e-10
    kernel: float = 1e-8
    metric_fd: float = 1e-6
    christoffel_fd: float = 1e-5
    fock: float = 1e-8
    commutator: float = 1e-12
    dynamics: float = 1e-8
    coords: float = 1e-12

    def __post_init__(self):
        for f in dataclasses.fields(self):
            if not getattr(self, f.name) > 0:
                raise ValueError(f"tolerance {f.name} must be positive")


@dataclass
class RunConfig:
    """Settings shared by every CLI command.

    Precedence, lowest first: dataclass defaults, ``key = value`` config file,
    command-line flags.
    """

    k: Fraction | float = Fraction(1)
    mode: str = "strict"
    tol: Tolerances = field(default_factory=Tolerances)
    cutoff_n: int = 60
    cutoff_m: int = 60
    seed: int = 0
    out: Path | None = None
    fmt: str = "json"

    def __post_init__(self):
        if self.cutoff_n < 2 or self.cutoff_m < 2:
            raise ValueError("cutoffs must be >= 2")
        if self.mode not in ("strict", "relaxed"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.fmt not in ("json", "csv"):
            raise ValueError(f"unknown format {self.fmt!r}")


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse a ``key = value`` file. ``#`` starts a comment; quotes are stripped."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("["):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value.strip("'\"")
    return out
