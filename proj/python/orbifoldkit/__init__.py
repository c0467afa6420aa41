"""Exact-arithmetic analysis of sphere maps obtained from affine torus
endomorphisms modulo a finite rotation group.

The heavy lifting lives in the compiled extension ``orbifoldkit._core``;
this package re-exports its JSON-in/JSON-out operations.  Instances,
portraits, and reports use the same canonical JSON forms as the
``orbifoldkit`` command-line tool, so results are byte-identical across the
two front ends for equal options and seeds.
"""

from orbifoldkit._core import (
    Error,
    InputError,
    InternalCheckFailure,
    analyze,
    canonical_instance,
    enumerate_sweep,
    figure,
    portrait,
    quotient,
    sweep,
)

__all__ = [
    "Error",
    "InputError",
    "InternalCheckFailure",
    "analyze",
    "canonical_instance",
    "enumerate_sweep",
    "figure",
    "portrait",
    "quotient",
    "sweep",
]

__version__ = "0.1.0"
