from ._core import (
    Solution,
    bessel_j,
    bessel_j_first_zero,
    rescale_lambda,
    solve,
    unit_ball_volume,
)

__version__ = "0.1.0"

__all__ = [
    "Solution",
    "bessel_j",
    "bessel_j_first_zero",
    "rescale_lambda",
    "solve",
    "unit_ball_volume",
]
