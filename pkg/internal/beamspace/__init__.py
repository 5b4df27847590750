"""波束域变换模块"""

from internal.beamspace.transform import BeamspaceTransform, dft_2d, idft_2d
from internal.beamspace.window import (
    BeamspaceWindow,
    center_bin,
    plan_window,
    apply_window,
    reduce_tile,
    reduce_global,
    expand_global,
    reduction_matrix,
    windowed_steering,
)

__all__ = [
    "BeamspaceTransform", "dft_2d", "idft_2d",
    "BeamspaceWindow", "center_bin", "plan_window", "apply_window", "reduce_tile",
    "reduce_global", "expand_global", "reduction_matrix", "windowed_steering",
]
