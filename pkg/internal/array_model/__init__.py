"""阵列模型模块"""

from internal.array_model.geometry import ArrayLayout, SourceAngle, SpatialFrequency
from internal.array_model.steering import (
    reference_spatial_freq,
    spatial_freq_at,
    steering_1d,
    element_response,
    tile_response,
    per_tile_steering,
    global_steering,
    monolithic_steering,
    steering_matrix,
    angles_to_spatial_freq,
)

__all__ = [
    "ArrayLayout",
    "SourceAngle",
    "SpatialFrequency",
    "reference_spatial_freq",
    "spatial_freq_at",
    "steering_1d",
    "element_response",
    "tile_response",
    "per_tile_steering",
    "global_steering",
    "monolithic_steering",
    "steering_matrix",
    "angles_to_spatial_freq",
]
