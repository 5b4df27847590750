"""
数据导出模块

快拍数据立方体与距离-多普勒图的平铺二进制格式
"""

from internal.data.binary_io import write_array, read_array, sidecar_path

__all__ = [
    'write_array',
    'read_array',
    'sidecar_path',
]
