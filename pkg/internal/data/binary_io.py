"""
平铺二进制导出

文件头（小端）：
    magic     4 字节  b'TBRC'
    version   uint16
    kind      uint8   0 = 实数 float64，1 = 复数（实部、虚部交错的 float64）
    endian    uint8   0 = 小端
    ndim      uint32
    dims      ndim 个 uint64
随后为 C 顺序数据。同名 .json 旁注文件记录维度、类型及说明。
"""

import json
import os
import struct
from typing import Dict, Any, Optional, Tuple

import numpy as np

from internal.utils.errors import DimensionError

MAGIC = b'TBRC'
VERSION = 1
KIND_REAL = 0
KIND_COMPLEX = 1
_HEADER = struct.Struct('<4sHBBI')


def sidecar_path(path: str) -> str:
    return f"{path}.json"


def write_array(path: str, array: np.ndarray, meta: Optional[Dict[str, Any]] = None) -> Tuple[str, str]:
    """
    写出数组及旁注文件

    Returns:
        (数据文件路径, 旁注文件路径)
    """
    array = np.asarray(array)
    kind = KIND_COMPLEX if np.iscomplexobj(array) else KIND_REAL
    data = np.ascontiguousarray(array, dtype='<c16' if kind == KIND_COMPLEX else '<f8')

    os.makedirs(os.path.dirname(path) or '.', exist_ok=True)
    with open(path, 'wb') as f:
        f.write(_HEADER.pack(MAGIC, VERSION, kind, 0, data.ndim))
        f.write(struct.pack(f'<{data.ndim}Q', *data.shape))
        f.write(data.tobytes())

    sidecar = {
        'format': 'tbrc',
        'version': VERSION,
        'dims': list(data.shape),
        'dtype': 'complex128 (interleaved re/im float64)' if kind == KIND_COMPLEX else 'float64',
        'endianness': 'little',
        'meta': meta or {},
    }
    with open(sidecar_path(path), 'w', encoding='utf-8') as f:
        json.dump(sidecar, f, indent=2, ensure_ascii=False, sort_keys=True)
    return path, sidecar_path(path)


def read_array(path: str) -> np.ndarray:
    """读取 write_array 写出的数组"""
    with open(path, 'rb') as f:
        magic, version, kind, endian, ndim = _HEADER.unpack(f.read(_HEADER.size))
        if magic != MAGIC:
            raise DimensionError(f"不是 TBRC 文件: {path}")
        if version != VERSION or endian != 0:
            raise DimensionError(f"不支持的版本或字节序: version={version}, endian={endian}")
        shape = struct.unpack(f'<{ndim}Q', f.read(8 * ndim))
        dtype = '<c16' if kind == KIND_COMPLEX else '<f8'
        data = np.frombuffer(f.read(), dtype=dtype)
    if data.size != int(np.prod(shape, dtype=np.int64)):
        raise DimensionError(f"数据长度 {data.size} 与文件头维度 {shape} 不符")
    return data.reshape(shape).copy()
