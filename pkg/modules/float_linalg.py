# modules/float_linalg.py
# -*- coding: utf-8 -*-
"""
浮點鏡像（抽樣 / 梯度下降用，不需要精確）：
- 部分選主元 LU，一次處理一整疊矩陣 (batch, n, n)
- |pivot| <= PIVOT_RTOL * 最大列幅度（∞-範數）就判定奇異
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from config import PIVOT_RTOL
from modules.errors import DimensionMismatch, MatrixParseError, SingularMatrix


@dataclass(frozen=True, eq=False)
class FloatMatrix:
    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise DimensionMismatch(f"FloatMatrix 必須是非空方陣，收到 shape={arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise MatrixParseError("FloatMatrix 不可含 NaN / Inf")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def n(self) -> int:
        return self.data.shape[0]


def as_array(A) -> np.ndarray:
    if isinstance(A, FloatMatrix):
        return A.data
    return np.asarray(A, dtype=float)


def lu_factor_batch(stack: np.ndarray, rtol: float = PIVOT_RTOL):
    """
    回傳 (LU, perm, singular)：
      LU[b] 下三角（單位對角，不存）+ 上三角合併存放；perm[b] 為列置換；singular[b] 為奇異旗標。
    奇異的那幾個仍會跑完（pivot 以 1 代替），結果不可用。
    """
    A = np.array(stack, dtype=float)
    if A.ndim == 2:
        A = A[None]
    b, n, _ = A.shape
    idx = np.arange(b)
    perm = np.tile(np.arange(n), (b, 1))
    scale = np.abs(A).sum(axis=2).max(axis=1)
    singular = np.zeros(b, dtype=bool)

    for k in range(n):
        col = np.abs(A[:, k:, k])
        p = k + col.argmax(axis=1)
        singular |= col.max(axis=1) <= rtol * scale

        row_k = A[idx, k, :].copy()
        A[idx, k, :] = A[idx, p, :]
        A[idx, p, :] = row_k
        pk = perm[idx, k].copy()
        perm[idx, k] = perm[idx, p]
        perm[idx, p] = pk

        piv = np.where(singular, 1.0, A[:, k, k])
        piv = np.where(piv == 0.0, 1.0, piv)
        A[:, k + 1:, k] /= piv[:, None]
        A[:, k + 1:, k + 1:] -= A[:, k + 1:, k, None] * A[:, None, k, k + 1:]

    return A, perm, singular


def inv_batch(stack: np.ndarray, rtol: float = PIVOT_RTOL):
    """整疊求反：(inverses, singular)"""
    LU, perm, singular = lu_factor_batch(stack, rtol)
    b, n, _ = LU.shape
    # 右手邊 = P·I
    X = np.zeros((b, n, n))
    X[np.arange(b)[:, None], np.arange(n)[None, :], perm] = 1.0

    for i in range(n):
        X[:, i, :] -= np.einsum("bj,bjc->bc", LU[:, i, :i], X[:, :i, :])
    for i in range(n - 1, -1, -1):
        X[:, i, :] -= np.einsum("bj,bjc->bc", LU[:, i, i + 1:], X[:, i + 1:, :])
        d = np.where(singular, 1.0, LU[:, i, i])
        d = np.where(d == 0.0, 1.0, d)
        X[:, i, :] /= d[:, None]
    return X, singular


def inverse_norm_sq_batch(stack: np.ndarray, rtol: float = PIVOT_RTOL):
    """‖A⁻¹‖_F² for a stack；奇異者給 inf"""
    X, singular = inv_batch(stack, rtol)
    out = np.einsum("bij,bij->b", X, X)
    out[singular] = np.inf
    return out, singular


def float_invert(A, rtol: float = PIVOT_RTOL) -> np.ndarray:
    X, singular = inv_batch(as_array(A)[None], rtol)
    if singular[0]:
        raise SingularMatrix("浮點 LU 判定奇異（pivot 低於門檻）")
    return X[0]


def inverse_norm_sq_float(A, rtol: float = PIVOT_RTOL) -> float:
    X = float_invert(A, rtol)
    return float(np.sum(X * X))
