# utils/canonical.py
# -*- coding: utf-8 -*-
"""
{0,1} 矩陣在列/行置換下的標準型：
每列編成整數（最高位 = 第 0 行），對每個行置換把列排序，取字典序最小者。
‖A⁻¹‖_F 在列/行置換下不變，所以同一類只需算一次。
"""
from __future__ import annotations

from itertools import permutations


def row_to_int(row) -> int:
    v = 0
    for x in row:
        v = (v << 1) | int(x)
    return v


def int_to_row(v: int, n: int) -> tuple:
    return tuple((v >> (n - 1 - j)) & 1 for j in range(n))


def canonical_form(rows) -> tuple:
    """回傳列整數的排序 tuple（最小代表元）"""
    rows = [tuple(int(x) for x in r) for r in rows]
    n = len(rows)
    best = None
    for perm in permutations(range(n)):
        cand = tuple(sorted(row_to_int(tuple(r[p] for p in perm)) for r in rows))
        if best is None or cand < best:
            best = cand
    return best


def transpose_rows(rows) -> tuple:
    return tuple(zip(*rows))
