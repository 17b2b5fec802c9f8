# modules/matrix_io.py
# -*- coding: utf-8 -*-
"""
矩陣文字格式：
    第一行 n，接著 n 行、每行 n 個以空白分隔的元素（整數 / 小數 / p/q）
JSON 鏡像：
    {"n": int, "entries": [["p/q", ...], ...]}（設計矩陣另加 kind / normalized / k）
"""
from __future__ import annotations

import json
from fractions import Fraction

from modules.errors import MatrixParseError
from modules.exact_linalg import RationalMatrix, to_rational


def rational_str(x: Fraction) -> str:
    """標準字串：整數寫 '3'，其餘 'p/q'"""
    return str(Fraction(x))


def parse_text(text: str) -> RationalMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise MatrixParseError("空的矩陣檔")
    try:
        n = int(lines[0])
    except ValueError as e:
        raise MatrixParseError(f"第一行必須是階數 n，收到 {lines[0]!r}") from e
    if n < 1:
        raise MatrixParseError(f"階數必須 ≥ 1，收到 {n}")
    body = lines[1:]
    if len(body) != n:
        raise MatrixParseError(f"宣告 n={n}，但有 {len(body)} 行元素")
    rows = []
    for i, ln in enumerate(body):
        toks = ln.split()
        if len(toks) != n:
            raise MatrixParseError(f"第 {i + 1} 列有 {len(toks)} 個元素，應為 {n}")
        rows.append(tuple(to_rational(t) for t in toks))
    return RationalMatrix(tuple(rows))


def to_text(A: RationalMatrix) -> str:
    out = [str(A.n)]
    for r in A.rows:
        out.append(" ".join(rational_str(v) for v in r))
    return "\n".join(out) + "\n"


def to_json_obj(A: RationalMatrix, **meta) -> dict:
    obj = dict(meta)
    obj["n"] = A.n
    obj["entries"] = [[rational_str(v) for v in r] for r in A.rows]
    return obj


def from_json_obj(obj: dict) -> RationalMatrix:
    try:
        n = int(obj["n"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as e:
        raise MatrixParseError(f"JSON 矩陣缺少 n / entries：{e}") from e
    if len(entries) != n:
        raise MatrixParseError(f"JSON 宣告 n={n}，但 entries 有 {len(entries)} 列")
    return RationalMatrix(tuple(tuple(to_rational(v) for v in r) for r in entries))


def load_matrix(path: str) -> RationalMatrix:
    """依內容自動判斷文字 / JSON 格式"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise MatrixParseError(f"讀取失敗 {path}: {e}") from e
    if text.lstrip().startswith("{"):
        try:
            return from_json_obj(json.loads(text))
        except json.JSONDecodeError as e:
            raise MatrixParseError(f"JSON 解析失敗 {path}: {e}") from e
    return parse_text(text)
