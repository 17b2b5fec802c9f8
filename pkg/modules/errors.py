# modules/errors.py
# -*- coding: utf-8 -*-
"""
例外分三類：
  - DataError：輸入/參數有問題（CLI exit 2）
  - SingularMatrix：矩陣不可逆（CLI exit 2）
  - Finding：數學上「不該發生」的結果，代表實作錯誤或反例（CLI exit 1，絕不吞掉）
"""


class LabError(Exception):
    pass


# ----------------- 資料 / 參數錯誤 -----------------
class DataError(LabError, ValueError):
    pass


class DimensionMismatch(DataError):
    pass


class MatrixParseError(DataError):
    pass


class EntryOutOfBox(DataError):
    """有元素不在 [0, 1]。"""


class ParityMismatch(DataError):
    pass


class NotNormalized(DataError):
    pass


class UnsupportedOrder(DataError):
    pass


class OrderTooLarge(DataError):
    pass


class InvalidPrime(DataError):
    pass


# ----------------- 奇異 -----------------
class SingularMatrix(LabError, ZeroDivisionError):
    pass


class SingularIterate(SingularMatrix):
    """下降過程的迭代點（幾乎）奇異。"""


# ----------------- 發現（定理被違反 = bug 或反例）-----------------
class Finding(LabError):
    pass


class IdentityViolated(Finding):
    pass


class ChainBroken(Finding):
    pass
