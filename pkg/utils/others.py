import os
import json
import math
from datetime import datetime
from fractions import Fraction

import pandas as pd

_FLOAT_TAG = "\x00f"


def _tag_floats(obj, bag):
    """float 先換成佔位字串，dumps 後再換回 17 位有效數字"""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
        bag.append(format(obj, ".17g"))
        return f"{_FLOAT_TAG}{len(bag) - 1}"
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _tag_floats(v, bag) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_tag_floats(v, bag) for v in obj]
    if hasattr(obj, "item"):  # numpy 純量
        return _tag_floats(obj.item(), bag)
    return obj


def dumps_report(data, indent=2) -> str:
    """JSON：有理數 → "p/q"，浮點 → 17 位有效數字，key 排序（輸出可逐位元比對）"""
    bag: list = []
    text = json.dumps(_tag_floats(data, bag), ensure_ascii=False, indent=indent, sort_keys=True)
    for i in range(len(bag) - 1, -1, -1):
        text = text.replace(json.dumps(f"{_FLOAT_TAG}{i}"), bag[i])
    return text


def render_text(data) -> str:
    """--format text：攤平成兩欄表格"""
    if isinstance(data, dict) and "text" in data and isinstance(data["text"], str):
        return data["text"]
    flat = pd.json_normalize(json.loads(dumps_report(data)), sep=".")
    return flat.T.to_string(header=False)


def save_text(filepath, text):
    dir_path = os.path.dirname(filepath)
    if dir_path:
        ensure_dir_exists(dir_path)
    with open(filepath, "w", encoding="utf-8") as f:
        f.write(text if text.endswith("\n") else text + "\n")


def save_json(filepath, data):
    """寫入 JSON 檔案（與 stdout 同一套格式）"""
    save_text(filepath, dumps_report(data))


def current_timestamp(fmt="%Y-%m-%d %H:%M:%S"):
    """取得目前時間字串"""
    return datetime.now().strftime(fmt)


def ensure_dir_exists(dir_path):
    """確保資料夾存在，若無則建立"""
    if not os.path.exists(dir_path):
        os.makedirs(dir_path, exist_ok=True)
