# modules/notifier.py
from __future__ import annotations

import sys

# 優先從 config.py 讀；找不到就給預設值
try:
    from config import QUIET as CFG_QUIET
except Exception:
    CFG_QUIET = 0


def print_terminal(message: str, quiet: bool | None = None):
    """人看的訊息一律走 stderr，stdout 只留 JSON"""
    if not message:
        return
    if CFG_QUIET if quiet is None else quiet:
        return
    print(message, file=sys.stderr, flush=True)


def alert_finding(message: str):
    """數學上的「發現」（下界被違反、恆等式不成立）不受 QUIET 影響"""
    print(f"🚨 {message}", file=sys.stderr, flush=True)
