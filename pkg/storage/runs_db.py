# storage/runs_db.py
from __future__ import annotations

import os
import json
import sqlite3
from dataclasses import asdict, dataclass, field

from config import RUNS_DB
from utils.others import current_timestamp

SCHEMA = """
CREATE TABLE IF NOT EXISTS runs (
  id INTEGER PRIMARY KEY AUTOINCREMENT,
  ts TEXT NOT NULL,
  subcommand TEXT NOT NULL,
  params TEXT NOT NULL,
  seed INTEGER,
  tool_version TEXT NOT NULL,
  wall_time REAL NOT NULL,
  verdict TEXT NOT NULL,
  exit_code INTEGER NOT NULL,
  result_sha256 TEXT
);
"""


@dataclass
class RunManifest:
    """每次執行恰好一份；params 完整回寫，足以重跑出同一份結果"""
    subcommand: str
    params: dict
    seed: int | None
    tool_version: str
    wall_time: float = 0.0
    verdict: str = "pending"
    exit_code: int = 0
    result_sha256: str | None = None
    ts: str = field(default_factory=current_timestamp)

    def to_json(self) -> dict:
        return asdict(self)


def init_db(db_path: str = RUNS_DB):
    db_dir = os.path.dirname(db_path)
    if db_dir:
        os.makedirs(db_dir, exist_ok=True)
    with sqlite3.connect(db_path) as conn:
        conn.execute(SCHEMA)
        conn.commit()


def log_run(manifest: RunManifest, db_path: str = RUNS_DB):
    if not db_path:
        return
    init_db(db_path)
    with sqlite3.connect(db_path) as conn:
        conn.execute(
            "INSERT INTO runs (ts, subcommand, params, seed, tool_version, wall_time, verdict, exit_code, result_sha256) "
            "VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)",
            (manifest.ts, manifest.subcommand, json.dumps(manifest.params, sort_keys=True, default=str),
             manifest.seed, manifest.tool_version, float(manifest.wall_time), manifest.verdict,
             int(manifest.exit_code), manifest.result_sha256)
        )
        conn.commit()


def recent_runs(limit: int = 20, db_path: str = RUNS_DB) -> list:
    if not db_path or not os.path.exists(db_path):
        return []
    with sqlite3.connect(db_path) as conn:
        conn.row_factory = sqlite3.Row
        cur = conn.execute(
            "SELECT ts, subcommand, seed, wall_time, verdict, exit_code, result_sha256 "
            "FROM runs ORDER BY id DESC LIMIT ?", (int(limit),)
        )
        return [dict(r) for r in cur.fetchall()]


def runs_summary(db_path: str = RUNS_DB) -> str:
    if not db_path or not os.path.exists(db_path):
        return "📊 尚無執行紀錄"
    with sqlite3.connect(db_path) as conn:
        cur = conn.cursor()
        cur.execute("""
            SELECT subcommand, COUNT(*) as cnt, SUM(exit_code = 1) as findings
            FROM runs
            GROUP BY subcommand
            ORDER BY cnt DESC
        """)
        rows = cur.fetchall()
        cur.execute("SELECT COUNT(*) FROM runs WHERE date(ts) = date('now','localtime')")
        today = cur.fetchone()[0]
    msg = f"📊 今日執行數：{today}\n📈 各子命令：\n"
    for sub, cnt, findings in rows:
        msg += f"{sub}：{cnt} 次（發現 {findings or 0}）\n"
    return msg.strip()
