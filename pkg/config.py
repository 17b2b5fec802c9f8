# config.py
import os


# --- 建構上限 ---
EIL_MAX_ORDER  = int(os.getenv("EIL_MAX_ORDER", "64"))     # Hadamard / S-matrix 建構最大階數

# --- 窮舉 ---
ENUM_MAX_ORDER = int(os.getenv("ENUM_MAX_ORDER", "5"))     # 2^(n^2) 超過 n=5 就不是桌面規模
ENUM_CHUNK     = int(os.getenv("ENUM_CHUNK", "4096"))      # 每個工作單元處理幾個位元樣式

# --- 隨機抽樣 ---
SAMPLE_COUNT   = int(os.getenv("SAMPLE_COUNT", "100000"))
SAMPLE_CHUNK   = int(os.getenv("SAMPLE_CHUNK", "2048"))    # 固定切塊 → 與 worker 數無關的可重現結果

# --- 投影梯度下降 ---
DESCEND_STARTS    = int(os.getenv("DESCEND_STARTS", "100"))
DESCEND_MAX_ITERS = int(os.getenv("DESCEND_MAX_ITERS", "1000"))
ARMIJO_C          = float(os.getenv("ARMIJO_C", "1e-4"))
PG_TOL            = float(os.getenv("PG_TOL", "1e-8"))     # 投影梯度範數停止門檻
JITTER_RADIUS     = float(os.getenv("JITTER_RADIUS", "1e-2"))
MAX_RESTARTS      = int(os.getenv("MAX_RESTARTS", "10"))

# --- 數值門檻 ---
PIVOT_RTOL     = float(os.getenv("PIVOT_RTOL", "1e-12"))   # |pivot| < PIVOT_RTOL * 最大列幅度 → 視為奇異
EQUALITY_TOL   = float(os.getenv("EQUALITY_TOL", "1e-9"))  # 浮點 margin 小於此值 → 升級走精確路徑

# --- 證明檢查 ---
PROOF_SAMPLES    = int(os.getenv("PROOF_SAMPLES", "1000"))     # 每個 n 的隨機 A 數量（trace 恆等式）
PROOF_CHUNK      = int(os.getenv("PROOF_CHUNK", "100"))
CASE2_SAMPLES    = int(os.getenv("CASE2_SAMPLES", "10000"))     # 2×2 恆等式的四元組數量
NON_ATTAIN_K_MAX = int(os.getenv("NON_ATTAIN_K_MAX", "10000"))

# --- 併發 ---
WORKERS        = int(os.getenv("WORKERS", "1"))

# --- 輸出 ---
MINIMIZER_SAMPLE = int(os.getenv("MINIMIZER_SAMPLE", "10"))  # 不保留完整清單時，列出幾個極小值點
RUNS_DB          = os.getenv("RUNS_DB", os.path.join("storage", "runs.db"))  # 設成空字串就不記錄
QUIET            = int(os.getenv("QUIET", "0"))

TOOL_VERSION = "0.3.0"
