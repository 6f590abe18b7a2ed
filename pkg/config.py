"""Configuration constants for the forbidden-subposet toolkit."""
from pathlib import Path

# Data location
DATA_DIR = Path.home() / ".forbidden-subposet"
LOGS_DIR = DATA_DIR / "logs"

# Enumeration caps
CHAIN_ENUMERATION_CAP = 10  # n! full chains of B_n
ZONE_ENUMERATION_CAP = 2 ** 20  # vertices materialised by down/up sets and zones
KCHAIN_FAMILY_CAP = 1 << 14  # family size accepted by the k-chain counter

# Monte Carlo
DEFAULT_SEED = 7
DEFAULT_TRIALS = 10_000
MC_BATCH_SIZE = 1_000  # trials per independently seeded batch

# Search budgets
DEFAULT_NODE_LIMIT = 5_000_000
DEFAULT_TIME_LIMIT = None  # seconds
DEFAULT_BACKTRACK_LIMIT = None

# Extremal search
LA_EXACT_GUARANTEED_N = 5

# Reports
DEFAULT_FORMAT = "json"
DEFAULT_WORKERS = 1
