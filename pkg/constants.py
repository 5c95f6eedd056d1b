import os
from dotenv import load_dotenv

load_dotenv()

VERSION: str = "0.3.0"
DEFAULT_BUDGET: int = int(os.getenv("GROUPOT_BUDGET") or 2_000_000)
MATCHING_CUTOFF: int = int(os.getenv("GROUPOT_MATCHING_CUTOFF") or 20)
DEFAULT_N_MAX: int = int(os.getenv("GROUPOT_N_MAX") or 6)
DEFAULT_MAX_ORDER: int = int(os.getenv("GROUPOT_MAX_ORDER") or 16)
# Pattern branches are only pruned by Fourier-Motzkin once this few unknowns stay free
PRUNE_FREE_VARS: int = int(os.getenv("GROUPOT_PRUNE_VARS") or 4)
LOG_LEVEL: str = os.getenv("GROUPOT_LOG_LEVEL") or "INFO"
