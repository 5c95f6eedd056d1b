from typing import Any, Dict
from enum import Enum
from config import SOLVER_CONFIG


class SolveMethod(Enum):
    """
    Enum class for the solve method selected on the command line.
    """

    AUTO: Dict[str, Any] = SOLVER_CONFIG["auto"]
    DECOMPOSED: Dict[str, Any] = SOLVER_CONFIG["decomposed"]
    BRUTE: Dict[str, Any] = SOLVER_CONFIG["brute"]
    FLOW: Dict[str, Any] = SOLVER_CONFIG["flow"]
    PARITY: Dict[str, Any] = SOLVER_CONFIG["parity"]
