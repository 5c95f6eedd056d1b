from typing import Any, Dict
from helpers.solver import solve, solve_brute, solve_decomposed, solve_flow, solve_parity

SOLVER_CONFIG: Dict[str, Dict[str, Any]] = {
    "auto": {
        "name": "Automatic",
        "description": "Flow, matching or brute force per factor, whichever applies",
        "solve": lambda inst, budget: solve(inst, budget),
    },
    "decomposed": {
        "name": "Decomposed",
        "description": "Solve every factor separately and recombine coordinate-wise",
        "solve": lambda inst, budget: solve_decomposed(inst, budget),
    },
    "brute": {
        "name": "Brute force",
        "description": "Exhaustive search over all plans (finite groups, small Z instances)",
        "solve": lambda inst, budget: solve_brute(inst, budget=budget),
    },
    "flow": {
        "name": "Min-cost flow",
        "description": "Successive shortest paths on a single Z or R factor",
        "solve": lambda inst, budget: solve_flow(inst),
    },
    "parity": {
        "name": "Parity matching",
        "description": "Minimum-weight perfect matching on a single Z2 factor",
        "solve": lambda inst, budget: solve_parity(inst),
    },
}
