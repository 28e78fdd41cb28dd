"""Numeric defaults and environment-driven knobs."""

from __future__ import annotations

import os
from typing import Dict, Tuple

# theta fires at >= 1 - THETA_TOLERANCE; absorbs rounding in 1/l row sums
THETA_TOLERANCE = 1e-9
# matmul drops stored entries below this weight
DROP_TOLERANCE = 1e-12
# minimum stored weight kept by support-preserving squaring
SUPPORT_FLOOR = 1e-5

# body size -> share of non-fact rules
DEFAULT_BODY_DISTRIBUTION: Dict[int, float] = {
    1: 0.04,
    2: 0.04,
    3: 0.10,
    4: 0.40,
    5: 0.35,
    6: 0.04,
    7: 0.02,
    8: 0.01,
}
MAX_BODY_SIZE = 8
DEFAULT_FACT_FRACTION_BOUND = 1.0 / 3.0

DEFAULT_K_TOKENS: Tuple[str, ...] = ("1", "5", "n/2", "n")
DEFAULT_CHECK_ATOMS: Tuple[int, ...] = (10, 25, 50)
DEFAULT_RULE_FACTORS: Tuple[int, ...] = (2, 10, 50)
DEFAULT_CHECK_KS: Tuple[int, ...] = (1, 2, 3)

PROD_LOGS = bool(os.getenv("LPVEC_PROD", ""))
DEFAULT_WORKERS = int(os.environ.get("LPVEC_WORKERS", "1"))
DEFAULT_OUTPUT_ROOT = os.environ.get("LPVEC_OUTPUT_ROOT", os.getcwd())
