"""Relational rule mining for numeric time series.

Thin wrapper over the compiled `_lawmine` extension. In a development tree
the extension lives in the CMake build directory; point LAWMINE_EXT_DIR at
it to use this package without installing.
"""

import os
import sys

try:
    from ._lawmine import (  # noqa: F401
        Knowledge,
        LawmineError,
        buy_and_hold_gain_pct,
        cyclic_distance,
        fisher_p_value,
        information_gain,
        mine_csv,
        sign_accuracy,
        simulate_trading,
    )
except ImportError:  # pragma: no cover - dev-tree fallback
    _ext_dir = os.environ.get("LAWMINE_EXT_DIR")
    if not _ext_dir:
        raise
    sys.path.insert(0, _ext_dir)
    from _lawmine import (  # noqa: F401
        Knowledge,
        LawmineError,
        buy_and_hold_gain_pct,
        cyclic_distance,
        fisher_p_value,
        information_gain,
        mine_csv,
        sign_accuracy,
        simulate_trading,
    )

__all__ = [
    "Knowledge",
    "LawmineError",
    "buy_and_hold_gain_pct",
    "cyclic_distance",
    "fisher_p_value",
    "information_gain",
    "mine_csv",
    "sign_accuracy",
    "simulate_trading",
]

__version__ = "0.1.0"
