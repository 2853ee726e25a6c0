"""CMV matrices, beta ensembles and Ablowitz-Ladik flows (C++ core)."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import CmvError, run_suite_json

__all__ = [name for name in dir() if not name.startswith("_")]


def run_suite(suite, n=4, trials=100, seed=7):
    """Run a verification suite and return its report as a dict."""
    return _json.loads(run_suite_json(suite, n, trials, seed))
