"""Select the compiled RDFS kernel when available.

Set ``ONCONET_PURE_PYTHON=1`` to force the pure-Python fallback.
"""

import os

from . import _kernel_py

RULE_NAMES = (
    "rdfs-subclass-transitivity",
    "rdfs-type-propagation",
    "rdfs-subproperty",
    "rdfs-domain",
    "rdfs-range",
)

python_round = _kernel_py.builtin_round
compiled_round = None
try:
    from ._kernel import builtin_round as compiled_round  # type: ignore[no-redef]
except ImportError:  # extension not built
    pass

if compiled_round is not None and not os.environ.get("ONCONET_PURE_PYTHON"):
    builtin_round = compiled_round
    BACKEND = "cython"
else:
    builtin_round = python_round
    BACKEND = "python"
