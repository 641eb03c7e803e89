"""Backend selection for the mod-p rank kernel.

Exposes ``rank_mod_p`` from the compiled extension when it is available,
falling back to the pure-Python twin otherwise.  Set ``QHOPF_FORCE_PY=1``
to force the fallback (used by the benchmark and by backend-agreement
tests).  ``BACKEND`` records which implementation was picked.
"""

from __future__ import annotations

import os

if os.environ.get("QHOPF_FORCE_PY") == "1":
    from qhopf._mod_rank_py import rank_mod_p

    BACKEND = "py"
else:
    try:
        from qhopf._mod_rank import rank_mod_p  # type: ignore[no-redef]

        BACKEND = "c"
    except ImportError:
        from qhopf._mod_rank_py import rank_mod_p  # type: ignore[no-redef]

        BACKEND = "py"

__all__ = ["rank_mod_p", "BACKEND"]
