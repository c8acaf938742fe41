"""Hot-loop kernels: compiled extension when available, pure Python otherwise.

Set ``MOSAICSTREAM_PURE=1`` before import to force the pure-Python fallback
(used by the parity tests and the backend benchmark).
"""

import os

from mosaicstream._kernels import _louvain_py

COMPILED = False
_impl = _louvain_py

if not os.environ.get("MOSAICSTREAM_PURE"):
    try:
        from mosaicstream._kernels import _louvain_cy as _impl  # type: ignore

        COMPILED = True
    except ImportError:
        pass

local_move_pass = _impl.local_move_pass


def backend_name() -> str:
    return "compiled" if COMPILED else "pure-python"
