"""Fire-kernel backend selection.

The simulation inner loop exists twice: a compiled Cython extension
(`fire_cy`) and a pure-numpy fallback (`fire_py`).  Both implement the
identical keyed-counter draw scheme and return bit-identical results; the
compiled one is simply faster.  Selection happens once at import:

* default: Cython if the extension was built, else the fallback;
* ``PYROTOPO_BACKEND=python`` forces the fallback;
* ``PYROTOPO_BACKEND=cython`` requires the extension and raises if missing.
"""

from __future__ import annotations

import os

BACKEND_ENV = "PYROTOPO_BACKEND"

_requested = os.environ.get(BACKEND_ENV, "auto").strip().lower() or "auto"
if _requested not in ("auto", "python", "cython"):
    raise ValueError(
        f"{BACKEND_ENV} must be 'auto', 'python', or 'cython', got {_requested!r}"
    )

_cy = None
if _requested in ("auto", "cython"):
    try:
        from . import fire_cy as _cy
    except ImportError:
        if _requested == "cython":
            raise ImportError(
                "PYROTOPO_BACKEND=cython but the compiled extension is not "
                "available; reinstall with Cython and a C compiler present"
            ) from None

if _cy is not None:
    BACKEND = "cython"
    run_fire = _cy.run_fire
else:
    from . import fire_py as _py

    BACKEND = "python"
    run_fire = _py.run_fire


def available_backends() -> dict:
    """Importable kernels by name (used by equivalence tests and benchmarks)."""
    from . import fire_py

    impls = {"python": fire_py.run_fire}
    try:
        from . import fire_cy

        impls["cython"] = fire_cy.run_fire
    except ImportError:
        pass
    return impls
