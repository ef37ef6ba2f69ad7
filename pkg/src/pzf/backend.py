"""Kernel backend selection.

Imports the compiled kernels (pzf._kernels) when the extension built, else
the pure-Python fallback (pzf._pykernels).  Setting the environment variable
PZF_PURE to a nonempty value forces the fallback; the active choice is
exposed as BACKEND ("compiled" or "pure").  Both backends are exercised by
the test suite and must return identical values for identical inputs.
"""

import os

if os.environ.get("PZF_PURE"):
    from pzf import _pykernels as _impl

    BACKEND = "pure"
else:
    try:
        from pzf import _kernels as _impl

        BACKEND = "compiled"
    except ImportError:
        from pzf import _pykernels as _impl

        BACKEND = "pure"

make_kernel_graph = _impl.make_kernel_graph
reachable_closure = _impl.reachable_closure
propagate = _impl.propagate
