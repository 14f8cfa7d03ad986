"""Hot-kernel dispatch.

The compiled extension is preferred when it imported cleanly; otherwise the
pure implementations run.  Set HETEROREP_PURE=1 to force the pure path (used
by the equivalence tests and the benchmark).
"""

import os

from . import pure

COMPILED = False
if os.environ.get("HETEROREP_PURE") != "1":
    try:
        from . import _ckernels as _impl

        COMPILED = True
    except ImportError:
        _impl = pure
else:
    _impl = pure

LOSS_LOG = pure.LOSS_LOG
LOSS_HINGE = pure.LOSS_HINGE

scan_ngrams = _impl.scan_ngrams
sgd_epoch = _impl.sgd_epoch


def backend_name() -> str:
    return "compiled" if COMPILED else "pure"
