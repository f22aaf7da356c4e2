"""Kernel selection: compiled extension when available, else pure Python."""
import os

if os.environ.get("SELFSIM_PURE"):
    from . import _pykernel as impl
else:
    try:
        from . import _ckernel as impl
    except ImportError:  # extension not built
        from . import _pykernel as impl

BACKEND = "compiled" if impl.__name__.endswith("_ckernel") else "python"
partition = impl.partition
touching_pairs = impl.touching_pairs
