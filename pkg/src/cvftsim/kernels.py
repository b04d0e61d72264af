"""Monte Carlo kernel backends.

The compiled Cython kernel is used when it was built; otherwise the numpy
implementation is selected at import.  Both draw identical sample streams.
"""
from types import ModuleType

from . import _mckernel_py as python_kernel

try:
    from . import _mckernel as compiled_kernel
except ImportError:  # extension not built
    compiled_kernel = None

MODE_JOINT = python_kernel.MODE_JOINT
MODE_INDEPENDENT = python_kernel.MODE_INDEPENDENT
DIST_GAUSSIAN = python_kernel.DIST_GAUSSIAN
DIST_TWO_POINT = python_kernel.DIST_TWO_POINT

BACKENDS = {"python": python_kernel}
if compiled_kernel is not None:
    BACKENDS["compiled"] = compiled_kernel

DEFAULT_BACKEND = "compiled" if compiled_kernel is not None else "python"


def get_kernel(name: str | None = None) -> ModuleType:
    name = name or DEFAULT_BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} unavailable (have {sorted(BACKENDS)})") from None
