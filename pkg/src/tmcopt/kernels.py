"""Backend selection for the element integration kernel.

The compiled Cython kernel is used when importable; the vectorized numpy
kernel is the fallback.  Override with TMCOPT_KERNEL=python|cython.

Contract of ``element_batch(u, edof, gammas, lam0, mu0, kr, ops)``:

returns ``(Ke, fe, fmat, sed)`` where, per element,

* ``Ke``   (nel, 8, 8): tangent = gamma * (material + geometric) + Hessian
  penalty including the nonsymmetric exp-gate cross term,
* ``fe``   (nel, 8): internal force = gamma * fmat + gated penalty force,
* ``fmat`` (nel, 8): material internal force at gamma = 1 (what the
  adjoint needs as d f_int / d gamma),
* ``sed``  (nel,): volume-averaged energy density.

Raises InvertedElementError (with the lowest offending element index)
when det F <= 0 at any quadrature point.
"""

import os

from . import _kernel_numpy
from .errors import InvertedElementError

try:
    from . import _corekernel
except ImportError:
    _corekernel = None

_env = os.environ.get("TMCOPT_KERNEL", "").strip().lower()
if _env in ("python", "numpy"):
    _impl, BACKEND = _kernel_numpy, "python"
elif _env == "cython":
    if _corekernel is None:
        raise ImportError("TMCOPT_KERNEL=cython but the compiled kernel is not built")
    _impl, BACKEND = _corekernel, "cython"
elif _env:
    raise ValueError(f"unknown TMCOPT_KERNEL value: {_env!r}")
elif _corekernel is not None:
    _impl, BACKEND = _corekernel, "cython"
else:
    _impl, BACKEND = _kernel_numpy, "python"


def backend_name():
    return BACKEND


def element_batch(u, edof, gammas, lam0, mu0, kr, ops, impl=None):
    impl = impl or _impl
    Ke, fe, fmat, sed, bad = impl.element_batch(
        u, edof, gammas, lam0, mu0, kr, ops.B0, ops.G, ops.H, ops.HtH, ops.wdetj
    )
    if bad >= 0:
        raise InvertedElementError(bad)
    return Ke, fe, fmat, sed


def element_batch_with(backend, *args):
    """Run on an explicitly named backend (used by parity tests/benchmarks)."""
    if backend == "python":
        return element_batch(*args, impl=_kernel_numpy)
    if backend == "cython":
        if _corekernel is None:
            raise ImportError("compiled kernel not available")
        return element_batch(*args, impl=_corekernel)
    raise ValueError(f"unknown backend {backend!r}")


def available_backends():
    return ("python",) if _corekernel is None else ("python", "cython")


total_energy = _kernel_numpy.total_energy
