"""Backend dispatch for the sweep kernels.

The compiled extension is preferred when it imported cleanly; the
pure-Python fallback is selected otherwise. Both implement the same five
functions with identical numerics, so everything above this layer is
backend-agnostic. Set MDPSWEEP_BACKEND=python (or =c) before import to
force a backend, or use :func:`override` / :func:`use_backend` at runtime.
"""
from __future__ import annotations

import os
from contextlib import contextmanager

from . import _pysweeps

try:
    from . import _csweeps
except ImportError:  # extension not built; pure Python still works
    _csweeps = None

_IMPLS = {"python": _pysweeps}
if _csweeps is not None:
    _IMPLS["c"] = _csweeps


def _initial_impl():
    requested = os.environ.get("MDPSWEEP_BACKEND")
    if requested is not None:
        if requested not in ("c", "python"):
            raise RuntimeError(f"MDPSWEEP_BACKEND must be 'c' or 'python', got {requested!r}")
        if requested not in _IMPLS:
            raise RuntimeError("MDPSWEEP_BACKEND=c but the compiled kernels are not installed")
        return _IMPLS[requested]
    return _IMPLS.get("c", _pysweeps)


_impl = _initial_impl()


def backend_name() -> str:
    """Name of the active backend: 'c' or 'python'."""
    return "c" if _impl is _csweeps else "python"


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_IMPLS))


def use_backend(name: str) -> None:
    """Switch the active backend ('c' or 'python') for all later calls."""
    global _impl
    if name not in _IMPLS:
        raise ValueError(f"backend {name!r} not available (have {available_backends()})")
    _impl = _IMPLS[name]


@contextmanager
def override(name: str):
    """Temporarily switch backends; used by tests and the backend benchmark."""
    previous = backend_name()
    use_backend(name)
    try:
        yield
    finally:
        use_backend(previous)


def backup_state(mdp, v, s):
    return _impl.backup_state(mdp, v, s)


def sweep_sync(mdp, v_in, v_out):
    return _impl.sweep_sync(mdp, v_in, v_out)


def sweep_ordered(mdp, v, order):
    return _impl.sweep_ordered(mdp, v, order)


def sweep_skip_sync(mdp, v_prev, v_cur, v_out, delta, apply_test):
    return _impl.sweep_skip_sync(mdp, v_prev, v_cur, v_out, delta, apply_test)


def sweep_skip_ordered(mdp, v_prev, v_cur, v_work, order, delta, apply_test):
    return _impl.sweep_skip_ordered(mdp, v_prev, v_cur, v_work, order, delta, apply_test)
