"""Hot evaluation kernels with a numba fast path and a pure-numpy fallback.

The only interpreter-level hot loop in this package is turning pre-activation
values Z = X W^T + b into feature values and per-axis feature gradients at
every quadrature/collocation point.  The fused kernels below do that in one
pass over Z; the numpy fallback computes the same quantities with broadcasting
(and two large temporaries).

Path selection: environment variable ``RNN_DG_NUMBA``
  - unset or "auto": use numba when importable, else numpy
  - "1"/"true":      require numba (ImportError if missing)
  - "0"/"false":     force the pure-numpy fallback

Both paths are deterministic; they may differ in the last ulp of tanh/sin, so
pick one path per experiment when bit-reproducibility matters (the default is
stable within a fixed environment).
"""

from __future__ import annotations

import math
import os

import numpy as np

_FLAG = os.environ.get("RNN_DG_NUMBA", "auto").strip().lower()

if _FLAG in ("0", "false", "no"):
    _numba = None
elif _FLAG in ("1", "true", "yes"):
    import numba as _numba
else:
    try:
        import numba as _numba
    except ImportError:  # pragma: no cover - exercised only without numba
        _numba = None

USING_NUMBA = _numba is not None


def _tanh_eval_numpy(z, w, scale):
    v = np.tanh(z)
    g = (1.0 - v * v)[:, :, None] * (w * scale)[None, :, :]
    return v, g


def _sin_eval_numpy(z, w, scale):
    v = np.sin(z)
    g = np.cos(z)[:, :, None] * (w * scale)[None, :, :]
    return v, g


if USING_NUMBA:

    @_numba.njit(cache=True)
    def _tanh_eval_numba(z, w, scale):  # pragma: no cover - compiled
        n, m = z.shape
        d = w.shape[1]
        v = np.empty((n, m))
        g = np.empty((n, m, d))
        for q in range(n):
            for j in range(m):
                t = math.tanh(z[q, j])
                v[q, j] = t
                s = 1.0 - t * t
                for a in range(d):
                    g[q, j, a] = s * w[j, a] * scale[a]
        return v, g

    @_numba.njit(cache=True)
    def _sin_eval_numba(z, w, scale):  # pragma: no cover - compiled
        n, m = z.shape
        d = w.shape[1]
        v = np.empty((n, m))
        g = np.empty((n, m, d))
        for q in range(n):
            for j in range(m):
                v[q, j] = math.sin(z[q, j])
                s = math.cos(z[q, j])
                for a in range(d):
                    g[q, j, a] = s * w[j, a] * scale[a]
        return v, g


def activation_eval(kind: str, z: np.ndarray, w: np.ndarray, scale: np.ndarray):
    """Return (values, gradients) for sigma(z) with hidden weights w.

    z: (n_points, M) pre-activations; w: (M, d); scale: (d,) chain-rule factor
    (ones for raw physical inputs).  gradients has shape (n_points, M, d).
    """
    z = np.ascontiguousarray(z, dtype=np.float64)
    w = np.ascontiguousarray(w, dtype=np.float64)
    scale = np.ascontiguousarray(scale, dtype=np.float64)
    if kind == "tanh":
        fn = _tanh_eval_numba if USING_NUMBA else _tanh_eval_numpy
    elif kind == "sin":
        fn = _sin_eval_numba if USING_NUMBA else _sin_eval_numpy
    else:
        raise ValueError(f"unknown activation {kind!r}")
    return fn(z, w, scale)


def activation_eval_numpy(kind: str, z, w, scale):
    """Pure-numpy path, exposed for equivalence tests and benchmarks."""
    z = np.asarray(z, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    scale = np.asarray(scale, dtype=np.float64)
    if kind == "tanh":
        return _tanh_eval_numpy(z, w, scale)
    if kind == "sin":
        return _sin_eval_numpy(z, w, scale)
    raise ValueError(f"unknown activation {kind!r}")
