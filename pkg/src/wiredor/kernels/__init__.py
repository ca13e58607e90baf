"""Hot elementwise kernels with compiled/pure backend selection.

The Cython extension ``_orkern`` is preferred when built; the numpy
fallback ``_pykern`` keeps everything working without a C toolchain.
``WIREDOR_KERNEL_BACKEND=python|cython`` forces a backend at import time,
and every wrapper takes an explicit ``backend=`` override (used by the
equivalence tests and the benchmark).
"""

import os

import numpy as np

from ..errors import DomainError, UnsupportedConfigError
from ..mulconfig import MulConfig, Variant

_VARIANT_CODE = {Variant.FLA: 0, Variant.PC2: 1, Variant.PC3: 2}


def _load(name: str):
    if name == "cython":
        from . import _orkern

        return _orkern
    if name == "python":
        from . import _pykern

        return _pykern
    raise ValueError(f"unknown kernel backend {name!r} (use 'cython' or 'python')")


def _select():
    forced = os.environ.get("WIREDOR_KERNEL_BACKEND")
    if forced:
        return _load(forced), forced
    try:
        return _load("cython"), "cython"
    except ImportError:
        return _load("python"), "python"


_impl, _backend_name = _select()


def backend_name() -> str:
    """Name of the backend selected at import."""
    return _backend_name


def available_backends() -> list[str]:
    names = []
    for name in ("cython", "python"):
        try:
            _load(name)
        except ImportError:
            continue
        names.append(name)
    return names


def or_mul_words(a, b, config: MulConfig, backend: str | None = None, validate: bool = True) -> np.ndarray:
    """Elementwise :func:`wiredor.pp.approx_mul` over arrays (uint64 result)."""
    impl = _load(backend) if backend is not None else _impl
    a_arr, b_arr = np.broadcast_arrays(
        np.asarray(a, dtype=np.uint64), np.asarray(b, dtype=np.uint64)
    )
    if validate:
        limit = np.uint64(1) << np.uint64(config.width_n)
        if a_arr.size and (a_arr.max() >= limit or b_arr.max() >= limit):
            raise DomainError(f"operand outside [0, 2^{config.width_n})")
        if config.fp_mode and a_arr.size:
            lead = np.uint64(1) << np.uint64(config.width_n - 1)
            if ((a_arr & lead) == 0).any() or ((b_arr & lead) == 0).any():
                raise DomainError("fp_mode operand lacks the leading 1")
    shape = a_arr.shape
    a_flat = np.ascontiguousarray(a_arr).reshape(-1)
    b_flat = np.ascontiguousarray(b_arr).reshape(-1)
    out = np.empty(a_flat.shape, dtype=np.uint64)
    impl.or_mul_words(
        a_flat, b_flat, out,
        _VARIANT_CODE[config.variant], config.width_n, config.fp_mode, config.truncate,
    )
    return out.reshape(shape)


def fp_mul_words(x, y, fmt, config: MulConfig, backend: str | None = None) -> np.ndarray:
    """Elementwise :func:`wiredor.fp.fp_mul` over raw-word arrays (uint32 result)."""
    if not config.fp_mode or config.width_n != fmt.mantissa_bits + 1:
        raise UnsupportedConfigError(
            f"config {config.label()}/n={config.width_n} does not match format {fmt.name}"
        )
    impl = _load(backend) if backend is not None else _impl
    x_arr, y_arr = np.broadcast_arrays(
        np.asarray(x, dtype=np.uint32), np.asarray(y, dtype=np.uint32)
    )
    shape = x_arr.shape
    x_flat = np.ascontiguousarray(x_arr).reshape(-1)
    y_flat = np.ascontiguousarray(y_arr).reshape(-1)
    out = np.empty(x_flat.shape, dtype=np.uint32)
    impl.fp_mul_words(
        x_flat, y_flat, out,
        fmt.exponent_bits, fmt.mantissa_bits, fmt.bias,
        _VARIANT_CODE[config.variant], config.truncate,
    )
    return out.reshape(shape)
