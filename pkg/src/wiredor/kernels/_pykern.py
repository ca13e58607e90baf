"""Vectorized numpy fallback for the hot elementwise kernels.

Same contract as the compiled ``_orkern`` extension: flat contiguous input
arrays, results written into a preallocated ``out``. Variant codes are the
integers from :mod:`wiredor.kernels` (0 = fla, 1 = pc2, 2 = pc3).
"""

import numpy as np

_FLA, _PC2, _PC3 = 0, 1, 2


def or_mul_words(a, b, out, variant, n, fp_mode, truncate):
    """Elementwise wired-OR product of uint64 arrays ``a`` and ``b``."""
    top, second, third = n - 1, n - 2, n - 3

    if variant == _FLA:
        acc = np.zeros_like(a)
        for s in range(n):
            sel = ((b >> s) & 1).astype(bool)
            acc |= np.where(sel, a << s, 0)

    elif variant == _PC2 and fp_mode:
        pair = (a << top) + (a << second)
        acc = np.where(((b >> second) & 1).astype(bool), pair, a << top)
        for s in range(second):
            sel = ((b >> s) & 1).astype(bool)
            acc |= np.where(sel, a << s, 0)

    elif variant == _PC2:
        has_top = ((b >> top) & 1).astype(bool)
        has_second = ((b >> second) & 1).astype(bool)
        both = has_top & has_second
        acc = np.where(both, (a << top) + (a << second), 0)
        acc |= np.where(has_top & ~both, a << top, 0)
        if second >= 1:
            acc |= np.where(has_second & ~both, a << second, 0)
        for s in range(1, second):
            sel = ((b >> s) & 1).astype(bool)
            acc |= np.where(sel, a << s, 0)
        # the LSB partial product has no wordline (slot repurposed): dropped

    else:
        top_value = a << top
        with_second = top_value + (a << second)
        with_third = top_value + (a << third)
        with_both = with_second + (a << third)
        has_second = ((b >> second) & 1).astype(bool)
        has_third = ((b >> third) & 1).astype(bool)
        acc = np.where(
            has_second & has_third,
            with_both,
            np.where(has_second, with_second, np.where(has_third, with_third, top_value)),
        )
        for s in range(third):
            sel = ((b >> s) & 1).astype(bool)
            acc |= np.where(sel, a << s, 0)

    if truncate:
        acc &= np.uint64(((1 << n) - 1) << n)
    out[:] = acc


def fp_mul_words(x, y, out, exponent_bits, mantissa_bits, bias, variant, truncate):
    """Elementwise float multiply on raw words (uint32 arrays).

    Mantissas go through the wired-OR path; exponent/sign handling, zero
    bypass and inf/nan follow the scalar reference in :mod:`wiredor.fp`.
    """
    eb, mb = exponent_bits, mantissa_bits
    n = mb + 1
    emax = (1 << eb) - 1
    mmask = (1 << mb) - 1
    se_shift = eb + mb

    x64 = x.astype(np.uint64)
    y64 = y.astype(np.uint64)
    sign = ((x64 >> se_shift) ^ (y64 >> se_shift)) & 1
    ex = ((x64 >> mb) & emax).astype(np.int64)
    ey = ((y64 >> mb) & emax).astype(np.int64)
    mx = x64 & mmask
    my = y64 & mmask

    x_zero = ex == 0  # subnormals flush to zero
    y_zero = ey == 0
    x_nan = (ex == emax) & (mx != 0)
    y_nan = (ey == emax) & (my != 0)
    x_inf = (ex == emax) & (mx == 0)
    y_inf = (ey == emax) & (my == 0)

    sig_x = mx | (1 << mb)
    sig_y = my | (1 << mb)
    p = np.empty_like(sig_x)
    or_mul_words(sig_x, sig_y, p, variant, n, True, truncate)

    hi = ((p >> (2 * n - 1)) & 1).astype(np.int64)
    exponent = ex + ey - 2 * bias + hi
    sig = np.where(hi == 1, p >> n, p >> (n - 1))
    biased = exponent + bias
    normal = (
        (sign << se_shift)
        | (np.clip(biased, 0, emax).astype(np.uint64) << mb)
        | (sig & mmask)
    )

    inf_word = (sign << se_shift) | np.uint64(emax << mb)
    zero_word = sign << se_shift
    nan_word = inf_word | np.uint64(1 << (mb - 1))

    word = np.where(biased >= emax, inf_word, normal)
    word = np.where(biased < 1, zero_word, word)
    word = np.where(x_zero | y_zero, zero_word, word)
    word = np.where(x_inf | y_inf, inf_word, word)
    word = np.where(x_nan | y_nan | (x_inf & y_zero) | (y_inf & x_zero), nan_word, word)
    out[:] = word.astype(np.uint32)
