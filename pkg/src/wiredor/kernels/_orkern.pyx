# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled elementwise kernels; contract identical to ``_pykern``."""

from libc.stdint cimport int64_t, uint32_t, uint64_t

cdef enum:
    FLA = 0
    PC2 = 1
    PC3 = 2


cdef inline uint64_t _or_mul_one(uint64_t a, uint64_t b, int variant, int n,
                                 bint fp_mode, bint truncate) noexcept nogil:
    cdef uint64_t acc = 0
    cdef int top = n - 1
    cdef int second = n - 2
    cdef int third = n - 3
    cdef bint has_top, has_second, has_third
    cdef int s

    if variant == FLA:
        for s in range(n):
            if (b >> s) & 1:
                acc |= a << s

    elif variant == PC2 and fp_mode:
        if (b >> second) & 1:
            acc = (a << top) + (a << second)
        else:
            acc = a << top
        for s in range(second):
            if (b >> s) & 1:
                acc |= a << s

    elif variant == PC2:
        has_top = (b >> top) & 1
        has_second = (b >> second) & 1
        if has_top and has_second:
            acc = (a << top) + (a << second)
        elif has_top:
            acc = a << top
        elif has_second and second >= 1:
            acc = a << second
        for s in range(1, second):
            if (b >> s) & 1:
                acc |= a << s
        # the LSB partial product has no wordline (slot repurposed): dropped

    else:
        has_second = (b >> second) & 1
        has_third = (b >> third) & 1
        acc = a << top
        if has_second:
            acc = acc + (a << second)
        if has_third:
            acc = acc + (a << third)
        for s in range(third):
            if (b >> s) & 1:
                acc |= a << s

    if truncate:
        acc &= ((<uint64_t>1 << n) - 1) << n
    return acc


cdef inline uint32_t _fp_mul_one(uint64_t x, uint64_t y, int eb, int mb, int bias,
                                 int variant, bint truncate) noexcept nogil:
    cdef int n = mb + 1
    cdef int64_t emax = (<int64_t>1 << eb) - 1
    cdef uint64_t mmask = (<uint64_t>1 << mb) - 1
    cdef int se_shift = eb + mb
    cdef uint64_t sign = ((x >> se_shift) ^ (y >> se_shift)) & 1
    cdef int64_t ex = <int64_t>((x >> mb) & <uint64_t>emax)
    cdef int64_t ey = <int64_t>((y >> mb) & <uint64_t>emax)
    cdef uint64_t mx = x & mmask
    cdef uint64_t my = y & mmask
    cdef bint x_zero = ex == 0
    cdef bint y_zero = ey == 0
    cdef bint x_nan = ex == emax and mx != 0
    cdef bint y_nan = ey == emax and my != 0
    cdef bint x_inf = ex == emax and mx == 0
    cdef bint y_inf = ey == emax and my == 0
    cdef uint64_t inf_word = (sign << se_shift) | (<uint64_t>emax << mb)
    cdef uint64_t p, sig
    cdef int64_t biased

    if x_nan or y_nan or (x_inf and y_zero) or (y_inf and x_zero):
        return <uint32_t>(inf_word | (<uint64_t>1 << (mb - 1)))
    if x_inf or y_inf:
        return <uint32_t>inf_word
    if x_zero or y_zero:
        return <uint32_t>(sign << se_shift)

    p = _or_mul_one(mx | (<uint64_t>1 << mb), my | (<uint64_t>1 << mb),
                    variant, n, True, truncate)
    if (p >> (2 * n - 1)) & 1:
        biased = ex + ey - bias + 1
        sig = p >> n
    else:
        biased = ex + ey - bias
        sig = p >> (n - 1)
    if biased >= emax:
        return <uint32_t>inf_word
    if biased < 1:
        return <uint32_t>(sign << se_shift)
    return <uint32_t>((sign << se_shift) | (<uint64_t>biased << mb) | (sig & mmask))


def or_mul_words(const uint64_t[::1] a, const uint64_t[::1] b, uint64_t[::1] out,
                 int variant, int n, bint fp_mode, bint truncate):
    cdef Py_ssize_t i, size = a.shape[0]
    if b.shape[0] != size or out.shape[0] != size:
        raise ValueError("kernel input lengths differ")
    with nogil:
        for i in range(size):
            out[i] = _or_mul_one(a[i], b[i], variant, n, fp_mode, truncate)


def fp_mul_words(const uint32_t[::1] x, const uint32_t[::1] y, uint32_t[::1] out,
                 int exponent_bits, int mantissa_bits, int bias,
                 int variant, bint truncate):
    cdef Py_ssize_t i, size = x.shape[0]
    if y.shape[0] != size or out.shape[0] != size:
        raise ValueError("kernel input lengths differ")
    with nogil:
        for i in range(size):
            out[i] = _fp_mul_one(x[i], y[i], exponent_bits, mantissa_bits, bias,
                                 variant, truncate)
