# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Aberth-Ehrlich kernel.

Same algorithm as the pure-Python fallback (simultaneous/Jacobi update,
fixed deterministic initial guesses); plain C loops instead of batched
numpy, which is what makes dense curve tracking cheap.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos as ccos
from libc.math cimport pow as cpow
from libc.math cimport sin as csin

cnp.import_array()

BACKEND_NAME = "compiled"

cdef double _ROT = 0.3819660112501051
cdef double _TWOPI = 6.283185307179586476925286766559


def solve_batch(coeffs, double tol=1e-12, int maxiter=300):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] C = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef Py_ssize_t m = C.shape[0]
    cdef Py_ssize_t n = C.shape[1]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] Z = np.empty((m, n), dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] iters = np.zeros(m, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] ok = np.zeros(m, dtype=np.uint8)

    cdef double complex[:, :] c = C
    cdef double complex[:, :] z = Z
    cdef long long[:] it = iters
    cdef unsigned char[:] okv = ok

    cdef Py_ssize_t row, i, j, k, step
    cdef double cauchy, mag, radius, bound, res, ares, ang
    cdef double complex p, dp, zi, w, s, denom, diff
    cdef double complex znew[64]
    cdef bint allzero, converged

    if n == 1:
        for row in range(m):
            z[row, 0] = -c[row, 0]
            okv[row] = 1
        return Z, iters, ok.astype(bool)

    for row in range(m):
        allzero = True
        cauchy = 0.0
        for j in range(n):
            mag = abs(c[row, j])
            if mag != 0.0:
                allzero = False
                mag = cpow(mag, 1.0 / (j + 1))
                if mag > cauchy:
                    cauchy = mag
        cauchy *= 2.0
        if allzero:
            for i in range(n):
                z[row, i] = 0.0
            okv[row] = 1
            continue
        radius = 0.5 * cauchy
        if radius < 1e-30:
            radius = 1e-30
        for i in range(n):
            ang = _TWOPI * (i + _ROT) / n
            z[row, i] = radius * (ccos(ang) + 1j * csin(ang))
        bound = tol * cpow(1.0 + cauchy, n)

        converged = False
        for step in range(maxiter):
            res = 0.0
            for i in range(n):
                zi = z[row, i]
                p = 1.0
                dp = 0.0
                for j in range(n):
                    dp = dp * zi + p
                    p = p * zi + c[row, j]
                ares = abs(p)
                if ares > res:
                    res = ares
                if abs(dp) < 1e-300:
                    w = 0.05 * (1.0 + abs(zi))
                else:
                    w = p / dp
                s = 0.0
                for k in range(n):
                    if k != i:
                        diff = zi - z[row, k]
                        if abs(diff) < 1e-300:
                            diff = 1e-300
                        s = s + 1.0 / diff
                denom = 1.0 - w * s
                if abs(denom) < 1e-300:
                    denom = 1.0
                znew[i] = zi - w / denom
            if res <= bound:
                converged = True
                break
            for i in range(n):
                z[row, i] = znew[i]
            it[row] += 1
        okv[row] = 1 if converged else 0

    return Z, iters, ok.astype(bool)
