"""Cyclic complex Jacobi eigensolver for small Hermitian matrices, compiled with numba."""
import math

import numba
import numpy as np


@numba.njit(cache=True)
def _sweep_until(a, v, tol, max_sweeps, want_vectors):
    n = a.shape[0]
    fro = 0.0
    for i in range(n):
        for j in range(n):
            fro += a[i, j].real ** 2 + a[i, j].imag ** 2
    fro = math.sqrt(fro)
    sweeps = 0
    for _ in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if math.sqrt(off) <= tol * fro:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                ph = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if tau >= 0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                sp = s * ph
                spc = s * ph.conjugate()
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - spc * akq
                    a[k, q] = sp * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - sp * aqk
                    a[q, k] = spc * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                if want_vectors:
                    for k in range(n):
                        vkp = v[k, p]
                        vkq = v[k, q]
                        v[k, p] = c * vkp - spc * vkq
                        v[k, q] = sp * vkp + c * vkq
    return sweeps


@numba.njit(cache=True)
def eigh_batch(m, tol, max_sweeps):
    # m: (b, n, n) Hermitian; returns ascending eigenvalues and eigenvector columns
    b, n, _ = m.shape
    vals = np.empty((b, n))
    vecs = np.empty((b, n, n), dtype=np.complex128)
    for i in range(b):
        a = m[i].copy()
        v = np.eye(n, dtype=np.complex128)
        _sweep_until(a, v, tol, max_sweeps, True)
        d = np.empty(n)
        for k in range(n):
            d[k] = a[k, k].real
        order = np.argsort(d)
        for k in range(n):
            vals[i, k] = d[order[k]]
            for j in range(n):
                vecs[i, j, k] = v[j, order[k]]
    return vals, vecs


@numba.njit(cache=True)
def eigvalsh_batch(m, tol, max_sweeps):
    b, n, _ = m.shape
    vals = np.empty((b, n))
    dummy = np.empty((1, 1), dtype=np.complex128)
    for i in range(b):
        a = m[i].copy()
        _sweep_until(a, dummy, tol, max_sweeps, False)
        d = np.empty(n)
        for k in range(n):
            d[k] = a[k, k].real
        d.sort()
        for k in range(n):
            vals[i, k] = d[k]
    return vals
