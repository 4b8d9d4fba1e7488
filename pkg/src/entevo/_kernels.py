"""Hot numeric kernels, each in a compiled and a pure-numpy flavour.

The compiled versions are plain loops written for ``numba.njit``; the numpy
versions batch the same work through LAPACK.  Both flavours are importable
regardless of ``ENTEVO_BACKEND`` so they can be checked against each other.
"""
import numpy as np

from ._backend import BACKEND, njit

# Spin-flip sigma_y (x) sigma_y restricted to the 4-dim block spanned by
# |m0>, |m1>, |n0>, |n1>; real symmetric.
SPIN_FLIP_4 = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ],
    dtype=np.complex128,
)


@njit
def jacobi_eigh_nb(h, tol, max_sweeps):
    """Cyclic complex Jacobi diagonalisation of a Hermitian matrix.

    Returns ``(w, v, sweeps)`` with ``w`` descending and ``h = v diag(w) v^H``.
    ``sweeps`` is -1 if the off-diagonal mass did not fall below
    ``tol * ||h||_F`` within ``max_sweeps``.
    """
    n = h.shape[0]
    a = np.empty((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            a[i, j] = 0.5 * (h[i, j] + np.conj(h[j, i]))
    v = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        v[i, i] = 1.0

    fro = 0.0
    for i in range(n):
        for j in range(n):
            fro += a[i, j].real ** 2 + a[i, j].imag ** 2
    fro = np.sqrt(fro)

    done = -1
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += a[p, q].real ** 2 + a[p, q].imag ** 2
        if np.sqrt(2.0 * off) <= tol * fro:
            done = sweep
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = np.abs(apq)
                if g <= 1e-300:
                    continue
                e = apq / g
                ec = np.conj(e)
                theta = (a[q, q].real - a[p, p].real) / (2.0 * g)
                t = 1.0 / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # a <- a J  with J[p,p]=J[q,q]=c, J[p,q]=s e, J[q,p]=-s conj(e)
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * ec * akq
                    a[k, q] = s * e * akp + c * akq
                # a <- J^H a
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * e * aqk
                    a[q, k] = s * ec * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * ec * vkq
                    v[k, q] = s * e * vkp + c * vkq

    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    order = np.argsort(-w)
    return w[order], v[:, order], done


def jacobi_eigh_np(h):
    """LAPACK counterpart of :func:`jacobi_eigh_nb` (descending order)."""
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return w[::-1].copy(), v[:, ::-1].copy()


@njit
def _one_sided(y):
    """One-sided Jacobi on the rows of ``y``: returns ``(u, norms)``.

    The rows are rotated until mutually orthogonal, ``y = u z``, and ``norms``
    holds ``|z_i|``.  Then ``u diag(norms)`` is a square factor of ``y y^H``
    and ``norms`` are the singular values of ``y``.  Nothing is squared, so
    small singular values keep absolute accuracy.
    """
    nr = y.shape[0]
    nc = y.shape[1]
    z = y.copy()
    u = np.zeros((nr, nr), dtype=np.complex128)
    for i in range(nr):
        u[i, i] = 1.0
    fro2 = 0.0
    for i in range(nr):
        for k in range(nc):
            fro2 += z[i, k].real ** 2 + z[i, k].imag ** 2
    # overlaps below eps^2 |y|^2 cannot move a singular value by more than eps |y|
    floor = 1e-32 * fro2
    for _ in range(60):
        rotated = False
        for p in range(nr - 1):
            for q in range(p + 1, nr):
                alpha = 0.0
                beta = 0.0
                gam = 0.0 + 0.0j
                for k in range(nc):
                    alpha += z[p, k].real ** 2 + z[p, k].imag ** 2
                    beta += z[q, k].real ** 2 + z[q, k].imag ** 2
                    gam += z[p, k] * np.conj(z[q, k])
                g = np.abs(gam)
                if g <= floor or g <= 1e-16 * np.sqrt(alpha * beta):
                    continue
                rotated = True
                e = gam / g
                ec = np.conj(e)
                theta = (beta - alpha) / (2.0 * g)
                t = 1.0 / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(nc):
                    zp = z[p, k]
                    zq = z[q, k]
                    z[p, k] = c * zp - s * e * zq
                    z[q, k] = s * ec * zp + c * zq
                for k in range(nr):
                    up = u[k, p]
                    uq = u[k, q]
                    u[k, p] = c * up - s * ec * uq
                    u[k, q] = s * e * up + c * uq
        if not rotated:
            break
    norms = np.empty(nr)
    for i in range(nr):
        nrm = 0.0
        for k in range(nc):
            nrm += z[i, k].real ** 2 + z[i, k].imag ** 2
        norms[i] = np.sqrt(nrm)
    return u, norms


@njit
def block_lambdas_nb(x, d1):
    """Four leading spin-flip singular values for every generator pair.

    ``x`` factors the density matrix as ``rho = x x^H`` (``2*d1`` rows, last
    tensor factor = separated qubit).  Row ``k`` of the result belongs to the
    k-th pair ``(m, n)``, ``m < n``, in lexicographic order.
    """
    npairs = d1 * (d1 - 1) // 2
    r = x.shape[1]
    out = np.zeros((npairs, 4))
    y = np.empty((4, r), dtype=np.complex128)
    f = np.empty((4, 4), dtype=np.complex128)
    sf = np.empty((4, 4), dtype=np.complex128)
    a = np.empty((4, 4), dtype=np.complex128)
    k = 0
    for m in range(d1):
        for n in range(m + 1, d1):
            for j in range(r):
                y[0, j] = x[2 * m, j]
                y[1, j] = x[2 * m + 1, j]
                y[2, j] = x[2 * n, j]
                y[3, j] = x[2 * n + 1, j]
            u, nrm = _one_sided(y)
            for i in range(4):
                for j in range(4):
                    f[i, j] = u[i, j] * nrm[j]
            # SPIN_FLIP_4 is a signed reversal of the rows
            for j in range(4):
                sf[0, j] = -f[3, j]
                sf[1, j] = f[2, j]
                sf[2, j] = f[1, j]
                sf[3, j] = -f[0, j]
            for i in range(4):
                for j in range(4):
                    acc = 0.0 + 0.0j
                    for q in range(4):
                        acc += f[q, i] * sf[q, j]
                    a[i, j] = acc
            _, sv = _one_sided(a)
            sv = np.sort(sv)[::-1]
            for i in range(4):
                out[k, i] = sv[i]
            k += 1
    return out


_PAIR_CACHE = {}


def _pair_index(d1):
    idx = _PAIR_CACHE.get(d1)
    if idx is None:
        m, n = np.triu_indices(d1, k=1)
        idx = np.stack([2 * m, 2 * m + 1, 2 * n, 2 * n + 1], axis=1)
        idx.setflags(write=False)
        _PAIR_CACHE[d1] = idx
    return idx


def block_lambdas_np(x, d1):
    """Vectorised counterpart of :func:`block_lambdas_nb`."""
    y = x[_pair_index(d1)]
    u, s, _ = np.linalg.svd(y, full_matrices=False)
    f = u * s[:, None, :]
    a = np.swapaxes(f, -1, -2) @ SPIN_FLIP_4 @ f
    sv = np.linalg.svd(a, compute_uv=False)
    out = np.zeros((sv.shape[0], 4))
    out[:, : sv.shape[1]] = sv[:, :4]
    return out


def block_lambdas(x, d1):
    x = np.ascontiguousarray(x, dtype=np.complex128)
    if BACKEND == "numba":
        return block_lambdas_nb(x, d1)
    return block_lambdas_np(x, d1)
