"""Haar-unitary spectral sampling.

A spectral sample of size m from x is the spectrum of the leading m x m
block of H diag(x) H^dagger, with H Haar-distributed on U(n).  Every draw
is tied to an :class:`RngStream` so that replicate r of an experiment is
reproducible on its own, whatever the batching or thread layout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RNG_NAME = "numpy.random.PCG64 via SeedSequence(seed, spawn_key=(stream,))"
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class RngStream:
    """An independent random stream identified by (seed, stream)."""

    seed: int
    stream: int = 0

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.stream < 0:
            raise ValueError(f"stream index must be >= 0, got {self.stream}")

    def generator(self):
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=(self.stream,))))


def _ginibre(n, gen):
    return (gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))) / np.sqrt(2.0)


def _haar_from_ginibre(z):
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    phase = d / np.abs(d)
    return q * phase[..., None, :]


def haar_unitary(n, rng):
    """Haar-random n x n unitary: QR of a complex Ginibre matrix with each
    column of Q rotated by the phase of the matching diagonal entry of R."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _haar_from_ginibre(_ginibre(n, rng.generator()))


def _as_hermitian(a):
    a = np.asarray(a)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    # Hermitian by construction: strict lower triangle plus real diagonal
    low = np.tril(a, -1).astype(complex)
    diag = np.real(np.diagonal(a, axis1=-2, axis2=-1))
    out = low + np.conj(np.swapaxes(low, -1, -2))
    idx = np.arange(a.shape[-1])
    out[..., idx, idx] = diag
    return out


def _off_norm(a):
    m = a.shape[-1]
    mask = ~np.eye(m, dtype=bool)
    return np.sqrt(np.sum(np.abs(a[:, mask]) ** 2, axis=1))


def _jacobi(a, vectors, max_sweeps):
    # a: (B, m, m) complex Hermitian, modified in place
    batch, m, _ = a.shape
    v = np.broadcast_to(np.eye(m, dtype=complex), a.shape).copy() if vectors else None
    tol = 4 * _EPS * np.linalg.norm(a.reshape(batch, -1), axis=1)
    for _ in range(max_sweeps):
        active = _off_norm(a) > tol
        if not active.any():
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[:, p, q]
                r = np.abs(apq)
                rot = active & (r > 0)
                if not rot.any():
                    continue
                rs = np.where(rot, r, 1.0)
                phase = np.where(rot, apq / rs, 1.0)
                theta = (a[:, q, q].real - a[:, p, p].real) / (2 * rs)
                t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1))
                c = np.where(rot, 1 / np.sqrt(t * t + 1), 1.0)
                s = np.where(rot, t * c, 0.0)
                ph_c = np.conj(phase)
                # columns: A <- A U with U = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on (p, q)
                col_p, col_q = a[:, :, p].copy(), a[:, :, q].copy()
                a[:, :, p] = c[:, None] * col_p - (s * ph_c)[:, None] * col_q
                a[:, :, q] = s[:, None] * col_p + (c * ph_c)[:, None] * col_q
                row_p, row_q = a[:, p, :].copy(), a[:, q, :].copy()
                a[:, p, :] = c[:, None] * row_p - (s * phase)[:, None] * row_q
                a[:, q, :] = s[:, None] * row_p + (c * phase)[:, None] * row_q
                a[rot, p, q] = 0
                a[rot, q, p] = 0
                if v is not None:
                    vp, vq = v[:, :, p].copy(), v[:, :, q].copy()
                    v[:, :, p] = c[:, None] * vp - (s * ph_c)[:, None] * vq
                    v[:, :, q] = s[:, None] * vp + (c * ph_c)[:, None] * vq
    return np.real(np.diagonal(a, axis1=-2, axis2=-1)).copy(), v


def hermitian_eigenvalues(a, vectors=False, max_sweeps=50):
    """Eigenvalues of a Hermitian matrix (or a stack of them) by cyclic
    complex Jacobi rotations, in ascending order.

    Only the lower triangle and the real part of the diagonal are read.
    With ``vectors=True`` also returns the eigenvectors as columns.
    """
    h = _as_hermitian(a)
    single = h.ndim == 2
    h = h.reshape((-1,) + h.shape[-2:]).copy()
    w, v = _jacobi(h, vectors, max_sweeps)
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    if v is not None:
        v = np.take_along_axis(v, order[:, None, :], axis=2)
    if single:
        w = w[0]
        v = None if v is None else v[0]
    return (w, v) if vectors else w


def _check_sizes(x, m):
    n = len(x)
    if not 1 <= m <= n:
        raise ValueError(f"sample size m = {m} must satisfy 1 <= m <= n = {n}")


def spectral_samples(x, m, seed, streams):
    """Spectral samples of size m for each stream index in ``streams``.

    Returns an array of shape (len(streams), m), each row ascending.
    """
    x = np.asarray([float(v) for v in x])
    _check_sizes(x, m)
    n = len(x)
    streams = list(streams)
    z = np.stack([_ginibre(n, RngStream(seed, s).generator()) for s in streams]) if streams else np.empty((0, n, n), complex)
    h = _haar_from_ginibre(z)
    top = h[:, :m, :]
    y = (top * x[None, None, :]) @ np.conj(np.swapaxes(top, -1, -2))
    return hermitian_eigenvalues(y).reshape(len(streams), m)


def spectral_sample(x, m, rng):
    """Spectrum of (H diag(x) H^dagger)[:m, :m], ascending."""
    return spectral_samples(x, m, rng.seed, [rng.stream])[0]


def srs_sample(x, m, rng):
    """Simple random sample of size m without replacement, in draw order."""
    x = list(x)
    _check_sizes(x, m)
    idx = rng.generator().permutation(len(x))[:m]
    return tuple(x[k] for k in idx)


def srs_samples(x, m, seed, streams):
    """Simple random samples (float rows) for each stream index."""
    xs = np.asarray([float(v) for v in x])
    _check_sizes(xs, m)
    rows = [xs[RngStream(seed, s).generator().permutation(len(xs))[:m]] for s in streams]
    return np.array(rows).reshape(len(rows), m)
