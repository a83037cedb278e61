"""Dense linear algebra helpers shared by the whole package.

All entropies are in bits (logarithms base 2).  Matrices are plain numpy
arrays; the typed wrappers live in :mod:`qcap.states`.
"""
from __future__ import annotations

import math
from typing import Iterable, NamedTuple

import numpy as np

HERMITICITY_TOL = 1e-9
TRACE_TOL = 1e-9
EIGENVALUE_FLOOR = -1e-10
_TIE_TOL = 1e-12
_LOG2 = math.log(2.0)


class Spectrum(NamedTuple):
    """Eigenvalues in descending order and matching eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray


def hermiticity_defect(matrix: np.ndarray) -> float:
    """Largest entrywise deviation of ``matrix`` from its own adjoint."""
    m = np.asarray(matrix)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        k = int(np.argmax(np.abs(col)))
        pivot = col[k]
        if abs(pivot) > 0.0:
            out[:, j] = col * (abs(pivot) / pivot)
    return out


def eig_hermitian(matrix: np.ndarray, tol: float = HERMITICITY_TOL) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, sorted descending.

    Ties (eigenvalues within 1e-12 of each other) are ordered by the
    lexicographic (real, imaginary) value of the first eigenvector
    component after a deterministic phase fix, so repeated runs on the
    same input give identical output.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    defect = hermiticity_defect(m)
    if defect > tol:
        raise ValueError(
            f"matrix is not Hermitian: max |M - M^dag| entry is {defect:.3e}"
        )
    values, vectors = np.linalg.eigh(m)
    values = values[::-1]
    vectors = vectors[:, ::-1]
    vectors = _fix_phases(vectors)
    # reorder inside degenerate clusters for a deterministic tie-break
    start = 0
    n = values.size
    while start < n:
        stop = start + 1
        while stop < n and values[start] - values[stop] <= _TIE_TOL:
            stop += 1
        if stop - start > 1:
            block = vectors[:, start:stop]
            keys = [(block[0, j].real, block[0, j].imag) for j in range(block.shape[1])]
            order = sorted(range(len(keys)), key=keys.__getitem__)
            vectors[:, start:stop] = block[:, order]
        start = stop
    return Spectrum(np.real(values.copy()), vectors)


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with row-major index convention i*dim_b + j."""
    return np.kron(np.asarray(a), np.asarray(b))


def partial_trace(matrix: np.ndarray, dims: Iterable[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every tensor factor not listed in ``keep``.

    ``dims`` lists the factor dimensions left to right, ``keep`` the factor
    indices to retain (original order is preserved).  An empty keep set
    returns the 1x1 matrix holding the trace.
    """
    dims = tuple(int(d) for d in dims)
    keep = sorted({int(k) for k in keep})
    m = np.asarray(matrix, dtype=complex)
    total = math.prod(dims)
    if m.shape != (total, total):
        raise ValueError(
            f"matrix shape {m.shape} does not match factor dimensions {dims}"
        )
    n = len(dims)
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} factors")
    if not keep:
        return np.array([[np.trace(m)]], dtype=complex)
    reshaped = m.reshape(dims + dims)
    row = list(range(n))
    col = [k + n if k in set(keep) else k for k in range(n)]
    out = [k for k in keep] + [k + n for k in keep]
    reduced = np.einsum(reshaped, row + col, out)
    kept_dim = math.prod(dims[k] for k in keep)
    return np.ascontiguousarray(reduced.reshape(kept_dim, kept_dim))


def trace_norm(matrix: np.ndarray) -> float:
    """Sum of singular values; for Hermitian input this is sum |eigenvalue|."""
    m = np.asarray(matrix, dtype=complex)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False).sum())


def _clamp_spectrum(values: np.ndarray) -> np.ndarray:
    if values.size and float(values.min()) < EIGENVALUE_FLOOR:
        raise ValueError(
            f"matrix has negative eigenvalue {float(values.min()):.3e} "
            f"below the floor {EIGENVALUE_FLOOR:.0e}"
        )
    return np.clip(values, 0.0, None)


def entropy_of_spectrum(values: np.ndarray) -> float:
    """Shannon entropy in bits of a nonnegative eigenvalue vector."""
    positive = values[values > 0.0]
    if positive.size == 0:
        return 0.0
    return float(abs(-(positive * np.log2(positive)).sum()))


def von_neumann_entropy(rho: np.ndarray, validate: bool = True) -> float:
    """Von Neumann entropy in bits, -Tr(rho log2 rho).

    With ``validate`` the input must be Hermitian within 1e-9, have unit
    trace within 1e-9, and eigenvalues above -1e-10; small negative
    eigenvalues are clamped to zero before taking logs.
    """
    m = np.asarray(rho, dtype=complex)
    if validate:
        defect = hermiticity_defect(m)
        if defect > HERMITICITY_TOL:
            raise ValueError(
                f"density matrix is not Hermitian: max deviation {defect:.3e}"
            )
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {tr:.12g} is not 1")
    values = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    values = _clamp_spectrum(values) if validate else np.clip(values, 0.0, None)
    return entropy_of_spectrum(values)


def binary_entropy(x: float) -> float:
    """H2(x) = -x log2 x - (1-x) log2(1-x) on [0, 1], 0 at the endpoints."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy argument {x!r} outside [0, 1]")
    if x == 0.0 or x == 1.0:
        return 0.0
    return float(-x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x))


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    values, vectors = np.linalg.eigh(matrix)
    values = np.clip(values, 0.0, None)
    return (vectors * np.sqrt(values)) @ vectors.conj().T


def uhlmann_fidelity(rho1: np.ndarray, rho2: np.ndarray) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2.

    For a pure first argument this reduces to <psi|rho2|psi>.
    """
    a = np.asarray(rho1, dtype=complex)
    b = np.asarray(rho2, dtype=complex)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    root = _psd_sqrt(0.5 * (a + a.conj().T))
    inner = root @ (0.5 * (b + b.conj().T)) @ root
    values = np.clip(np.linalg.eigvalsh(0.5 * (inner + inner.conj().T)), 0.0, None)
    fid = float(np.sqrt(values).sum()) ** 2
    return min(max(fid, 0.0), 1.0)


def bw_overlap(lambdas1: Iterable[float], lambdas2: Iterable[float]) -> float:
    """Bhattacharyya overlap (sum_i sqrt(p_i q_i))^2 of two spectra."""
    p = np.asarray(list(lambdas1), dtype=float)
    q = np.asarray(list(lambdas2), dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"spectra have different lengths {p.size} and {q.size}")
    for name, vec in (("first", p), ("second", q)):
        if vec.size and float(vec.min()) < EIGENVALUE_FLOOR:
            raise ValueError(
                f"{name} spectrum has negative entry {float(vec.min()):.3e}"
            )
        if abs(float(vec.sum()) - 1.0) > TRACE_TOL:
            raise ValueError(
                f"{name} spectrum sums to {float(vec.sum()):.12g}, expected 1"
            )
    p = np.clip(p, 0.0, None)
    q = np.clip(q, 0.0, None)
    return float(np.sqrt(p * q).sum() ** 2)
