"""Typed density matrices, pure states, purifications, and state generators."""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .linalg import (
    EIGENVALUE_FLOOR,
    HERMITICITY_TOL,
    TRACE_TOL,
    eig_hermitian,
    hermiticity_defect,
    trace_norm,
    von_neumann_entropy,
)

SCHMIDT_CUTOFF = 1e-12
MARGINAL_GAP_TOL = 1e-8


def _auto_labels(count: int) -> tuple[str, ...]:
    return tuple(f"q{i}" for i in range(count))


def _fresh_label(base: str, taken: Sequence[str]) -> str:
    if base not in taken:
        return base
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def _check_factors(total: int, dims, labels) -> tuple[tuple[int, ...], tuple[str, ...]]:
    dims = (total,) if dims is None else tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise ValueError(f"factor dimensions must be positive, got {dims}")
    if math.prod(dims) != total:
        raise ValueError(f"factor dimensions {dims} do not multiply to {total}")
    labels = _auto_labels(len(dims)) if labels is None else tuple(str(s) for s in labels)
    if len(labels) != len(dims):
        raise ValueError(f"{len(labels)} labels for {len(dims)} factors")
    if len(set(labels)) != len(labels):
        raise ValueError(f"factor labels must be unique, got {labels}")
    return dims, labels


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Unit-trace positive semidefinite matrix with labeled tensor factors."""

    matrix: np.ndarray
    dims: tuple[int, ...] | None = None
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        dims, labels = _check_factors(m.shape[0], self.dims, self.labels)
        defect = hermiticity_defect(m)
        if defect > HERMITICITY_TOL:
            raise ValueError(f"density matrix is not Hermitian: max deviation {defect:.3e}")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {tr:.12g} deviates from 1")
        smallest = float(np.linalg.eigvalsh(m).min())
        if smallest < EIGENVALUE_FLOOR:
            raise ValueError(
                f"density matrix has negative eigenvalue {smallest:.3e} "
                f"below the floor {EIGENVALUE_FLOOR:.0e}"
            )
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def factor_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(
                f"factor {label!r} not found; available factors are {list(self.labels)}"
            ) from None

    def reduced(self, keep_labels: Sequence[str]) -> "DensityMatrix":
        """Partial trace keeping only the listed factors, original order."""
        from .linalg import partial_trace

        keep = sorted(self.factor_index(s) for s in keep_labels)
        sub = partial_trace(self.matrix, self.dims, keep)
        return DensityMatrix(
            sub,
            tuple(self.dims[k] for k in keep),
            tuple(self.labels[k] for k in keep),
        )

    def entropy(self) -> float:
        return von_neumann_entropy(self.matrix)

    def flattened(self, label: str = "sys") -> "DensityMatrix":
        """Same matrix viewed as a single tensor factor."""
        return DensityMatrix(self.matrix, (self.dim,), (label,))


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector with labeled tensor factors."""

    vector: np.ndarray
    dims: tuple[int, ...] | None = None
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=complex).reshape(-1)
        dims, labels = _check_factors(v.size, self.dims, self.labels)
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > TRACE_TOL:
            raise ValueError(f"pure state norm {norm:.12g} deviates from 1")
        object.__setattr__(self, "vector", v)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.vector.size

    def factor_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(
                f"factor {label!r} not found; available factors are {list(self.labels)}"
            ) from None

    def density(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.vector, self.vector.conj()), self.dims, self.labels)

    def reduced(self, keep_labels: Sequence[str]) -> DensityMatrix:
        return self.density().reduced(keep_labels)


def maximally_mixed(dim: int, dims=None, labels=None) -> DensityMatrix:
    """Identity over its dimension, the flat state."""
    return DensityMatrix(np.eye(dim, dtype=complex) / dim, dims, labels)


def purify(rho: DensityMatrix, ref_label: str = "ref") -> PureState:
    """Canonical purification sum_a sqrt(l_a) |a>|v_a> on reference x system.

    The reference factor has the same total dimension as ``rho`` and tracing
    it out returns ``rho`` exactly.
    """
    spec = eig_hermitian(rho.matrix)
    amps = np.sqrt(np.clip(spec.values, 0.0, None))
    d = rho.dim
    # row a of the (ref, system) table is sqrt(l_a) v_a
    table = amps[:, None] * spec.vectors.T
    ref = _fresh_label(ref_label, rho.labels)
    return PureState(table.reshape(-1), (d,) + rho.dims, (ref,) + rho.labels)


def max_overlap_purification(
    rho: DensityMatrix, aux_label: str = "aux"
) -> tuple[PureState, float]:
    """Purification of a bipartite state aligned with its top eigenvector.

    For ``rho`` on factors (A, B) with largest eigenvalue l_max and top
    eigenvector phi, returns the pure state on (A, B, C), dim C = dim A + 1,

        sqrt(l_max) |phi>|0_C> + sqrt(1 - l_max) sum_i sqrt(mu_i) |i_A>|0_B>|i_C>

    where (mu_i, |i_A>) is the spectrum of the A marginal of ``rho``.  Its
    overlap with rho x |0_C><0_C| equals l_max^2 exactly.
    """
    if len(rho.dims) != 2:
        raise ValueError(
            f"expected a state with exactly two factors, got {len(rho.dims)}"
        )
    da, db = rho.dims
    spec = eig_hermitian(rho.matrix)
    l_max = float(spec.values[0])
    phi = spec.vectors[:, 0].reshape(da, db)
    marg = rho.reduced([rho.labels[0]])
    mu = eig_hermitian(marg.matrix)
    dc = da + 1
    table = np.zeros((da, db, dc), dtype=complex)
    table[:, :, 0] = math.sqrt(max(l_max, 0.0)) * phi
    tail = math.sqrt(max(1.0 - l_max, 0.0))
    weights = np.sqrt(np.clip(mu.values, 0.0, None))
    for i in range(da):
        table[:, 0, i + 1] += tail * weights[i] * mu.vectors[:, i]
    aux = _fresh_label(aux_label, rho.labels)
    state = PureState(table.reshape(-1), (da, db, dc), rho.labels + (aux,))
    return state, l_max


def _factor_first(state: PureState, label: str) -> np.ndarray:
    """State table with the named factor as rows, remaining factors flattened."""
    idx = state.factor_index(label)
    arr = state.vector.reshape(state.dims)
    arr = np.moveaxis(arr, idx, 0)
    return arr.reshape(state.dims[idx], -1)


def _loewdin(frame: np.ndarray) -> np.ndarray:
    """Symmetric orthonormalization of nearly orthonormal columns."""
    gram = frame.conj().T @ frame
    values, vectors = np.linalg.eigh(gram)
    values = np.clip(values, SCHMIDT_CUTOFF, None)
    inv_root = (vectors / np.sqrt(values)) @ vectors.conj().T
    return frame @ inv_root


def _complete_basis(frame: np.ndarray) -> np.ndarray:
    """Extend orthonormal columns to a full orthonormal basis."""
    n, r = frame.shape
    if r == n:
        return frame
    q, _ = np.linalg.qr(np.concatenate([frame, np.eye(n, dtype=complex)], axis=1))
    return np.concatenate([frame, q[:, r:n]], axis=1)


def _relate_by_frames(
    state1: PureState, state2: PureState, shared: str
) -> tuple[np.ndarray, float]:
    """Isometry on the complement factors carrying state1 onto state2.

    Both states must share the named factor with equal dimension, and the
    complement of ``state1`` must not exceed that of ``state2``.  Returns
    (U, gap) where gap is the trace-norm mismatch of the shared marginals;
    callers decide how much gap they tolerate.
    """
    i1, i2 = state1.factor_index(shared), state2.factor_index(shared)
    ds = state1.dims[i1]
    if state2.dims[i2] != ds:
        raise ValueError(
            f"shared factor {shared!r} has dimension {ds} in one state "
            f"and {state2.dims[i2]} in the other"
        )
    v1 = _factor_first(state1, shared)
    v2 = _factor_first(state2, shared)
    n1, n2 = v1.shape[1], v2.shape[1]
    if n1 > n2:
        raise ValueError(
            f"complement dimension {n1} of the first state exceeds {n2}; "
            "an isometry needs the first complement to be no larger"
        )
    sigma1 = v1 @ v1.conj().T
    sigma2 = v2 @ v2.conj().T
    gap = trace_norm(sigma1 - sigma2)
    spec = eig_hermitian(sigma1)
    support = spec.values > SCHMIDT_CUTOFF
    vecs = spec.vectors[:, support]
    roots = np.sqrt(spec.values[support])
    frame1 = (vecs.conj().T @ v1).T / roots[None, :]
    frame2 = (vecs.conj().T @ v2).T / roots[None, :]
    frame1 = _loewdin(frame1)
    frame2 = _loewdin(frame2)
    basis1 = _complete_basis(frame1)
    basis2 = _complete_basis(frame2)[:, :n1]
    u = basis2 @ basis1.conj().T
    phase = np.vdot(v2.reshape(-1), (v1 @ u.T).reshape(-1))
    if abs(phase) > SCHMIDT_CUTOFF:
        u = u * (phase.conjugate() / abs(phase))
    return u, float(gap)


def relate_purifications(
    state1: PureState, state2: PureState, shared: str, gap_tol: float = MARGINAL_GAP_TOL
) -> np.ndarray:
    """Isometry U on the complement of ``shared`` with (I x U) state1 = state2.

    Requires the reduced states on the shared factor to agree within
    ``gap_tol`` in trace norm.  When the complements have equal dimension U
    is unitary; when the second is larger U is an isometry (U^dag U = I).
    The global phase makes <state2|(I x U)|state1> real and nonnegative.
    """
    u, gap = _relate_by_frames(state1, state2, shared)
    if gap > gap_tol:
        raise ValueError(
            f"reduced states on {shared!r} differ by trace-norm gap {gap:.3e}, "
            f"above the tolerance {gap_tol:.0e}"
        )
    return u


def apply_to_complement(state: PureState, shared: str, u: np.ndarray) -> PureState:
    """Apply an isometry to every factor except ``shared``."""
    idx = state.factor_index(shared)
    table = _factor_first(state, shared)
    out = table @ np.asarray(u, dtype=complex).T
    ds = state.dims[idx]
    rest = out.shape[1]
    new_dims = (ds, rest)
    moved = out.reshape(new_dims)
    comp_label = "+".join(s for s in state.labels if s != shared)
    return PureState(moved.reshape(-1), new_dims, (shared, comp_label))


def _as_rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_density(dim: int, rank: int, seed) -> DensityMatrix:
    """Wishart-style random state G G^dag / Tr with a d x rank Gaussian G."""
    if not 1 <= rank <= dim:
        raise ValueError(f"rank {rank} outside the valid range 1..{dim}")
    rng = _as_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_pure_state(dim: int, seed, dims=None, labels=None) -> PureState:
    rng = _as_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState(v / np.linalg.norm(v), dims, labels)


def random_unitary(dim: int, seed) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    rng = _as_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def high_entropy_counterexample(psi: PureState, eps: float, n: int) -> DensityMatrix:
    """State with fidelity 1 - eps to ``psi`` and entropy H2(eps) + eps log2 n.

    Mixes ``psi`` with the flat state on n orthonormal directions orthogonal
    to it, showing that near-unit fidelity puts no useful cap on entropy
    once the ambient dimension is large.
    """
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"mixing weight {eps!r} outside [0, 1]")
    if n < 1:
        raise ValueError(f"need at least one orthogonal direction, got {n}")
    d = psi.dim
    if d < n + 1:
        raise ValueError(
            f"ambient dimension {d} too small: n={n} orthogonal directions "
            f"need dimension at least {n + 1}"
        )
    stacked = np.concatenate([psi.vector[:, None], np.eye(d, dtype=complex)], axis=1)
    q, _ = np.linalg.qr(stacked)
    others = q[:, 1 : n + 1]
    m = (1.0 - eps) * np.outer(psi.vector, psi.vector.conj())
    m += (eps / n) * (others @ others.conj().T)
    return DensityMatrix(m, psi.dims, psi.labels)


def write_density_file(path, rho: DensityMatrix) -> None:
    """Serialize a density matrix as a dims header plus re/im entry pairs."""
    lines = ["dims " + " ".join(str(d) for d in rho.dims)]
    for row in rho.matrix:
        lines.append(" ".join(f"{z.real:.17g} {z.imag:.17g}" for z in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_density_file(path) -> DensityMatrix:
    """Parse the format written by :func:`write_density_file` and validate."""
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].split() or lines[0].split()[0] != "dims":
        raise ValueError("state file must start with a 'dims d1 d2 ...' line")
    try:
        dims = tuple(int(tok) for tok in lines[0].split()[1:])
    except ValueError:
        raise ValueError(f"unreadable dims line {lines[0]!r}") from None
    if not dims:
        raise ValueError("dims line lists no factor dimensions")
    total = math.prod(dims)
    tokens = " ".join(lines[1:]).split()
    if len(tokens) != 2 * total * total:
        raise ValueError(
            f"expected {2 * total * total} numbers for a {total}x{total} matrix, "
            f"found {len(tokens)}"
        )
    try:
        flat = np.array([float(tok) for tok in tokens], dtype=float)
    except ValueError:
        raise ValueError("state file holds a non-numeric entry") from None
    entries = flat[0::2] + 1j * flat[1::2]
    return DensityMatrix(entries.reshape(total, total), dims)
