"""Shared construction helpers for the test suite."""

import numpy as np

from qcap.channels import KrausChannel


def random_kraus_channel(in_dim, out_dim, num_kraus, rng) -> KrausChannel:
    """Random channel from a Haar-ish isometry split into Kraus blocks.

    A complex Gaussian (out_dim * num_kraus) x in_dim matrix is
    orthonormalized by QR; slicing the isometry into num_kraus stacked
    out_dim x in_dim blocks gives operators satisfying completeness by
    construction.
    """
    rows = out_dim * num_kraus
    if rows < in_dim:
        raise ValueError("need out_dim * num_kraus >= in_dim")
    g = rng.standard_normal((rows, in_dim)) + 1j * rng.standard_normal((rows, in_dim))
    q, r = np.linalg.qr(g)
    q = q * np.sign(np.real(np.diagonal(r)))
    ops = [q[k * out_dim : (k + 1) * out_dim] for k in range(num_kraus)]
    return KrausChannel.from_kraus(ops)


def bell_vector() -> np.ndarray:
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1.0 / np.sqrt(2.0)
    return v
