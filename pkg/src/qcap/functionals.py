"""Entanglement fidelity, entropy exchange, and coherent information.

Rectangular channels (input space embedded in a larger output space, or the
reverse) follow a first-levels convention: the smaller space sits in the
leading dimensions of the larger one.  The bundled erasure channel uses the
same convention.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import (
    CodingScheme,
    KrausChannel,
    apply_channel,
    apply_to_subsystem,
    compose,
    environment_state,
    tensor_power,
)
from .linalg import von_neumann_entropy
from .states import DensityMatrix, purify

KRAUS_METHOD = "kraus-formula"
PURIFICATION_METHOD = "purification-definition"


@dataclass(frozen=True)
class FidelityReport:
    """Entanglement fidelity value plus the method that produced it."""

    value: float
    method: str
    cross_check: float | None = None


@dataclass(frozen=True)
class CoherentInfoReport:
    """Receiver entropy, environment entropy, and their difference in bits."""

    output_entropy: float
    env_entropy: float
    coherent_info: float


def _kraus_fidelity(rho: DensityMatrix, channel: KrausChannel) -> float:
    total = 0.0
    for a in channel.kraus:
        amp = np.trace(a @ rho.matrix)
        total += float(abs(amp) ** 2)
    return min(max(total, 0.0), 1.0)


def _pad_columns(table: np.ndarray, width: int) -> np.ndarray:
    if table.shape[1] == width:
        return table
    out = np.zeros((table.shape[0], width), dtype=complex)
    out[:, : table.shape[1]] = table
    return out


def _purification_fidelity(rho: DensityMatrix, channel: KrausChannel) -> float:
    flat = rho.flattened("sys")
    eta = purify(flat, ref_label="ref")
    out = apply_to_subsystem(channel, eta.density(), "sys")
    d_ref = rho.dim
    width = max(channel.in_dim, channel.out_dim)
    eta_table = _pad_columns(eta.vector.reshape(d_ref, channel.in_dim), width)
    out_mat = out.matrix.reshape(d_ref, channel.out_dim, d_ref, channel.out_dim)
    padded = np.zeros((d_ref, width, d_ref, width), dtype=complex)
    padded[:, : channel.out_dim, :, : channel.out_dim] = out_mat
    flat_eta = eta_table.reshape(-1)
    flat_out = padded.reshape(d_ref * width, d_ref * width)
    value = float(np.vdot(flat_eta, flat_out @ flat_eta).real)
    return min(max(value, 0.0), 1.0)


def entanglement_fidelity(
    rho: DensityMatrix,
    channel: KrausChannel,
    method: str = KRAUS_METHOD,
    cross_check: bool = False,
) -> FidelityReport:
    """How well the channel preserves entanglement with a reference.

    The Kraus route evaluates sum_k |Tr(rho A_k)|^2; the purification route
    purifies rho, sends the system half through the channel, and takes the
    overlap with the original purification.  Both agree to 1e-10 and the
    report carries the second value when ``cross_check`` is set.
    """
    if rho.dim != channel.in_dim:
        raise ValueError(
            f"state dimension {rho.dim} does not match channel input {channel.in_dim}"
        )
    if method not in (KRAUS_METHOD, PURIFICATION_METHOD):
        raise ValueError(f"unknown entanglement fidelity method {method!r}")
    if method == KRAUS_METHOD:
        value = _kraus_fidelity(rho, channel)
        other = _purification_fidelity(rho, channel) if cross_check else None
    else:
        value = _purification_fidelity(rho, channel)
        other = _kraus_fidelity(rho, channel) if cross_check else None
    return FidelityReport(value, method, other)


def entropy_exchange(rho: DensityMatrix, channel: KrausChannel) -> float:
    """Entropy in bits picked up by the channel environment."""
    return von_neumann_entropy(environment_state(channel, rho).matrix)


def coherent_information(rho: DensityMatrix, channel: KrausChannel) -> CoherentInfoReport:
    """Receiver entropy minus environment entropy for one channel use."""
    s_out = von_neumann_entropy(apply_channel(channel, rho).matrix)
    s_env = entropy_exchange(rho, channel)
    return CoherentInfoReport(s_out, s_env, s_out - s_env)


def end_to_end_fidelity(
    scheme: CodingScheme, channel: KrausChannel, cross_check: bool = False
) -> FidelityReport:
    """Entanglement fidelity of decoder o channel^block o encoder on the source."""
    block = tensor_power(channel, scheme.block_size)
    if scheme.encoder.out_dim != block.in_dim:
        raise ValueError(
            f"chain mismatch at channel input: encoder emits dimension "
            f"{scheme.encoder.out_dim}, channel block expects {block.in_dim}"
        )
    if scheme.decoder.in_dim != block.out_dim:
        raise ValueError(
            f"chain mismatch at decoder input: channel block emits dimension "
            f"{block.out_dim}, decoder expects {scheme.decoder.in_dim}"
        )
    if scheme.decoder.out_dim != scheme.source.dim:
        raise ValueError(
            f"chain mismatch at decoder output: decoder emits dimension "
            f"{scheme.decoder.out_dim}, source lives in {scheme.source.dim}"
        )
    total = compose(scheme.decoder, compose(block, scheme.encoder))
    return entanglement_fidelity(scheme.source, total, cross_check=cross_check)
