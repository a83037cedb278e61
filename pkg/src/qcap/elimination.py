"""Replacing a general source encoder by a directly transmitted state.

Given a coding scheme whose end-to-end entanglement fidelity is 1 - eps,
this module constructs a channel-input state rho_prime (the best pure
branch of the encoder) and a tail map appended after the decoder so that
sending rho_prime straight into the channel achieves fidelity at least
1 - 2 eps, while the entropy of rho_prime stays close to the source's.

The tail construction leans on a purification step whose reference-side
marginal only approximately matches; each instance records that mismatch
as ``marginal_gap`` and is flagged when it exceeds the tolerance instead
of being silently trusted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import (
    CodingScheme,
    KrausChannel,
    apply_to_subsystem,
    compose,
    erasure_channel,
    measure_environment_branches,
    tensor_power,
    unitary_channel,
)
from .functionals import end_to_end_fidelity, entanglement_fidelity
from .states import (
    DensityMatrix,
    PureState,
    _as_rng,
    _relate_by_frames,
    max_overlap_purification,
    purify,
    random_density,
    random_unitary,
)

FIDELITY_WINDOW = 1.0 / 72.0
MARGINAL_FLAG_TOL = 1e-6
FIDELITY_SLACK = 1e-7


@dataclass(frozen=True)
class EliminationInstance:
    """One executed encoder elimination with its audit numbers.

    ``eps_out <= 2 eps_in + slack`` is guaranteed only when ``flagged`` is
    False; the entropy gap bound holds regardless.
    """

    scheme: CodingScheme
    eps_in: float
    branch_index: int
    rho_prime: DensityMatrix
    tail_decoder: KrausChannel
    eps_out: float
    entropy_gap: float
    entropy_bound: float
    marginal_gap: float
    purification_overlap: float
    flagged: bool

    @property
    def fidelity_ok(self) -> bool:
        return self.eps_out <= 2.0 * self.eps_in + FIDELITY_SLACK

    @property
    def entropy_ok(self) -> bool:
        return self.entropy_gap <= self.entropy_bound


def _append_zero(state: PureState, aux_dim: int, label: str) -> PureState:
    zero = np.zeros(aux_dim, dtype=complex)
    zero[0] = 1.0
    return PureState(
        np.kron(state.vector, zero), state.dims + (aux_dim,), state.labels + (label,)
    )


def eliminate_encoder(scheme: CodingScheme, channel: KrausChannel) -> EliminationInstance:
    """Run the constructive elimination of the scheme's encoder.

    Steps: purify the source, split the encoder into pure branches by
    measuring its environment, keep the branch with the best conditional
    fidelity (at least the overall one, by averaging), take rho_prime as
    that branch's channel input, and build the tail map from the isometry
    relating the branch purification to the max-overlap purification of
    the decoded output.  Requires the source dimension not to exceed the
    channel-block input so the relating isometry exists.
    """
    eps_in = 1.0 - end_to_end_fidelity(scheme, channel).value
    if eps_in >= FIDELITY_WINDOW:
        raise ValueError(
            f"scheme infidelity {eps_in:.6g} is outside the validity window "
            f"[0, 1/72); the construction needs a nearly faithful scheme"
        )
    block = tensor_power(channel, scheme.block_size)
    d_src = scheme.source.dim
    if d_src > block.in_dim:
        raise ValueError(
            f"source dimension {d_src} exceeds the channel input dimension "
            f"{block.in_dim}; the tail construction needs an isometry upward"
        )

    source = scheme.source.flattened("sys")
    phi = purify(source, ref_label="ref")
    decode_block = compose(scheme.decoder, block)
    branches = measure_environment_branches(scheme.encoder, phi, "sys")
    best_index = -1
    best_fid = -math.inf
    best_state = None
    for index, (_, branch) in enumerate(branches):
        decoded = apply_to_subsystem(decode_block, branch.density(), "sys")
        fid = float(np.vdot(phi.vector, decoded.matrix @ phi.vector).real)
        if fid > best_fid:
            best_index, best_fid, best_state = index, fid, branch

    psi = best_state
    rho_prime = psi.reduced(["sys"])
    rho_out = apply_to_subsystem(decode_block, psi.density(), "sys")
    big_psi, _ = max_overlap_purification(rho_out, aux_label="aux")
    aux_dim = d_src + 1
    zero_proj = np.zeros((aux_dim, aux_dim), dtype=complex)
    zero_proj[0, 0] = 1.0
    overlap = float(
        np.vdot(big_psi.vector, np.kron(rho_out.matrix, zero_proj) @ big_psi.vector).real
    )

    psi_zero = _append_zero(psi, aux_dim, "aux")
    u, gap = _relate_by_frames(big_psi, psi_zero, "ref")
    reshaped = u.reshape(block.in_dim, aux_dim, scheme.decoder.out_dim, aux_dim)
    tail = KrausChannel.from_kraus(
        [np.ascontiguousarray(reshaped[:, j, :, 0]) for j in range(aux_dim)]
    )

    eps_out = 1.0 - entanglement_fidelity(rho_prime, compose(tail, decode_block)).value
    entropy_gap = abs(source.entropy() - rho_prime.entropy())
    entropy_bound = 2.0 * math.sqrt(2.0 * eps_in) * math.log2(d_src) + 2.0
    return EliminationInstance(
        scheme=scheme,
        eps_in=eps_in,
        branch_index=best_index,
        rho_prime=rho_prime,
        tail_decoder=tail,
        eps_out=eps_out,
        entropy_gap=entropy_gap,
        entropy_bound=entropy_bound,
        marginal_gap=gap,
        purification_overlap=overlap,
        flagged=gap > MARGINAL_FLAG_TOL,
    )


def _split_isometry_scheme(rng: np.random.Generator) -> tuple[CodingScheme, KrausChannel]:
    """Mixed pair of orthogonal-image isometries, perfectly decodable."""
    basis = random_unitary(4, rng)
    first, second = basis[:, :2], basis[:, 2:]
    weight = float(rng.uniform(0.2, 0.8))
    encoder = KrausChannel.from_kraus(
        [math.sqrt(weight) * first, math.sqrt(1.0 - weight) * second]
    )
    rotation = random_unitary(4, rng)
    channel = unitary_channel(rotation)
    decoder = KrausChannel.from_kraus(
        [first.conj().T @ rotation.conj().T, second.conj().T @ rotation.conj().T]
    )
    source = random_density(2, rank=2, seed=rng)
    return CodingScheme(source, encoder, decoder, 1), channel


def _noisy_rotation_scheme(rng: np.random.Generator) -> tuple[CodingScheme, KrausChannel]:
    """Identity-plus-rotated encoder branches through a slightly noisy unitary."""
    dim = int(rng.integers(2, 5))
    source = random_density(dim, rank=dim, seed=rng)
    angle = float(rng.uniform(0.05, 0.15))
    herm = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    herm = herm + herm.conj().T
    herm = herm / np.linalg.norm(herm, 2)
    values, vectors = np.linalg.eigh(angle * herm)
    drift = (vectors * np.exp(1j * values)) @ vectors.conj().T
    weight = float(rng.uniform(0.25, 0.45))
    encoder = KrausChannel.from_kraus(
        [math.sqrt(1.0 - weight) * np.eye(dim), math.sqrt(weight) * drift]
    )
    main = random_unitary(dim, rng)
    noise_angle = float(rng.uniform(0.01, 0.03))
    noise_rate = float(rng.uniform(0.001, 0.004))
    kick = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    kick = kick + kick.conj().T
    kick = kick / np.linalg.norm(kick, 2)
    values, vectors = np.linalg.eigh(noise_angle * kick)
    wobble = (vectors * np.exp(1j * values)) @ vectors.conj().T
    channel = KrausChannel.from_kraus(
        [
            math.sqrt(1.0 - noise_rate) * main,
            math.sqrt(noise_rate) * (main @ wobble),
        ]
    )
    decoder = unitary_channel(main.conj().T)
    scheme = CodingScheme(source, encoder, decoder, 1)
    # shrink the encoder drift until the scheme is comfortably faithful
    while 1.0 - end_to_end_fidelity(scheme, channel).value > 0.009:
        angle *= 0.5
        values, vectors = np.linalg.eigh(angle * herm)
        drift = (vectors * np.exp(1j * values)) @ vectors.conj().T
        encoder = KrausChannel.from_kraus(
            [math.sqrt(1.0 - weight) * np.eye(dim), math.sqrt(weight) * drift]
        )
        scheme = CodingScheme(source, encoder, decoder, 1)
    return scheme, channel


def _erasure_recovery_scheme(rng: np.random.Generator) -> tuple[CodingScheme, KrausChannel]:
    """Low-rate erasure with the flag-to-ground recovery decoder."""
    p = float(rng.uniform(0.001, 0.005))
    channel = erasure_channel(p)
    encoder = unitary_channel(random_unitary(2, rng))
    recover_kept = np.array([[1, 0, 0], [0, 1, 0]], dtype=complex)
    recover_lost = np.array([[0, 0, 1], [0, 0, 0]], dtype=complex)
    decoder = compose(
        unitary_channel(np.asarray(encoder.kraus[0]).conj().T),
        KrausChannel.from_kraus([recover_kept, recover_lost]),
    )
    source = random_density(2, rank=2, seed=rng)
    return CodingScheme(source, encoder, decoder, 1), channel


def random_demo_schemes(count: int, seed) -> list[tuple[CodingScheme, KrausChannel]]:
    """Seeded mixed bag of high-fidelity schemes for the elimination demo.

    Cycles through three families: classically mixed orthogonal isometries
    (exactly decodable, so the elimination is exact), mixed near-identity
    rotations through a noisy unitary, and low-rate erasure with a recovery
    decoder.  Every scheme has end-to-end fidelity at least 0.99.
    """
    if count < 1:
        raise ValueError(f"need at least one scheme, got {count}")
    rng = _as_rng(seed)
    builders = (
        _split_isometry_scheme,
        _noisy_rotation_scheme,
        _erasure_recovery_scheme,
    )
    return [builders[i % len(builders)](rng) for i in range(count)]
