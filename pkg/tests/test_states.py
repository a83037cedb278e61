import numpy as np
import pytest

from qcap.linalg import binary_entropy, tensor_product, trace_norm, uhlmann_fidelity
from qcap.states import (
    DensityMatrix,
    PureState,
    apply_to_complement,
    high_entropy_counterexample,
    max_overlap_purification,
    maximally_mixed,
    purify,
    random_density,
    random_pure_state,
    random_unitary,
    read_density_file,
    relate_purifications,
    write_density_file,
)

from helpers import bell_vector


def test_density_matrix_validation():
    with pytest.raises(ValueError, match="square"):
        DensityMatrix(np.ones((2, 3), dtype=complex))
    with pytest.raises(ValueError, match="Hermitian"):
        DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]], dtype=complex))
    with pytest.raises(ValueError, match="trace"):
        DensityMatrix(np.eye(2, dtype=complex))
    with pytest.raises(ValueError, match="negative eigenvalue"):
        DensityMatrix(np.diag([1.5, -0.5]).astype(complex))
    with pytest.raises(ValueError, match="multiply"):
        DensityMatrix(np.eye(6, dtype=complex) / 6.0, (2, 2))
    with pytest.raises(ValueError, match="unique"):
        DensityMatrix(np.eye(4, dtype=complex) / 4.0, (2, 2), ("a", "a"))


def test_density_matrix_factors_and_entropy():
    rho = maximally_mixed(4, (2, 2))
    assert rho.dim == 4
    assert rho.labels == ("q0", "q1")
    assert rho.factor_index("q1") == 1
    assert abs(rho.entropy() - 2.0) < 1e-12
    flat = rho.flattened("sys")
    assert flat.dims == (4,)
    assert flat.labels == ("sys",)
    with pytest.raises(ValueError, match="not found"):
        rho.factor_index("nope")


def test_reduced_keeps_original_factor_order():
    rng = np.random.default_rng(2)
    r1 = random_density(2, rank=2, seed=rng)
    r2 = random_density(3, rank=3, seed=rng)
    joint = DensityMatrix(
        tensor_product(r1.matrix, r2.matrix), (2, 3), ("left", "right")
    )
    red = joint.reduced(["right", "left"])
    assert red.labels == ("left", "right")
    assert np.max(np.abs(red.matrix - joint.matrix)) < 1e-12
    only = joint.reduced(["right"])
    assert only.dims == (3,)
    assert np.max(np.abs(only.matrix - r2.matrix)) < 1e-12


def test_pure_state_validation_and_density():
    with pytest.raises(ValueError, match="norm"):
        PureState(np.array([1.0, 1.0], dtype=complex))
    psi = PureState(bell_vector(), (2, 2), ("a", "b"))
    rho = psi.density()
    assert abs(np.trace(rho.matrix) - 1.0) < 1e-12
    red = psi.reduced(["b"])
    assert np.max(np.abs(red.matrix - np.eye(2) / 2.0)) < 1e-12


def test_purify_recovers_state():
    psi = purify(maximally_mixed(2))
    assert psi.labels == ("ref", "q0")
    assert psi.dims == (2, 2)
    rng = np.random.default_rng(9)
    for _ in range(10):
        rho = random_density(3, rank=int(rng.integers(1, 4)), seed=rng)
        pur = purify(rho)
        back = pur.reduced([rho.labels[0]])
        assert np.max(np.abs(back.matrix - rho.matrix)) < 1e-10


def test_purify_pure_input_stays_product():
    psi = random_pure_state(3, seed=1)
    pur = purify(psi.density())
    red = pur.reduced(["ref"])
    top = float(np.linalg.eigvalsh(red.matrix).max())
    assert abs(top - 1.0) < 1e-10


def test_purify_avoids_label_collision():
    rho = maximally_mixed(2, (2,), ("ref",))
    pur = purify(rho)
    assert pur.labels == ("ref1", "ref")


def test_max_overlap_purification_noisy_bell():
    eps = 0.01
    bell = np.outer(bell_vector(), bell_vector().conj())
    rho = DensityMatrix(
        (1.0 - eps) * bell + eps * np.eye(4) / 4.0, (2, 2), ("a", "b")
    )
    state, l_max = max_overlap_purification(rho)
    assert abs(l_max - 0.9925) < 1e-12
    assert state.dims == (2, 2, 3)
    assert state.labels == ("a", "b", "aux")
    proj = np.kron(rho.matrix, np.diag([1.0, 0.0, 0.0]))
    overlap = float(np.real(state.vector.conj() @ proj @ state.vector))
    assert abs(overlap - 0.9925**2) < 1e-12
    assert abs(overlap - 0.98505625) < 1e-10


def test_max_overlap_purification_random_states():
    rng = np.random.default_rng(13)
    for _ in range(10):
        raw = random_density(4, rank=int(rng.integers(1, 5)), seed=rng)
        rho = DensityMatrix(raw.matrix, (2, 2), ("a", "b"))
        state, l_max = max_overlap_purification(rho)
        top = float(np.linalg.eigvalsh(rho.matrix).max())
        assert abs(l_max - top) < 1e-10
        assert abs(np.linalg.norm(state.vector) - 1.0) < 1e-12
        proj = np.kron(rho.matrix, np.diag([1.0, 0.0, 0.0]))
        overlap = float(np.real(state.vector.conj() @ proj @ state.vector))
        assert abs(overlap - l_max**2) < 1e-10


def test_max_overlap_purification_marginal_gap_shrinks_with_purity():
    bell = np.outer(bell_vector(), bell_vector().conj())
    gaps = []
    for eps in (0.2, 0.02, 0.002):
        rho = DensityMatrix(
            (1.0 - eps) * bell + eps * np.eye(4) / 4.0, (2, 2), ("a", "b")
        )
        state, _ = max_overlap_purification(rho)
        back = state.reduced(["a", "b"])
        gaps.append(trace_norm(back.matrix - rho.matrix))
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 5e-3


def test_max_overlap_purification_needs_two_factors():
    with pytest.raises(ValueError, match="two factors"):
        max_overlap_purification(maximally_mixed(4))


def test_relate_purifications_identity_case():
    rho = random_density(3, rank=3, seed=21)
    pur = purify(rho)
    u = relate_purifications(pur, pur, "ref")
    assert np.max(np.abs(u - np.eye(3))) < 1e-8


def test_relate_purifications_bell_pair_gives_bit_flip():
    sx = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    psi1 = PureState(bell_vector(), (2, 2), ("a", "b"))
    flipped = np.kron(np.eye(2), sx) @ bell_vector()
    psi2 = PureState(flipped, (2, 2), ("a", "b"))
    u = relate_purifications(psi1, psi2, "a")
    assert np.max(np.abs(u - sx)) < 1e-8


def test_relate_purifications_random_same_marginal():
    rng = np.random.default_rng(33)
    for _ in range(10):
        rho = random_density(3, rank=3, seed=rng)
        psi1 = purify(rho)
        w = random_unitary(3, seed=rng)
        psi2 = apply_to_complement(psi1, "ref", w)
        u = relate_purifications(psi1, psi2, "ref")
        assert np.max(np.abs(u.conj().T @ u - np.eye(3))) < 1e-9
        moved = apply_to_complement(psi1, "ref", u)
        assert np.linalg.norm(moved.vector - psi2.vector) < 1e-7


def test_relate_purifications_isometry_case():
    rng = np.random.default_rng(35)
    rho = random_density(3, rank=3, seed=rng)
    psi1 = purify(rho)
    big = random_unitary(5, seed=rng)
    v = big[:, :3]
    psi2 = apply_to_complement(psi1, "ref", v)
    u = relate_purifications(psi1, psi2, "ref")
    assert u.shape == (5, 3)
    assert np.max(np.abs(u.conj().T @ u - np.eye(3))) < 1e-9
    moved = apply_to_complement(psi1, "ref", u)
    assert np.linalg.norm(moved.vector - psi2.vector) < 1e-7


def test_relate_purifications_rejects_marginal_mismatch():
    psi1 = purify(random_density(3, rank=3, seed=1))
    psi2 = purify(random_density(3, rank=3, seed=2))
    with pytest.raises(ValueError, match="trace-norm gap"):
        relate_purifications(psi1, psi2, "ref")


def test_relate_purifications_rejects_shrinking_complement():
    rng = np.random.default_rng(39)
    rho = random_density(3, rank=2, seed=rng)
    psi1 = purify(rho)
    small = PureState(
        random_pure_state(6, seed=rng).vector, (3, 2), ("ref", "sys")
    )
    with pytest.raises(ValueError, match="complement dimension"):
        relate_purifications(psi1, small, "ref")


def test_random_density_properties():
    pure = random_density(4, rank=1, seed=0)
    top = float(np.linalg.eigvalsh(pure.matrix).max())
    assert abs(top - 1.0) < 1e-10
    a = random_density(3, rank=2, seed=123)
    b = random_density(3, rank=2, seed=123)
    assert np.max(np.abs(a.matrix - b.matrix)) == 0.0
    with pytest.raises(ValueError, match="rank"):
        random_density(3, rank=4, seed=0)
    with pytest.raises(ValueError, match="rank"):
        random_density(3, rank=0, seed=0)


def test_random_unitary_is_unitary_and_deterministic():
    u = random_unitary(5, seed=8)
    assert np.max(np.abs(u.conj().T @ u - np.eye(5))) < 1e-10
    again = random_unitary(5, seed=8)
    assert np.max(np.abs(u - again)) == 0.0


def test_high_entropy_counterexample_values():
    psi = random_pure_state(8, seed=3)
    same = high_entropy_counterexample(psi, 0.0, 4)
    assert abs(same.entropy()) < 1e-10
    overlap = float(np.real(psi.vector.conj() @ same.matrix @ psi.vector))
    assert abs(overlap - 1.0) < 1e-10

    psi4 = random_pure_state(8, seed=4)
    rho = high_entropy_counterexample(psi4, 0.1, 4)
    expected = binary_entropy(0.1) + 0.1 * np.log2(4)
    assert abs(rho.entropy() - expected) < 1e-10
    assert abs(expected - 0.6689955935892812) < 1e-12
    fid = float(np.real(psi4.vector.conj() @ rho.matrix @ psi4.vector))
    assert abs(fid - 0.9) < 1e-10


def test_high_entropy_counterexample_entropy_grows_without_bound():
    psi = random_pure_state(2048, seed=5)
    values = [
        high_entropy_counterexample(psi, 0.1, n).entropy() for n in (2, 64, 1024)
    ]
    assert values[0] < values[1] < values[2]
    assert abs(values[2] - (binary_entropy(0.1) + 1.0)) < 1e-10


def test_high_entropy_counterexample_validation():
    psi = random_pure_state(4, seed=6)
    with pytest.raises(ValueError, match="outside"):
        high_entropy_counterexample(psi, 1.5, 2)
    with pytest.raises(ValueError, match="orthogonal direction"):
        high_entropy_counterexample(psi, 0.1, 0)
    with pytest.raises(ValueError, match="ambient dimension"):
        high_entropy_counterexample(psi, 0.1, 4)


def test_density_file_roundtrip(tmp_path):
    rng = np.random.default_rng(44)
    raw = random_density(4, rank=3, seed=rng)
    rho = DensityMatrix(raw.matrix, (2, 2))
    path = tmp_path / "state.txt"
    write_density_file(str(path), rho)
    back = read_density_file(str(path))
    assert back.dims == (2, 2)
    assert np.max(np.abs(back.matrix - rho.matrix)) < 1e-12


def test_read_density_file_rejects_malformed_input(tmp_path):
    bad_header = tmp_path / "a.txt"
    bad_header.write_text("2 2\n1 0 0 0\n")
    with pytest.raises(ValueError, match="dims"):
        read_density_file(str(bad_header))

    short = tmp_path / "b.txt"
    short.write_text("dims 2\n1 0 0 0\n")
    with pytest.raises(ValueError, match="expected 8 numbers"):
        read_density_file(str(short))

    alpha = tmp_path / "c.txt"
    alpha.write_text("dims 2\n1 0 0 0 0 0 x 0\n")
    with pytest.raises(ValueError, match="non-numeric"):
        read_density_file(str(alpha))

    unphysical = tmp_path / "d.txt"
    unphysical.write_text("dims 2\n1 0 0 0 0 0 1 0\n")
    with pytest.raises(ValueError, match="trace"):
        read_density_file(str(unphysical))


def test_trace_norm_zero_for_equal_marginals_sanity():
    rho = random_density(3, rank=3, seed=55)
    psi = purify(rho)
    sigma = psi.reduced(["ref"])
    mirror = purify(sigma, ref_label="mirror")
    back = mirror.reduced(["ref"])
    assert trace_norm(back.matrix - sigma.matrix) < 1e-10
