import numpy as np
import pytest

from qcap.continuity import (
    MIXED_EPS_CAP,
    PURE_EPS_CAP,
    check_fannes,
    check_mixed_overlap_continuity,
    check_mixing_bounds,
    check_pure_overlap_continuity,
)
from qcap.linalg import von_neumann_entropy
from qcap.states import random_density, random_unitary


def test_fannes_check_passes():
    for seed in (0, 7):
        report = check_fannes(trials=300, dim=6, seed=seed)
        assert report.trials == 300
        assert report.dim == 6
        assert report.violations == 0
        assert report.passed
        assert report.max_slack <= 0.0
        assert 0.0 < report.epsilon_max < 1.0 / 3.0


def test_fannes_check_other_dimensions():
    for dim in (2, 4):
        report = check_fannes(trials=150, dim=dim, seed=3)
        assert report.violations == 0
        assert report.dim == dim


def test_pure_overlap_check_passes():
    for seed in (1, 11):
        report = check_pure_overlap_continuity(trials=300, dim=4, seed=seed)
        assert report.violations == 0
        assert report.passed
        assert report.max_slack <= 0.0
        assert 0.0 < report.epsilon_max <= PURE_EPS_CAP


def test_mixed_overlap_check_passes():
    for seed in (2, 13):
        report = check_mixed_overlap_continuity(trials=300, dim=4, seed=seed)
        assert report.violations == 0
        assert report.passed
        assert report.max_slack <= 0.0
        assert 0.0 < report.epsilon_max <= MIXED_EPS_CAP


def test_mixing_check_passes():
    for seed in (4, 17):
        report = check_mixing_bounds(trials=300, dim=4, seed=seed)
        assert report.violations == 0
        assert report.passed
        assert report.max_slack <= 0.0


def test_checks_are_deterministic_per_seed():
    makers = (
        lambda s: check_fannes(trials=60, dim=4, seed=s),
        lambda s: check_pure_overlap_continuity(trials=60, dim=4, seed=s),
        lambda s: check_mixed_overlap_continuity(trials=60, dim=4, seed=s),
        lambda s: check_mixing_bounds(trials=60, dim=4, seed=s),
    )
    for make in makers:
        a = make(42)
        b = make(42)
        assert a.max_slack == b.max_slack
        assert a.epsilon_max == b.epsilon_max
        assert a.violations == b.violations


def test_check_validation_errors():
    with pytest.raises(ValueError, match="trial"):
        check_fannes(trials=0)
    with pytest.raises(ValueError, match="dimension"):
        check_fannes(dim=1)
    with pytest.raises(ValueError, match="trial"):
        check_pure_overlap_continuity(trials=-3)
    with pytest.raises(ValueError, match="validity window"):
        check_pure_overlap_continuity(eps_max=0.1)
    with pytest.raises(ValueError, match="validity window"):
        check_pure_overlap_continuity(eps_max=0.0)
    with pytest.raises(ValueError, match="validity window"):
        check_mixed_overlap_continuity(eps_max=1.0 / 36.0)
    with pytest.raises(ValueError, match="dimension"):
        check_mixing_bounds(dim=0)


def test_narrow_eps_windows_still_pass():
    report = check_pure_overlap_continuity(trials=100, dim=4, eps_max=1e-4, seed=5)
    assert report.violations == 0
    report = check_mixed_overlap_continuity(trials=100, dim=4, eps_max=1e-4, seed=5)
    assert report.violations == 0


def test_mixing_sandwich_saturates_at_orthogonal_equal_mixture():
    parts = [np.zeros((4, 4), dtype=complex) for _ in range(4)]
    for i, m in enumerate(parts):
        m[i, i] = 1.0
    mix = sum(0.25 * m for m in parts)
    s_mix = von_neumann_entropy(mix)
    avg = 0.0
    assert abs(s_mix - (avg + 2.0)) < 1e-12


def test_mixing_sandwich_lower_edge_for_identical_parts():
    rho = random_density(4, rank=3, seed=9).matrix
    mix = 0.3 * rho + 0.7 * rho
    assert abs(von_neumann_entropy(mix) - von_neumann_entropy(rho)) < 1e-12


def test_mixing_sandwich_generic_case_by_hand():
    rng = np.random.default_rng(19)
    weights = rng.dirichlet(np.ones(3))
    parts = [random_density(4, rank=2, seed=rng).matrix for _ in range(3)]
    mix = sum(w * m for w, m in zip(weights, parts))
    s_mix = von_neumann_entropy(mix)
    avg = sum(w * von_neumann_entropy(m) for w, m in zip(weights, parts))
    h_w = float(-(weights * np.log2(weights)).sum())
    assert avg - 1e-10 <= s_mix <= avg + h_w + 1e-10


def test_fannes_bound_direct_on_rotated_pair():
    # small unitary kick: check the strong bound directly on one pair
    rng = np.random.default_rng(23)
    rho = random_density(4, rank=4, seed=rng).matrix
    u = random_unitary(4, seed=rng)
    t = 0.02
    kicked = (1.0 - t) * rho + t * (u @ rho @ u.conj().T)
    from qcap.linalg import trace_norm

    dist = trace_norm(rho - kicked)
    assert dist < 1.0 / 3.0
    gap = abs(von_neumann_entropy(rho) - von_neumann_entropy(kicked))
    bound = dist * np.log2(4) - dist * np.log2(dist) if dist > 0 else 0.0
    assert gap <= bound + 1e-9
