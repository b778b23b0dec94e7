import numpy as np
import pytest

from conftest import rand_state
from qres.channels import (
    KrausChannel,
    apply_channel,
    completeness_error,
    compose,
    dephasing_channel,
    identity_channel,
    local_channel,
    mixture_of_unitaries,
    noisy_operation,
    noisy_operation_direct,
    random_channel,
    random_unital_channel,
    sample_incoherent_channel,
    stinespring_apply,
    stinespring_block,
    stinespring_isometry,
)
from qres.fidelity import fidelity
from qres.linalg import DimensionError, partial_trace, random_unitary, swap_operator
from qres.states import BipartiteState, ValidationError, random_bipartite, random_density_matrix


def test_incomplete_kraus_rejected():
    with pytest.raises(ValueError, match="completeness"):
        KrausChannel((np.eye(2) * 0.9,))


def test_shape_mismatch():
    with pytest.raises(DimensionError):
        KrausChannel((np.eye(2), np.eye(3)))
    with pytest.raises(DimensionError):
        identity_channel(2)(np.eye(3) / 3)


def test_empty():
    with pytest.raises(ValueError):
        KrausChannel(())


@pytest.mark.parametrize("d,e", [(2, 2), (2, 3), (3, 2)])
def test_noisy_operation_matches_direct(d, e):
    rng = np.random.default_rng(d * 10 + e)
    for seed in range(5):
        u = random_unitary(d * e, rng)
        rho = rand_state(d, seed)
        assert np.allclose(noisy_operation(e, u)(rho), noisy_operation_direct(e, u, rho), atol=1e-13)


@pytest.mark.parametrize("d", [2, 3])
def test_swap_noisy_operation_gives_mixed(d):
    # swapping in a maximally mixed environment replaces the state
    ch = noisy_operation(d, swap_operator(d))
    assert np.allclose(ch(rand_state(d, 0)), np.eye(d) / d, atol=1e-14)


def test_noisy_operation_rejects_non_unitary():
    with pytest.raises(ValueError):
        noisy_operation(2, np.ones((4, 4)))
    with pytest.raises(DimensionError):
        noisy_operation(3, np.eye(4))


def test_mixture_of_unitaries_validation():
    x = np.array([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        mixture_of_unitaries([0.5, 0.6], [np.eye(2), x])
    with pytest.raises(ValueError):
        mixture_of_unitaries([0.5, 0.5], [np.eye(2), 2 * x])
    ch = mixture_of_unitaries([0.5, 0.5], [np.eye(2), x])
    assert np.allclose(ch(np.diag([1, 0])), np.eye(2) / 2)


def test_unital_samplers():
    for seed in range(20):
        for d in (2, 3, 4):
            assert random_unital_channel(d, seed).is_unital()


def test_generic_channel_not_unital():
    assert not random_channel(3, 2, seed=1).is_unital()


class TestStinespring:
    def test_isometry(self):
        ch = random_channel(3, 4, seed=0)
        v = stinespring_isometry(ch)
        assert v.shape == (12, 3)
        assert np.allclose(v.conj().T @ v, np.eye(3))

    def test_reconstructs_channel(self):
        ch = random_channel(3, 4, seed=2)
        v = stinespring_isometry(ch)
        rho = rand_state(3, 3)
        assert np.allclose(stinespring_apply(v, rho, 4), ch(rho), atol=1e-14)

    def test_blocks_are_kraus_terms(self):
        ch = random_channel(2, 3, seed=5)
        v = stinespring_isometry(ch)
        rho = rand_state(2, 9)
        for k, a in enumerate(ch.kraus):
            assert np.allclose(stinespring_block(v, rho, 3, k), a @ rho @ a.conj().T)


class TestIncoherentSampler:
    @pytest.mark.parametrize("d,n", [(2, 1), (3, 3), (4, 5)])
    def test_structure(self, d, n):
        for seed in range(20):
            ch = sample_incoherent_channel(d, n, seed)
            assert completeness_error(ch.kraus) < 1e-12
            for a in ch.kraus:
                # at most one nonzero per column, and A^dag A diagonal
                assert np.all(np.count_nonzero(np.abs(a) > 0, axis=0) <= 1)
                ad = a.conj().T @ a
                assert np.allclose(ad, np.diag(np.diag(ad)))

    def test_maps_incoherent_to_incoherent(self):
        ch = sample_incoherent_channel(4, 3, seed=1)
        out = ch(np.diag([0.1, 0.2, 0.3, 0.4]))
        assert np.allclose(out, np.diag(np.diag(out)))

    def test_deterministic(self):
        a = sample_incoherent_channel(3, 2, seed=42)
        b = sample_incoherent_channel(3, 2, seed=42)
        assert all(np.array_equal(x, y) for x, y in zip(a.kraus, b.kraus))

    def test_bad_count(self):
        with pytest.raises(ValueError):
            sample_incoherent_channel(3, 0)


def test_compose():
    a, b = random_channel(2, 2, seed=1), random_channel(2, 3, seed=2)
    rho = rand_state(2, 0)
    assert np.allclose(compose(b, a)(rho), b(a(rho)))


def test_local_channel_acts_on_one_side():
    rho = random_bipartite(2, 3, seed=0)
    ch = local_channel(dephasing_channel(3), (2, 3), "b")
    out = apply_channel(ch, rho)
    assert isinstance(out, BipartiteState) and out.dims == (2, 3)
    # the marginal on a is untouched
    assert np.allclose(partial_trace(out.mat, (2, 3), "a"), partial_trace(rho.mat, (2, 3), "a"))
    with pytest.raises(DimensionError):
        local_channel(dephasing_channel(2), (2, 3), "b")


def test_apply_channel_revalidates():
    # trace-decreasing map built by bypassing the constructor check
    ch = identity_channel(2)
    object.__setattr__(ch, "kraus", (np.eye(2) * 0.5,))
    with pytest.raises(ValidationError):
        apply_channel(ch, np.eye(2) / 2)


def test_ratio_fidelity_not_contractive():
    # F(Phi rho, Phi sigma) >= F(rho, sigma) fails for some CPTP maps; record that it does
    rng = np.random.default_rng(0)
    gaps = []
    for _ in range(500):
        d = int(rng.choice([2, 3]))
        ch = random_channel(d, int(rng.integers(1, 4)), rng)
        r = random_density_matrix(d, int(rng.integers(1, d + 1)), rng)
        s = random_density_matrix(d, int(rng.integers(1, d + 1)), rng)
        gaps.append(fidelity(r, s) - fidelity(ch(r), ch(s)))
    assert max(gaps) > 1e-3
    assert np.mean(np.array(gaps) <= 1e-10) > 0.9
