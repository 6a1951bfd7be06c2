import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import crandn, daft_direct, dft_direct, idaft_direct, kappa_direct
from zpafdm.params import select_params
from zpafdm.transforms import (
    ChirpParams,
    DimensionError,
    chirp_fraction,
    daft,
    daft_matrix,
    dft,
    dft_matrix,
    idaft,
    idft,
    kappa,
)


def _afdm_chirp(n, chi=1, k_max=1):
    c1, c2 = select_params(chi, k_max, n)
    return ChirpParams(c1, c2, n)


class TestIdaft:
    def test_single_point(self):
        assert idaft([1.0], ChirpParams(0.3, 0.7, 1)) == pytest.approx([1.0])

    def test_impulse_without_chirps_is_flat(self):
        x = np.array([1, 0, 0, 0], dtype=complex)
        np.testing.assert_allclose(idaft(x, ChirpParams(0, 0, 4)), 0.5 * np.ones(4), atol=1e-15)

    def test_matches_direct_summation(self):
        rng = np.random.default_rng(0)
        c1 = 5 / 16
        p = ChirpParams(c1, 1 / (4 * c1 * 64), 8)
        x = crandn(rng, 8)
        np.testing.assert_allclose(idaft(x, p), idaft_direct(x, p.c1, p.c2), atol=1e-12)
        np.testing.assert_allclose(daft(idaft(x, p), p), x, atol=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            idaft(np.ones(5), ChirpParams(0.1, 0.1, 4))
        with pytest.raises(DimensionError):
            daft(np.ones(3), ChirpParams(0.1, 0.1, 4))


class TestDaft:
    def test_round_trip_n16(self):
        rng = np.random.default_rng(1)
        p = _afdm_chirp(16, chi=2, k_max=1)
        x = crandn(rng, 16)
        np.testing.assert_allclose(daft(idaft(x, p), p), x, atol=1e-12)

    def test_reduces_to_unitary_dft(self):
        rng = np.random.default_rng(2)
        x = crandn(rng, 12)
        np.testing.assert_allclose(daft(x, ChirpParams(0, 0, 12)), np.fft.fft(x) / np.sqrt(12), atol=1e-14)

    def test_all_ones_norm(self):
        p = _afdm_chirp(8)
        assert np.linalg.norm(daft(np.ones(8), p)) == pytest.approx(np.sqrt(8), rel=1e-12)

    def test_matches_direct_summation_general_chirps(self):
        rng = np.random.default_rng(3)
        p = ChirpParams(0.0371, 0.2113, 13)
        r = crandn(rng, 13)
        np.testing.assert_allclose(daft(r, p), daft_direct(r, p.c1, p.c2), atol=1e-12)

    def test_large_frame_matches_matrix_oracle(self):
        # exact rational phase reduction must agree with the float matrix at moderate N
        rng = np.random.default_rng(4)
        p = _afdm_chirp(256, chi=9, k_max=4)
        r = crandn(rng, 256)
        np.testing.assert_allclose(daft(r, p), daft_matrix(p) @ r, atol=1e-9)


@pytest.mark.parametrize("n", [1, 2, 7, 64, 413])
def test_unitarity_and_inverse(n):
    rng = np.random.default_rng(n)
    x = crandn(rng, n)
    for p in (ChirpParams(0, 0, n), ChirpParams(0.123, 0.0456, n), _afdm_chirp(max(n, 2), 1, 0) if n > 1 else ChirpParams(0.5, 0.5, 1)):
        nx = np.linalg.norm(x)
        assert abs(np.linalg.norm(daft(x, p)) - nx) < 1e-12 * nx
        assert abs(np.linalg.norm(idaft(x, p)) - nx) < 1e-12 * nx
        np.testing.assert_allclose(daft(idaft(x, p), p), x, atol=1e-12)
        np.testing.assert_allclose(idaft(daft(x, p), p), x, atol=1e-12)


def test_degenerate_daft_matrix_is_dft_matrix():
    np.testing.assert_allclose(daft_matrix(ChirpParams(0, 0, 16)), dft_matrix(16), atol=1e-14)


class TestDft:
    def test_impulse(self):
        np.testing.assert_allclose(dft([1, 0, 0, 0]), 0.5 * np.ones(4), atol=1e-15)

    def test_constant(self):
        np.testing.assert_allclose(dft([1, 1, 1, 1]), [2, 0, 0, 0], atol=1e-15)

    def test_non_power_of_two_against_direct_sum(self):
        rng = np.random.default_rng(413)
        v = crandn(rng, 413)
        np.testing.assert_allclose(dft(v), dft_direct(v), atol=1e-12)
        np.testing.assert_allclose(idft(dft(v)), v, atol=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(DimensionError):
            dft([])


class TestKappa:
    @pytest.mark.parametrize("n_d,l_hat", [(1, 0), (7, 3), (64, -5), (413, 100)])
    def test_zero_argument_is_one(self, n_d, l_hat):
        assert kappa(n_d, l_hat, 0.0) == 1.0

    def test_full_period_cancels(self):
        assert abs(kappa(4, 0, 2.0)) < 1e-15

    def test_frozen_direct_sum_value(self):
        # 30-digit direct summation of the 16-term sum
        assert abs(kappa(16, 3, 0.25) - (0.46304102144202985 + 0.7725372723264583j)) < 1e-14

    def test_vectorized_matches_direct(self):
        rng = np.random.default_rng(5)
        phi = rng.uniform(-40, 40, 50)
        got = kappa(37, 11, phi)
        want = np.array([kappa_direct(37, 11, p) for p in phi])
        np.testing.assert_allclose(got, want, atol=1e-12)

    def test_integer_multiple_of_n_d_uses_limit(self):
        assert kappa(8, 2, 16.0) == 1.0
        assert abs(kappa(8, 2, 16.0 + 1e-9) - kappa_direct(8, 2, 16.0 + 1e-9)) < 1e-9

    @settings(max_examples=60, deadline=None)
    @given(
        n_d=st.integers(1, 200),
        l_hat=st.integers(-300, 300),
        eps=st.floats(-0.499, 0.499),
    )
    def test_parseval_and_bound(self, n_d, l_hat, eps):
        vals = kappa(n_d, l_hat, np.arange(n_d) - eps)
        assert np.all(np.abs(vals) <= 1 + 1e-12)
        assert abs(np.sum(np.abs(vals) ** 2) - 1) < 1e-10

    @settings(max_examples=40, deadline=None)
    @given(n_d=st.integers(2, 128), l_hat=st.integers(-50, 50), eps=st.floats(-0.49, 0.49))
    def test_peak_at_nearest_grid_point(self, n_d, l_hat, eps):
        q = np.arange(-n_d // 2 + 1, n_d // 2 + 1)
        mags = np.abs(kappa(n_d, l_hat, eps - q))
        assert q[np.argmax(mags)] == 0


def test_chirp_fraction_exact_for_rational_rates():
    n = 4096
    c1, c2 = select_params(9, 4, n)
    idx = np.arange(n, dtype=np.int64) ** 2
    # integer reference: c1 = 81/(2N) and c2 = 1/(2*81*N)
    ref1 = (81 * idx % (2 * n)) / (2 * n)
    ref2 = (idx % (2 * 81 * n)) / (2 * 81 * n)
    np.testing.assert_array_equal(chirp_fraction(c1, idx, n), ref1)
    np.testing.assert_array_equal(chirp_fraction(c2, idx, n), ref2)
