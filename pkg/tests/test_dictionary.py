"""Dictionary atoms, normalization weights, conjugate pairing."""

import numpy as np
import pytest

from sscodec import Case, DictionarySpec, conjugate_partner, make_atom, weight_cos, weight_sin
from sscodec.dictionary import atom_count_for_redundancy

ALL_CASES = list(Case)


def unnormalized_cosine_norm(n, num_atoms, block_len):
    j = np.arange(1, block_len + 1, dtype=np.float64)
    return float(np.linalg.norm(np.cos(np.pi * (2 * j - 1) * (n - 1) / (2 * num_atoms))))


def unnormalized_sine_norm(n, num_atoms, block_len):
    j = np.arange(1, block_len + 1, dtype=np.float64)
    return float(np.linalg.norm(np.sin(np.pi * (2 * j - 1) * n / (2 * num_atoms))))


class TestWeights:
    def test_cosine_dc_weight_is_sqrt_n(self):
        assert weight_cos(1, 4096, 1024) == pytest.approx(32.0, abs=1e-12)
        assert weight_cos(1, 1024, 1024) == pytest.approx(32.0, abs=1e-12)

    def test_cosine_weight_at_square_dictionary(self):
        # sin(2 pi (n-1) N / M) vanishes when M == N, leaving sqrt(N / 2)
        assert weight_cos(2, 1024, 1024) == pytest.approx(np.sqrt(512.0), rel=1e-12)

    def test_cosine_weight_matches_direct_norm(self):
        expected = unnormalized_cosine_norm(2, 4096, 1024)
        assert weight_cos(2, 4096, 1024) == pytest.approx(expected, rel=1e-10)

    def test_sine_weight_at_square_dictionary(self):
        assert weight_sin(3, 512, 512) == pytest.approx(np.sqrt(256.0), rel=1e-12)

    def test_sine_weight_matches_direct_norm(self):
        expected = unnormalized_sine_norm(5, 2048, 512)
        assert weight_sin(5, 2048, 512) == pytest.approx(expected, rel=1e-10)

    def test_sine_weight_singular_point(self):
        # the closed form is 0/0 at n == M; the atom there is the
        # alternating +/-1 vector of norm sqrt(N)
        for block_len, num_atoms in [(64, 64), (64, 256), (512, 1024)]:
            assert weight_sin(num_atoms, num_atoms, block_len) == pytest.approx(
                np.sqrt(block_len), rel=1e-12
            )

    @pytest.mark.parametrize("redundancy", [1, 2, 4])
    @pytest.mark.parametrize("block_len", [16, 100, 512])
    def test_weights_equal_brute_force_norms_everywhere(self, block_len, redundancy):
        num_atoms = redundancy * block_len
        j = np.arange(1, block_len + 1, dtype=np.float64)[:, None]
        n = np.arange(1, num_atoms + 1, dtype=np.float64)[None, :]
        cos_norms = np.linalg.norm(np.cos(np.pi * (2 * j - 1) * (n - 1) / (2 * num_atoms)), axis=0)
        sin_norms = np.linalg.norm(np.sin(np.pi * (2 * j - 1) * n / (2 * num_atoms)), axis=0)
        got_cos = np.array([weight_cos(i, num_atoms, block_len) for i in range(1, num_atoms + 1)])
        got_sin = np.array([weight_sin(i, num_atoms, block_len) for i in range(1, num_atoms + 1)])
        np.testing.assert_allclose(got_cos, cos_norms, rtol=1e-10)
        np.testing.assert_allclose(got_sin, sin_norms, rtol=1e-10)

    def test_weight_rejects_out_of_range_index(self):
        with pytest.raises(ValueError):
            weight_cos(0, 64, 64)
        with pytest.raises(ValueError):
            weight_sin(65, 64, 64)


class TestAtoms:
    def test_fourier_dc_atom_is_constant(self):
        spec = DictionarySpec(Case.FOURIER, 8, 8)
        np.testing.assert_allclose(make_atom(1, spec), np.full(8, 1 / np.sqrt(8)), atol=1e-15)

    def test_cosine_dc_atom_is_constant(self):
        for num_atoms in (64, 256):
            spec = DictionarySpec(Case.COSINE, num_atoms, 64)
            np.testing.assert_allclose(make_atom(1, spec), np.full(64, 1 / 8.0), atol=1e-15)

    @pytest.mark.parametrize("case", ALL_CASES)
    def test_all_atoms_unit_norm(self, case):
        spec = DictionarySpec(case, 256, 64)
        for index in range(1, 257):
            assert abs(np.linalg.norm(make_atom(index, spec)) - 1.0) <= 1e-12

    @pytest.mark.parametrize("case", ALL_CASES)
    def test_orthonormal_at_square_point(self, case):
        spec = DictionarySpec(case, 64, 64)
        atoms = np.stack([make_atom(i, spec) for i in range(1, 65)])
        gram = atoms.conj() @ atoms.T
        np.testing.assert_allclose(gram, np.eye(64), atol=1e-10)

    def test_mixed_layout_matches_sub_dictionaries(self):
        spec = DictionarySpec(Case.MIXED, 256, 64)
        cos_spec = DictionarySpec(Case.COSINE, 128, 64)
        sin_spec = DictionarySpec(Case.SINE, 128, 64)
        np.testing.assert_array_equal(make_atom(5, spec), make_atom(5, cos_spec))
        np.testing.assert_array_equal(make_atom(128 + 7, spec), make_atom(7, sin_spec))

    def test_atom_index_out_of_range(self):
        spec = DictionarySpec(Case.COSINE, 64, 64)
        with pytest.raises(ValueError):
            make_atom(0, spec)
        with pytest.raises(ValueError):
            make_atom(65, spec)


class TestConjugatePairing:
    def test_partner_arithmetic(self):
        assert conjugate_partner(2, 8) == 8

    def test_dc_is_self_conjugate(self):
        assert conjugate_partner(1, 8) is None

    def test_nyquist_is_self_conjugate(self):
        # exp(i 2 pi (j-1) 4 / 8) alternates +/-1, hence real
        assert conjugate_partner(5, 8) is None
        spec = DictionarySpec(Case.FOURIER, 8, 8)
        atom = make_atom(5, spec)
        np.testing.assert_allclose(atom, atom.conj(), atol=1e-12)

    def test_partner_atom_is_elementwise_conjugate(self):
        spec = DictionarySpec(Case.FOURIER, 64, 32)
        for index in range(1, 65):
            partner = conjugate_partner(index, 64)
            if partner is None:
                atom = make_atom(index, spec)
                np.testing.assert_allclose(atom.imag, 0.0, atol=1e-12)
            else:
                np.testing.assert_allclose(
                    make_atom(partner, spec), make_atom(index, spec).conj(), atol=1e-12
                )


class TestSpec:
    def test_rejects_undersized_dictionary(self):
        with pytest.raises(ValueError):
            DictionarySpec(Case.COSINE, 32, 64)

    def test_mixed_needs_even_atom_count(self):
        with pytest.raises(ValueError):
            DictionarySpec(Case.MIXED, 129, 64)

    def test_redundancy_recorded(self):
        assert DictionarySpec(Case.COSINE, 256, 64).redundancy == 4.0

    def test_atom_count_rounding(self):
        assert atom_count_for_redundancy(Case.COSINE, 4.0, 1024) == 4096
        assert atom_count_for_redundancy(Case.MIXED, 1.0, 64) == 64
        # mixed rounds to the nearest even count
        assert atom_count_for_redundancy(Case.MIXED, 2.1, 10) % 2 == 0

    def test_case_codes_roundtrip(self):
        for case in Case:
            assert Case.from_code(case.code) is case
        assert Case.from_string("dct") is Case.COSINE
        with pytest.raises(ValueError):
            Case.from_string("wavelet")
