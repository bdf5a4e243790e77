import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import density_matrices, hermitian_matrices, random_states
from spakit.choi import (
    ChoiOperator,
    ConvexMix,
    Depolarize,
    Identity,
    Tensor,
    Transpose,
    apply,
    choi_of_map,
    is_cp,
    is_trace_preserving,
    tensor_maps,
)
from spakit.linalg import DimensionError, eigvalsh, partial_transpose
from spakit.spa import choi_ps, choi_R, spa_rho_square, symmetric_subspace_projector
from spakit.states import bell_state

SPECS = [
    Identity(2),
    Transpose(2),
    Depolarize(2, 2),
    Depolarize(4, 2),
    Tensor(Identity(2), Transpose(2)),
    Tensor(Depolarize(2, 2), Identity(2)),
    ConvexMix(0.3, Identity(2), 0.7, Transpose(2)),
]


def choi_brute(action, d_in, d_out):
    """sum_jk |j><k| (x) E(|j><k|) assembled element by element."""
    c = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
    for j in range(d_in):
        for k in range(d_in):
            unit = np.zeros((d_in, d_in))
            unit[j, k] = 1
            img = action(unit)
            for a in range(d_out):
                for b in range(d_out):
                    c[j * d_out + a, k * d_out + b] = img[a, b]
    return c


def hermitian_basis(d):
    out = []
    for j in range(d):
        for k in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[j, k] = 1
            out.append(e + e.conj().T)
            out.append(1j * e - 1j * e.conj().T)
    return out


class TestChoiOfMap:
    def test_identity_is_unnormalised_bell(self):
        c = choi_of_map(Identity(2))
        assert np.array_equal(c.matrix, 2 * bell_state())
        assert np.trace(c.matrix).real == 2

    def test_transpose_is_swap(self):
        swap = np.eye(4)[[0, 2, 1, 3]]
        c = choi_of_map(Transpose(2))
        assert np.array_equal(c.matrix, swap)
        assert np.array_equal(c.matrix, choi_brute(lambda x: x.T, 2, 2))
        assert np.array_equal(c.matrix, partial_transpose(choi_of_map(Identity(2)).matrix, (2, 2)))

    def test_depolarize(self):
        c = choi_of_map(Depolarize(2, 2))
        assert np.allclose(c.matrix, np.eye(4) / 2)
        assert np.trace(c.matrix).real == pytest.approx(2)

    def test_depolarize_unequal_dims(self):
        c = choi_of_map(Depolarize(4, 2))
        assert c.dims == (4, 2)
        assert np.allclose(c.matrix, np.eye(8) / 2)

    def test_convex_mix_exact(self):
        s1, s2 = Identity(2), Transpose(2)
        mixed = choi_of_map(ConvexMix(0.25, s1, 0.75, s2))
        direct = 0.25 * choi_of_map(s1).matrix + 0.75 * choi_of_map(s2).matrix
        assert np.max(np.abs(mixed.matrix - direct)) <= 1e-15

    def test_bad_mix(self):
        with pytest.raises(ValueError):
            ConvexMix(-0.1, Identity(2), 1.1, Identity(2))
        with pytest.raises(DimensionError):
            ConvexMix(0.5, Identity(2), 0.5, Identity(3))

    @pytest.mark.parametrize("spec", SPECS, ids=repr)
    def test_round_trip_on_hermitian_basis(self, spec):
        c = choi_of_map(spec)
        for h in hermitian_basis(spec.dim_in):
            assert np.max(np.abs(apply(c, h) - spec.act(h))) <= 1e-12


class TestApply:
    def test_identity(self):
        for rho in random_states(1, 20, 2):
            assert np.allclose(apply(choi_of_map(Identity(2)), rho), rho, atol=1e-14)

    def test_transpose(self):
        c = choi_of_map(Transpose(2))
        for rho in random_states(2, 100, 2):
            assert np.max(np.abs(apply(c, rho) - rho.T)) <= 1e-14

    def test_ps_on_bell(self):
        # oracle: (8/9) 1/4 + (1/9) PT(Phi+), diagonalised directly
        oracle = (8 / 9) * np.eye(4) / 4 + (1 / 9) * partial_transpose(bell_state(), (2, 2))
        w_oracle = np.sort(np.linalg.eigvalsh(oracle))[::-1]
        assert np.allclose(w_oracle, [5 / 18, 5 / 18, 5 / 18, 1 / 6], atol=1e-15)
        out = apply(choi_ps(), bell_state())
        assert np.allclose(eigvalsh(out), w_oracle, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            apply(choi_ps(), np.eye(2) / 2)

    @settings(max_examples=40)
    @given(hermitian_matrices(2), hermitian_matrices(2), st.floats(-3, 3), st.floats(-3, 3))
    def test_linearity(self, r1, r2, a, b):
        c = choi_of_map(ConvexMix(0.4, Identity(2), 0.6, Transpose(2)))
        lhs = apply(c, a * r1 + b * r2)
        rhs = a * apply(c, r1) + b * apply(c, r2)
        assert np.max(np.abs(lhs - rhs)) <= 1e-12

    @settings(max_examples=40)
    @given(density_matrices(4))
    def test_trace_preserving_output_trace(self, rho):
        assert abs(np.trace(apply(choi_ps(), rho)) - 1) <= 1e-9


class TestStructure:
    def test_trace_preserving(self):
        assert is_trace_preserving(choi_ps())
        assert is_trace_preserving(choi_of_map(Identity(2)))

    def test_rs_trace_decreasing(self):
        check = is_trace_preserving(spa_rho_square().choi)
        assert not check
        assert np.max(np.abs(check.defect - (symmetric_subspace_projector() - np.eye(4)))) <= 1e-12
        w = eigvalsh(check.defect)
        assert np.allclose(w, [0, 0, 0, -1], atol=1e-12)

    def test_cp(self):
        assert not is_cp(choi_of_map(Transpose(2)))
        assert np.min(np.linalg.eigvalsh(choi_of_map(Transpose(2)).matrix)) == pytest.approx(-1)
        assert is_cp(choi_ps())
        assert not is_cp(choi_R())
        assert is_cp(spa_rho_square().choi)

    def test_choi_must_be_hermitian(self):
        with pytest.raises(ValueError):
            ChoiOperator(np.triu(np.ones((4, 4))), 2, 2)
        with pytest.raises(DimensionError):
            ChoiOperator(np.eye(6), 2, 2)


class TestTensorMaps:
    def test_identity_composes(self):
        c = tensor_maps(choi_of_map(Identity(2)), choi_of_map(Identity(2)))
        assert c.allclose(choi_of_map(Identity(4)))

    def test_partial_transpose(self):
        c = tensor_maps(choi_of_map(Identity(2)), choi_of_map(Transpose(2)))
        assert c.allclose(choi_of_map(Tensor(Identity(2), Transpose(2))))
        for rho in random_states(3, 100):
            assert np.max(np.abs(apply(c, rho) - partial_transpose(rho, (2, 2)))) <= 1e-12

    def test_constant_map(self):
        dep = choi_of_map(Depolarize(2, 2))
        c = tensor_maps(dep, dep)
        for rho in random_states(4, 10):
            assert np.allclose(apply(c, rho), np.eye(4) / 4, atol=1e-14)

    def test_unequal_dims(self):
        c = tensor_maps(choi_of_map(Depolarize(4, 2)), choi_of_map(Identity(3)))
        assert c.allclose(choi_of_map(Tensor(Depolarize(4, 2), Identity(3))))
