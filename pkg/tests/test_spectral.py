import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torusnls import (
    FilterSpec,
    SpectralField,
    apply_projector,
    free_flow,
    l2_norm,
    make_grid,
    physical_l2_norm,
    plane_wave,
    to_physical,
    to_spectral,
    weighted_l2_norm,
)

TWO_PI = 2.0 * math.pi


def random_field(grid, seed=0):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=grid.n_modes) + 1j * rng.normal(size=grid.n_modes)
    return SpectralField(grid, c)


class TestGrid:
    def test_smallest_lattice(self):
        g = make_grid(1, 2)
        assert [g.index_to_mode(i) for i in range(g.n_modes)] == [(0,), (-1,)]

    def test_large_scale_lattice_count(self):
        g = make_grid(3, 512)
        assert g.n_modes == 2 ** 27

    @pytest.mark.parametrize("dim", [0, 6, -1])
    def test_dimension_gate(self, dim):
        with pytest.raises(ValueError):
            make_grid(dim, 8)

    @pytest.mark.parametrize("n", [0, 1, 3, 12, 100])
    def test_power_of_two_gate(self, n):
        with pytest.raises(ValueError):
            make_grid(1, n)

    def test_overflow_gate(self):
        with pytest.raises(ValueError):
            make_grid(5, 2 ** 13)  # 2^65 modes

    def test_index_mode_roundtrip(self):
        g = make_grid(2, 8)
        for i in range(g.n_modes):
            assert g.mode_to_index(g.index_to_mode(i)) == i

    def test_mode_out_of_lattice(self):
        g = make_grid(2, 8)
        with pytest.raises(ValueError):
            g.mode_to_index((4, 0))  # lattice is {-4..3}
        assert g.index_to_mode(g.mode_to_index((-4, 3))) == (-4, 3)

    def test_axis_frequencies_order(self):
        g = make_grid(1, 8)
        assert list(g.axis_frequencies()) == [0, 1, 2, 3, -4, -3, -2, -1]


class TestTransforms:
    def test_constant_field_is_zero_mode(self):
        g = make_grid(2, 8)
        f = to_spectral(np.full(g.shape, 3.5 + 0.25j), g)
        idx = g.mode_to_index((0, 0))
        assert f.coeffs[idx] == pytest.approx(3.5 + 0.25j, abs=1e-14)
        rest = np.delete(f.coeffs, idx)
        assert np.abs(rest).max() < 1e-14

    @pytest.mark.parametrize("dim,n", [(1, 64), (2, 16), (3, 8)])
    def test_round_trip(self, dim, n):
        g = make_grid(dim, n)
        f = random_field(g, seed=dim)
        back = to_spectral(to_physical(f), g)
        assert np.abs(back.coeffs - f.coeffs).max() < 1e-12 * np.abs(f.coeffs).max()

    def test_single_mode_against_direct_dft(self):
        # Independent oracle: explicit O(N^2) DFT sums on a 4-point grid.
        g = make_grid(1, 4)
        x = TWO_PI * np.arange(4) / 4
        for k in (-2, -1, 0, 1):
            v = np.exp(1j * k * x)
            f = to_spectral(v, g)
            direct = np.array([
                sum(v[j] * np.exp(-1j * kk * x[j]) for j in range(4)) / 4
                for kk in (0, 1, -2, -1)
            ])
            assert np.abs(f.coeffs - direct).max() < 1e-14
            expected = np.zeros(4, dtype=complex)
            expected[g.mode_to_index(k)] = 1.0
            assert np.abs(f.coeffs - expected).max() < 1e-14

    def test_size_mismatch(self):
        g = make_grid(2, 8)
        with pytest.raises(ValueError):
            to_spectral(np.zeros((8, 4)), g)

    def test_parseval(self):
        g = make_grid(2, 16)
        f = random_field(g, seed=5)
        nc = l2_norm(f)
        nv = physical_l2_norm(to_physical(f), g)
        assert abs(nc - nv) < 1e-12 * nc


class TestProjector:
    def test_cutoff_one_removes_mode_two(self):
        g = make_grid(3, 8)
        f = plane_wave(g, (2, 0, 0), 1.0)
        out = apply_projector(f, FilterSpec(1.0))
        assert np.all(out.coeffs == 0)

    def test_closed_cube_boundary_kept(self):
        g = make_grid(3, 8)
        f = plane_wave(g, (1, 1, 1), 2.0 - 1.0j)
        out = apply_projector(f, FilterSpec(1.0))
        assert np.array_equal(out.coeffs, f.coeffs)

    def test_survivors_enumerated(self):
        # tau = 0.01 induces the real cutoff 10; survivors are |k| <= 10.
        g = make_grid(1, 64)
        f = random_field(g, seed=2)
        out = apply_projector(f, FilterSpec(0.01))
        survivors = {g.index_to_mode(i)[0] for i in range(g.n_modes) if out.coeffs[i] != 0}
        assert survivors == {k for k in range(-32, 32) if abs(k) <= 10}

    def test_idempotent_bit_identical(self):
        g = make_grid(2, 16)
        f = random_field(g, seed=3)
        once = apply_projector(f, FilterSpec(0.05))
        twice = apply_projector(once, FilterSpec(0.05))
        assert np.array_equal(once.coeffs, twice.coeffs)

    def test_orthogonal_split(self):
        g = make_grid(2, 16)
        f = random_field(g, seed=4)
        kept = apply_projector(f, FilterSpec(0.05))
        cut = SpectralField(g, f.coeffs - kept.coeffs)
        total = l2_norm(f) ** 2
        assert abs(l2_norm(kept) ** 2 + l2_norm(cut) ** 2 - total) < 1e-12 * total

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 2 ** 31), tau=st.floats(1e-4, 1.0))
    def test_projector_never_grows_norm(self, seed, tau):
        g = make_grid(1, 32)
        f = random_field(g, seed=seed)
        assert l2_norm(apply_projector(f, FilterSpec(tau))) <= l2_norm(f) * (1 + 1e-15)


class TestFreeFlow:
    def test_zero_time_identity(self):
        g = make_grid(2, 8)
        f = random_field(g, seed=6)
        assert np.abs(free_flow(f, 0.0).coeffs - f.coeffs).max() == 0

    def test_single_mode_phase(self):
        # d=2, k=(1,-2), t=0.5: multiplier e^{-i*0.5*5}
        g = make_grid(2, 8)
        f = plane_wave(g, (1, -2), 1.0)
        out = free_flow(f, 0.5)
        idx = g.mode_to_index((1, -2))
        assert abs(out.coeffs[idx] - np.exp(-0.5j * 5)) < 1e-14
        assert abs(abs(out.coeffs[idx]) - 1.0) < 1e-14

    def test_inverse_composition(self):
        g = make_grid(3, 8)
        f = random_field(g, seed=7)
        back = free_flow(free_flow(f, 0.37), -0.37)
        assert np.abs(back.coeffs - f.coeffs).max() < 1e-12 * np.abs(f.coeffs).max()

    def test_commutes_with_projector(self):
        g = make_grid(2, 16)
        f = random_field(g, seed=8)
        spec = FilterSpec(0.04)
        a = apply_projector(free_flow(f, 0.21), spec)
        b = free_flow(apply_projector(f, spec), 0.21)
        assert np.abs(a.coeffs - b.coeffs).max() < 1e-13

    def test_norm_preserved(self):
        g = make_grid(2, 16)
        f = random_field(g, seed=9)
        assert abs(l2_norm(free_flow(f, 1.3)) - l2_norm(f)) < 1e-12 * l2_norm(f)


class TestNormHelper:
    def test_plane_wave_volume_factor(self):
        g = make_grid(3, 8)
        f = plane_wave(g, (1, 0, 0), 0.1)
        assert abs(l2_norm(f) - 0.1 * TWO_PI ** 1.5) < 1e-14

    def test_weighted_norm_accepts_any_shape(self):
        g = make_grid(2, 8)
        f = random_field(g, seed=10)
        assert weighted_l2_norm(g, f.coeffs) == weighted_l2_norm(g, f.shaped())


class TestFieldValueSemantics:
    def test_constructor_copies(self):
        g = make_grid(1, 8)
        raw = np.ones(8, dtype=complex)
        f = SpectralField(g, raw)
        raw[0] = 99.0
        assert f.coeffs[0] == 1.0

    def test_arithmetic(self):
        g = make_grid(1, 8)
        f = random_field(g, seed=11)
        h = random_field(g, seed=12)
        assert np.array_equal((f + h).coeffs, f.coeffs + h.coeffs)
        assert np.array_equal((f - h).coeffs, f.coeffs - h.coeffs)
        assert np.array_equal((2.0 * f).coeffs, 2.0 * f.coeffs)

    def test_grid_mismatch(self):
        f = random_field(make_grid(1, 8))
        h = random_field(make_grid(1, 16))
        with pytest.raises(ValueError):
            _ = f + h

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            SpectralField(make_grid(1, 8), np.zeros(7, dtype=complex))
