import numpy as np
import pytest
from numpy.testing import assert_allclose

from tracelab.grid import GridFunction, PeriodizedGrid, freq_magnitude
from tracelab.lp import (
    SpectralMultiplier,
    SpectralTailError,
    apply_multiplier,
    bessel_multiplier,
    boundary_restrict,
    build_generator,
    build_lp_system,
    derivative_multiplier,
    lp_block,
    max_block_count,
    smooth_step,
    smooth_step_derivative,
)


class TestGenerator:
    def test_plateau_and_cutoff_exact(self, gen):
        assert gen.profile(np.array([0.0, 0.5, 1.0])).tolist() == [1.0, 1.0, 1.0]
        assert gen.profile(np.array([1.5, 2.0, 100.0])).tolist() == [0.0, 0.0, 0.0]

    def test_ramp_value_from_documented_formula(self, gen):
        # |xi| = 1.25 -> t = 0.5 on the transition; the documented ramp gives
        # B(1-t)/(B(t)+B(1-t)) with B(t) = exp(-1/t)
        t = 0.5
        b, b1 = np.exp(-1.0 / t), np.exp(-1.0 / (1 - t))
        expected = b1 / (b + b1)
        assert gen.profile(np.array([1.25]))[0] == pytest.approx(expected, rel=1e-15)
        assert 0.0 < expected < 1.0

    def test_invalid_sharpness(self):
        with pytest.raises(ValueError):
            build_generator(-1.0)

    def test_step_derivative_matches_finite_difference(self):
        t = np.linspace(0.05, 0.95, 19)
        h = 1e-6
        fd = (smooth_step(t + h) - smooth_step(t - h)) / (2 * h)
        assert_allclose(smooth_step_derivative(t), fd, atol=1e-7)


class TestSystem:
    def test_telescoping(self, gen, grid1d):
        sys = build_lp_system(gen, 8, grid1d)
        assert sys.telescoping_residual() <= 1e-12

    def test_max_blocks_error_names_maximum(self, gen, grid1d):
        n_max = max_block_count(grid1d)
        with pytest.raises(ValueError, match=str(n_max)):
            build_lp_system(gen, n_max + 1, grid1d)

    def test_block_support_arithmetic(self, gen, grid1d):
        sys = build_lp_system(gen, 8, grid1d)
        mag = freq_magnitude(grid1d)
        # |xi| = 3 sits in the plateau-difference band of block 2
        # (phi_hat(3/4) = 1 and phi_hat(3/2) = 0), and outside block 3's annulus
        at3 = sys.block_multiplier(2)[np.isclose(mag, 3.0)]
        assert at3.size and np.all(at3 == 1.0)
        assert np.all(sys.block_multiplier(3)[np.isclose(mag, 3.0)] == 0.0)
        at6 = sys.block_multiplier(3)[np.isclose(mag, 6.0)]
        assert at6.size and np.all(at6 == 1.0)
        # the origin is outside every annulus
        assert sys.block_multiplier(1)[0] == 0.0

    def test_block_disjointness_exact(self, gen, grid1d):
        sys = build_lp_system(gen, 8, grid1d)
        for j in range(sys.n_blocks + 1):
            for k in range(j + 2, sys.n_blocks + 1):
                assert np.max(np.abs(sys.block_multiplier(j) * sys.block_multiplier(k))) == 0.0


class TestBlocks:
    def test_band_limited_block0_identity(self, gen, grid1d, sys1d):
        c = np.zeros(grid1d.shape + (1,), dtype=complex)
        c[:3, 0] = [1.0, 0.5, 0.25]  # |xi| <= 2/8 < 1
        f = GridFunction.from_spectrum(grid1d, c)
        out = lp_block(f, sys1d, 0)
        assert_allclose(out.values, f.values, atol=1e-12 * np.abs(f.values).max())

    def test_block_minus_one_is_zero(self, gen, grid1d, sys1d):
        c = np.zeros(grid1d.shape + (1,), dtype=complex)
        c[5, 0] = 1.0
        f = GridFunction.from_spectrum(grid1d, c)
        assert np.all(lp_block(f, sys1d, -1).values == 0.0)

    def test_pure_wave_splits_by_generator_overlap(self, gen, grid1d, sys1d):
        # e^{i 3 x}: evaluate phi_hat_n(3) directly as the oracle
        k = int(round(3.0 * grid1d.half_period / np.pi))
        c = np.zeros(grid1d.shape + (1,), dtype=complex)
        c[k, 0] = 1.0
        f = GridFunction.from_spectrum(grid1d, c)
        xi = np.pi * k / grid1d.half_period
        for n in range(sys1d.n_blocks + 1):
            if n == 0:
                expected = gen.profile(np.array([xi]))[0]
            else:
                expected = (
                    gen.profile(np.array([xi / 2.0**n]))[0]
                    - gen.profile(np.array([xi / 2.0 ** (n - 1)]))[0]
                )
            block = lp_block(f, sys1d, n)
            amp = np.abs(block.spectrum()[k, 0])
            assert amp == pytest.approx(expected, abs=1e-14)

    def test_out_of_range(self, sys1d, grid1d):
        f = GridFunction(grid1d, np.zeros(grid1d.shape))
        with pytest.raises(ValueError):
            lp_block(f, sys1d, sys1d.n_blocks + 1)

    def test_parseval_roundtrip(self, grid1d, sys1d):
        rng = np.random.default_rng(3)
        vals = rng.normal(size=grid1d.shape + (1,)) + 1j * rng.normal(size=grid1d.shape + (1,))
        f = GridFunction(grid1d, vals)
        c = f.spectrum()
        n = grid1d.shape[0]
        grid_l2 = np.sum(np.abs(vals) ** 2) / n
        spec_l2 = np.sum(np.abs(c) ** 2)
        assert grid_l2 == pytest.approx(spec_l2, rel=1e-13)


class TestMultipliers:
    def test_bessel_zero_is_identity(self, grid1d):
        rng = np.random.default_rng(4)
        f = GridFunction(grid1d, rng.normal(size=grid1d.shape + (1,)).astype(complex))
        out = apply_multiplier(f, bessel_multiplier(grid1d, 0.0))
        assert_allclose(out.values, f.values, atol=1e-14)

    def test_bessel_inverse_composition(self, grid1d):
        rng = np.random.default_rng(5)
        c = np.zeros(grid1d.shape + (1,), dtype=complex)
        c[:50, 0] = rng.normal(size=50)
        f = GridFunction.from_spectrum(grid1d, c)
        out = apply_multiplier(
            apply_multiplier(f, bessel_multiplier(grid1d, 1.3)), bessel_multiplier(grid1d, -1.3)
        )
        scale = np.abs(f.values).max()
        assert np.abs(out.values - f.values).max() <= 1e-12 * scale

    def test_composition_law(self, grid1d):
        rng = np.random.default_rng(6)
        f = GridFunction(grid1d, rng.normal(size=grid1d.shape + (1,)).astype(complex))
        m1 = bessel_multiplier(grid1d, 0.7)
        m2 = bessel_multiplier(grid1d, -2.0)
        seq = apply_multiplier(apply_multiplier(f, m2), m1)
        prod = apply_multiplier(f, SpectralMultiplier(m1.symbol * m2.symbol))
        scale = np.abs(prod.values).max()
        assert np.abs(seq.values - prod.values).max() <= 1e-12 * scale

    def test_derivative_eigenfunction(self):
        g = PeriodizedGrid((64, 32), half_period=2 * np.pi)
        X0, X1 = np.meshgrid(g.axis_coordinates(0), g.axis_coordinates(1), indexing="ij")
        f = GridFunction(g, np.exp(1j * (2.0 * X0 + 0.5 * X1)))
        out = apply_multiplier(f, derivative_multiplier(g, (2, 0)))
        assert_allclose(out.values, (2j) ** 2 * f.values, atol=1e-10)

    def test_matrix_fiber_mismatch(self, grid1d):
        f = GridFunction(grid1d, np.zeros(grid1d.shape + (2,)))
        sym = np.zeros(grid1d.shape + (3, 3))
        with pytest.raises(ValueError, match="fiber"):
            apply_multiplier(f, SpectralMultiplier(sym))


class TestBoundaryRestrict:
    def test_cosine_factor(self, grid2d):
        x0 = grid2d.axis_coordinates(0)
        x1 = grid2d.axis_coordinates(1)
        gvals = np.exp(1j * 2.0 * x1)
        vals = np.cos(x0)[:, None] * gvals[None, :]
        f = GridFunction(grid2d, vals)
        out = boundary_restrict(f)
        assert_allclose(out.values[:, 0], gvals, atol=1e-12)

    def test_sine_factor_vanishes(self, grid2d):
        x0 = grid2d.axis_coordinates(0)
        x1 = grid2d.axis_coordinates(1)
        vals = np.sin(x0)[:, None] * np.exp(1j * x1)[None, :]
        f = GridFunction(grid2d, vals)
        out = boundary_restrict(f)
        assert np.abs(out.values).max() <= 1e-12

    def test_offcenter_bump_matches_series_oracle(self, grid2d):
        rng = np.random.default_rng(7)
        c = np.zeros(grid2d.shape + (1,), dtype=complex)
        c[:8, :8, 0] = (rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))) * np.exp(
            -0.3 * np.arange(8)[:, None]
        )
        f = GridFunction.from_spectrum(grid2d, c)
        out = boundary_restrict(f)
        xi0 = np.pi * np.fft.fftfreq(256, d=1 / 256) / grid2d.half_period
        xi1 = np.pi * np.fft.fftfreq(128, d=1 / 128) / grid2d.half_period
        x1 = grid2d.axis_coordinates(1)
        expect = np.zeros(128, dtype=complex)
        for a in range(8):
            for b in range(8):
                expect += c[a, b, 0] * np.exp(1j * xi1[b] * x1)  # e^{i xi0 * 0} = 1
        assert_allclose(out.values[:, 0], expect, atol=1e-11)

    def test_tail_rejection_carries_mass(self, grid2d):
        c = np.zeros(grid2d.shape + (1,), dtype=complex)
        c[120, 60, 0] = 1.0  # near the grid's frequency edge
        f = GridFunction.from_spectrum(grid2d, c)
        with pytest.raises(SpectralTailError) as err:
            boundary_restrict(f)
        assert err.value.tail > 0.9

    def test_linearity_and_translation_covariance(self, grid2d):
        rng = np.random.default_rng(8)
        c = np.zeros(grid2d.shape + (1,), dtype=complex)
        c[:6, :6, 0] = rng.normal(size=(6, 6))
        f = GridFunction.from_spectrum(grid2d, c)
        g = GridFunction.from_spectrum(grid2d, np.roll(c, 2, axis=1))
        lhs = boundary_restrict(f + 0.5 * g)
        rhs = boundary_restrict(f) + 0.5 * boundary_restrict(g)
        assert np.abs(lhs.values - rhs.values).max() <= 1e-13
        # translation along a tangential axis commutes with restriction
        xi1 = np.pi * np.fft.fftfreq(128, d=1 / 128) / grid2d.half_period
        shift = np.exp(-1j * xi1 * 0.7)[None, :, None]
        fs = GridFunction.from_spectrum(grid2d, c * shift)
        rs = boundary_restrict(fs)
        expect = GridFunction.from_spectrum(
            grid2d.boundary_grid(), boundary_restrict(f).spectrum() * shift[0]
        )
        assert np.abs(rs.values - expect.values).max() <= 1e-12
