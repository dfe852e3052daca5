import numpy as np
import pytest
from numpy.polynomial.legendre import leggauss
from numpy.testing import assert_allclose

from tracelab.bank import band_mask
from tracelab.grid import GridFunction, PeriodizedGrid, evaluate_at_x0, freq_magnitude
from tracelab.lp import build_generator, build_lp_system, smooth_step
from tracelab.norms import (
    HardyHypothesisError,
    WeightSpec,
    bessel_norm,
    besov_norm,
    hardy_ratio,
    lp_norm,
    norm_rows_to_csv,
    reflection_extend,
    sobolev_norm,
    triebel_norm,
)

INF = float("inf")


@pytest.fixture(scope="module")
def hgrid():
    return PeriodizedGrid((8192,), half_period=16 * np.pi)


@pytest.fixture(scope="module")
def hlow(hgrid):
    gen = build_generator()
    sys = build_lp_system(gen, 8, hgrid)
    return sys.telescoped()


def _bandlimit(grid, vals, mask):
    f = GridFunction(grid, vals.astype(complex))
    return GridFunction.from_spectrum(grid, f.spectrum() * mask[:, None], support_margin=0.3)


class TestWeightSpec:
    def test_gamma_floor(self):
        with pytest.raises(ValueError):
            WeightSpec(-1.0)
        with pytest.raises(ValueError):
            WeightSpec(0.0, "nowhere")

    def test_muckenhoupt_window(self):
        assert WeightSpec(0.5).muckenhoupt(2.0)
        assert not WeightSpec(1.5).muckenhoupt(2.0)


class TestLpNorm:
    def test_plateau_closed_form(self, hgrid, hlow):
        # smooth plateau equal to 1 on most of [0, 1]; the exact weighted mass
        # of the limit shape is int_0^1 x dx = 1/2, with error controlled by
        # the ramp-region mass
        x = hgrid.axis_coordinates(0)
        ramp = 0.02
        vals = smooth_step((np.abs(x - 0.5) - (0.5 - ramp)) / ramp)
        f = GridFunction(hgrid, vals.astype(complex), support_margin=0.3)
        got = lp_norm(f, 2.0, WeightSpec(1.0, "half")).value
        ramp_mass = 2 * ramp  # |x| <= 1 there, two ramp strips
        assert abs(got**2 - 0.5) <= ramp_mass

    def test_zero_function(self, hgrid):
        f = GridFunction(hgrid, np.zeros(hgrid.shape))
        assert lp_norm(f, 2.0, WeightSpec(0.5)).value == 0.0

    def test_riemann_oracle_gamma_zero(self, hgrid):
        rng = np.random.default_rng(0)
        c = np.zeros(hgrid.shape + (1,), dtype=complex)
        c[1:40, 0] = rng.normal(size=39) + 1j * rng.normal(size=39)
        f = GridFunction.from_spectrum(hgrid, c)
        ours = lp_norm(f, 3.0, WeightSpec(0.0)).value
        direct = (np.sum(np.abs(f.values[:, 0]) ** 3) * hgrid.spacing(0)) ** (1 / 3)
        assert ours == pytest.approx(direct, rel=1e-12)

    def test_homogeneity_and_triangle(self, hgrid):
        rng = np.random.default_rng(1)
        c = np.zeros(hgrid.shape + (1,), dtype=complex)
        c[1:30, 0] = rng.normal(size=29)
        f = GridFunction.from_spectrum(hgrid, c)
        c2 = np.roll(c, 5, axis=0)
        g = GridFunction.from_spectrum(hgrid, c2)
        w = WeightSpec(1.5)
        nf = lp_norm(f, 2.5, w).value
        assert lp_norm(f * (-3.7), 2.5, w).value == pytest.approx(3.7 * nf, rel=1e-12)
        assert lp_norm(f + g, 2.5, w).value <= nf + lp_norm(g, 2.5, w).value + 1e-12

    def test_margin_contract(self, hgrid):
        f = GridFunction(hgrid, np.zeros(hgrid.shape), support_margin=0.1)
        with pytest.raises(ValueError, match="margin"):
            lp_norm(f, 2.0, WeightSpec(0.0))

    def test_p_range(self, hgrid):
        f = GridFunction(hgrid, np.zeros(hgrid.shape))
        with pytest.raises(ValueError):
            lp_norm(f, 1.0, WeightSpec(0.0))


class TestSobolev:
    def test_k0_equals_lp(self, hgrid, hlow):
        rng = np.random.default_rng(2)
        c = np.zeros(hgrid.shape + (1,), dtype=complex)
        c[1:20, 0] = rng.normal(size=19)
        f = GridFunction.from_spectrum(hgrid, c)
        w = WeightSpec(0.5)
        assert sobolev_norm(f, 0, 2.0, w).value == lp_norm(f, 2.0, w).value

    def test_windowed_wave_ratio_tracks_frequency(self):
        # ratio sobolev(1)/sobolev(0) = 1 + |xi0| exactly for a pure wave;
        # windowing perturbs it by the window's bandwidth
        g = PeriodizedGrid((4096,), half_period=8 * np.pi)
        x = g.axis_coordinates(0)
        window = np.exp(-((x / 6.0) ** 2))
        w = WeightSpec(0.0)
        for xi0 in (4.0, 8.0, 16.0):
            f = GridFunction(g, (window * np.exp(1j * xi0 * x)).astype(complex), support_margin=0.3)
            ratio = sobolev_norm(f, 1, 2.0, w).value / sobolev_norm(f, 0, 2.0, w).value
            assert ratio == pytest.approx(1.0 + xi0, rel=0.02)

    def test_monotone_in_k(self, hgrid):
        rng = np.random.default_rng(3)
        c = np.zeros(hgrid.shape + (1,), dtype=complex)
        c[1:20, 0] = rng.normal(size=19)
        f = GridFunction.from_spectrum(hgrid, c)
        w = WeightSpec(0.5)
        n0 = sobolev_norm(f, 0, 2.0, w).value
        n1 = sobolev_norm(f, 1, 2.0, w).value
        n2 = sobolev_norm(f, 2, 2.0, w).value
        assert n0 <= n1 <= n2


class TestBlockNorms:
    @pytest.fixture(scope="class")
    def setup(self):
        grid = PeriodizedGrid((2048,), half_period=2 * np.pi)
        gen = build_generator()
        sys = build_lp_system(gen, 8, grid)
        rng = np.random.default_rng(4)
        mask = band_mask(grid, 24.0)
        c = (rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)) * np.exp(
            -freq_magnitude(grid) / 24.0
        ) * mask
        f = GridFunction.from_spectrum(grid, c[:, None])
        return grid, sys, f

    def test_qinf_is_supremum(self, setup):
        grid, sys, f = setup
        w = WeightSpec(0.5)
        per_block = []
        for n in range(sys.n_blocks + 1):
            cn = f.spectrum() * sys.block_multiplier(n)[:, None]
            per_block.append(
                2.0 ** (1.3 * n) * lp_norm(GridFunction.from_spectrum(grid, cn), 2.0, w).value
            )
        got = besov_norm(f, 1.3, 2.0, INF, w, sys).value
        assert got == pytest.approx(max(per_block), rel=1e-13)

    def test_q_monotonicity(self, setup):
        grid, sys, f = setup
        w = WeightSpec(0.5)
        b1 = besov_norm(f, 0.7, 2.0, 1.0, w, sys).value
        b2 = besov_norm(f, 0.7, 2.0, 2.0, w, sys).value
        binf = besov_norm(f, 0.7, 2.0, INF, w, sys).value
        assert b1 >= b2 >= binf

    def test_single_block_collapse(self, setup):
        grid, sys, f = setup
        # content strictly inside block 2's plateau-difference band
        c = np.zeros(grid.shape + (1,), dtype=complex)
        mag = freq_magnitude(grid)
        sel = (mag > 3.2) & (mag < 3.8)
        c[sel, 0] = 1.0
        g = GridFunction.from_spectrum(grid, c)
        w = WeightSpec(0.5)
        base = 2.0 ** (2 * 1.1) * lp_norm(g, 2.0, w).value
        for q in (1.0, 2.0, INF):
            assert besov_norm(g, 1.1, 2.0, q, w, sys).value == pytest.approx(base, rel=1e-12)
            assert triebel_norm(g, 1.1, 2.0, q, w, sys).value == pytest.approx(base, rel=1e-12)

    def test_truncation_tail_reported(self, setup):
        grid, sys, f = setup
        res = besov_norm(f, 0.5, 2.0, 2.0, WeightSpec(0.0), sys)
        assert res.truncation_tail <= 1e-12 * res.value


class TestBessel:
    def test_requires_ap_weight(self, hgrid):
        f = GridFunction(hgrid, np.zeros(hgrid.shape))
        with pytest.raises(ValueError, match="-1, p-1"):
            bessel_norm(f, 1.0, 2.0, WeightSpec(1.5))

    def test_s0_is_lp(self, hgrid):
        rng = np.random.default_rng(5)
        c = np.zeros(hgrid.shape + (1,), dtype=complex)
        c[1:20, 0] = rng.normal(size=19)
        f = GridFunction.from_spectrum(hgrid, c)
        w = WeightSpec(0.5)
        assert bessel_norm(f, 0.0, 2.0, w).value == pytest.approx(lp_norm(f, 2.0, w).value, rel=1e-14)

    def test_wave_scaling(self):
        g = PeriodizedGrid((4096,), half_period=8 * np.pi)
        x = g.axis_coordinates(0)
        window = np.exp(-((x / 6.0) ** 2))
        xi0 = 8.0
        f = GridFunction(g, (window * np.exp(1j * xi0 * x)).astype(complex), support_margin=0.3)
        w = WeightSpec(0.0)
        s = 1.4
        got = bessel_norm(f, s, 2.0, w).value / lp_norm(f, 2.0, w).value
        assert got == pytest.approx((1 + xi0**2) ** (s / 2), rel=0.02)

    def test_comparable_to_sobolev(self, setup=None):
        grid = PeriodizedGrid((2048,), half_period=2 * np.pi)
        rng = np.random.default_rng(6)
        mask = band_mask(grid, 24.0)
        lo, hi = np.inf, 0.0
        w = WeightSpec(0.5)
        for _ in range(6):
            c = (rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)) * mask
            f = GridFunction.from_spectrum(grid, c[:, None])
            ratio = bessel_norm(f, 2.0, 2.0, w).value / sobolev_norm(f, 2, 2.0, w).value
            lo, hi = min(lo, ratio), max(hi, ratio)
        # empirical bracket: same space up to equivalent norms
        assert 1e-2 <= lo <= hi <= 1e2


class TestReflection:
    def test_derivatives_match_across_interface(self):
        grid = PeriodizedGrid((4096,), half_period=8 * np.pi)
        x = grid.axis_coordinates(0)
        vals = np.where(x > 0, 0.0, 0.0).astype(complex)
        # smooth one-sided profile: values on x > 0 only matter
        prof = np.exp(-((x - 2.0) ** 2)) + 0.5 * np.exp(-((x - 4.0) ** 2) / 2.0)
        vals = prof.astype(complex)
        f = GridFunction(grid, vals)
        ext = reflection_extend(f, order=3)
        # positive side untouched
        pos = x > 0
        assert np.array_equal(ext.values[pos], f.values[pos])
        # near-interface parity: compare one-sided finite differences
        h = grid.spacing(0)
        n0 = grid.shape[0] // 2
        right = ext.values[n0 : n0 + 5, 0].real
        left = ext.values[n0 - 5 : n0, 0].real[::-1]
        # zeroth and first derivative continuity at the interface
        assert left[0] == pytest.approx(right[0], abs=5e-3 * np.abs(right).max() + 5e-3)

    def test_halfspace_block_norm_requires_ap(self):
        grid = PeriodizedGrid((2048,), half_period=2 * np.pi)
        gen = build_generator()
        sys = build_lp_system(gen, 6, grid)
        f = GridFunction(grid, np.zeros(grid.shape))
        with pytest.raises(ValueError, match="intrinsic"):
            besov_norm(f, 1.0, 2.0, 2.0, WeightSpec(1.5, "half"), sys)


class TestHardy:
    def test_supercritical_near_extremal(self, hgrid, hlow):
        x = hgrid.axis_coordinates(0)
        u = _bandlimit(hgrid, x / (x**2 + 0.1**2) * np.exp(-((x / 9.0) ** 2)), hlow)
        r = hardy_ratio(u, 2.0, 3.0)
        assert r <= 1.05  # sharp constant p/(gamma-p+1) = 1
        assert r >= 0.6

    def test_subcritical_with_zero_boundary(self, hgrid, hlow):
        x = hgrid.axis_coordinates(0)
        u = _bandlimit(hgrid, x * np.exp(-3 * x**2), hlow)
        assert np.abs(evaluate_at_x0(u, 0.0)).max() <= 1e-10
        r = hardy_ratio(u, 2.0, 0.0)
        # independent quadrature oracle with the analytic derivative
        nodes, wq = leggauss(1500)
        a, b = 1e-9, 40.0
        xx = 0.5 * (b - a) * (nodes + 1) + a
        ww = 0.5 * (b - a) * wq
        uu = xx * np.exp(-3 * xx**2)
        du = np.exp(-3 * xx**2) * (1 - 6 * xx**2)
        oracle = np.sqrt(np.sum((uu / xx) ** 2 * ww) / np.sum(du**2 * ww))
        assert r == pytest.approx(oracle, rel=1e-7)

    def test_critical_gamma_rejected(self, hgrid, hlow):
        x = hgrid.axis_coordinates(0)
        u = _bandlimit(hgrid, x * np.exp(-3 * x**2), hlow)
        with pytest.raises(HardyHypothesisError):
            hardy_ratio(u, 2.0, 1.0)

    def test_nonzero_boundary_rejected(self, hgrid, hlow):
        x = hgrid.axis_coordinates(0)
        u = _bandlimit(hgrid, np.exp(-3 * x**2), hlow)  # u(0) = 1
        with pytest.raises(HardyHypothesisError, match="boundary"):
            hardy_ratio(u, 2.0, 0.0)

    def test_one_dimensional_only(self, grid2d):
        f = GridFunction(grid2d, np.zeros(grid2d.shape))
        with pytest.raises(ValueError, match="half-line"):
            hardy_ratio(f, 2.0, 3.0)


def test_csv_export(tmp_path):
    rows = [
        {
            "function_id": "block-000",
            "family": "B",
            "s_or_k": 1.5,
            "p": 2.0,
            "q": 2.0,
            "gamma": 0.5,
            "domain": "full",
            "value": 1.234,
            "tail": 1e-15,
        }
    ]
    path = tmp_path / "norms.csv"
    norm_rows_to_csv(rows, path)
    text = path.read_text().splitlines()
    assert text[0] == "function_id,family,s_or_k,p,q,gamma,domain,value,tail"
    assert len(text) == 2
