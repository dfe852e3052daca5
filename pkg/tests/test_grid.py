import struct

import numpy as np
import pytest
from numpy.testing import assert_allclose

from tracelab.grid import (
    GridFunction,
    PeriodizedGrid,
    evaluate_at_x0,
    from_spectrum,
    read_gridfunction,
    spectral_tail_fraction,
    to_spectrum,
    write_gridfunction,
)


def test_offset_axis_never_hits_zero():
    g = PeriodizedGrid((64, 32), half_period=np.pi)
    x = g.axis_coordinates(0)
    assert np.min(np.abs(x)) > 0
    # cell edges land exactly on 0
    assert 0.0 in g.cell_edges(0)
    # tangential axes are not offset
    assert 0.0 in g.axis_coordinates(1)


def test_shape_validation():
    with pytest.raises(ValueError):
        PeriodizedGrid((48,))
    with pytest.raises(ValueError):
        PeriodizedGrid((64,), half_period=-1.0)


def test_spectrum_roundtrip_and_wave():
    g = PeriodizedGrid((64, 32), half_period=2 * np.pi)
    X0, X1 = np.meshgrid(g.axis_coordinates(0), g.axis_coordinates(1), indexing="ij")
    vals = np.exp(1j * (1.5 * X0 + 2.0 * X1))
    c = to_spectrum(g, vals)
    # a pure wave occupies exactly one mode: xi = (1.5, 2.0) -> k = (3, 4)
    peak = np.unravel_index(np.argmax(np.abs(c)), c.shape)
    assert peak == (3, 4)
    assert_allclose(np.abs(c[peak]), 1.0, atol=1e-13)
    assert_allclose(from_spectrum(g, c), vals, atol=1e-12)


def test_evaluate_at_x0_matches_series():
    g = PeriodizedGrid((64, 32), half_period=2 * np.pi)
    rng = np.random.default_rng(0)
    c = np.zeros(g.shape + (1,), dtype=complex)
    c[:6, :5, 0] = rng.normal(size=(6, 5)) + 1j * rng.normal(size=(6, 5))
    f = GridFunction.from_spectrum(g, c)
    got = evaluate_at_x0(f, 0.37)
    # brute-force series summation, independent of the FFT machinery
    xi0 = np.pi * np.fft.fftfreq(64, d=1.0 / 64) / g.half_period
    xi1 = np.pi * np.fft.fftfreq(32, d=1.0 / 32) / g.half_period
    x1 = g.axis_coordinates(1)
    expect = np.zeros((32,), dtype=complex)
    for k0 in range(64):
        for k1 in range(32):
            expect += c[k0, k1, 0] * np.exp(1j * (xi0[k0] * 0.37 + xi1[k1] * x1))
    assert_allclose(got[:, 0], expect, atol=1e-11)


def test_gridfunction_validation():
    g = PeriodizedGrid((16,))
    with pytest.raises(ValueError):
        GridFunction(g, np.ones(8))
    bad = np.ones(16)
    bad[3] = np.nan
    with pytest.raises(ValueError):
        GridFunction(g, bad)


def test_spectral_tail_fraction():
    g = PeriodizedGrid((64,), half_period=np.pi)
    c = np.zeros((64, 1), dtype=complex)
    c[2, 0] = 1.0
    f = GridFunction.from_spectrum(g, c)
    assert spectral_tail_fraction(f, 10.0) == 0.0
    c[30, 0] = 1.0
    f = GridFunction.from_spectrum(g, c)
    assert spectral_tail_fraction(f, 10.0) == pytest.approx(np.sqrt(0.5))


class TestFileFormat:
    def test_roundtrip(self, tmp_path):
        g = PeriodizedGrid((32, 16), half_period=np.pi)
        rng = np.random.default_rng(1)
        vals = rng.normal(size=(32, 16, 2)) + 1j * rng.normal(size=(32, 16, 2))
        f = GridFunction(g, vals, gamma=1.5)
        path = tmp_path / "f.wtlb"
        write_gridfunction(f, path)
        back = read_gridfunction(path)
        assert back.grid == g
        assert back.gamma == 1.5
        assert np.array_equal(back.values, f.values)

    def test_header_layout_is_normative(self, tmp_path):
        g = PeriodizedGrid((4, 2), half_period=2.0, offset_axis0=True)
        vals = np.arange(8, dtype=float).reshape(4, 2, 1) + 0j
        path = tmp_path / "h.wtlb"
        write_gridfunction(GridFunction(g, vals, gamma=0.5), path)
        raw = path.read_bytes()
        assert raw[:4] == b"WTLB"
        version, d, r = struct.unpack_from("<III", raw, 4)
        assert (version, d, r) == (1, 2, 1)
        shape = struct.unpack_from("<2I", raw, 16)
        assert shape == (4, 2)
        (L,) = struct.unpack_from("<d", raw, 24)
        assert L == 2.0
        assert raw[32] == 1  # offset flag
        (gamma,) = struct.unpack_from("<d", raw, 33)
        assert gamma == 0.5
        payload = np.frombuffer(raw[41:], dtype="<f8")
        assert payload.size == 16  # interleaved re/im
        assert_allclose(payload[0::2], np.arange(8, dtype=float))
        assert_allclose(payload[1::2], 0.0)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.wtlb"
        path.write_bytes(b"NOPE" + b"\x00" * 64)
        with pytest.raises(ValueError, match="magic"):
            read_gridfunction(path)
