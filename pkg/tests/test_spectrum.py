import numpy as np
import pytest

from parosc.fock import FockSpace
from parosc.rwa import RwaSystem, build_h_rwa, semiclassics
from parosc.spectrum import (
    eigenstate_by_label,
    find_degeneracy_points,
    level_label_at_zero_drive,
    parity_split,
    same_parity_gap,
    series_rows,
    spectrum_vs_drive,
)


def test_blocks_dim4():
    sp = FockSpace(4)
    h = build_h_rwa(sp, RwaSystem(delta=0.3, f=0.7))
    eb, ob = parity_split(h, sp)
    assert eb.shape == (2, 2) and ob.shape == (2, 2)
    assert eb[0, 1] == h[0, 2]
    assert ob[0, 1] == h[1, 3]


def test_zero_drive_blocks_diagonal():
    sp = FockSpace(8)
    eb, ob = parity_split(build_h_rwa(sp, RwaSystem(delta=1.0, f=0.0)), sp)
    assert np.count_nonzero(eb - np.diag(np.diag(eb))) == 0
    assert np.count_nonzero(ob - np.diag(np.diag(ob))) == 0


def test_block_union_matches_full_spectrum():
    sp = FockSpace(30)
    h = build_h_rwa(sp, RwaSystem(delta=1.1, f=1.7))
    eb, ob = parity_split(h, sp)
    union = np.sort(np.concatenate([np.linalg.eigvalsh(eb), np.linalg.eigvalsh(ob)]))
    full = np.linalg.eigvalsh(h)   # independent route: diagonalize without splitting
    assert np.max(np.abs(union - full)) < 1e-10 * max(1, np.max(np.abs(full)))


def test_parity_violation_detected():
    sp = FockSpace(6)
    h = build_h_rwa(sp, RwaSystem(delta=0.0, f=1.0))
    h[0, 1] = h[1, 0] = 0.5   # parity-breaking coupling
    with pytest.raises(ValueError):
        parity_split(h, sp)


def test_level_labels_at_zero_drive():
    # delta=1.8 ordering: |1> < |2> < |0> < |3>
    assert level_label_at_zero_drive(1.8, 0) == (1, 1)
    assert level_label_at_zero_drive(1.8, 2) == (1, 0)
    assert level_label_at_zero_drive(1.8, 1) == (-1, 0)
    assert level_label_at_zero_drive(0.0, 4) == (1, 2)


class TestSpectrumSeries:
    def test_delta2_lowest_pair_coincides(self):
        series = spectrum_vs_drive(FockSpace(60), 2.0, np.linspace(0, 3, 31), 3)
        even0 = series.column(1, 0)
        odd0 = series.column(-1, 0)
        assert np.max(np.abs(even0 - odd0)) < 1e-8

    def test_delta0_even_odd_pairing_at_strong_drive(self):
        series = spectrum_vs_drive(FockSpace(80), 0.0, np.array([3.0, 4.0, 5.0, 6.0]), 3)
        gap = np.abs(series.column(1, 0) - series.column(-1, 0))
        assert np.all(np.diff(gap) < 0)          # tunnel splitting shrinks with f
        assert gap[-1] < 1e-3 * abs(series.column(1, 0)[-1])

    def test_delta1p8_vacuum_state_stays_third_lowest(self):
        sp = FockSpace(60)
        series = spectrum_vs_drive(sp, 1.8, np.linspace(0.0, 3.0, 25), 4)
        target = series.column(1, 1)   # the flow connected to |0>
        for i in range(len(series.f_grid)):
            position = np.sum(series.levels[i] < target[i] - 1e-12)
            assert position == 2

    def test_no_same_parity_crossing(self):
        for delta in (0.0, 1.8, 2.5):
            series = spectrum_vs_drive(FockSpace(60), delta, np.linspace(0, 3, 61), 4)
            for parity in (1, -1):
                cols = [series.column(parity, r) for r in range(3)]
                for lo, hi in zip(cols[:-1], cols[1:]):
                    assert np.all(hi - lo > -1e-12)

    def test_min_same_parity_gap_never_collapses(self):
        # gaps open at zero drive stay open: the minimum same-parity gap over
        # the lowest four even levels never falls meaningfully below its f=0
        # value (it dips ~5% around f~1.8 at delta=0 before growing again)
        for delta in (0.0, 1.8):
            series = spectrum_vs_drive(FockSpace(80), delta, np.linspace(0, 4, 41), 4)
            even = np.stack([series.column(1, r) for r in range(4)], axis=1)
            gaps = np.diff(even, axis=1).min(axis=1)
            assert np.all(gaps >= 0.9 * gaps[0])

    def test_f_grid_must_ascend(self):
        with pytest.raises(ValueError):
            spectrum_vs_drive(FockSpace(20), 0.0, np.array([1.0, 0.5]), 2)

    def test_rows_format(self):
        series = spectrum_vs_drive(FockSpace(20), 0.0, np.array([0.0, 1.0]), 2)
        rows = list(series_rows(series))
        assert len(rows) == 2 * 4
        assert rows[0][0] == 0.0 and rows[0][1] in (-1, 1)


class TestSameParityGap:
    def test_zero_drive_vacuum_gap(self):
        series = spectrum_vs_drive(FockSpace(40), 0.0, np.array([0.0]), 3)
        gap = same_parity_gap(series, 1, 0)
        assert gap[0] == pytest.approx(3.0)   # |0> to |2>

    def test_nonnegative(self):
        series = spectrum_vs_drive(FockSpace(40), 1.3, np.linspace(0, 2, 11), 3)
        assert np.all(same_parity_gap(series, 1, 0) >= 0)
        assert np.all(same_parity_gap(series, -1, 1) >= 0)

    def test_semiclassical_estimate_approached_from_below(self):
        # intrawell spacing 2*sqrt((delta+f) f): the well holds ~f/4 states at
        # delta=0, so the estimate overshoots at moderate f and improves slowly
        ratios = []
        for f, dim in ((5.0, 120), (10.0, 200), (20.0, 320)):
            series = spectrum_vs_drive(FockSpace(dim), 0.0, np.array([f]), 2)
            gap = same_parity_gap(series, 1, 0)[0]
            est = semiclassics(RwaSystem(delta=0.0, f=f)).gap_estimate
            ratios.append(gap / est)
        assert ratios[0] == pytest.approx(0.68, abs=0.02)
        assert ratios[0] < ratios[1] < ratios[2] < 1.0
        assert abs(ratios[2] - 1.0) < 0.06

    def test_missing_neighbor_raises(self):
        series = spectrum_vs_drive(FockSpace(20), 0.0, np.array([0.0]), 1)
        with pytest.raises(ValueError):
            same_parity_gap(series, 1, 0)


class TestDegeneracyScan:
    def test_integer_detuning_opposite_parity(self):
        found = find_degeneracy_points(FockSpace(60), np.linspace(0.5, 3.5, 13), 0.3)
        deltas = sorted({r["delta"] for r in found if r["kind"] == "opposite-parity"})
        assert deltas == [1.0, 2.0, 3.0]

    def test_half_integer_same_parity_at_zero_drive(self):
        found = find_degeneracy_points(FockSpace(40), np.array([2.5]), 0.0)
        kinds = {r["kind"] for r in found}
        assert "same-parity-even" in kinds   # E_0 = E_4
        assert "same-parity-odd" in kinds    # E_1 = E_3

    def test_half_integer_degeneracy_lifted_at_finite_drive(self):
        found = find_degeneracy_points(FockSpace(40), np.array([2.5]), 0.3)
        assert all(not r["kind"].startswith("same-parity") for r in found)

    def test_tol_validation(self):
        with pytest.raises(ValueError):
            find_degeneracy_points(FockSpace(20), np.array([1.0]), 0.1, tol=0.0)


def test_eigenstate_by_label_phase_and_energy():
    sp = FockSpace(40)
    e, phi = eigenstate_by_label(sp, 0.0, 0.0, 1, 1)
    assert e == pytest.approx(3.0)
    assert phi[2] == pytest.approx(1.0)
    e, phi = eigenstate_by_label(sp, 0.0, 2.0, 1, 0)
    k = np.argmax(np.abs(phi))
    assert phi[k].imag == pytest.approx(0.0, abs=1e-14)
    assert phi[k].real > 0
    with pytest.raises(ValueError):
        eigenstate_by_label(sp, 0.0, 0.0, 1, 100)
