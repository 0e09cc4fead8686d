# Copyright 2026 The itlab authors. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

from itlab.densmat import (AU_TIME_SECONDS, average_diagonal, default_diagonal_lattice, dt_concordance,
                           dt_overlap_model, imaging_amplitudes, measure_oscillation_period, oscillation_period,
                           representative_point, rho_diag_it, rho_exact, rho_offdiag_it, suppression_report,
                           time_average, two_peak_diagonal, window_nodes)
from itlab.errors import ContractError, RegimeError
from itlab.schema import GaussianSpec, Grid, TwoPacketParams, WaveState
from itlab.states import gaussian, gaussian_superposition

PARAMS = TwoPacketParams(x1=-5.0, x2=5.0, sigma=1.0)
T_CENTER = 1.0e4


def test_packets_must_start_apart():
    with pytest.raises(ValueError):
        TwoPacketParams(x1=-2.0, x2=2.0, sigma=1.0)


def test_diagonal_forms_agree():
    x = default_diagonal_lattice(PARAMS, T_CENTER, points=257)
    diagonal = rho_diag_it(PARAMS, T_CENTER, x)
    square = rho_offdiag_it(PARAMS, T_CENTER, x, x)
    scale = diagonal.values.max()
    np.testing.assert_allclose(square.diagonal().real, diagonal.values, rtol=0, atol=1e-12 * scale)
    np.testing.assert_allclose(np.abs(imaging_amplitudes(PARAMS, T_CENTER, x))**2, diagonal.values,
                               rtol=0, atol=1e-12 * scale)
    assert square.hermiticity_residual() < 1e-12 * scale
    assert diagonal.warnings == ()


def test_diagonal_is_normalised():
    x = default_diagonal_lattice(PARAMS, T_CENTER)
    assert rho_diag_it(PARAMS, T_CENTER, x).integral() == pytest.approx(1.0, abs=1e-6)
    assert np.sum(two_peak_diagonal(PARAMS, T_CENTER, x)) * (x[1] - x[0]) == pytest.approx(1.0, abs=1e-6)


def test_early_times_warn_and_zero_is_refused():
    x = np.linspace(-20.0, 20.0, 11)
    assert rho_diag_it(PARAMS, 10.0, x).warnings
    with pytest.raises(ContractError):
        rho_diag_it(PARAMS, 0.0, x)


def test_oscillation_period():
    rx, rxp = representative_point(PARAMS, T_CENTER, splitting=1.0)
    assert rx == PARAMS.x1
    predicted = oscillation_period(PARAMS, rx, rxp, T_CENTER)
    assert predicted == pytest.approx(4 * math.pi)
    measured = measure_oscillation_period(PARAMS, rx, rxp, T_CENTER)
    assert measured == pytest.approx(predicted, rel=0.05)


def test_no_oscillation_on_matching_momenta():
    assert oscillation_period(PARAMS, PARAMS.x1, PARAMS.x2, T_CENTER) == math.inf
    with pytest.raises(ContractError):
        measure_oscillation_period(PARAMS, PARAMS.x1, PARAMS.x2, T_CENTER)


def test_zero_window_is_the_instantaneous_slice():
    x = np.array([-100.0, 0.0, 50.0])
    x_prime = np.array([10.0, 9000.0])
    instantaneous = rho_offdiag_it(PARAMS, T_CENTER, x, x_prime)
    averaged = time_average(PARAMS, T_CENTER, 0.0, x, x_prime)
    np.testing.assert_array_equal(averaged.values, instantaneous.values)


def test_window_contract():
    x = np.array([0.0])
    with pytest.raises(ContractError):
        window_nodes(PARAMS, T_CENTER, -1.0, x, x)
    with pytest.raises(ContractError):
        window_nodes(PARAMS, T_CENTER, 3 * T_CENTER, x, x)
    times, weights = window_nodes(PARAMS, T_CENTER, 100.0, x, np.array([T_CENTER]))
    assert weights.sum() == pytest.approx(1.0)
    assert times[0] == pytest.approx(T_CENTER - 50.0)
    assert times[-1] == pytest.approx(T_CENTER + 50.0)


def test_window_refuses_too_many_nodes():
    wide = np.linspace(-6e4, 6e4, 5)
    with pytest.raises(RegimeError) as e:
        time_average(PARAMS, T_CENTER, 1e4, wide, wide)
    assert e.value.code == 'TooManyNodes'


@pytest.fixture(scope='module')
def report():
    rx, rxp = representative_point(PARAMS, T_CENTER)
    t_osc = oscillation_period(PARAMS, rx, rxp, T_CENTER)
    return suppression_report(PARAMS, T_CENTER, [0.0, t_osc, 100 * t_osc])


def test_suppression_by_time_resolution(report):
    first, last = report[0], report[-1]
    assert first['representative_suppression'] == pytest.approx(1.0)
    assert first['fringe_contrast'] == pytest.approx(1.0)
    assert last['tau_over_t_osc'] == pytest.approx(100.0)
    assert last['representative_suppression'] >= 100.0
    assert last['offdiag_patch_max'] < first['offdiag_patch_max']
    assert last['diag_l1_two_peak'] < first['diag_l1_two_peak']
    assert first['t_osc_seconds'] == pytest.approx(4 * math.pi * AU_TIME_SECONDS)
    assert first['nanosecond_over_t_osc'] > 1e6


def test_unsorted_windows():
    with pytest.raises(ContractError):
        suppression_report(PARAMS, T_CENTER, [10.0, 1.0])


def test_dt_concordance_is_the_interference_weight(report):
    assert dt_concordance(PARAMS, T_CENTER, 0.0) == pytest.approx(report[0]['dt_l1'])
    parts = average_diagonal(PARAMS, T_CENTER, 0.0, np.array([0.0]))
    assert parts['interference'][0] == pytest.approx(parts['incoherent'][0])


GRID = Grid(n=1024, x_min=-32.0, x_max=32.0)
PSI_1 = gaussian(GaussianSpec(center=-6.0), GRID)
PSI_2 = gaussian(GaussianSpec(center=6.0, momentum=0.7), GRID)
ALPHA = 0.6
BETA = complex(0.0, 0.8)
PATCH = (-10.0, 10.0)


def test_cross_peak_is_not_suppressed(report):
    first, last = report[0], report[-1]
    # phase of rho at (X_1, X_2) is stationary in t
    assert last['cross_peak_modulus'] > 0.9 * first['cross_peak_modulus']
    assert last['cross_peak_modulus'] > last['representative_modulus']


def test_averaged_diagonal_keeps_its_fringes(report):
    first, last = report[0], report[-1]
    assert last['fringe_contrast'] == pytest.approx(1.0, abs=1e-9)
    assert last['dt_l1'] > 0.5 * first['dt_l1']
    assert last['diag_l1_two_peak'] > 0.1


def test_rho_exact_has_four_peaks_at_time_zero():
    s = gaussian_superposition([GaussianSpec(center=-5.0), GaussianSpec(center=5.0)], GRID)
    rho = rho_exact(s, (-8.0, 8.0))
    modulus = np.abs(rho.values)
    peak = modulus.max()
    index = {X: int(np.argmin(np.abs(rho.x - X))) for X in (-5.0, 0.0, 5.0)}
    for a in (-5.0, 5.0):
        for b in (-5.0, 5.0):
            assert modulus[index[a], index[b]] == pytest.approx(peak, rel=1e-12)
        assert modulus[index[a], index[0.0]] < 1e-3 * peak
    assert modulus[index[0.0], index[0.0]] < 1e-3 * peak
    assert rho.hermiticity_residual() < 1e-14
    np.testing.assert_allclose(rho.diagonal().real, np.abs(s.amplitudes[(GRID.x >= -8.0) & (GRID.x <= 8.0)])**2,
                               atol=1e-15)


def test_overlap_zero_is_diagonal_in_the_branches():
    model = dt_overlap_model(ALPHA, BETA, 0.0, PSI_1, PSI_2, PATCH, stride=4)
    branch_1 = rho_exact(PSI_1, PATCH, stride=4)
    branch_2 = rho_exact(PSI_2, PATCH, stride=4)
    expected = abs(ALPHA)**2 * branch_1.values + abs(BETA)**2 * branch_2.values
    np.testing.assert_allclose(model.values, expected, rtol=0, atol=1e-15)


def test_overlap_one_is_the_pure_state():
    pure = WaveState(grid=GRID, amplitudes=ALPHA * PSI_1.amplitudes + BETA * PSI_2.amplitudes)
    model = dt_overlap_model(ALPHA, BETA, 1.0, PSI_1, PSI_2, PATCH, stride=4)
    np.testing.assert_allclose(model.values, rho_exact(pure, PATCH, stride=4).values, rtol=0, atol=1e-12)


def test_interference_is_linear_in_the_overlap():
    rho = {c: dt_overlap_model(ALPHA, BETA, c, PSI_1, PSI_2, PATCH, stride=8).values for c in (0.0, 0.5, 1.0)}
    np.testing.assert_allclose(rho[0.5] - rho[0.0], 0.5 * (rho[1.0] - rho[0.0]), rtol=0, atol=1e-12)


def test_overlap_model_contract():
    with pytest.raises(ContractError):
        dt_overlap_model(1.0, 1.0, 0.0, PSI_1, PSI_2)
    with pytest.raises(ContractError):
        dt_overlap_model(ALPHA, BETA, 1.5, PSI_1, PSI_2)
    with pytest.raises(ContractError):
        rho_exact(PSI_1, (-100.0, 0.0))


if __name__ == '__main__':
    test_oscillation_period()
    test_overlap_one_is_the_pure_state()
