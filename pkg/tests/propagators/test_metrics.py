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

import pytest

from itlab.errors import ContractError
from itlab.propagators import centroid_track, classicality_onset, it_convergence, it_error, probability_transport
from itlab.schema import GaussianSpec, Grid, PhysicalParams
from itlab.states import gaussian

PARAMS = PhysicalParams()


def test_it_convergence_is_monotone():
    rows = it_convergence(GaussianSpec(), [10.0, 100.0, 1000.0], PARAMS)
    assert [row['t'] for row in rows] == [10.0, 100.0, 1000.0]
    errors = [row['density_l1'] for row in rows]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < 1e-2
    assert all(row['l2_rel'] < 1 for row in rows)


def test_it_convergence_at_large_times():
    rows = it_convergence(GaussianSpec(), [1000.0, 10000.0], PARAMS)
    assert rows[0]['l2_rel'] < 1e-2
    assert rows[1]['l2_rel'] < rows[0]['l2_rel']
    assert rows[1]['density_l1'] < rows[0]['density_l1']
    assert rows[1]['n'] <= 2**20


def test_probability_transport():
    rows = probability_transport(GaussianSpec(), 1000.0, PARAMS, n_intervals=20, seed=5)
    assert len(rows) == 20
    for row in rows:
        assert row['a'] <= row['b']
        assert row['identity_error'] < 1e-12
        assert row['exact_error'] < 1e-2
    assert probability_transport(GaussianSpec(), 1000.0, PARAMS, n_intervals=20, seed=5) == rows


def test_probability_transport_needs_intervals():
    with pytest.raises(ContractError):
        probability_transport(GaussianSpec(), 100.0, PARAMS, n_intervals=0)


def test_onset_is_mass_invariant_in_scaled_time():
    scaled = [1.0, 3.0, 10.0, 30.0]
    light = classicality_onset(GaussianSpec(), PhysicalParams(mass=1.0), 1e-2, scaled)
    heavy = classicality_onset(GaussianSpec(), PhysicalParams(mass=4.0), 1e-2, scaled)
    assert light['onset_scaled_t'] == pytest.approx(10.0)
    assert heavy['onset_scaled_t'] == pytest.approx(10.0)
    assert heavy['onset_t'] == pytest.approx(4 * light['onset_t'])
    assert len(light['rows']) == 4


def test_centroid_follows_free_motion():
    grid = Grid(n=2048, x_min=-60.0, x_max=60.0)
    s = gaussian(GaussianSpec(center=-5.0, momentum=1.5), grid)
    track = centroid_track(s, [0.0, 2.0, 4.0, 8.0], PhysicalParams(mass=2.0))
    assert track['slope'] == pytest.approx(0.75, abs=1e-10)
    assert track['expected_slope'] == pytest.approx(0.75, abs=1e-12)
    assert track['residual'] < 1e-10


def test_error_metrics_need_one_grid():
    a = gaussian(GaussianSpec(), Grid(n=256, x_min=-16.0, x_max=16.0))
    b = gaussian(GaussianSpec(), Grid(n=512, x_min=-16.0, x_max=16.0))
    with pytest.raises(ContractError):
        it_error(a, b)
    assert it_error(a, a) == {'l2_rel': 0.0, 'linf': 0.0, 'density_l1': 0.0}


if __name__ == '__main__':
    test_it_convergence_is_monotone()
    test_probability_transport()
