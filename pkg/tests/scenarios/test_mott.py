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

import numpy as np
import pytest

from itlab.scenarios import AngularBinning, bin_directions, mott_perception, mott_run, rayleigh_test, sample_directions
from itlab.schema import AtomCloud, MottConfig

CLOUD_CONFIG = MottConfig(n_events=1000, cloud=AtomCloud(count=10000, radius=100.0, seed=0), seed=42)


@pytest.fixture(scope='module')
def cloud_run():
    return mott_run(CLOUD_CONFIG)


def test_every_track_is_straight(cloud_run):
    stats = cloud_run.stats
    assert stats['n_events'] == 1000
    assert stats['n_atoms'] == 10000
    assert stats['collinearity_violations'] == 0
    assert stats['max_transverse_deviation'] <= CLOUD_CONFIG.impact_parameter
    assert all(event.max_transverse <= CLOUD_CONFIG.impact_parameter for event in cloud_run.events)
    assert [event.index for event in cloud_run.events] == list(range(1000))


def test_directions_are_isotropic(cloud_run):
    stats = cloud_run.stats
    assert stats['mean_resultant_length'] <= stats['uniformity_bound']
    directions = np.array([event.direction for event in cloud_run.events])
    np.testing.assert_allclose(np.linalg.norm(directions, axis=1), 1.0, atol=1e-12)


def test_runs_are_reproducible(cloud_run):
    again = mott_run(CLOUD_CONFIG)
    assert again.model_dump() == cloud_run.model_dump()


def test_forced_direction_ionises_the_atoms_on_its_ray():
    atoms = [(0.0, 0.0, 10.0), (0.3, 0.0, 5.0), (0.0, 0.0, -10.0), (2.0, 0.0, 20.0)]
    cfg = MottConfig(n_events=3, atoms=atoms, forced_direction=(0.0, 0.0, 2.0), impact_parameter=0.5)
    run = mott_run(cfg)
    for event in run.events:
        assert event.direction == (0.0, 0.0, 1.0)
        assert event.ionised == [0, 1]
        assert event.max_transverse == pytest.approx(0.3)
    assert run.stats['collinearity_violations'] == 0
    assert run.stats['mean_resultant_length'] == pytest.approx(1.0)


def test_no_atoms():
    run = mott_run(MottConfig(n_events=5, seed=1))
    assert run.stats['n_atoms'] == 0
    assert run.stats['empty_fraction'] == 1.0
    assert all(event.ionised == [] for event in run.events)


def test_atoms_and_cloud_are_exclusive():
    with pytest.raises(ValueError):
        MottConfig(atoms=[(0.0, 0.0, 1.0)], cloud=AtomCloud())
    with pytest.raises(ValueError):
        MottConfig(atoms=[(0.0, 0.0, 2000.0)])


def test_rayleigh_test():
    forced = np.tile([1.0, 0.0, 0.0], (200, 1))
    length, pvalue = rayleigh_test(forced)
    assert length == pytest.approx(1.0)
    assert pvalue < 1e-10
    assert rayleigh_test(np.zeros((0, 3))) == (0.0, 1.0)


def test_binning():
    binning = AngularBinning(n_polar=4, n_azimuth=6)
    directions = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0], [1.0, 0.0, 0.0]])
    counts = bin_directions(directions, binning)
    assert counts.shape == (4, 6)
    assert counts.sum() == 3
    assert counts[3].sum() == 1
    assert counts[0].sum() == 1


def test_perception_of_a_uniform_emitter():
    result = mott_perception(CLOUD_CONFIG)
    assert result['reliable']
    assert result['counts'].sum() == 1000
    assert result['expected'] == pytest.approx(1000 / 48)
    assert 0.0 <= result['pvalue'] <= 1.0
    assert result['occupied_bins'] == 48


def test_per_bin_counts_of_a_large_ensemble():
    result = mott_perception(MottConfig(n_events=100000, seed=5))
    counts = result['counts']
    assert result['expected'] == pytest.approx(100000 / 48)
    assert np.all(np.abs(counts - result['expected']) <= 5 * np.sqrt(result['expected']))


def test_single_event_occupies_one_bin():
    result = mott_perception(MottConfig(n_events=1, seed=2))
    assert result['occupied_bins'] == 1
    assert not result['reliable']


def test_perception_needs_enough_events():
    result = mott_perception(MottConfig(n_events=50, seed=3))
    assert not result['reliable']


def test_directions_do_not_depend_on_atoms():
    plain = sample_directions(MottConfig(n_events=10, seed=9))
    with_cloud = sample_directions(MottConfig(n_events=10, seed=9, cloud=AtomCloud(count=5)))
    np.testing.assert_array_equal(plain, with_cloud)


if __name__ == '__main__':
    test_forced_direction_ionises_the_atoms_on_its_ray()
    test_binning()
