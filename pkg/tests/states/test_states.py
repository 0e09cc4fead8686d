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

from itlab.errors import ContractError, RegimeError
from itlab.numerics import inner, norm
from itlab.propagators import propagate_spectral
from itlab.schema import GaussianSpec, Grid, PhysicalParams, WaveState
from itlab.states import (check_hbar, density, fit_grid, gaussian, gaussian_overlap, gaussian_superposition,
                          observables, projected_centroid, projected_variance, superpose, superposition_norm_squared,
                          support_pieces)

GRID = Grid(n=1024, x_min=-32.0, x_max=32.0)


@pytest.mark.parametrize('spec', [GaussianSpec(), GaussianSpec(center=2.5, width=0.8, momentum=-1.2)])
def test_gaussian_moments(spec):
    obs = observables(gaussian(spec, GRID))
    assert obs['mean_x'] == pytest.approx(spec.center, abs=1e-12)
    assert obs['var_x'] == pytest.approx(spec.width**2 / 2, rel=1e-12)
    assert obs['mean_p'] == pytest.approx(spec.momentum, abs=1e-12)
    assert obs['var_p'] == pytest.approx(1 / (2 * spec.width**2), rel=1e-12)


def test_observables_need_normalised_state():
    s = gaussian(GaussianSpec(), GRID)
    with pytest.raises(ContractError):
        observables(s.evolve(2 * s.amplitudes))


def test_density_integrates_to_one():
    field = density(gaussian(GaussianSpec(center=1.0), GRID))
    assert field.representation == 'position'
    assert field.integral() == pytest.approx(1.0, abs=1e-13)
    assert np.all(field.values >= 0)


@pytest.mark.parametrize('a, b', [
    (GaussianSpec(center=-1.0), GaussianSpec(center=1.5)),
    (GaussianSpec(center=0.5, momentum=1.0), GaussianSpec(center=-0.5, momentum=-0.5)),
])
def test_gaussian_overlap_closed_form(a, b):
    numeric = inner(gaussian(a, GRID), gaussian(b, GRID))
    assert gaussian_overlap(a, b) == pytest.approx(numeric, abs=1e-12)


def test_gaussian_overlap_needs_equal_widths():
    with pytest.raises(ContractError):
        gaussian_overlap(GaussianSpec(width=1.0), GaussianSpec(width=2.0))


def test_superposition_norm():
    specs = [GaussianSpec(center=-1.0, weight=1.0), GaussianSpec(center=1.0, weight=complex(0.5, 0.5))]
    raw = sum(spec.weight * gaussian(spec, GRID).amplitudes for spec in specs)
    assert superposition_norm_squared(specs) == pytest.approx(float(np.sum(np.abs(raw)**2) * GRID.dx), rel=1e-12)
    s = gaussian_superposition(specs, GRID)
    assert norm(s) == pytest.approx(1.0, abs=1e-13)


def test_superpose_rejects_mixed_grids():
    other = Grid(n=512, x_min=-32.0, x_max=32.0)
    with pytest.raises(ContractError):
        superpose([(1.0, gaussian(GaussianSpec(), GRID)), (1.0, gaussian(GaussianSpec(), other))])
    with pytest.raises(ContractError):
        superpose([])


def test_hbar_must_match():
    with pytest.raises(ContractError):
        check_hbar(GRID, PhysicalParams(hbar=0.5))


@pytest.mark.parametrize('t', [2.0, 10.0])
def test_projected_variance_matches_propagation(t):
    params = PhysicalParams()
    specs = [GaussianSpec(center=-2.0, momentum=0.5), GaussianSpec(center=2.0, weight=0.7)]
    grid = Grid(n=4096, x_min=-128.0, x_max=128.0)
    s = gaussian_superposition(specs, grid)
    evolved = observables(propagate_spectral(s, t, params).state)
    assert projected_variance(s, t, params) == pytest.approx(evolved['var_x'], rel=1e-9)
    assert projected_centroid(s, t, params) == pytest.approx(evolved['mean_x'], abs=1e-9)


def test_projected_variance_of_single_packet():
    params = PhysicalParams(mass=2.0)
    spec = GaussianSpec(width=1.5)
    t = 7.0
    s = gaussian(spec, fit_grid([spec], t, params))
    expected = spec.width**2 / 2 + (t / params.mass)**2 / (2 * spec.width**2)
    assert projected_variance(s, t, params) == pytest.approx(expected, rel=1e-10)


def test_fit_grid():
    params = PhysicalParams()
    spec = GaussianSpec(center=3.0, momentum=1.0)
    grid = fit_grid([spec], 20.0, params)
    assert grid.x_min == -grid.x_max
    assert grid.n & (grid.n - 1) == 0
    assert grid.x_max > spec.center + spec.momentum * 20.0
    propagate_spectral(gaussian(spec, grid), 20.0, params)


def test_fit_grid_refuses_huge_grids():
    with pytest.raises(RegimeError) as e:
        fit_grid([GaussianSpec(width=0.01)], 1e9, PhysicalParams())
    assert e.value.code == 'GridTooLarge'
    assert e.value.extra['required_points'] > 2**20


def test_distant_packets_are_orthogonal():
    a, b = GaussianSpec(center=-20.0), GaussianSpec(center=20.0)
    grid = Grid(n=1024, x_min=-40.0, x_max=40.0)
    assert abs(inner(gaussian(a, grid), gaussian(b, grid))) < 1e-12
    assert abs(gaussian_overlap(a, b)) < 1e-12


def test_support_pieces():
    pair = gaussian_superposition([GaussianSpec(center=-10.0), GaussianSpec(center=10.0)], GRID)
    pieces = support_pieces(pair)
    assert len(pieces) == 2
    assert [norm(piece) for piece in pieces] == pytest.approx([0.5, 0.5], abs=1e-9)
    assert observables(pieces[0].evolve(pieces[0].amplitudes * 2**0.5))['mean_x'] == pytest.approx(-10.0, abs=1e-9)
    # overlapping packets move as one piece
    assert len(support_pieces(gaussian_superposition([GaussianSpec(center=-1.0), GaussianSpec(center=1.0)], GRID))) == 1


def test_gaussian_boundary_tolerance():
    spec = GaussianSpec()
    grid = fit_grid([spec], 0.0, PhysicalParams(), tol=1e-8)
    assert grid.x_max < 7.0
    with pytest.raises(RegimeError) as e:
        gaussian(spec, grid)
    assert e.value.code == 'GridEdge'
    assert norm(gaussian(spec, grid, tol=1e-8)) == pytest.approx(1.0, abs=1e-12)
    assert norm(gaussian_superposition([spec], grid, tol=1e-8)) == pytest.approx(1.0, abs=1e-12)


def test_wave_state_shape_is_checked():
    with pytest.raises(ValueError):
        WaveState(grid=GRID, amplitudes=np.zeros(10))


if __name__ == '__main__':
    test_gaussian_moments(GaussianSpec())
    test_projected_variance_matches_propagation(10.0)
