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

from itlab.errors import ContractError, RegimeError
from itlab.numerics import (check_boundary, inner, make_grid, momentum_amplitudes_at, norm, normalise,
                            position_amplitudes_at, support_radius, to_momentum, to_position)
from itlab.schema import MOMENTUM, GaussianSpec, Grid, WaveState
from itlab.states import gaussian


def gaussian_momentum(p, spec: GaussianSpec, hbar: float = 1.0):
    sigma = spec.width
    k = (p - spec.momentum) / hbar
    return ((sigma**2 / (math.pi * hbar**2))**0.25 * np.exp(-k**2 * sigma**2 / 2) * np.exp(-1j * k * spec.center))


@pytest.mark.parametrize('spec', [
    GaussianSpec(),
    GaussianSpec(center=2.0, width=0.7, momentum=1.5),
    GaussianSpec(center=-3.0, width=1.5, momentum=-2.0),
])
def test_momentum_transform_matches_closed_form(spec):
    grid = Grid(n=512, x_min=-20.0, x_max=20.0)
    momentum = to_momentum(gaussian(spec, grid))
    assert momentum.representation == 'momentum'
    np.testing.assert_allclose(momentum.amplitudes, gaussian_momentum(grid.p, spec), atol=1e-12)


@pytest.mark.parametrize('hbar', [1.0, 0.5])
def test_momentum_transform_with_hbar(hbar):
    grid = Grid(n=1024, x_min=-20.0, x_max=20.0, hbar=hbar)
    spec = GaussianSpec(width=1.0, momentum=1.0)
    momentum = to_momentum(gaussian(spec, grid))
    np.testing.assert_allclose(momentum.amplitudes, gaussian_momentum(grid.p, spec, hbar), atol=1e-12)


def test_transforms_are_unitary():
    grid = Grid(n=256, x_min=-16.0, x_max=16.0)
    a = gaussian(GaussianSpec(center=-1.0, momentum=0.5), grid)
    b = gaussian(GaussianSpec(center=1.5, width=1.3), grid)
    assert inner(to_momentum(a), to_momentum(b)) == pytest.approx(inner(a, b), abs=1e-13)
    back = to_position(to_momentum(a))
    np.testing.assert_allclose(back.amplitudes, a.amplitudes, atol=1e-13)
    assert norm(to_momentum(a)) == pytest.approx(1.0, abs=1e-13)


def test_round_trip_on_a_large_grid():
    grid = Grid(n=2**16, x_min=-256.0, x_max=256.0)
    s = gaussian(GaussianSpec(center=3.0, width=2.0, momentum=-1.0), grid)
    back = to_position(to_momentum(s))
    np.testing.assert_allclose(back.amplitudes, s.amplitudes, atol=1e-12)


def test_momentum_delta_is_a_plane_wave():
    grid = Grid(n=256, x_min=-16.0, x_max=16.0)
    k = grid.n // 2 + 5
    amplitudes = np.zeros(grid.n, dtype=np.complex128)
    amplitudes[k] = 1.0
    position = to_position(WaveState(grid=grid, amplitudes=amplitudes, representation=MOMENTUM))
    expected = grid.dp / math.sqrt(2 * math.pi) * np.exp(1j * grid.p[k] * grid.x)
    np.testing.assert_allclose(position.amplitudes, expected, rtol=1e-10)
    slope = np.diff(np.unwrap(np.angle(position.amplitudes))) / grid.dx
    np.testing.assert_allclose(slope, grid.p[k], rtol=1e-10)


def test_representation_is_checked():
    grid = Grid(n=64, x_min=-8.0, x_max=8.0)
    s = gaussian(GaussianSpec(), grid)
    with pytest.raises(ContractError):
        to_position(s)
    with pytest.raises(ContractError):
        to_momentum(to_momentum(s))
    with pytest.raises(ContractError):
        inner(s, to_momentum(s))


@pytest.mark.parametrize('n, x_min, x_max', [(100, -1.0, 1.0), (64, 1.0, 1.0), (64, 2.0, -2.0), (1, 0.0, 1.0)])
def test_make_grid_rejects_bad_grids(n, x_min, x_max):
    with pytest.raises(ContractError):
        make_grid(n, x_min, x_max)


def test_grid_lattices():
    grid = make_grid(8, -4.0, 4.0)
    np.testing.assert_allclose(grid.x, np.arange(-4.0, 4.0, 1.0))
    assert grid.dp * grid.dx * grid.n == pytest.approx(2 * math.pi)
    assert grid.p[grid.n // 2] == 0.0
    assert grid.p_max == pytest.approx(-grid.p[0])


def test_normalise_zero_state():
    grid = Grid(n=16, x_min=-1.0, x_max=1.0)
    with pytest.raises(ContractError):
        normalise(WaveState(grid=grid, amplitudes=np.zeros(16)))


def test_off_lattice_momentum_evaluation():
    grid = Grid(n=512, x_min=-20.0, x_max=20.0)
    spec = GaussianSpec(center=1.0, momentum=0.3)
    s = gaussian(spec, grid)
    on_lattice = momentum_amplitudes_at(s, grid.p[0], grid.dp, grid.n)
    np.testing.assert_allclose(on_lattice, to_momentum(s).amplitudes, atol=1e-12)
    p = -3.0 + np.arange(97) * 0.0625
    np.testing.assert_allclose(momentum_amplitudes_at(s, -3.0, 0.0625, 97), gaussian_momentum(p, spec), atol=1e-12)


def test_off_lattice_position_evaluation():
    grid = Grid(n=512, x_min=-20.0, x_max=20.0)
    spec = GaussianSpec(center=-2.0, width=1.2, momentum=0.8)
    s = gaussian(spec, grid)
    x = -6.0 + np.arange(200) * 0.04
    expected = ((math.pi * spec.width**2)**-0.25 * np.exp(-(x - spec.center)**2 / (2 * spec.width**2)) *
                np.exp(1j * spec.momentum * x))
    np.testing.assert_allclose(position_amplitudes_at(to_momentum(s), -6.0, 0.04, 200), expected, atol=1e-12)


def test_boundary_is_refused():
    grid = Grid(n=128, x_min=-5.0, x_max=5.0)
    with pytest.raises(RegimeError) as e:
        gaussian(GaussianSpec(), grid)
    assert e.value.code == 'GridEdge'
    assert e.value.exit_code == 3


def test_boundary_warns_when_not_strict():
    grid = Grid(n=128, x_min=-5.0, x_max=5.0)
    s = WaveState(grid=grid, amplitudes=np.exp(-grid.x**2 / 2))
    amplitude = check_boundary(s, strict=False)
    assert amplitude == pytest.approx(math.exp(-12.5))


def test_support_radius():
    grid = Grid(n=512, x_min=-20.0, x_max=20.0)
    s = gaussian(GaussianSpec(center=3.0), grid)
    radius = support_radius(s, tol=1e-6)
    # |psi| / max > 1e-6 for |x - 3| < sqrt(2 ln 1e6) = 5.26
    assert 8.0 < radius < 8.4


if __name__ == '__main__':
    test_momentum_transform_matches_closed_form(GaussianSpec())
    test_transforms_are_unitary()
    test_off_lattice_momentum_evaluation()
