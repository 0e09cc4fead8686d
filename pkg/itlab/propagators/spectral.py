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

"""Exact free evolution by a phase multiplication in the momentum representation."""

import math
from typing import Sequence

import numpy as np

from itlab.errors import RegimeError
from itlab.numerics import as_position, check_boundary, to_momentum, to_position
from itlab.propagators.base import BasePropagator, register_propagator
from itlab.schema import GaussianSpec, Grid, PhysicalParams, PropagationResult, WaveState
from itlab.settings import BOUNDARY_TOLERANCE
from itlab.states import (check_hbar, gaussian_superposition, projected_centroid, projected_variance, support_pieces,
                          tail_reach)


def check_projected_support(s: WaveState, t: float, params: PhysicalParams, tol: float = BOUNDARY_TOLERANCE):
    """Refuse when a freely moving piece of s would reach a grid edge at time 0 or t.

    Pieces separated by amplitude below tol move independently and are checked one by one. Each piece's
    centroid plus or minus its tail reach is convex in time, so the two end points bound every time between.
    """
    grid = s.grid
    check_boundary(s, tol=tol, what='initial state')
    for piece in support_pieces(s, tol):
        for when in sorted({0.0, t}):
            variance = projected_variance(piece, when, params)
            centroid = projected_centroid(piece, when, params)
            reach = tail_reach(variance, tol)
            low, high = centroid - reach, centroid + reach
            if low < grid.x_min or high > grid.x_max - grid.dx:
                required = max(abs(low), abs(high))
                raise RegimeError(code='PacketEscape',
                                  message=f'At t={when} a piece of the state spans [{low:.6g}, {high:.6g}], outside the '
                                  f'grid [{grid.x_min}, {grid.x_max}]; a symmetric grid of half-width >= {required:.6g} '
                                  'is needed',
                                  extra={
                                      'centroid': centroid,
                                      'width': math.sqrt(max(variance, 0.0)),
                                      'required_half_width': required
                                  })


def propagate_spectral(s: WaveState,
                       t: float,
                       params: PhysicalParams,
                       check: bool = True,
                       tol: float = BOUNDARY_TOLERANCE) -> PropagationResult:
    """Evolve s freely by t (negative t runs backwards); the result is in the position representation."""
    check_hbar(s.grid, params)
    position = as_position(s)
    if check:
        check_projected_support(position, t, params, tol)
    momentum = to_momentum(position)
    phase = np.exp(-1j * momentum.lattice**2 * t / (2 * params.mass * params.hbar))
    evolved = to_position(momentum.evolve(momentum.amplitudes * phase))
    return PropagationResult(state=evolved.evolve(evolved.amplitudes, t=s.t + t), method='spectral', t=s.t + t)


@register_propagator('spectral')
class SpectralPropagator(BasePropagator):

    def propagate(self,
                  specs: Sequence[GaussianSpec],
                  t: float,
                  grid: Grid,
                  params: PhysicalParams,
                  tol: float = BOUNDARY_TOLERANCE) -> PropagationResult:
        return propagate_spectral(gaussian_superposition(specs, grid, tol), t, params, tol=tol)
