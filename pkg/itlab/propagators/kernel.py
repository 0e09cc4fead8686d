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

"""Brute-force quadrature of the exact free space-time kernel, used as an independent oracle."""

import math
from typing import Sequence

import numpy as np

from itlab.errors import ContractError, RegimeError
from itlab.log import logger
from itlab.numerics import as_position, support_radius, to_momentum
from itlab.propagators.base import BasePropagator, register_propagator
from itlab.schema import POSITION, GaussianSpec, Grid, PhysicalParams, PropagationResult, WaveState
from itlab.settings import BOUNDARY_TOLERANCE, KERNEL_BLOCK_ROWS, MAX_WORKERS
from itlab.states import check_hbar, gaussian_superposition
from itlab.utils.parallel_executor import parallel_exec
from itlab.utils.utils import next_power_of_two


def kernel_phase_budget(s: WaveState, t: float, params: PhysicalParams) -> float:
    """Largest phase advance of kernel times input between neighbouring quadrature nodes.

    Must stay below 2 pi: the kernel contributes mu |x - x'| dx / (hbar t), the input its momentum reach P dx / hbar.
    """
    grid = s.grid
    reach_x = support_radius(s)
    reach_p = support_radius(to_momentum(s))
    span = max(abs(grid.x_min), abs(grid.x_max - grid.dx)) + reach_x
    return params.mass * span * grid.dx / (params.hbar * abs(t)) + reach_p * grid.dx / params.hbar


def _rows(x_out: np.ndarray, x_in: np.ndarray, amplitudes: np.ndarray, coefficient: float) -> np.ndarray:
    # fixed summation order per output point
    phases = np.exp(1j * coefficient * (x_out[:, None] - x_in[None, :])**2)
    return phases @ amplitudes


def propagate_kernel(s: WaveState, t: float, params: PhysicalParams) -> PropagationResult:
    if t == 0:
        raise ContractError(code='SingularKernel', message='The free kernel is singular at t = 0')
    check_hbar(s.grid, params)
    position = as_position(s)
    grid = position.grid
    mass, hbar = params.mass, params.hbar

    budget = kernel_phase_budget(position, t, params)
    if budget > 2 * math.pi:
        required = next_power_of_two(math.ceil(grid.n * budget / (2 * math.pi)))
        raise RegimeError(code='UnresolvedKernel',
                          message=f'The kernel oscillation is unresolved (phase step {budget:.3g} > 2 pi); '
                          f'use at least n={required} points on [{grid.x_min}, {grid.x_max}] or a larger t',
                          extra={
                              'phase_step': budget,
                              'required_points': required
                          })
    if budget > math.pi:
        logger.warning(f'Kernel quadrature close to its aliasing limit (phase step {budget:.3g})')

    x = grid.x
    coefficient = mass / (2 * hbar * t)
    prefactor = np.sqrt(mass / (2j * math.pi * hbar * t)) * grid.dx
    weighted = position.amplitudes * prefactor
    blocks = [{
        'x_out': x[start:start + KERNEL_BLOCK_ROWS],
        'x_in': x,
        'amplitudes': weighted,
        'coefficient': coefficient
    } for start in range(0, grid.n, KERNEL_BLOCK_ROWS)]
    rows = parallel_exec(_rows, blocks, max_workers=MAX_WORKERS)
    amplitudes = np.concatenate(rows)
    state = WaveState(grid=grid, amplitudes=amplitudes, representation=POSITION, t=s.t + t)
    return PropagationResult(state=state, method='kernel', t=s.t + t)


@register_propagator('kernel')
class KernelPropagator(BasePropagator):

    def propagate(self,
                  specs: Sequence[GaussianSpec],
                  t: float,
                  grid: Grid,
                  params: PhysicalParams,
                  tol: float = BOUNDARY_TOLERANCE) -> PropagationResult:
        return propagate_kernel(gaussian_superposition(specs, grid, tol), t, params)
