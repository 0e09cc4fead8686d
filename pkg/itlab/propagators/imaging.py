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

"""The imaging map: the late-time position wavefunction read off the initial momentum wavefunction.

    psi(x, t) ~ exp(-i pi/4) (mu/t)^(1/2) exp(i mu (x - X)^2 / (2 hbar t)) psi~(mu (x - X) / t, 0)

for a source localised near X. Along x = X + p t / mu the density obeys |psi(x, t)|^2 dx = |psi~(p, 0)|^2 dp.
"""

import cmath
import math
from typing import List, Optional, Sequence

import numpy as np

from itlab.errors import ContractError
from itlab.log import logger
from itlab.numerics import as_position, momentum_amplitudes_at, to_momentum
from itlab.propagators.base import BasePropagator, register_propagator
from itlab.schema import MOMENTUM, POSITION, GaussianSpec, Grid, PhysicalParams, PropagationResult, WaveState
from itlab.settings import BOUNDARY_TOLERANCE, IT_REGIME_THRESHOLD
from itlab.states import check_hbar, fit_grid, gaussian, observables, superposition_norm_squared

PHASE = cmath.exp(-1j * math.pi / 4)  # principal branch of i^(-1/2)


def regime_ratio(source: WaveState, t: float, params: PhysicalParams) -> float:
    """hbar t / (mu sigma^2) with sigma^2 = 2 Var x of the source."""
    var_x = observables(source, tol=math.inf)['var_x']
    return params.hbar * t / (params.mass * 2 * var_x)


def _regime_warnings(source: WaveState, t: float, params: PhysicalParams) -> List[str]:
    ratio = regime_ratio(source, t, params)
    if ratio < IT_REGIME_THRESHOLD:
        message = (f'hbar t / (mu sigma^2) = {ratio:.3g} is below the imaging regime threshold '
                   f'{IT_REGIME_THRESHOLD:.3g}; the imaging map is only asymptotic')
        logger.warning(message)
        return [message]
    return []


def _image(source: WaveState, t: float, grid: Grid, params: PhysicalParams, origin: float) -> np.ndarray:
    mass, hbar = params.mass, params.hbar
    u = grid.x - origin
    psi_tilde = momentum_amplitudes_at(source, mass * (grid.x_min - origin) / t, mass * grid.dx / t, grid.n)
    return PHASE * math.sqrt(mass / t) * np.exp(1j * mass * u**2 / (2 * hbar * t)) * psi_tilde


def _check_inputs(s0_momentum: WaveState, t: float, grid: Grid, params: PhysicalParams):
    if s0_momentum.representation != MOMENTUM:
        raise ContractError(code='WrongRepresentation',
                            message='The imaging map takes the t = 0 momentum wavefunction as input')
    if t <= 0:
        raise ContractError(code='NonPositiveTime', message=f'The imaging map needs t > 0, got t={t}')
    check_hbar(grid, params)
    check_hbar(s0_momentum.grid, params)


def propagate_it(s0_momentum: WaveState,
                 t: float,
                 grid: Grid,
                 params: PhysicalParams,
                 origin: float = 0.0) -> PropagationResult:
    """Image of the momentum wavefunction of a source at `origin` onto the target grid at time t."""
    _check_inputs(s0_momentum, t, grid, params)
    source = as_position(s0_momentum)
    warnings = _regime_warnings(source, t, params)
    state = WaveState(grid=grid, amplitudes=_image(source, t, grid, params, origin), representation=POSITION, t=t)
    return PropagationResult(state=state, method='it', t=t, warnings=tuple(warnings))


def propagate_it_sources(s0_momentum: WaveState,
                         origins: Sequence[float],
                         weights: Sequence[complex],
                         t: float,
                         grid: Grid,
                         params: PhysicalParams,
                         norm_squared: Optional[float] = None) -> PropagationResult:
    """Weighted sum of the images of one source shape placed at several origins.

    `norm_squared` is the squared norm of the unnormalised initial superposition; it defaults to the sum of
    |weight|^2, i.e. sources without mutual overlap.
    """
    _check_inputs(s0_momentum, t, grid, params)
    if len(origins) != len(weights) or not origins:
        raise ContractError(code='BadSources', message='Give one weight per origin and at least one origin')
    source = as_position(s0_momentum)
    warnings = _regime_warnings(source, t, params)
    amplitudes = np.zeros(grid.n, dtype=np.complex128)
    for origin, weight in zip(origins, weights):
        amplitudes += complex(weight) * _image(source, t, grid, params, origin)
    if norm_squared is None:
        norm_squared = float(sum(abs(complex(w))**2 for w in weights))
    state = WaveState(grid=grid,
                      amplitudes=amplitudes / math.sqrt(norm_squared),
                      representation=POSITION,
                      t=t)
    return PropagationResult(state=state, method='it', t=t, warnings=tuple(warnings))


def centred_source(spec: GaussianSpec, params: PhysicalParams, tol: float = BOUNDARY_TOLERANCE) -> WaveState:
    """Momentum wavefunction of `spec` moved to the origin, on a grid fitted to t = 0."""
    centred = GaussianSpec(width=spec.width, momentum=spec.momentum)
    source_grid = fit_grid([centred], 0.0, params, tol=tol)
    return to_momentum(gaussian(centred, source_grid, tol))


@register_propagator('it')
class ImagingPropagator(BasePropagator):

    def propagate(self,
                  specs: Sequence[GaussianSpec],
                  t: float,
                  grid: Grid,
                  params: PhysicalParams,
                  tol: float = BOUNDARY_TOLERANCE) -> PropagationResult:
        if not specs:
            raise ContractError(code='EmptySuperposition', message='At least one packet is required')
        norm_squared = superposition_norm_squared(specs, params.hbar)
        amplitudes = np.zeros(grid.n, dtype=np.complex128)
        warnings = []
        for spec in specs:
            result = propagate_it(centred_source(spec, params, tol), t, grid, params, origin=spec.center)
            # psi(x) = exp(i p0 X / hbar) * centred(x - X)
            shift = cmath.exp(1j * spec.momentum * spec.center / params.hbar)
            amplitudes += spec.weight * shift * result.state.amplitudes
            warnings.extend(w for w in result.warnings if w not in warnings)
        state = WaveState(grid=grid,
                          amplitudes=amplitudes / math.sqrt(norm_squared),
                          representation=POSITION,
                          t=t)
        return PropagationResult(state=state, method='it', t=t, warnings=tuple(warnings))
