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

"""Closed-form free evolution of equal-width Gaussian superpositions, boosted to finite mean momentum."""

import math
from typing import Sequence

import numpy as np

from itlab.errors import ContractError
from itlab.propagators.base import BasePropagator, register_propagator
from itlab.schema import POSITION, GaussianSpec, Grid, PhysicalParams, PropagationResult, WaveState
from itlab.settings import BOUNDARY_TOLERANCE
from itlab.states import check_hbar, superposition_norm_squared


def _common_width(specs: Sequence[GaussianSpec]) -> float:
    if not specs:
        raise ContractError(code='EmptySuperposition', message='At least one packet is required')
    sigma = specs[0].width
    if any(not math.isclose(spec.width, sigma, rel_tol=1e-12) for spec in specs):
        raise ContractError(code='MixedWidths',
                            message='The closed form needs packets of one common width, '
                            f'got {[spec.width for spec in specs]}')
    return sigma


def gaussian_packet_at(spec: GaussianSpec, t: float, x: np.ndarray, params: PhysicalParams) -> np.ndarray:
    """Unit-norm packet of `spec` evolved to time t, evaluated at x (weight not applied)."""
    sigma, mass, hbar = spec.width, params.mass, params.hbar
    a = sigma**2 + 1j * hbar * t / mass
    xi = x - spec.center - spec.momentum * t / mass
    phase = spec.momentum * x / hbar - spec.momentum**2 * t / (2 * mass * hbar)
    # principal branch of a^(-1/2), continuous in t since Re a > 0
    return (sigma**2 / math.pi)**0.25 / np.sqrt(a) * np.exp(-xi**2 / (2 * a) + 1j * phase)


def propagate_gaussian_analytic(specs: Sequence[GaussianSpec], t: float, grid: Grid,
                                params: PhysicalParams) -> PropagationResult:
    _common_width(specs)
    check_hbar(grid, params)
    x = grid.x
    amplitudes = np.zeros(grid.n, dtype=np.complex128)
    for spec in specs:
        amplitudes += spec.weight * gaussian_packet_at(spec, t, x, params)
    norm_squared = superposition_norm_squared(specs, params.hbar)
    if not norm_squared > 0:
        raise ContractError(code='ZeroNorm', message='The weights cancel to a zero-norm superposition')
    state = WaveState(grid=grid, amplitudes=amplitudes / math.sqrt(norm_squared), representation=POSITION, t=t)
    return PropagationResult(state=state, method='analytic', t=t)


def it_envelope(spec: GaussianSpec, t: float, grid: Grid, params: PhysicalParams) -> np.ndarray:
    """Large-t modulus of a single packet, (sigma^2/pi)^(1/4) (mu/(hbar t))^(1/2) exp(-(mu x sigma/(sqrt2 hbar t))^2)."""
    if t <= 0:
        raise ContractError(code='NonPositiveTime', message=f't={t} must be positive')
    mass, hbar, sigma = params.mass, params.hbar, spec.width
    u = grid.x - spec.center - spec.momentum * t / mass
    return ((sigma**2 / math.pi)**0.25 * math.sqrt(mass / (hbar * t)) *
            np.exp(-(mass * u * sigma / (math.sqrt(2) * hbar * t))**2))


@register_propagator('analytic')
class AnalyticPropagator(BasePropagator):

    def propagate(self,
                  specs: Sequence[GaussianSpec],
                  t: float,
                  grid: Grid,
                  params: PhysicalParams,
                  tol: float = BOUNDARY_TOLERANCE) -> PropagationResult:
        return propagate_gaussian_analytic(specs, t, grid, params)
