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

import cmath
import math
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy import ndimage

from itlab.errors import ContractError, RegimeError
from itlab.numerics import as_momentum, as_position, check_boundary, norm, normalise, to_momentum, to_position
from itlab.schema import POSITION, GaussianSpec, Grid, PhysicalParams, RealField, WaveState
from itlab.settings import BOUNDARY_TOLERANCE, MAX_GRID_POINTS, NORM_TOLERANCE
from itlab.utils.utils import next_power_of_two


def check_hbar(grid: Grid, params: PhysicalParams):
    if not math.isclose(grid.hbar, params.hbar, rel_tol=1e-15):
        raise ContractError(code='HbarMismatch',
                            message=f'The grid uses hbar={grid.hbar} but the physical parameters use {params.hbar}')


def gaussian(spec: GaussianSpec, grid: Grid, tol: float = BOUNDARY_TOLERANCE) -> WaveState:
    x = grid.x
    sigma = spec.width
    amplitudes = ((math.pi * sigma**2)**-0.25 * np.exp(-(x - spec.center)**2 / (2 * sigma**2)) *
                  np.exp(1j * spec.momentum * x / grid.hbar))
    state = WaveState(grid=grid, amplitudes=amplitudes, representation=POSITION, t=0.0)
    check_boundary(state, tol=tol, what='Gaussian packet')
    check_boundary(to_momentum(state), tol=tol, what='Gaussian packet')
    return normalise(state)


def superpose(terms: Sequence[Tuple[complex, WaveState]]) -> WaveState:
    if not terms:
        raise ContractError(code='EmptySuperposition', message='superpose needs at least one term')
    first = terms[0][1]
    amplitudes = np.zeros(first.grid.n, dtype=np.complex128)
    for weight, state in terms:
        if state.grid != first.grid:
            raise ContractError(code='GridMismatch', message='All terms of a superposition must share one grid')
        if state.representation != first.representation or state.t != first.t:
            raise ContractError(code='WrongRepresentation',
                                message='All terms must share the representation and the time')
        amplitudes += complex(weight) * state.amplitudes
    return normalise(first.evolve(amplitudes))


def gaussian_superposition(specs: Sequence[GaussianSpec], grid: Grid, tol: float = BOUNDARY_TOLERANCE) -> WaveState:
    return superpose([(spec.weight, gaussian(spec, grid, tol)) for spec in specs])


def _moments(lattice: np.ndarray, amplitudes: np.ndarray, spacing: float) -> Tuple[float, float]:
    weights = np.abs(amplitudes)**2 * spacing
    mean = float(np.sum(lattice * weights))
    var = float(np.sum((lattice - mean)**2 * weights))
    return mean, var


def observables(s: WaveState, tol: float = NORM_TOLERANCE) -> Dict[str, float]:
    value = norm(s)
    if abs(value - 1.0) > tol:
        raise ContractError(code='Unnormalised', message=f'observables needs a normalised state, got norm {value!r}')
    position = as_position(s)
    momentum = as_momentum(s)
    mean_x, var_x = _moments(position.lattice, position.amplitudes, position.spacing)
    mean_p, var_p = _moments(momentum.lattice, momentum.amplitudes, momentum.spacing)
    return {'mean_x': mean_x, 'var_x': var_x, 'mean_p': mean_p, 'var_p': var_p}


def density(s: WaveState) -> RealField:
    return RealField(lattice=s.lattice,
                     values=np.abs(s.amplitudes)**2,
                     representation=s.representation,
                     t=s.t,
                     grid=s.grid)


def gaussian_overlap(a: GaussianSpec, b: GaussianSpec, hbar: float = 1.0) -> complex:
    """Closed-form <g_a|g_b> of two unit-norm packets with a common width (weights not included)."""
    if not math.isclose(a.width, b.width, rel_tol=1e-12):
        raise ContractError(code='MixedWidths', message='gaussian_overlap needs packets of equal width')
    sigma = a.width
    k = (b.momentum - a.momentum) / hbar
    mid = (a.center + b.center) / 2
    return (math.exp(-(b.center - a.center)**2 / (4 * sigma**2)) * math.exp(-k**2 * sigma**2 / 4) *
            cmath.exp(1j * k * mid))


def superposition_norm_squared(specs: Sequence[GaussianSpec], hbar: float = 1.0) -> float:
    total = 0j
    for a in specs:
        for b in specs:
            total += a.weight.conjugate() * b.weight * gaussian_overlap(a, b, hbar)
    return float(total.real)


def projected_variance(s: WaveState, t: float, params: PhysicalParams) -> float:
    """Exact free-motion position variance at time t from the moments of s."""
    check_hbar(s.grid, params)
    position = as_position(s)
    momentum = as_momentum(s)
    x = position.lattice
    weights = np.abs(position.amplitudes)**2 * position.spacing
    total = weights.sum()
    mean_x = np.sum(x * weights) / total
    var_x = np.sum((x - mean_x)**2 * weights) / total
    mean_p, var_p = _moments(momentum.lattice, momentum.amplitudes / math.sqrt(total), momentum.spacing)
    p_psi = to_position(momentum.evolve(momentum.lattice * momentum.amplitudes)).amplitudes
    xp = np.sum(np.conj(x * position.amplitudes) * p_psi) * position.spacing / total
    covariance = 2 * xp.real - 2 * mean_x * mean_p
    tau = t / params.mass
    return float(var_x + tau * covariance + tau**2 * var_p)


def projected_centroid(s: WaveState, t: float, params: PhysicalParams) -> float:
    obs = observables(normalise(s), tol=math.inf)
    return obs['mean_x'] + obs['mean_p'] * t / params.mass


def tail_reach(variance: float, tol: float = BOUNDARY_TOLERANCE) -> float:
    """Distance from the centroid beyond which a Gaussian amplitude of this density variance drops below tol."""
    return 2.0 * math.sqrt(max(variance, 0.0) * math.log(1.0 / tol))


def support_pieces(s: WaveState, tol: float = BOUNDARY_TOLERANCE) -> List[WaveState]:
    """Split s at the runs where |psi| <= tol into separately moving pieces (unnormalised, position form)."""
    position = as_position(s)
    labels, count = ndimage.label(np.abs(position.amplitudes) > tol)
    return [position.evolve(np.where(labels == k, position.amplitudes, 0)) for k in range(1, count + 1)]


def fit_grid(specs: Sequence[GaussianSpec],
             t: float,
             params: PhysicalParams,
             tol: float = BOUNDARY_TOLERANCE,
             margin: float = 1.1,
             n_min: int = 256) -> Grid:
    """Smallest symmetric power-of-two grid holding every packet at times 0 and t and resolving its momenta."""
    if not specs:
        raise ContractError(code='EmptySuperposition', message='fit_grid needs at least one packet')
    hbar, mass = params.hbar, params.mass
    half_width = 0.0
    p_reach = 0.0
    for spec in specs:
        sigma = spec.width
        var_0 = sigma**2 / 2
        var_t = (sigma**2 + (hbar * t / (mass * sigma))**2) / 2
        centroid = spec.center + spec.momentum * t / mass
        half_width = max(half_width, abs(spec.center) + tail_reach(var_0, tol), abs(centroid) + tail_reach(var_t, tol))
        p_reach = max(p_reach, abs(spec.momentum) + tail_reach(hbar**2 / (2 * sigma**2), tol))
    half_width *= margin
    dx_max = math.pi * hbar / (margin * p_reach)
    n = max(next_power_of_two(math.ceil(2 * half_width / dx_max)), n_min)
    if n > MAX_GRID_POINTS:
        raise RegimeError(code='GridTooLarge',
                          message=f'Holding the packets at t={t} needs {n} grid points, '
                          f'more than the limit of {MAX_GRID_POINTS} (ITLAB_MAX_GRID_POINTS)',
                          extra={
                              'required_points': n,
                              'half_width': half_width
                          })
    return Grid(n=n, x_min=-half_width, x_max=half_width, hbar=hbar)
