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

"""Regularised EPR pairs of equal-mass particles.

The sharp state with x_1 - x_2 = -x_0 and p_1 + p_2 = 0 is not normalisable. It is replaced by a narrow
Gaussian of width s_r in r = x_1 - x_2 centred at -x_0, times a broad Gaussian of width s_cm_inv in
R = (x_1 + x_2) / 2. Both factors are kept as one-dimensional states; x_1 = R + r/2, x_2 = R - r/2 and
p_1 = P/2 + p_r, p_2 = P/2 - p_r, with unit Jacobians.
"""

from typing import Dict, Tuple

import numpy as np

from itlab.ensemble import sample_density
from itlab.errors import ContractError, RegimeError
from itlab.numerics import position_amplitudes_at, support_radius, to_momentum
from itlab.schema import EprState, GaussianSpec, Grid, PhysicalParams
from itlab.states import check_hbar, density, gaussian

MIN_PAIRS = 100
# independent sampling streams per seed
STREAMS = {'first_x': 10, 'second_x': 11, 'first_p': 12, 'second_p': 13}


def _check_joint_support(half_extent: float, grid: Grid):
    if -half_extent < grid.x_min or half_extent > grid.x_max - grid.dx:
        raise RegimeError(code='PairOffGrid',
                          message=f'The pair extends to |x| = {half_extent:.6g}, outside the grid '
                          f'[{grid.x_min}, {grid.x_max}]; enlarge the grid',
                          extra={'required_half_width': half_extent})


def epr_build(x0: float, s_r: float, s_cm_inv: float, grid: Grid, params: PhysicalParams) -> EprState:
    if not 0 < s_r < s_cm_inv:
        raise ContractError(code='WidthHierarchy',
                            message=f'Need 0 < s_r < s_cm_inv for a sharp relative position, got {s_r}, {s_cm_inv}')
    check_hbar(grid, params)
    cm = gaussian(GaussianSpec(center=0.0, width=s_cm_inv), grid)
    relative_grid = Grid(n=2 * grid.n, x_min=-grid.length, x_max=grid.length, hbar=grid.hbar)
    rel = gaussian(GaussianSpec(center=-x0, width=s_r), relative_grid)
    _check_joint_support(support_radius(cm) + support_radius(rel) / 2, grid)
    return EprState(x0=x0, s_r=s_r, s_cm_inv=s_cm_inv, params=params, coordinates='jacobi', first=cm, second=rel)


def epr_product(spec_1: GaussianSpec, spec_2: GaussianSpec, grid: Grid, params: PhysicalParams) -> EprState:
    """Unentangled control: independent packets for particle 1 and particle 2."""
    check_hbar(grid, params)
    first, second = gaussian(spec_1, grid), gaussian(spec_2, grid)
    return EprState(x0=spec_2.center - spec_1.center, params=params, coordinates='particle', first=first, second=second)


def joint_amplitudes(state: EprState) -> Tuple[np.ndarray, np.ndarray]:
    """Psi(x_1, x_2) on the particle grid, indexed [x_1, x_2]."""
    grid = state.first.grid
    if state.coordinates == 'particle':
        return grid.x, np.outer(state.first.amplitudes, state.second.amplitudes)
    n, dx = grid.n, grid.dx
    # R = (x_j + x_k) / 2 and r = x_j - x_k lie on uniform lattices indexed by j + k and j - k
    cm = position_amplitudes_at(state.first, grid.x_min, dx / 2, 2 * n - 1)
    rel = position_amplitudes_at(state.second, -(n - 1) * dx, dx, 2 * n - 1)
    j, k = np.indices((n, n))
    return grid.x, cm[j + k] * rel[j - k + n - 1]


def _to_particles(state: EprState, a: np.ndarray, b: np.ndarray, momentum: bool) -> Tuple[np.ndarray, np.ndarray]:
    if state.coordinates == 'particle':
        return a, b
    if momentum:
        return a / 2 + b, a / 2 - b
    return a + b / 2, a - b / 2


def sample_pairs(state: EprState, n_pairs: int, seed: int) -> Dict[str, np.ndarray]:
    if n_pairs < MIN_PAIRS:
        raise ContractError(code='TooFewPairs', message=f'Need at least {MIN_PAIRS} pairs, got {n_pairs}')
    x_a = sample_density(density(state.first), n_pairs, seed, stream=STREAMS['first_x'])
    x_b = sample_density(density(state.second), n_pairs, seed, stream=STREAMS['second_x'])
    p_a = sample_density(density(to_momentum(state.first)), n_pairs, seed, stream=STREAMS['first_p'])
    p_b = sample_density(density(to_momentum(state.second)), n_pairs, seed, stream=STREAMS['second_p'])
    x1, x2 = _to_particles(state, x_a, x_b, momentum=False)
    p1, p2 = _to_particles(state, p_a, p_b, momentum=True)
    return {'x1': x1, 'x2': x2, 'p1': p1, 'p2': p2}


def epr_correlations(s: EprState, n_pairs: int, seed: int) -> Dict[str, object]:
    pairs = sample_pairs(s, n_pairs, seed)
    offsets = pairs['x2'] - pairs['x1']
    return {
        'n_pairs': n_pairs,
        'corr_p': float(np.corrcoef(pairs['p1'], pairs['p2'])[0, 1]),
        'corr_x': float(np.corrcoef(pairs['x1'], pairs['x2'])[0, 1]),
        'mean_offset': float(offsets.mean()),
        'var_offset': float(offsets.var()),
        'var_total_momentum': float((pairs['p1'] + pairs['p2']).var()),
        'offsets': offsets,
        'pairs': pairs,
    }


def epr_it_consistency(s: EprState, t1: float, t2: float, n_pairs: int, seed: int) -> Dict[str, object]:
    """Distribution of x0 + (p1 t1 + p2 t2) / mu over sampled momentum pairs.

    Detector 1 sits on the half-line x > 0 and reads x_1 = p_1 t_1 / mu; detector 2 reads x_2 = -p_2 t_2 / mu on
    the mirrored half-line. The residual vanishes only for arrival times obeying t_1 - t_2 = -mu x0 / p_1 when
    p_2 = -p_1, so at equal times it concentrates at x0 and its scale relative to the detected positions,
    x0 / |x_1|, is what shrinks with t.
    """
    pairs = sample_pairs(s, n_pairs, seed)
    mass = s.params.mass
    residual = s.x0 + (pairs['p1'] * t1 + pairs['p2'] * t2) / mass
    detected = np.abs(pairs['p1']) * t1 / mass
    relative = np.abs(residual) / np.where(detected > 0, detected, np.inf)
    q25, median, q75 = np.percentile(residual, [25, 50, 75])
    return {
        'residual': residual,
        'median': float(median),
        'iqr': float(q75 - q25),
        'mean': float(residual.mean()),
        'std': float(residual.std()),
        'median_relative': float(np.median(relative)),
    }
