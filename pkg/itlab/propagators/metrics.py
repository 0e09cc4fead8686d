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
from typing import Dict, List, Optional, Sequence

import numpy as np

from itlab.errors import ContractError
from itlab.ensemble import rng_stream
from itlab.numerics import as_position, momentum_amplitudes_at
from itlab.propagators.imaging import centred_source, propagate_it
from itlab.propagators.spectral import propagate_spectral
from itlab.schema import GaussianSpec, PhysicalParams, WaveState
from itlab.settings import MAX_WORKERS
from itlab.states import fit_grid, gaussian, observables, projected_variance
from itlab.utils.parallel_executor import parallel_exec


def it_error(exact: WaveState, approx: WaveState) -> Dict[str, float]:
    if exact.grid != approx.grid:
        raise ContractError(code='GridMismatch', message='Error metrics need both states on one grid')
    if exact.representation != approx.representation:
        raise ContractError(code='WrongRepresentation', message='Error metrics need one common representation')
    spacing = exact.spacing
    a, b = exact.amplitudes, approx.amplitudes
    reference = math.sqrt(np.sum(np.abs(a)**2) * spacing)
    difference = math.sqrt(np.sum(np.abs(a - b)**2) * spacing)
    return {
        'l2_rel': difference / reference if reference > 0 else math.inf,
        'linf': float(np.max(np.abs(a - b))),
        'density_l1': float(np.sum(np.abs(np.abs(a)**2 - np.abs(b)**2)) * spacing),
    }


def centroid_track(s: WaveState, times: Sequence[float], params: PhysicalParams) -> Dict[str, object]:
    """Spectral centroid <x>(t) against the free-motion line <x>(0) + <p>(0) t / mu."""
    times = np.asarray(times, dtype=float)
    start = observables(s)
    means = np.array([observables(propagate_spectral(s, t, params).state)['mean_x'] for t in times])
    predicted = start['mean_x'] + start['mean_p'] * times / params.mass
    slope = float(np.polyfit(times, means, 1)[0]) if times.size > 1 else math.nan
    return {
        'times': times,
        'mean_x': means,
        'slope': slope,
        'expected_slope': start['mean_p'] / params.mass,
        'residual': float(np.max(np.abs(means - predicted))) if times.size else 0.0,
    }


def convergence_row(spec: GaussianSpec, t: float, params: PhysicalParams) -> Dict[str, float]:
    """Spectral against imaging propagation of one packet at time t, on a grid fitted to t."""
    grid = fit_grid([spec], t, params)
    exact = propagate_spectral(gaussian(spec, grid), t, params).state
    approx = propagate_it(centred_source(spec, params), t, grid, params, origin=spec.center).state
    if spec.momentum != 0 or spec.center != 0:
        phase = np.exp(1j * spec.momentum * spec.center / params.hbar)
        approx = approx.evolve(approx.amplitudes * phase)
    row = {'t': t, 'scaled_t': params.hbar * t / (params.mass * spec.width**2), 'n': grid.n}
    row.update(it_error(as_position(exact), approx))
    return row


def it_convergence(spec: GaussianSpec, times: Sequence[float], params: PhysicalParams) -> List[Dict[str, float]]:
    kwargs = [{'spec': spec, 't': float(t), 'params': params} for t in times]
    return parallel_exec(convergence_row, kwargs, max_workers=MAX_WORKERS)


def classicality_onset(spec: GaussianSpec,
                       params: PhysicalParams,
                       tolerance: float = 1e-2,
                       scaled_times: Optional[Sequence[float]] = None) -> Dict[str, object]:
    """Earliest sampled time at which the imaging density matches the exact one to `tolerance` in L1.

    Times are given in units of mu sigma^2 / hbar; the result is reported in both scaled and atomic units.
    """
    if scaled_times is None:
        scaled_times = np.logspace(-1, 4, 11)
    unit = params.mass * spec.width**2 / params.hbar
    rows = it_convergence(spec, [float(s) * unit for s in scaled_times], params)
    onset = next((row for row in rows if row['density_l1'] <= tolerance), None)
    return {
        'mass': params.mass,
        'hbar': params.hbar,
        'sigma': spec.width,
        'tolerance': tolerance,
        'onset_t': onset['t'] if onset else math.nan,
        'onset_scaled_t': onset['scaled_t'] if onset else math.nan,
        'rows': rows,
    }


TRANSPORT_STREAM = 20


def probability_transport(spec: GaussianSpec,
                          t: float,
                          params: PhysicalParams,
                          n_intervals: int = 20,
                          seed: int = 0) -> List[Dict[str, float]]:
    """Interval probabilities at time t under the imaging density, the mapped momentum density and the exact one.

    Interval ends are grid points drawn within four standard deviations of the centroid. The momentum interval
    of [a, b] is [mu (a - X) / t, mu (b - X) / t], sampled on the image of the position lattice.
    """
    if n_intervals < 1:
        raise ContractError(code='InvalidCount', message='n_intervals must be positive')
    grid = fit_grid([spec], t, params)
    initial = gaussian(spec, grid)
    exact = as_position(propagate_spectral(initial, t, params).state)
    source = centred_source(spec, params)
    image = propagate_it(source, t, grid, params, origin=spec.center).state
    mass = params.mass
    dp = mass * grid.dx / t
    mapped = momentum_amplitudes_at(source, mass * (grid.x_min - spec.center) / t, dp, grid.n)

    spread = 4 * math.sqrt(projected_variance(initial, t, params))
    centroid = spec.center + spec.momentum * t / mass
    rng = rng_stream(seed, TRANSPORT_STREAM)
    ends = np.sort(rng.uniform(centroid - spread, centroid + spread, size=(n_intervals, 2)), axis=1)
    rows = []
    for a, b in ends:
        mask = (grid.x >= a) & (grid.x <= b)
        it_prob = float(np.sum(np.abs(image.amplitudes[mask])**2) * grid.dx)
        momentum_prob = float(np.sum(np.abs(mapped[mask])**2) * dp)
        exact_prob = float(np.sum(np.abs(exact.amplitudes[mask])**2) * grid.dx)
        rows.append({
            'a': float(a),
            'b': float(b),
            'it_prob': it_prob,
            'momentum_prob': momentum_prob,
            'exact_prob': exact_prob,
            'identity_error': abs(it_prob - momentum_prob),
            'exact_error': abs(it_prob - exact_prob),
        })
    return rows
