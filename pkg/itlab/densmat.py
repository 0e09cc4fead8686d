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

"""Two-packet density matrices in the imaging regime, detector time averaging, and the overlap model.

Convention: rho(x, x', t) = conj(Psi(x, t)) * Psi(x', t). With p_i = mu (x - X_i) / t the normalised
two-packet imaging wavefunction is

    Psi(x, t) = exp(-i pi/4) sqrt(c) / N * sum_i exp(-p_i^2 / (2 s~^2)) exp(i mu (x - X_i)^2 / (2 hbar t))

with c = mu / (sqrt(pi) s~ t), s~ = hbar / sigma and N^2 = 2 (1 + exp(-(X_2 - X_1)^2 / (4 sigma^2))).
"""

import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.constants import physical_constants

from itlab.errors import ContractError, RegimeError
from itlab.log import logger
from itlab.numerics import as_position, norm
from itlab.schema import POSITION, DensityMatrixSlice, RealField, TwoPacketParams, WaveState
from itlab.settings import IT_REGIME_THRESHOLD, MAX_AVERAGE_NODES, MAX_WORKERS, NODES_PER_PERIOD, NORM_TOLERANCE
from itlab.utils.parallel_executor import parallel_exec

AU_TIME_SECONDS = physical_constants['atomic unit of time'][0]
NODE_BLOCK = 2048


def to_seconds(t_au: float) -> float:
    return t_au * AU_TIME_SECONDS


def _regime_warnings(params: TwoPacketParams, t: float) -> Tuple[str, ...]:
    if t <= 0:
        raise ContractError(code='NonPositiveTime', message=f'Imaging-regime density matrices need t > 0, got {t}')
    physics = params.physics
    ratio = physics.hbar * t / (physics.mass * params.sigma**2)
    if ratio < IT_REGIME_THRESHOLD:
        message = f'hbar t / (mu sigma^2) = {ratio:.3g} is below the imaging regime threshold {IT_REGIME_THRESHOLD:.3g}'
        logger.warning(message)
        return (message, )
    return ()


def _prefactor(params: TwoPacketParams, t) -> np.ndarray:
    physics = params.physics
    return physics.mass / (math.sqrt(math.pi) * params.sigma_tilde * t) / params.norm_squared


def _branch_terms(params: TwoPacketParams, t: np.ndarray, x: np.ndarray) -> np.ndarray:
    """exp(-p_i^2 / (2 s~^2)) exp(i mu u_i^2 / (2 hbar t)) with shape (2, len(t), len(x))."""
    physics = params.physics
    t = np.asarray(t, dtype=float).reshape(-1, 1)
    terms = []
    for center in params.centers:
        u = np.asarray(x, dtype=float).reshape(1, -1) - center
        p = physics.mass * u / t
        terms.append(np.exp(-p**2 / (2 * params.sigma_tilde**2) + 1j * physics.mass * u**2 / (2 * physics.hbar * t)))
    return np.stack(terms)


def imaging_amplitudes(params: TwoPacketParams, t: float, x: np.ndarray) -> np.ndarray:
    """Psi(x, t) of the normalised two-packet state in the imaging form."""
    terms = _branch_terms(params, np.array([t]), x)[:, 0, :]
    return np.exp(-1j * math.pi / 4) * math.sqrt(_prefactor(params, t)) * terms.sum(axis=0)


def rho_diag_it(params: TwoPacketParams, t: float, x: np.ndarray) -> RealField:
    warnings = _regime_warnings(params, t)
    physics = params.physics
    x = np.asarray(x, dtype=float)
    p1, p2 = (physics.mass * (x - center) / t for center in params.centers)
    s2 = params.sigma_tilde**2
    phase = (p1**2 - p2**2) * t / (2 * physics.mass * physics.hbar)
    values = _prefactor(params, t) * (np.exp(-p1**2 / s2) + np.exp(-p2**2 / s2) +
                                      2 * np.cos(phase) * np.exp(-(p1**2 + p2**2) / (2 * s2)))
    return RealField(lattice=x, values=values, representation=POSITION, t=t, warnings=warnings)


def rho_offdiag_it(params: TwoPacketParams, t: float, x: np.ndarray, x_prime: np.ndarray) -> DensityMatrixSlice:
    warnings = _regime_warnings(params, t)
    left = _branch_terms(params, np.array([t]), x)[:, 0, :].sum(axis=0)
    right = _branch_terms(params, np.array([t]), x_prime)[:, 0, :].sum(axis=0)
    values = _prefactor(params, t) * np.outer(np.conj(left), right)
    return DensityMatrixSlice(x=x, x_prime=x_prime, values=values, t=t, warnings=warnings)


def two_peak_diagonal(params: TwoPacketParams, t: float, x: np.ndarray) -> np.ndarray:
    """Two separate diagonal peaks of width eta = s~ t / mu, normalised to unit total probability."""
    eta = params.sigma_tilde * t / params.physics.mass
    x = np.asarray(x, dtype=float)
    return sum(np.exp(-(x - center)**2 / eta**2) for center in params.centers) / (2 * math.sqrt(math.pi) * eta)


def oscillation_period(params: TwoPacketParams, x: float, x_prime: float, t: float, i: int = 0, j: int = 1) -> float:
    """Period 4 pi mu hbar / |p_i^2 - p'_j^2| of the (i, j) term of rho(x, x') at time t."""
    physics = params.physics
    p = physics.mass * (x - params.centers[i]) / t
    p_prime = physics.mass * (x_prime - params.centers[j]) / t
    splitting = abs(p**2 - p_prime**2)
    if splitting == 0:
        return math.inf
    return 4 * math.pi * physics.mass * physics.hbar / splitting


def representative_point(params: TwoPacketParams, t: float, splitting: float = 1.0) -> Tuple[float, float]:
    """(x, x') = (X_1, X_2 + sqrt(splitting) t / mu), where p_1 = 0 and p'_2^2 = splitting."""
    return params.x1, params.x2 + math.sqrt(splitting) * t / params.physics.mass


def measure_oscillation_period(params: TwoPacketParams,
                               x: float,
                               x_prime: float,
                               t_center: float,
                               n_periods: int = 4) -> float:
    """Period of rho(x, x', t) measured from the unwrapped phase of a sampled time series."""
    guess = oscillation_period(params, x, x_prime, t_center)
    if not math.isfinite(guess):
        raise ContractError(code='NoOscillation', message='rho does not oscillate at this point')
    times = t_center + np.arange(n_periods * NODES_PER_PERIOD + 1) * guess / NODES_PER_PERIOD
    left = _branch_terms(params, times, np.array([x]))[:, :, 0].sum(axis=0)
    right = _branch_terms(params, times, np.array([x_prime]))[:, :, 0].sum(axis=0)
    phase = np.unwrap(np.angle(np.conj(left) * right))
    slope = np.polyfit(times, phase, 1)[0]
    return float(2 * math.pi / abs(slope))


def _max_phase_rate_numerator(params: TwoPacketParams, x: np.ndarray, x_prime: np.ndarray, diagonal: bool) -> float:
    """max |mu ((x - X_i)^2 - (x' - X_j)^2)| over the patch and the four terms."""
    mass = params.physics.mass
    x = np.asarray(x, dtype=float)
    x_prime = np.asarray(x_prime, dtype=float)
    largest = 0.0
    for ci in params.centers:
        for cj in params.centers:
            if diagonal:
                largest = max(largest, float(np.max(np.abs(mass * ((x - ci)**2 - (x - cj)**2)))))
            else:
                a = mass * (x - ci)**2
                b = mass * (x_prime - cj)**2
                largest = max(largest, abs(a.max() - b.min()), abs(a.min() - b.max()))
    return largest


def window_nodes(params: TwoPacketParams,
                 t_center: float,
                 tau: float,
                 x: np.ndarray,
                 x_prime: np.ndarray,
                 diagonal: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """Uniform trapezoid nodes and weights (summing to 1) with NODES_PER_PERIOD nodes per fastest period."""
    if tau < 0:
        raise ContractError(code='NegativeWindow', message=f'tau={tau} must not be negative')
    start = t_center - tau / 2
    if start <= 0:
        raise ContractError(code='WindowBeforeOrigin',
                            message=f'The window [{start}, {t_center + tau / 2}] reaches t <= 0')
    numerator = _max_phase_rate_numerator(params, x, x_prime, diagonal)
    omega = numerator / (2 * params.physics.hbar * start**2)
    if omega > 0 and tau > 0:
        intervals = max(NODES_PER_PERIOD, math.ceil(tau * omega * NODES_PER_PERIOD / (2 * math.pi)))
    else:
        intervals = NODES_PER_PERIOD
    if intervals + 1 > MAX_AVERAGE_NODES:
        raise RegimeError(code='TooManyNodes',
                          message=f'Averaging over tau={tau} needs {intervals + 1} nodes, more than '
                          f'{MAX_AVERAGE_NODES} (ITLAB_MAX_AVERAGE_NODES); shrink the patch or the window',
                          extra={'required_nodes': intervals + 1})
    times = np.linspace(start, t_center + tau / 2, intervals + 1)
    weights = np.full(intervals + 1, 1.0 / intervals)
    weights[0] = weights[-1] = 0.5 / intervals
    return times, weights


def _full_block(params, times, weights, x, x_prime) -> np.ndarray:
    scale = weights * _prefactor(params, times)
    left = np.conj(_branch_terms(params, times, x).sum(axis=0)) * scale[:, None]
    right = _branch_terms(params, times, x_prime).sum(axis=0)
    return left.T @ right


def _cross_block(params, times, weights, x, x_prime) -> np.ndarray:
    scale = (weights * _prefactor(params, times))[:, None]
    left = np.conj(_branch_terms(params, times, x)) * scale
    right = _branch_terms(params, times, x_prime)
    return left[0].T @ right[1] + left[1].T @ right[0]


def _diagonal_block(params, times, weights, x, x_prime) -> np.ndarray:
    scale = (weights * _prefactor(params, times))[:, None]
    terms = _branch_terms(params, times, x)
    incoherent = np.sum((np.abs(terms[0])**2 + np.abs(terms[1])**2) * scale, axis=0)
    interference = np.sum(2 * np.real(np.conj(terms[0]) * terms[1]) * scale, axis=0)
    two_peak = weights @ two_peak_diagonal(params, times[:, None], x[None, :])
    return np.stack([incoherent, interference, two_peak])


_BLOCKS = {'full': _full_block, 'cross': _cross_block, 'diagonal': _diagonal_block}


def _average(params: TwoPacketParams, times: np.ndarray, weights: np.ndarray, x: np.ndarray, x_prime: np.ndarray,
             kind: str) -> np.ndarray:
    jobs = [{
        'params': params,
        'times': times[start:start + NODE_BLOCK],
        'weights': weights[start:start + NODE_BLOCK],
        'x': x,
        'x_prime': x_prime
    } for start in range(0, times.shape[0], NODE_BLOCK)]
    parts = parallel_exec(_BLOCKS[kind], jobs, max_workers=MAX_WORKERS)
    total = parts[0]
    for part in parts[1:]:
        total = total + part
    return total


def time_average(params: TwoPacketParams, t_center: float, tau: float, x: np.ndarray,
                 x_prime: np.ndarray) -> DensityMatrixSlice:
    """Mean of rho(x, x', t) over the detector window [t_center - tau/2, t_center + tau/2]."""
    x = np.asarray(x, dtype=float)
    x_prime = np.asarray(x_prime, dtype=float)
    times, weights = window_nodes(params, t_center, tau, x, x_prime)
    if tau == 0:
        return rho_offdiag_it(params, t_center, x, x_prime)
    warnings = _regime_warnings(params, times[0])
    values = _average(params, times, weights, x, x_prime, 'full')
    return DensityMatrixSlice(x=x, x_prime=x_prime, values=values, t=t_center, averaged_over=tau, warnings=warnings)


def average_diagonal(params: TwoPacketParams, t_center: float, tau: float, x: np.ndarray) -> Dict[str, np.ndarray]:
    """Window means of the incoherent and interference parts of rho(x, x) and of the two-peak form."""
    x = np.asarray(x, dtype=float)
    times, weights = window_nodes(params, t_center, tau, x, x, diagonal=True)
    if tau == 0:
        times, weights = np.array([t_center]), np.array([1.0])
    _regime_warnings(params, times[0])
    incoherent, interference, two_peak = _average(params, times, weights, x, x, 'diagonal')
    return {'incoherent': incoherent, 'interference': interference, 'two_peak': two_peak}


def average_cross(params: TwoPacketParams, t_center: float, tau: float, x: np.ndarray,
                  x_prime: np.ndarray) -> np.ndarray:
    """Window mean of the two cross-branch terms of rho on the patch."""
    x = np.asarray(x, dtype=float)
    x_prime = np.asarray(x_prime, dtype=float)
    times, weights = window_nodes(params, t_center, tau, x, x_prime)
    if tau == 0:
        times, weights = np.array([t_center]), np.array([1.0])
    return _average(params, times, weights, x, x_prime, 'cross')


def default_diagonal_lattice(params: TwoPacketParams, t: float, points: int = 1025, widths: float = 6.0) -> np.ndarray:
    eta = params.sigma_tilde * t / params.physics.mass
    mid = (params.x1 + params.x2) / 2
    half = abs(params.x2 - params.x1) / 2 + widths * eta
    return np.linspace(mid - half, mid + half, points)


def dt_concordance(params: TwoPacketParams, t_center: float, tau: float, x: Optional[np.ndarray] = None) -> float:
    """L1 distance between the window-averaged imaging diagonal and the overlap-0 diagonal of the same images.

    The overlap-0 diagonal |alpha|^2 |psi_1|^2 + |beta|^2 |psi_2|^2 is the incoherent part of rho(x, x).
    """
    x = default_diagonal_lattice(params, t_center) if x is None else np.asarray(x, dtype=float)
    parts = average_diagonal(params, t_center, tau, x)
    dx = float(x[1] - x[0])
    return float(np.sum(np.abs(parts['interference'])) * dx)


def suppression_report(params: TwoPacketParams,
                       t_center: float,
                       taus: Sequence[float],
                       x: Optional[np.ndarray] = None,
                       patch_points: int = 33,
                       patch_half_width: Optional[float] = None,
                       splitting: float = 1.0) -> List[Dict[str, float]]:
    """Per window length: off-diagonal moduli, midpoint fringe contrast and the L1 distance to the two-peak form.

    Off-diagonal moduli are reported at the representative point, as the maximum over a patch around it, and
    at the cross-branch peak (X_1, X_2).
    """
    taus = [float(tau) for tau in taus]
    if any(b < a for a, b in zip(taus, taus[1:])):
        raise ContractError(code='UnsortedWindows', message='The window lengths must be sorted ascending')
    x = default_diagonal_lattice(params, t_center) if x is None else np.asarray(x, dtype=float)
    dx = float(x[1] - x[0])
    mid = np.array([(params.x1 + params.x2) / 2])
    rx, rxp = representative_point(params, t_center, splitting)
    t_osc = oscillation_period(params, rx, rxp, t_center)
    if patch_half_width is None:
        patch_half_width = 0.1 * params.sigma_tilde * t_center / params.physics.mass
    offsets = np.linspace(-patch_half_width, patch_half_width, patch_points)
    patch_x, patch_xp = rx + offsets, rxp + offsets
    peak_x, peak_xp = np.array([params.x1]), np.array([params.x2])

    reference = abs(rho_offdiag_it(params, t_center, np.array([rx]), np.array([rxp])).values[0, 0])
    rows = []
    for tau in taus:
        point = abs(time_average(params, t_center, tau, np.array([rx]), np.array([rxp])).values[0, 0])
        patch = np.abs(time_average(params, t_center, tau, patch_x, patch_xp).values).max()
        peak = abs(average_cross(params, t_center, tau, peak_x, peak_xp)[0, 0])
        diagonal = average_diagonal(params, t_center, tau, x)
        midpoint = average_diagonal(params, t_center, tau, mid)
        averaged = diagonal['incoherent'] + diagonal['interference']
        rows.append({
            'tau': tau,
            'tau_over_t_osc': tau / t_osc,
            't_osc': t_osc,
            't_osc_seconds': to_seconds(t_osc),
            'nanosecond_over_t_osc': 1e-9 / to_seconds(t_osc),
            'representative_modulus': point,
            'representative_suppression': reference / point if point > 0 else math.inf,
            'offdiag_patch_max': float(patch),
            'cross_peak_modulus': peak,
            'fringe_contrast': float(midpoint['interference'][0] / midpoint['incoherent'][0]),
            'diag_l1_two_peak': float(np.sum(np.abs(averaged - diagonal['two_peak'])) * dx),
            'dt_l1': float(np.sum(np.abs(diagonal['interference'])) * dx),
        })
    return rows


def _patch_indices(grid_x: np.ndarray, bounds: Optional[Tuple[float, float]], stride: int) -> np.ndarray:
    if bounds is None:
        return np.arange(0, grid_x.shape[0], stride)
    low, high = bounds
    if low > high or low < grid_x[0] or high > grid_x[-1]:
        raise ContractError(code='PatchOutsideGrid',
                            message=f'The patch [{low}, {high}] is not inside the grid [{grid_x[0]}, {grid_x[-1]}]')
    return np.nonzero((grid_x >= low) & (grid_x <= high))[0][::stride]


def rho_exact(s: WaveState,
              x_range: Optional[Tuple[float, float]] = None,
              x_prime_range: Optional[Tuple[float, float]] = None,
              stride: int = 1) -> DensityMatrixSlice:
    """conj(psi(x)) psi(x') of a pure state on a patch of its grid (x_prime_range defaults to x_range)."""
    value = norm(s)
    if abs(value - 1.0) > NORM_TOLERANCE * 100:
        raise ContractError(code='Unnormalised', message=f'rho_exact needs a normalised state, got norm {value!r}')
    s = as_position(s)
    x = s.grid.x
    rows = _patch_indices(x, x_range, stride)
    cols = _patch_indices(x, x_range if x_prime_range is None else x_prime_range, stride)
    values = np.outer(np.conj(s.amplitudes[rows]), s.amplitudes[cols])
    return DensityMatrixSlice(x=x[rows], x_prime=x[cols], values=values, t=s.t)


def dt_overlap_model(alpha: complex,
                     beta: complex,
                     overlap: complex,
                     psi1: WaveState,
                     psi2: WaveState,
                     x_range: Optional[Tuple[float, float]] = None,
                     x_prime_range: Optional[Tuple[float, float]] = None,
                     stride: int = 1) -> DensityMatrixSlice:
    """Reduced density matrix of alpha |psi1>|E1> + beta |psi2>|E2> with overlap = <E2|E1>."""
    alpha, beta, overlap = complex(alpha), complex(beta), complex(overlap)
    if abs(abs(alpha)**2 + abs(beta)**2 - 1.0) > 1e-12:
        raise ContractError(code='UnnormalisedWeights', message='|alpha|^2 + |beta|^2 must equal 1')
    if abs(overlap) > 1.0 + 1e-15:
        raise ContractError(code='InvalidOverlap', message=f'|overlap| = {abs(overlap)} exceeds 1')
    if psi1.grid != psi2.grid:
        raise ContractError(code='GridMismatch', message='Both branch states must share one grid')
    psi1, psi2 = as_position(psi1), as_position(psi2)
    x = psi1.grid.x
    rows = _patch_indices(x, x_range, stride)
    cols = _patch_indices(x, x_range if x_prime_range is None else x_prime_range, stride)
    a1, a2 = psi1.amplitudes, psi2.amplitudes
    values = (abs(alpha)**2 * np.outer(np.conj(a1[rows]), a1[cols]) +
              abs(beta)**2 * np.outer(np.conj(a2[rows]), a2[cols]) +
              alpha * beta.conjugate() * overlap * np.outer(np.conj(a2[rows]), a1[cols]) +
              alpha.conjugate() * beta * overlap.conjugate() * np.outer(np.conj(a1[rows]), a2[cols]))
    return DensityMatrixSlice(x=x[rows], x_prime=x[cols], values=values, t=psi1.t)
