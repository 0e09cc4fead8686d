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

"""Classical ensembles drawn from the initial momentum density and carried along free trajectories."""

import math
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy import stats

from itlab.errors import ContractError
from itlab.log import logger
from itlab.schema import MOMENTUM, POSITION, PhysicalParams, RealField, TrajectoryEnsemble
from itlab.settings import MAX_WORKERS, RNG_ALGORITHM, SAMPLE_CHUNK
from itlab.utils.parallel_executor import parallel_exec

MAX_SEED = 2**64


def check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)) or not 0 <= int(seed) < MAX_SEED:
        raise ContractError(code='InvalidSeed', message=f'seed={seed!r} must be an unsigned 64-bit integer')
    return int(seed)


def rng_stream(seed: int, *key: int) -> np.random.Generator:
    """Independent counter-based stream for one work item, addressed by its key."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(check_seed(seed), spawn_key=tuple(key))))


def chunk_sizes(n: int, chunk: int = SAMPLE_CHUNK) -> List[int]:
    return [min(chunk, n - start) for start in range(0, n, chunk)]


def cell_cdf(field: RealField):
    """Cell edges and the cumulative distribution at them, with each lattice point owning one cell."""
    values = field.values
    if np.any(values < 0):
        raise ContractError(code='NegativeDensity', message='A probability density cannot be negative')
    spacing = field.spacing
    mass = np.concatenate([[0.0], np.cumsum(values * spacing)])
    total = mass[-1]
    if not total > 0:
        raise ContractError(code='ZeroMass', message='The density has zero total probability')
    if abs(total - 1.0) > 1e-6:
        logger.warning(f'Density integrates to {total:.8g}; renormalising before sampling')
    edges = np.concatenate([field.lattice - spacing / 2, [field.lattice[-1] + spacing / 2]])
    return edges, mass / total


def _inverse_cdf(edges: np.ndarray, cdf: np.ndarray, u: np.ndarray) -> np.ndarray:
    # piecewise-linear cumulative: linear interpolation inside the cell holding u
    index = np.clip(np.searchsorted(cdf, u, side='right') - 1, 0, len(edges) - 2)
    width = cdf[index + 1] - cdf[index]
    fraction = np.where(width > 0, (u - cdf[index]) / np.where(width > 0, width, 1.0), 0.5)
    return edges[index] + fraction * (edges[index + 1] - edges[index])


def _sample_chunk(edges: np.ndarray, cdf: np.ndarray, size: int, seed: int, stream: int, chunk: int) -> np.ndarray:
    return _inverse_cdf(edges, cdf, rng_stream(seed, stream, chunk).random(size))


def sample_density(field: RealField, n: int, seed: int, stream: int = 0) -> np.ndarray:
    """n i.i.d. draws from `field` by inverse CDF; chunks of SAMPLE_CHUNK draw from their own streams."""
    if n < 0:
        raise ContractError(code='InvalidCount', message=f'Cannot draw {n} samples')
    edges, cdf = cell_cdf(field)
    seed = check_seed(seed)
    jobs = [{
        'edges': edges,
        'cdf': cdf,
        'size': size,
        'seed': seed,
        'stream': stream,
        'chunk': index
    } for index, size in enumerate(chunk_sizes(n))]
    parts = parallel_exec(_sample_chunk, jobs, max_workers=MAX_WORKERS)
    return np.concatenate(parts) if parts else np.zeros(0)


def sample_momenta(momentum_density: RealField, n: int, seed: int) -> np.ndarray:
    if momentum_density.representation != MOMENTUM:
        raise ContractError(code='WrongRepresentation', message='sample_momenta needs a momentum density')
    return sample_density(momentum_density, n, seed)


def transport(momenta: Sequence[float],
              t: float,
              params: PhysicalParams,
              seed: Optional[int] = None) -> TrajectoryEnsemble:
    """Free classical trajectories x = p t / mu launched from the origin."""
    if t < 0:
        raise ContractError(code='NegativeTime', message=f'transport needs t >= 0, got {t}')
    momenta = np.asarray(momenta, dtype=float)
    return TrajectoryEnsemble(seed=seed,
                              momenta=momenta,
                              positions=momenta * t / params.mass,
                              t=t,
                              params=params,
                              rng_algorithm=RNG_ALGORITHM)


def chi2_pvalue_proxy(counts: np.ndarray, expected: np.ndarray, min_expected: float = 5.0) -> float:
    mask = expected >= min_expected
    if mask.sum() < 2:
        return math.nan
    observed = counts[mask]
    expected = expected[mask] * observed.sum() / expected[mask].sum()
    return float(stats.chisquare(observed, expected).pvalue)


def detector_bins(edges: np.ndarray, delta_x: float = 0.0) -> np.ndarray:
    """Indices into the cell edges that delimit detector bins of width delta_x; the last bin may be narrower."""
    if delta_x < 0:
        raise ContractError(code='NegativeBin', message=f'delta_x={delta_x} must not be negative')
    step = max(1, int(round(delta_x / float(edges[1] - edges[0]))))
    index = np.arange(0, len(edges), step)
    if index[-1] != len(edges) - 1:
        index = np.append(index, len(edges) - 1)
    return index


def compare_density(e: TrajectoryEnsemble, quantum_density: RealField, delta_x: float = 0.0) -> Dict[str, object]:
    """KS distance and a chi-square p-value between the ensemble positions and a quantum Born density.

    Positions are histogrammed in detector bins of width delta_x, rounded to whole lattice cells; 0 keeps one
    bin per cell.
    """
    if quantum_density.representation != POSITION:
        raise ContractError(code='WrongRepresentation', message='Compare against a position density')
    if not math.isclose(e.t, quantum_density.t, rel_tol=1e-9, abs_tol=1e-12):
        raise ContractError(code='TimeMismatch',
                            message=f'The ensemble is at t={e.t} but the quantum density at t={quantum_density.t}')
    edges, cdf = cell_cdf(quantum_density)
    if e.n == 0:
        raise ContractError(code='InvalidCount', message='The ensemble is empty')
    result = stats.kstest(e.positions, lambda v: np.interp(v, edges, cdf))
    index = detector_bins(edges, delta_x)
    bin_edges, bin_cdf = edges[index], cdf[index]
    counts, _ = np.histogram(e.positions, bins=bin_edges)
    widths = np.diff(bin_edges)
    if len(index) == len(edges):
        hist = RealField(lattice=quantum_density.lattice,
                         values=counts / (e.n * widths),
                         representation=POSITION,
                         t=e.t,
                         grid=quantum_density.grid)
    else:
        hist = RealField(lattice=(bin_edges[:-1] + bin_edges[1:]) / 2,
                         values=counts / (e.n * widths),
                         representation=POSITION,
                         t=e.t)
    return {
        'n': e.n,
        'bin_width': float(widths[0]),
        'ks': float(result.statistic),
        'ks_pvalue': float(result.pvalue),
        'ks_band_95': 1.95 / math.sqrt(e.n),
        'chi2_pvalue_proxy': chi2_pvalue_proxy(counts.astype(float), np.diff(bin_cdf) * e.n),
        'hist': hist,
    }


def ks_convergence(momentum_density: RealField,
                   quantum_density: RealField,
                   params: PhysicalParams,
                   sizes: Sequence[int] = (1000, 10000, 100000),
                   seed: int = 0) -> List[Dict[str, float]]:
    rows = []
    for n in sizes:
        ensemble = transport(sample_momenta(momentum_density, int(n), seed), quantum_density.t, params, seed=seed)
        report = compare_density(ensemble, quantum_density)
        rows.append({'n': int(n), 'ks': report['ks'], 'ks_sqrt_n': report['ks'] * math.sqrt(n)})
    return rows


def quantiles_of(field: RealField, quantiles: Sequence[float]) -> np.ndarray:
    edges, cdf = cell_cdf(field)
    return _inverse_cdf(edges, cdf, np.asarray(quantiles, dtype=float))


def probability_loci(fields: Sequence[RealField], quantiles: Sequence[float]) -> np.ndarray:
    """Positions of fixed probability quantiles, one row per density snapshot."""
    return np.array([quantiles_of(field, quantiles) for field in fields])


def classical_loci(momentum_density: RealField, quantiles: Sequence[float], times: Sequence[float],
                   params: PhysicalParams) -> np.ndarray:
    """Straight lines x = p_q t / mu through the origin for the momentum quantiles p_q."""
    p_q = quantiles_of(momentum_density, quantiles)
    return np.outer(np.asarray(times, dtype=float), p_q) / params.mass
