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

"""Straight tracks from an isotropic emitter: one classical ray per event, ionising the atoms it passes."""

import math
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import stats

from itlab.ensemble import chunk_sizes, rng_stream
from itlab.log import logger
from itlab.schema import AngularBinning, MottConfig
from itlab.settings import MAX_WORKERS
from itlab.utils.parallel_executor import parallel_exec

MIN_RELIABLE_EVENTS = 1000
GEOMETRY_BLOCK = 256
# streams 0 and 1 of a seed are reserved for event directions and the atom cloud
DIRECTION_STREAM = 0
CLOUD_STREAM = 1


class MottEvent(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    direction: Tuple[float, float, float]
    ionised: List[int]
    max_transverse: float


class MottRun(BaseModel):
    model_config = ConfigDict(frozen=True)

    events: List[MottEvent]
    stats: Dict[str, float]


def atom_positions(cfg: MottConfig) -> np.ndarray:
    if cfg.atoms is not None:
        return np.asarray(cfg.atoms, dtype=float).reshape(-1, 3)
    if cfg.cloud is None:
        return np.zeros((0, 3))
    rng = rng_stream(cfg.cloud.seed, CLOUD_STREAM)
    directions = rng.standard_normal((cfg.cloud.count, 3))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = cfg.cloud.radius * rng.random(cfg.cloud.count)**(1 / 3)
    return directions * radii[:, None]


def _direction_chunk(seed: int, chunk: int, size: int) -> np.ndarray:
    vectors = rng_stream(seed, DIRECTION_STREAM, chunk).standard_normal((size, 3))
    return vectors / np.linalg.norm(vectors, axis=1, keepdims=True)


def sample_directions(cfg: MottConfig) -> np.ndarray:
    """Unit emission directions, uniform on the sphere unless a direction is forced."""
    if cfg.forced_direction is not None:
        direction = np.asarray(cfg.forced_direction, dtype=float)
        return np.tile(direction / np.linalg.norm(direction), (cfg.n_events, 1))
    jobs = [{'seed': cfg.seed, 'chunk': index, 'size': size} for index, size in enumerate(chunk_sizes(cfg.n_events))]
    parts = parallel_exec(_direction_chunk, jobs, max_workers=MAX_WORKERS)
    return np.concatenate(parts) if parts else np.zeros((0, 3))


def _ionise(directions: np.ndarray, atoms: np.ndarray, impact_parameter: float, offset: int) -> List[MottEvent]:
    along = directions @ atoms.T
    transverse2 = np.clip(np.sum(atoms**2, axis=1)[None, :] - along**2, 0.0, None)
    hit = (along > 0) & (transverse2 <= impact_parameter**2)
    events = []
    for k, direction in enumerate(directions):
        indices = np.nonzero(hit[k])[0]
        deviation = float(np.sqrt(transverse2[k, indices].max())) if indices.size else 0.0
        events.append(
            MottEvent(index=offset + k,
                      direction=tuple(float(v) for v in direction),
                      ionised=[int(i) for i in indices],
                      max_transverse=deviation))
    return events


def rayleigh_test(directions: np.ndarray) -> Tuple[float, float]:
    """Mean resultant length and the Rayleigh p-value against isotropy on the sphere."""
    n = directions.shape[0]
    if n == 0:
        return 0.0, 1.0
    length = float(np.linalg.norm(directions.sum(axis=0)) / n)
    return length, float(stats.chi2.sf(3 * n * length**2, 3))


def collinearity_violations(events: List[MottEvent], atoms: np.ndarray, impact_parameter: float) -> int:
    """Count ionised atoms farther than the impact parameter from their event ray, via |a x d|."""
    violations = 0
    for event in events:
        if not event.ionised:
            continue
        direction = np.asarray(event.direction)
        distances = np.linalg.norm(np.cross(atoms[event.ionised], direction), axis=1)
        violations += int(np.sum(distances > impact_parameter * (1 + 1e-12)))
    return violations


def mott_run(cfg: MottConfig) -> MottRun:
    atoms = atom_positions(cfg)
    directions = sample_directions(cfg)
    if atoms.shape[0] == 0:
        events = [
            MottEvent(index=k, direction=tuple(float(v) for v in d), ionised=[], max_transverse=0.0)
            for k, d in enumerate(directions)
        ]
    else:
        jobs = [{
            'directions': directions[start:start + GEOMETRY_BLOCK],
            'atoms': atoms,
            'impact_parameter': cfg.impact_parameter,
            'offset': start
        } for start in range(0, cfg.n_events, GEOMETRY_BLOCK)]
        events = [event for block in parallel_exec(_ionise, jobs, max_workers=MAX_WORKERS) for event in block]
    length, pvalue = rayleigh_test(directions)
    track_lengths = np.array([len(event.ionised) for event in events], dtype=float)
    summary = {
        'n_events': float(cfg.n_events),
        'n_atoms': float(atoms.shape[0]),
        'mean_resultant_length': length,
        'uniformity_bound': 3 / math.sqrt(2 * cfg.n_events) if cfg.n_events else math.inf,
        'rayleigh_pvalue': pvalue,
        'max_transverse_deviation': max((event.max_transverse for event in events), default=0.0),
        'collinearity_violations': float(collinearity_violations(events, atoms, cfg.impact_parameter)),
        'mean_track_length': float(track_lengths.mean()) if track_lengths.size else 0.0,
        'empty_fraction': float(np.mean(track_lengths == 0)) if track_lengths.size else 1.0,
    }
    logger.info(f'Mott run: {cfg.n_events} events over {atoms.shape[0]} atoms, '
                f'max transverse deviation {summary["max_transverse_deviation"]:.3g}')
    return MottRun(events=events, stats=summary)


def bin_directions(directions: np.ndarray, binning: AngularBinning) -> np.ndarray:
    """Counts in equal-area cells: bands of equal width in cos(theta) times equal azimuth sectors."""
    counts = np.zeros((binning.n_polar, binning.n_azimuth), dtype=np.int64)
    if directions.shape[0] == 0:
        return counts
    band = np.clip(np.floor((directions[:, 2] + 1) / 2 * binning.n_polar).astype(int), 0, binning.n_polar - 1)
    phi = np.arctan2(directions[:, 1], directions[:, 0])
    sector = np.clip(np.floor((phi + math.pi) / (2 * math.pi) * binning.n_azimuth).astype(int), 0,
                     binning.n_azimuth - 1)
    np.add.at(counts, (band, sector), 1)
    return counts


def mott_perception(cfg: MottConfig, binning: Optional[AngularBinning] = None) -> Dict[str, object]:
    """Direction histogram of the ensemble with a chi-square test of spherical uniformity."""
    binning = binning or AngularBinning()
    directions = sample_directions(cfg)
    counts = bin_directions(directions, binning)
    n = int(counts.sum())
    expected = n / binning.n_bins
    reliable = n >= MIN_RELIABLE_EVENTS and expected >= 5
    if n > 0 and binning.n_bins > 1:
        result = stats.chisquare(counts.ravel())
        statistic, pvalue = float(result.statistic), float(result.pvalue)
    else:
        statistic, pvalue = math.nan, math.nan
    if not reliable:
        logger.warning(f'Uniformity statistic from {n} events over {binning.n_bins} bins is unreliable '
                       f'(needs >= {MIN_RELIABLE_EVENTS} events and >= 5 expected per bin)')
    return {
        'counts': counts,
        'expected': expected,
        'chi2': statistic,
        'pvalue': pvalue,
        'reliable': reliable,
        'occupied_bins': int(np.count_nonzero(counts)),
    }
