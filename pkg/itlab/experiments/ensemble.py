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

"""Classical ensemble against the quantum density: KS statistics, histograms and loci of equal probability."""

from typing import Any, Dict

import pandas as pd

from itlab.config import ExperimentConfig
from itlab.ensemble import (classical_loci, compare_density, ks_convergence, probability_loci, sample_momenta,
                            transport)
from itlab.experiments.base import BaseExperiment, register_experiment, resolve_grid
from itlab.exporters import RunWriter
from itlab.numerics import to_momentum
from itlab.propagators import propagate_spectral
from itlab.states import density, fit_grid, gaussian


@register_experiment('ensemble')
class EnsembleExperiment(BaseExperiment):

    def run(self, config: ExperimentConfig, writer: RunWriter) -> Dict[str, Any]:
        section = config.ensemble
        physics = config.physics
        tol = config.tolerances.boundary
        source_grid = resolve_grid(section.source_grid, [section.packet], 0.0, physics, tol)
        momentum_density = density(to_momentum(gaussian(section.packet, source_grid, tol)))

        def quantum_density(t: float):
            grid = fit_grid([section.packet], t, physics, tol=tol)
            return density(propagate_spectral(gaussian(section.packet, grid, tol), t, physics, tol=tol).state)

        target = quantum_density(section.t)
        ensemble = transport(sample_momenta(momentum_density, section.n_samples, config.seed),
                             section.t,
                             physics,
                             seed=config.seed)
        report = compare_density(ensemble, target, section.detector.delta_x)
        writer.write('trajectories', ensemble)
        writer.write('histogram', report['hist'])
        writer.write('quantum_density', target)
        comparison = {k: v for k, v in report.items() if k != 'hist'}
        writer.write('comparison', [comparison])

        convergence = ks_convergence(momentum_density, target, physics, section.sizes, config.seed)
        writer.write('ks_convergence', convergence)

        times = list(section.loci_times)
        quantum = probability_loci([quantum_density(t) for t in times], section.quantiles)
        classical = classical_loci(momentum_density, section.quantiles, times, physics)
        loci = pd.DataFrame({'t': times})
        for k, q in enumerate(section.quantiles):
            loci[f'quantum_q{q:g}'] = quantum[:, k]
            loci[f'classical_q{q:g}'] = classical[:, k]
        writer.write('loci', loci)

        comparison['within_ks_band'] = comparison['ks'] < comparison['ks_band_95']
        comparison['ks_convergence'] = convergence
        return comparison
