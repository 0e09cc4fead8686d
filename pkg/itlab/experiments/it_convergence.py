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

from typing import Any, Dict

from itlab.config import ExperimentConfig
from itlab.experiments.base import BaseExperiment, register_experiment
from itlab.exporters import RunWriter
from itlab.log import logger
from itlab.propagators import classicality_onset, it_convergence, probability_transport
from itlab.schema import GaussianSpec, PhysicalParams

TRANSPORT_TIME = 1.0e3


@register_experiment('it-convergence')
class ItConvergenceExperiment(BaseExperiment):

    def run(self, config: ExperimentConfig, writer: RunWriter) -> Dict[str, Any]:
        section = config.it_convergence
        physics = config.physics
        rows = it_convergence(section.packet, section.times, physics)
        writer.write('convergence', rows)
        errors = [row['density_l1'] for row in rows]
        monotone = all(b < a for a, b in zip(errors, errors[1:]))
        if not monotone:
            logger.warning(f'density_l1 is not monotone over t={list(section.times)}: {errors}')

        transport_t = TRANSPORT_TIME if TRANSPORT_TIME in section.times else max(section.times)
        transport = probability_transport(section.packet,
                                          transport_t,
                                          physics,
                                          n_intervals=section.transport_intervals,
                                          seed=config.seed)
        writer.write('transport', transport, meta={'t': transport_t})

        summary = {
            'density_l1': dict(zip(map(str, section.times), errors)),
            'monotone': monotone,
            'transport_t': transport_t,
            'max_identity_error': max(row['identity_error'] for row in transport),
            'max_exact_error': max(row['exact_error'] for row in transport),
        }

        onset = section.onset
        if onset.enabled:
            table = []
            for mass in onset.masses:
                for hbar in onset.hbars:
                    params = PhysicalParams(mass=mass, hbar=hbar)
                    spec = GaussianSpec(width=section.packet.width)
                    result = classicality_onset(spec, params, config.tolerances.onset, onset.scaled_times)
                    table.append({k: v for k, v in result.items() if k != 'rows'})
            writer.write('onset', table)
            summary['onset'] = table
        return summary
