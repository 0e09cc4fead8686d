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

"""Propagate one superposition with every selected method and tabulate the errors against the reference."""

import math
from typing import Any, Dict

import pandas as pd

from itlab.config import ExperimentConfig
from itlab.experiments.base import BaseExperiment, register_experiment, resolve_grid
from itlab.exporters import RunWriter
from itlab.log import logger
from itlab.numerics import as_position
from itlab.propagators import get_propagator, it_error
from itlab.states import observables


@register_experiment('propagate')
class PropagateExperiment(BaseExperiment):

    def run(self, config: ExperimentConfig, writer: RunWriter) -> Dict[str, Any]:
        section = config.propagate
        physics = config.physics
        grid = resolve_grid(section.grid, section.packets, section.t, physics, config.tolerances.boundary)
        methods = list(dict.fromkeys([section.reference] + list(section.methods)))

        states, warnings = {}, {}
        for method in methods:
            result = get_propagator(method).propagate(section.packets,
                                                      section.t,
                                                      grid,
                                                      physics,
                                                      tol=config.tolerances.boundary)
            states[method] = as_position(result.state)
            warnings[method] = list(result.warnings)
            logger.info(f'{method}: propagated {len(section.packets)} packet(s) to t={section.t} on n={grid.n}')

        densities = pd.DataFrame({'x': grid.x})
        for method, state in states.items():
            densities[method] = abs(state.amplitudes)**2
        writer.write('density', densities, meta={'t': section.t, 'n': grid.n})

        reference = states[section.reference]
        rows = []
        for method, state in states.items():
            if method == section.reference:
                continue
            row = {'method': method, 'reference': section.reference}
            row.update(it_error(reference, state))
            rows.append(row)
        if rows:
            writer.write('errors', rows)

        moments = []
        for method, state in states.items():
            row = {'method': method}
            row.update(observables(state, tol=math.inf))
            moments.append(row)
        writer.write('observables', moments)
        return {'t': section.t, 'n': grid.n, 'x_min': grid.x_min, 'x_max': grid.x_max, 'errors': rows,
                'warnings': warnings}
