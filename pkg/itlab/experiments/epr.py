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

import pandas as pd

from itlab.config import ExperimentConfig
from itlab.errors import ConfigError
from itlab.experiments.base import BaseExperiment, register_experiment
from itlab.exporters import RunWriter
from itlab.scenarios import epr_build, epr_correlations, epr_it_consistency, epr_product
from itlab.schema import GaussianSpec

SUMMARY_KEYS = ('n_pairs', 'corr_p', 'corr_x', 'mean_offset', 'var_offset', 'var_total_momentum')


@register_experiment('epr')
class EprExperiment(BaseExperiment):

    def run(self, config: ExperimentConfig, writer: RunWriter) -> Dict[str, Any]:
        section = config.epr
        physics = config.physics
        if section.grid.auto:
            raise ConfigError(code='InvalidConfig', message='epr.grid must be given explicitly (n, x_min, x_max)')
        grid = section.grid.to_grid(physics.hbar)
        state = epr_build(section.x0, section.s_r, section.s_cm_inv, grid, physics)

        correlations = epr_correlations(state, section.n_pairs, config.seed)
        rows = [{'state': 'entangled', **{k: correlations[k] for k in SUMMARY_KEYS}}]
        writer.write('pairs', pd.DataFrame(correlations['pairs']))

        consistency = epr_it_consistency(state, section.t1, section.t2, section.n_pairs, config.seed)
        writer.write('residuals', pd.DataFrame({'residual': consistency['residual']}),
                     meta={'t1': section.t1, 't2': section.t2})

        if section.product_control:
            product = epr_product(GaussianSpec(center=-section.x0 / 2),
                                  GaussianSpec(center=section.x0 / 2), grid, physics)
            control = epr_correlations(product, section.n_pairs, config.seed)
            rows.append({'state': 'product', **{k: control[k] for k in SUMMARY_KEYS}})
        writer.write('correlations', rows)

        summary = {'correlations': rows}
        summary.update({k: v for k, v in consistency.items() if k != 'residual'})
        return summary
