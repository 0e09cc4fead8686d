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

import numpy as np
import pandas as pd

from itlab.config import ExperimentConfig
from itlab.densmat import (average_diagonal, default_diagonal_lattice, measure_oscillation_period, oscillation_period,
                           representative_point, rho_diag_it, rho_offdiag_it, suppression_report, time_average,
                           to_seconds)
from itlab.experiments.base import BaseExperiment, register_experiment
from itlab.exporters import RunWriter

SLICE_POINTS = 65
PATCH_POINTS = 33


@register_experiment('densmat')
class DensmatExperiment(BaseExperiment):

    def run(self, config: ExperimentConfig, writer: RunWriter) -> Dict[str, Any]:
        section = config.densmat
        params = section.two_packet_params(config.physics)
        t_c = section.t_center

        rx, rxp = representative_point(params, t_c, section.splitting)
        predicted = oscillation_period(params, rx, rxp, t_c)
        measured = measure_oscillation_period(params, rx, rxp, t_c)
        period = {
            'x': rx,
            'x_prime': rxp,
            't_osc': predicted,
            't_osc_measured': measured,
            'relative_error': abs(measured - predicted) / predicted,
            't_osc_seconds': to_seconds(predicted),
        }
        writer.write('period', [period])

        taus = [k * predicted for k in section.tau_periods]
        if section.detector.tau > 0:
            taus = sorted(taus + [section.detector.tau])
        x = default_diagonal_lattice(params, t_c, points=section.diagonal_points)
        rows = suppression_report(params, t_c, taus, x=x, splitting=section.splitting)
        writer.write('suppression', rows)

        longest = max(taus, default=0.0)
        averaged = average_diagonal(params, t_c, longest, x)
        writer.write('diagonal',
                     pd.DataFrame({
                         'x': x,
                         'instantaneous': rho_diag_it(params, t_c, x).values,
                         'averaged': averaged['incoherent'] + averaged['interference'],
                         'two_peak': averaged['two_peak'],
                     }),
                     meta={'t': t_c, 'tau': longest})

        coarse = np.linspace(x[0], x[-1], SLICE_POINTS)
        writer.write('offdiag', rho_offdiag_it(params, t_c, coarse, coarse))
        half = 0.1 * params.sigma_tilde * t_c / params.physics.mass
        offsets = np.linspace(-half, half, PATCH_POINTS)
        writer.write('offdiag_patch_averaged', time_average(params, t_c, longest, rx + offsets, rxp + offsets))

        return {'period': period, 'suppression': rows}
