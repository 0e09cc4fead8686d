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
from itlab.scenarios import mott_perception, mott_run


@register_experiment('mott')
class MottExperiment(BaseExperiment):

    def run(self, config: ExperimentConfig, writer: RunWriter) -> Dict[str, Any]:
        section = config.mott
        cfg = section.to_mott_config(config.seed)
        result = mott_run(cfg)
        writer.write_jsonl('events.jsonl', result.events)
        writer.write('stats', [result.stats])

        perception = mott_perception(cfg, section.binning)
        counts = perception['counts']
        writer.write('perception', [{
            'band': band,
            'sector': sector,
            'count': int(counts[band, sector]),
            'expected': perception['expected']
        } for band in range(counts.shape[0]) for sector in range(counts.shape[1])])

        summary = dict(result.stats)
        summary['all_collinear'] = result.stats['collinearity_violations'] == 0
        summary['uniform'] = result.stats['mean_resultant_length'] <= result.stats['uniformity_bound']
        summary['perception'] = {k: v for k, v in perception.items() if k != 'counts'}
        return summary
