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

from .base import EXPERIMENT_REGISTRY, BaseExperiment, get_experiment, register_experiment, resolve_grid
from .densmat import DensmatExperiment
from .ensemble import EnsembleExperiment
from .epr import EprExperiment
from .it_convergence import ItConvergenceExperiment
from .mott import MottExperiment
from .propagate import PropagateExperiment

__all__ = [
    'EXPERIMENT_REGISTRY',
    'BaseExperiment',
    'register_experiment',
    'get_experiment',
    'resolve_grid',
    'PropagateExperiment',
    'ItConvergenceExperiment',
    'EnsembleExperiment',
    'DensmatExperiment',
    'MottExperiment',
    'EprExperiment',
]
