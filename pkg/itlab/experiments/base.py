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

from abc import ABC, abstractmethod
from typing import Any, Dict

from itlab.config import ExperimentConfig, GridSpec
from itlab.errors import ConfigError
from itlab.exporters import RunWriter
from itlab.log import logger
from itlab.schema import Grid, PhysicalParams
from itlab.states import fit_grid

EXPERIMENT_REGISTRY = {}


def register_experiment(name, allow_overwrite=False):

    def decorator(cls):
        if name in EXPERIMENT_REGISTRY:
            if allow_overwrite:
                logger.warning(f'Experiment `{name}` already exists! Overwriting with class {cls}.')
            else:
                raise ValueError(f'Experiment `{name}` already exists! Please ensure that the experiment name is unique.')
        if cls.name and (cls.name != name):
            raise ValueError(f'{cls.__name__}.name="{cls.name}" conflicts with @register_experiment(name="{name}").')
        cls.name = name
        EXPERIMENT_REGISTRY[name] = cls
        return cls

    return decorator


class BaseExperiment(ABC):
    name: str = ''

    @abstractmethod
    def run(self, config: ExperimentConfig, writer: RunWriter) -> Dict[str, Any]:
        """Run the experiment, write its tables through `writer` and return a JSON-able summary."""
        raise NotImplementedError


def resolve_grid(spec: GridSpec, packets, t: float, physics: PhysicalParams, tol: float) -> Grid:
    if spec.auto:
        return fit_grid(list(packets), t, physics, tol=tol)
    return spec.to_grid(physics.hbar)


def get_experiment(name: str) -> BaseExperiment:
    if name not in EXPERIMENT_REGISTRY:
        raise ConfigError(code='UnknownExperiment',
                          message=f'Unknown experiment `{name}`; choose one of {sorted(EXPERIMENT_REGISTRY)}')
    return EXPERIMENT_REGISTRY[name]()
