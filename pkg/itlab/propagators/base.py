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
from typing import Sequence

from itlab.errors import ContractError
from itlab.log import logger
from itlab.schema import GaussianSpec, Grid, PhysicalParams, PropagationResult
from itlab.settings import BOUNDARY_TOLERANCE

PROPAGATOR_REGISTRY = {}


def register_propagator(name, allow_overwrite=False):

    def decorator(cls):
        if name in PROPAGATOR_REGISTRY:
            if allow_overwrite:
                logger.warning(f'Propagator `{name}` already exists! Overwriting with class {cls}.')
            else:
                raise ValueError(f'Propagator `{name}` already exists! Please ensure that the method name is unique.')
        if cls.name and (cls.name != name):
            raise ValueError(f'{cls.__name__}.name="{cls.name}" conflicts with @register_propagator(name="{name}").')
        cls.name = name
        PROPAGATOR_REGISTRY[name] = cls
        return cls

    return decorator


class BasePropagator(ABC):
    """A route from Gaussian initial packets at t = 0 to the wavefunction at time t on a target grid."""
    name: str = ''

    @abstractmethod
    def propagate(self,
                  specs: Sequence[GaussianSpec],
                  t: float,
                  grid: Grid,
                  params: PhysicalParams,
                  tol: float = BOUNDARY_TOLERANCE) -> PropagationResult:
        """`tol` is the largest amplitude the packets may leave at a grid edge."""
        raise NotImplementedError


def get_propagator(method: str) -> BasePropagator:
    if method not in PROPAGATOR_REGISTRY:
        raise ContractError(code='UnknownMethod',
                            message=f'Unknown propagation method `{method}`; '
                            f'choose one of {sorted(PROPAGATOR_REGISTRY)}')
    return PROPAGATOR_REGISTRY[method]()
