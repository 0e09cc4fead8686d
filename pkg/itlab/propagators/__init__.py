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

from .analytic import AnalyticPropagator, gaussian_packet_at, it_envelope, propagate_gaussian_analytic
from .base import PROPAGATOR_REGISTRY, BasePropagator, get_propagator, register_propagator
from .imaging import ImagingPropagator, centred_source, propagate_it, propagate_it_sources, regime_ratio
from .kernel import KernelPropagator, kernel_phase_budget, propagate_kernel
from .metrics import (centroid_track, classicality_onset, convergence_row, it_convergence, it_error,
                      probability_transport)
from .spectral import SpectralPropagator, check_projected_support, propagate_spectral

__all__ = [
    'PROPAGATOR_REGISTRY',
    'BasePropagator',
    'register_propagator',
    'get_propagator',
    'SpectralPropagator',
    'AnalyticPropagator',
    'KernelPropagator',
    'ImagingPropagator',
    'propagate_spectral',
    'propagate_gaussian_analytic',
    'propagate_kernel',
    'propagate_it',
    'propagate_it_sources',
    'centred_source',
    'gaussian_packet_at',
    'it_envelope',
    'regime_ratio',
    'kernel_phase_budget',
    'check_projected_support',
    'it_error',
    'centroid_track',
    'convergence_row',
    'it_convergence',
    'classicality_onset',
    'probability_transport',
]
