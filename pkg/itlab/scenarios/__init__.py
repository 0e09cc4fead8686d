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

from .epr import epr_build, epr_correlations, epr_it_consistency, epr_product, joint_amplitudes, sample_pairs
from .mott import (AngularBinning, MottEvent, MottRun, atom_positions, bin_directions, mott_perception, mott_run,
                   rayleigh_test, sample_directions)

__all__ = [
    'mott_run',
    'mott_perception',
    'MottEvent',
    'MottRun',
    'AngularBinning',
    'atom_positions',
    'sample_directions',
    'bin_directions',
    'rayleigh_test',
    'epr_build',
    'epr_product',
    'joint_amplitudes',
    'sample_pairs',
    'epr_correlations',
    'epr_it_consistency',
]
