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

import os
from typing import Literal, Optional

# Settings for numerics
BOUNDARY_TOLERANCE: float = float(os.getenv('ITLAB_BOUNDARY_TOLERANCE',
                                            1e-12))  # Largest amplitude tolerated at a grid edge
NORM_TOLERANCE: float = float(os.getenv('ITLAB_NORM_TOLERANCE', 1e-10))
MAX_GRID_POINTS: int = int(os.getenv('ITLAB_MAX_GRID_POINTS', 2**20))

# Settings for propagators
IT_REGIME_THRESHOLD: float = float(os.getenv('ITLAB_IT_REGIME_THRESHOLD',
                                             1e2))  # hbar * t / (mass * sigma^2) above which the IT regime is assumed
KERNEL_BLOCK_ROWS: int = int(os.getenv('ITLAB_KERNEL_BLOCK_ROWS', 256))

# Settings for density matrices
NODES_PER_PERIOD: int = int(os.getenv('ITLAB_NODES_PER_PERIOD', 64))
MAX_AVERAGE_NODES: int = int(os.getenv('ITLAB_MAX_AVERAGE_NODES', 2**21))

# Settings for sampling
SAMPLE_CHUNK: int = int(os.getenv('ITLAB_SAMPLE_CHUNK', 65536))  # Samples per independent random stream
RNG_ALGORITHM: str = 'numpy.Philox+SeedSequence'

# Settings for parallel execution
_max_workers = os.getenv('ITLAB_MAX_WORKERS', '')
MAX_WORKERS: Optional[int] = int(_max_workers) if _max_workers.strip() else None

# Settings for outputs
DEFAULT_OUT_DIR: str = os.getenv('ITLAB_DEFAULT_OUT_DIR', 'workspace/runs')
DEFAULT_FORMAT: Literal['csv', 'json'] = os.getenv('ITLAB_DEFAULT_FORMAT', 'csv')
