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

"""Experiment configuration: file loaders, environment overrides and the validated ExperimentConfig."""

import copy
import os
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from itlab.errors import ConfigError
from itlab.schema import (AngularBinning, AtomCloud, DetectorResolution, GaussianSpec, Grid, Method, MottConfig,
                          PhysicalParams, TwoPacketParams)
from itlab.settings import BOUNDARY_TOLERANCE, DEFAULT_FORMAT, DEFAULT_OUT_DIR
from itlab.utils.utils import json_loads, read_text_from_file

try:
    import tomllib  # Python 3.11+
except ImportError:
    tomllib = None

try:
    import tomli  # type: ignore
except ImportError:
    tomli = None

try:
    import yaml  # type: ignore
except ImportError:
    yaml = None

EXPERIMENTS = ('propagate', 'it-convergence', 'ensemble', 'densmat', 'mott', 'epr')
ExperimentName = Literal['propagate', 'it-convergence', 'ensemble', 'densmat', 'mott', 'epr']
ELECTRON_MASSES_PER_PROTON = 1836.15267343


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')


class GridSpec(_Section):
    """Explicit grid, or `None` everywhere to fit one to the packets."""
    n: Optional[int] = None
    x_min: Optional[float] = None
    x_max: Optional[float] = None

    @model_validator(mode='after')
    def check_grid(self):
        given = [v is not None for v in (self.n, self.x_min, self.x_max)]
        if any(given) and not all(given):
            raise ValueError('Give all of n, x_min and x_max, or none of them to fit the grid automatically')
        if all(given):
            Grid(n=self.n, x_min=self.x_min, x_max=self.x_max)
        return self

    @property
    def auto(self) -> bool:
        return self.n is None

    def to_grid(self, hbar: float) -> Grid:
        return Grid(n=self.n, x_min=self.x_min, x_max=self.x_max, hbar=hbar)


class OutputConfig(_Section):
    out_dir: str = DEFAULT_OUT_DIR
    format: Literal['csv', 'json'] = DEFAULT_FORMAT


class Tolerances(_Section):
    boundary: float = BOUNDARY_TOLERANCE
    onset: float = 1e-2

    @field_validator('boundary', 'onset')
    def positive_checker(cls, value: float) -> float:
        if not 0 < value < 1:
            raise ValueError(f'{value} must lie in (0, 1)')
        return value


class PropagateSection(_Section):
    packets: List[GaussianSpec] = Field(default_factory=lambda: [GaussianSpec()])
    t: float = 5.0
    methods: List[Method] = Field(default_factory=lambda: ['spectral', 'analytic', 'kernel'])
    reference: Method = 'spectral'
    grid: GridSpec = GridSpec(n=4096, x_min=-48.0, x_max=48.0)

    @field_validator('packets', 'methods')
    def non_empty_checker(cls, value):
        if not value:
            raise ValueError('must not be empty')
        return value


class OnsetSection(_Section):
    enabled: bool = True
    masses: List[float] = Field(default_factory=lambda: [1.0, ELECTRON_MASSES_PER_PROTON])
    hbars: List[float] = Field(default_factory=lambda: [1.0, 0.5])
    scaled_times: List[float] = Field(default_factory=lambda: [0.3, 1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1000.0])


class ItConvergenceSection(_Section):
    packet: GaussianSpec = GaussianSpec()
    times: List[float] = Field(default_factory=lambda: [10.0, 100.0, 1000.0, 10000.0])
    transport_intervals: int = 20
    onset: OnsetSection = OnsetSection()

    @field_validator('times')
    def times_checker(cls, value: List[float]) -> List[float]:
        if not value or any(t <= 0 for t in value):
            raise ValueError('times must be a non-empty list of positive numbers')
        return value


class EnsembleSection(_Section):
    packet: GaussianSpec = GaussianSpec()
    t: float = 1000.0
    n_samples: int = 100000
    sizes: List[int] = Field(default_factory=lambda: [1000, 10000, 100000])
    source_grid: GridSpec = GridSpec(n=4096, x_min=-200.0, x_max=200.0)
    quantiles: List[float] = Field(default_factory=lambda: [0.1, 0.25, 0.5, 0.75, 0.9])
    loci_times: List[float] = Field(default_factory=lambda: [100.0, 300.0, 1000.0])
    detector: DetectorResolution = DetectorResolution()

    @field_validator('n_samples')
    def n_samples_checker(cls, value: int) -> int:
        if value < 1:
            raise ValueError('n_samples must be positive')
        return value

    @field_validator('packet')
    def packet_checker(cls, value: GaussianSpec) -> GaussianSpec:
        if value.center != 0:
            raise ValueError('classical trajectories start at the origin; the packet must be centred at 0')
        return value


class DensmatSection(_Section):
    x1: float = -5.0
    x2: float = 5.0
    sigma: float = 1.0
    t_center: float = 1.0e4
    tau_periods: List[float] = Field(default_factory=lambda: [0.0, 1.0, 10.0, 100.0])
    splitting: float = 1.0
    diagonal_points: int = 1025
    # tau adds one absolute window to the tau_periods windows
    detector: DetectorResolution = DetectorResolution()

    @model_validator(mode='after')
    def check_packets(self):
        self.two_packet_params(PhysicalParams())
        return self

    def two_packet_params(self, physics: PhysicalParams) -> TwoPacketParams:
        return TwoPacketParams(x1=self.x1, x2=self.x2, sigma=self.sigma, physics=physics)

    @field_validator('tau_periods')
    def tau_checker(cls, value: List[float]) -> List[float]:
        if any(b < a for a, b in zip(value, value[1:])) or any(v < 0 for v in value):
            raise ValueError('tau_periods must be non-negative and sorted ascending')
        return value


class MottSection(_Section):
    n_events: int = 1000
    atoms: Optional[List[List[float]]] = None
    cloud: Optional[AtomCloud] = AtomCloud()
    impact_parameter: float = 0.5
    chamber_radius: float = 1000.0
    forced_direction: Optional[List[float]] = None
    binning: AngularBinning = AngularBinning()

    @model_validator(mode='after')
    def check_scenario(self):
        self.to_mott_config(seed=0)
        return self

    def to_mott_config(self, seed: int) -> MottConfig:
        atoms = None if self.atoms is None else [tuple(atom) for atom in self.atoms]
        cloud = None if atoms is not None else self.cloud
        return MottConfig(n_events=self.n_events,
                          atoms=atoms,
                          cloud=cloud,
                          impact_parameter=self.impact_parameter,
                          chamber_radius=self.chamber_radius,
                          seed=seed,
                          forced_direction=None if self.forced_direction is None else tuple(self.forced_direction))


class EprSection(_Section):
    x0: float = 5.0
    s_r: float = 0.1
    s_cm_inv: float = 50.0
    grid: GridSpec = GridSpec(n=65536, x_min=-400.0, x_max=400.0)
    n_pairs: int = 10000
    t1: float = 1000.0
    t2: float = 1000.0
    product_control: bool = True


class ExperimentConfig(_Section):
    experiment: ExperimentName
    seed: int = 0
    physics: PhysicalParams = PhysicalParams()
    output: OutputConfig = OutputConfig()
    tolerances: Tolerances = Tolerances()
    propagate: PropagateSection = PropagateSection()
    it_convergence: ItConvergenceSection = ItConvergenceSection()
    ensemble: EnsembleSection = EnsembleSection()
    densmat: DensmatSection = DensmatSection()
    mott: MottSection = MottSection()
    epr: EprSection = EprSection()

    @field_validator('seed')
    def seed_checker(cls, value: int) -> int:
        if not 0 <= value < 2**64:
            raise ValueError(f'seed={value} must be an unsigned 64-bit integer')
        return value


class RunManifest(BaseModel):
    model_config = ConfigDict(extra='forbid')

    experiment: str
    config: Dict[str, Any]
    code_version: str
    rng_algorithm: str
    seed: int
    started_at: str
    wall_time_seconds: float
    outputs: Dict[str, str] = Field(default_factory=dict)
    summary: Dict[str, Any] = Field(default_factory=dict)


def _load_json(content: str) -> Any:
    return json_loads(content)


def _load_yaml(content: str) -> Any:
    if yaml is None:
        raise ConfigError(code='MissingDependency', message='yaml is required for .yaml/.yml support: pip install pyyaml')
    return yaml.safe_load(content)


def _load_toml(content: str) -> Any:
    if tomllib is not None:
        return tomllib.loads(content)
    if tomli is not None:
        return tomli.loads(content)
    raise ConfigError(code='MissingDependency', message='toml support requires tomllib (py3.11+) or tomli')


CONFIG_LOADERS = {
    '.json': _load_json,
    '.json5': _load_json,
    '.yaml': _load_yaml,
    '.yml': _load_yaml,
    '.toml': _load_toml,
}


def load_config_file(path: str) -> Dict[str, Any]:
    ext = os.path.splitext(path)[1].lower()
    if ext not in CONFIG_LOADERS:
        raise ConfigError(code='UnsupportedFormat',
                          message=f'Cannot read `{path}`; supported extensions are {sorted(CONFIG_LOADERS)}')
    try:
        content = read_text_from_file(path)
    except OSError as e:
        raise ConfigError(code='UnreadableConfig', message=f'Cannot read `{path}`: {e}') from e
    try:
        raw = CONFIG_LOADERS[ext](content)
    except ConfigError:
        raise
    except Exception as e:
        raise ConfigError(code='MalformedConfig', message=f'Cannot parse `{path}`: {e}') from e
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ConfigError(code='MalformedConfig', message=f'`{path}` must hold a mapping at the top level')
    return raw


def _override(raw: Dict[str, Any], seed=None, out_dir=None, fmt=None) -> Dict[str, Any]:
    if seed is not None:
        raw['seed'] = seed
    if out_dir is not None or fmt is not None:
        output = dict(raw.get('output') or {})
        if out_dir is not None:
            output['out_dir'] = out_dir
        if fmt is not None:
            output['format'] = fmt
        raw['output'] = output
    return raw


def apply_env_overrides(raw: Dict[str, Any]) -> Dict[str, Any]:
    raw = copy.deepcopy(raw)
    seed = os.getenv('ITLAB_SEED')
    if seed is not None and seed.strip():
        try:
            seed = int(seed)
        except ValueError as e:
            raise ConfigError(code='InvalidSeed', message=f'ITLAB_SEED={seed!r} is not an integer') from e
    else:
        seed = None
    return _override(raw, seed=seed, out_dir=os.getenv('ITLAB_OUT_DIR') or None, fmt=os.getenv('ITLAB_FORMAT') or None)


def describe_validation_error(e: ValidationError) -> str:
    problems = []
    for error in e.errors():
        key = '.'.join(str(part) for part in error['loc']) or '<root>'
        problems.append(f'{key}: {error["msg"]}')
    return '; '.join(problems)


def build_config(raw: Optional[Dict[str, Any]] = None,
                 experiment: Optional[str] = None,
                 seed: Optional[int] = None,
                 out_dir: Optional[str] = None,
                 fmt: Optional[str] = None) -> ExperimentConfig:
    """Validate a raw mapping with precedence file < ITLAB_ environment < explicit arguments."""
    raw = apply_env_overrides(raw or {})
    if experiment is not None:
        declared = raw.get('experiment')
        if declared is not None and declared != experiment:
            raise ConfigError(code='ExperimentMismatch',
                              message=f'The config is for `{declared}` but `{experiment}` was requested')
        raw['experiment'] = experiment
    raw = _override(raw, seed=seed, out_dir=out_dir, fmt=fmt)
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(code='InvalidConfig', message=describe_validation_error(e), extra={'errors': e.errors()}) from e
