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

import math
from typing import ClassVar, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer, field_validator, model_validator

from itlab.utils.utils import is_power_of_two

POSITION = 'position'
MOMENTUM = 'momentum'

Representation = Literal['position', 'momentum']
Method = Literal['spectral', 'analytic', 'kernel', 'it']


def _frozen_array(value, dtype) -> np.ndarray:
    arr = np.array(value, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


def _as_complex(value) -> complex:
    if isinstance(value, dict):
        return complex(float(value.get('re', 0.0)), float(value.get('im', 0.0)))
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError('A complex number given as a list must be [re, im]')
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(' ', ''))
    return complex(value)


class PhysicalParams(BaseModel):
    """Particle mass and Planck constant, both in atomic units."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    mass: float = 1.0
    hbar: float = 1.0

    @field_validator('mass', 'hbar')
    def positive_checker(cls, value: float) -> float:
        if not (value > 0 and math.isfinite(value)):
            raise ValueError(f'{value} must be a positive finite number')
        return value


class Grid(BaseModel):
    """Uniform periodic position lattice and its conjugate momentum lattice.

    Position nodes are x_j = x_min + j * dx for j = 0..n-1, momentum nodes are p_k = (k - n/2) * dp,
    and dp * dx * n = 2 * pi * hbar.
    """
    model_config = ConfigDict(frozen=True, extra='forbid')

    n: int
    x_min: float
    x_max: float
    hbar: float = 1.0

    @field_validator('n')
    def n_checker(cls, value: int) -> int:
        if not is_power_of_two(value):
            raise ValueError(f'n={value} must be a power of two and at least 2')
        return value

    @field_validator('hbar')
    def hbar_checker(cls, value: float) -> float:
        if not value > 0:
            raise ValueError(f'hbar={value} must be positive')
        return value

    @model_validator(mode='after')
    def check_bounds(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)) or self.x_max <= self.x_min:
            raise ValueError(f'Degenerate grid bounds: x_min={self.x_min}, x_max={self.x_max}')
        return self

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def dp(self) -> float:
        return 2 * math.pi * self.hbar / (self.n * self.dx)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + np.arange(self.n) * self.dx

    @property
    def p(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dp

    @property
    def p_max(self) -> float:
        return self.n // 2 * self.dp


class WaveState(BaseModel):
    """Complex amplitudes on a grid in one representation at time t."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: Grid
    amplitudes: np.ndarray
    representation: Representation = POSITION
    t: float = 0.0

    @field_validator('amplitudes', mode='before')
    def amplitudes_checker(cls, value) -> np.ndarray:
        arr = _frozen_array(value, np.complex128)
        if arr.ndim != 1:
            raise ValueError(f'amplitudes must be one-dimensional, got shape {arr.shape}')
        return arr

    @model_validator(mode='after')
    def check_length(self):
        if self.amplitudes.shape[0] != self.grid.n:
            raise ValueError(f'{self.amplitudes.shape[0]} amplitudes do not fit a grid of {self.grid.n} points')
        return self

    @property
    def lattice(self) -> np.ndarray:
        return self.grid.x if self.representation == POSITION else self.grid.p

    @property
    def spacing(self) -> float:
        return self.grid.dx if self.representation == POSITION else self.grid.dp

    def evolve(self, amplitudes: np.ndarray, representation: Optional[str] = None, t: Optional[float] = None):
        return WaveState(grid=self.grid,
                         amplitudes=amplitudes,
                         representation=representation or self.representation,
                         t=self.t if t is None else t)

    def __repr__(self):
        return f'WaveState(n={self.grid.n}, representation={self.representation}, t={self.t})'


class RealField(BaseModel):
    """A real field sampled on a lattice, e.g. a Born density, with optional warning annotations."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lattice: np.ndarray
    values: np.ndarray
    representation: Representation = POSITION
    t: float = 0.0
    grid: Optional[Grid] = None
    warnings: Tuple[str, ...] = ()

    @field_validator('lattice', 'values', mode='before')
    def array_checker(cls, value) -> np.ndarray:
        arr = _frozen_array(value, np.float64)
        if arr.ndim != 1:
            raise ValueError(f'fields must be one-dimensional, got shape {arr.shape}')
        return arr

    @model_validator(mode='after')
    def check_shapes(self):
        if self.lattice.shape != self.values.shape:
            raise ValueError('lattice and values must have the same length')
        return self

    @property
    def spacing(self) -> float:
        if self.grid is not None:
            return self.grid.dx if self.representation == POSITION else self.grid.dp
        if self.lattice.shape[0] < 2:
            return 1.0
        return float(self.lattice[1] - self.lattice[0])

    def integral(self) -> float:
        return float(np.sum(self.values) * self.spacing)


class GaussianSpec(BaseModel):
    """Analytic packet psi(x) ~ exp(-(x - center)^2 / (2 width^2)) * exp(i momentum x / hbar)."""
    model_config = ConfigDict(frozen=True, extra='forbid', arbitrary_types_allowed=True)

    center: float = 0.0
    width: float = 1.0
    momentum: float = 0.0
    weight: complex = complex(1.0, 0.0)

    @field_validator('width')
    def width_checker(cls, value: float) -> float:
        if not value > 0:
            raise ValueError(f'width={value} must be positive')
        return value

    @field_validator('weight', mode='before')
    def weight_checker(cls, value) -> complex:
        return _as_complex(value)

    @field_serializer('weight')
    def serialize_weight(self, value: complex) -> List[float]:
        return [value.real, value.imag]


class PropagationResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    state: WaveState
    method: Method
    t: float
    warnings: Tuple[str, ...] = ()


class TrajectoryEnsemble(BaseModel):
    """Classical particles launched from the origin with sampled momenta, observed at time t."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    seed: Optional[int] = None
    momenta: np.ndarray
    positions: np.ndarray
    t: float
    params: PhysicalParams = PhysicalParams()
    rng_algorithm: str = ''

    @field_validator('momenta', 'positions', mode='before')
    def array_checker(cls, value) -> np.ndarray:
        return _frozen_array(value, np.float64)

    @model_validator(mode='after')
    def check_trajectories(self):
        if self.momenta.shape != self.positions.shape:
            raise ValueError('momenta and positions must have the same length')
        if not np.array_equal(self.positions, self.momenta * self.t / self.params.mass):
            raise ValueError('positions must equal momenta * t / mass for free motion')
        return self

    @property
    def n(self) -> int:
        return int(self.momenta.shape[0])


class TwoPacketParams(BaseModel):
    """Two equal-width Gaussians centred at x1 and x2 with zero mean momentum."""
    model_config = ConfigDict(frozen=True, extra='forbid')
    min_separation_widths: ClassVar[float] = 5.0

    x1: float = -5.0
    x2: float = 5.0
    sigma: float = 1.0
    physics: PhysicalParams = PhysicalParams()

    @field_validator('sigma')
    def sigma_checker(cls, value: float) -> float:
        if not value > 0:
            raise ValueError(f'sigma={value} must be positive')
        return value

    @model_validator(mode='after')
    def check_separation(self):
        if abs(self.x2 - self.x1) < self.min_separation_widths * self.sigma:
            raise ValueError(f'Packets at {self.x1} and {self.x2} overlap at t=0; '
                             f'separate them by at least {self.min_separation_widths} widths')
        return self

    @property
    def sigma_tilde(self) -> float:
        return self.physics.hbar / self.sigma

    @property
    def centers(self) -> Tuple[float, float]:
        return self.x1, self.x2

    @property
    def initial_overlap(self) -> float:
        return math.exp(-(self.x2 - self.x1)**2 / (4 * self.sigma**2))

    @property
    def norm_squared(self) -> float:
        """Squared norm of the unnormalised sum of two unit packets."""
        return 2.0 * (1.0 + self.initial_overlap)


class DensityMatrixSlice(BaseModel):
    """rho(x, x', t) = conj(Psi(x, t)) * Psi(x', t) on a rectangular patch."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x: np.ndarray
    x_prime: np.ndarray
    values: np.ndarray
    t: float
    averaged_over: Optional[float] = None
    warnings: Tuple[str, ...] = ()

    @field_validator('x', 'x_prime', mode='before')
    def lattice_checker(cls, value) -> np.ndarray:
        return _frozen_array(value, np.float64)

    @field_validator('values', mode='before')
    def values_checker(cls, value) -> np.ndarray:
        return _frozen_array(value, np.complex128)

    @model_validator(mode='after')
    def check_shape(self):
        if self.values.shape != (self.x.shape[0], self.x_prime.shape[0]):
            raise ValueError(f'values of shape {self.values.shape} do not match the '
                             f'({self.x.shape[0]}, {self.x_prime.shape[0]}) patch')
        return self

    @property
    def is_square(self) -> bool:
        return self.x.shape == self.x_prime.shape and np.array_equal(self.x, self.x_prime)

    def diagonal(self) -> np.ndarray:
        if not self.is_square:
            raise ValueError('The diagonal is only defined on a square patch with x == x_prime')
        return np.real(np.diagonal(self.values)).copy()

    def hermiticity_residual(self) -> float:
        if not self.is_square:
            raise ValueError('Hermiticity is only defined on a square patch with x == x_prime')
        return float(np.max(np.abs(self.values - np.conj(self.values.T))))

    def trace(self) -> float:
        dx = float(self.x[1] - self.x[0]) if self.x.shape[0] > 1 else 1.0
        return float(np.sum(self.diagonal()) * dx)


class DetectorResolution(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')

    tau: float = 0.0
    delta_x: float = 0.0

    @field_validator('tau', 'delta_x')
    def non_negative_checker(cls, value: float) -> float:
        if value < 0:
            raise ValueError(f'{value} must not be negative')
        return value


class AngularBinning(BaseModel):
    """Equal-area bins on the unit sphere: n_polar bands in cos(theta) times n_azimuth sectors."""
    model_config = ConfigDict(frozen=True, extra='forbid')

    n_polar: int = 6
    n_azimuth: int = 8

    @field_validator('n_polar', 'n_azimuth')
    def positive_checker(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f'{value} bins is not a valid binning')
        return value

    @property
    def n_bins(self) -> int:
        return self.n_polar * self.n_azimuth


class AtomCloud(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')

    count: int = 10000
    radius: float = 100.0
    seed: int = 0

    @field_validator('count')
    def count_checker(cls, value: int) -> int:
        if value < 0:
            raise ValueError('count must not be negative')
        return value

    @field_validator('radius')
    def radius_checker(cls, value: float) -> float:
        if not value > 0:
            raise ValueError('radius must be positive')
        return value


class MottConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')

    n_events: int = 1000
    atoms: Optional[List[Tuple[float, float, float]]] = None
    cloud: Optional[AtomCloud] = None
    impact_parameter: float = 0.5
    chamber_radius: float = 1000.0
    seed: int = 0
    forced_direction: Optional[Tuple[float, float, float]] = None

    @field_validator('n_events')
    def n_events_checker(cls, value: int) -> int:
        if value < 0:
            raise ValueError('n_events must not be negative')
        return value

    @field_validator('impact_parameter', 'chamber_radius')
    def positive_checker(cls, value: float) -> float:
        if not value > 0:
            raise ValueError(f'{value} must be positive')
        return value

    @field_validator('forced_direction')
    def direction_checker(cls, value):
        if value is not None and not np.linalg.norm(value) > 0:
            raise ValueError('forced_direction must be a non-zero vector')
        return value

    @model_validator(mode='after')
    def check_atoms(self):
        if self.atoms is not None and self.cloud is not None:
            raise ValueError('Give either explicit atoms or a random cloud, not both')
        if self.atoms:
            radii = np.linalg.norm(np.asarray(self.atoms, dtype=float), axis=1)
            if np.any(radii > self.chamber_radius):
                raise ValueError(f'All atoms must lie within the chamber radius {self.chamber_radius}')
        if self.cloud is not None and self.cloud.radius > self.chamber_radius:
            raise ValueError(f'The atom cloud radius exceeds the chamber radius {self.chamber_radius}')
        return self


class EprState(BaseModel):
    """Two equal-mass particles stored as a product of two one-dimensional factors.

    With coordinates='jacobi' the factors are the centre-of-mass wavefunction of R = (x1 + x2) / 2 and the
    relative wavefunction of r = x1 - x2. With coordinates='particle' they are the wavefunctions of x1 and x2.
    """
    model_config = ConfigDict(frozen=True)

    x0: float = 0.0
    s_r: Optional[float] = None
    s_cm_inv: Optional[float] = None
    params: PhysicalParams = PhysicalParams()
    coordinates: Literal['jacobi', 'particle'] = 'jacobi'
    first: WaveState
    second: WaveState

    @model_validator(mode='after')
    def check_factors(self):
        for factor in (self.first, self.second):
            if factor.representation != POSITION:
                raise ValueError('EprState factors are stored in the position representation')
        return self
