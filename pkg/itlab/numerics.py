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
"""Grids, unitary position/momentum transforms and inner products.

The discrete transform approximates the continuum convention

    psi~(p) = (2 pi hbar)^(-1/2) * integral psi(x) exp(-i p x / hbar) dx

on the lattices of a `Grid`. Because p_k = (k - n/2) dp, the centring is absorbed into an alternating sign
on the input and a phase exp(-i p x_min / hbar) on the output, so no fftshift is needed.
"""

import math

import numpy as np
from pydantic import ValidationError
from scipy import fft as sp_fft
from scipy.signal import czt

from itlab.errors import ContractError, RegimeError
from itlab.log import logger
from itlab.schema import MOMENTUM, POSITION, Grid, WaveState
from itlab.settings import BOUNDARY_TOLERANCE


def make_grid(n: int, x_min: float, x_max: float, hbar: float = 1.0) -> Grid:
    try:
        return Grid(n=n, x_min=x_min, x_max=x_max, hbar=hbar)
    except ValidationError as e:
        raise ContractError(code='InvalidGrid', message=str(e)) from e


def _alternating(n: int) -> np.ndarray:
    signs = np.ones(n)
    signs[1::2] = -1.0
    return signs


def _require(s: WaveState, representation: str):
    if s.representation != representation:
        raise ContractError(code='WrongRepresentation',
                            message=f'Expected a state in the {representation} representation, '
                            f'got {s.representation}')


def to_momentum(s: WaveState) -> WaveState:
    _require(s, POSITION)
    g = s.grid
    spectrum = sp_fft.fft(s.amplitudes * _alternating(g.n))
    amplitudes = spectrum * np.exp(-1j * g.p * g.x_min / g.hbar) * (g.dx / math.sqrt(2 * math.pi * g.hbar))
    return s.evolve(amplitudes, representation=MOMENTUM)


def to_position(s: WaveState) -> WaveState:
    _require(s, MOMENTUM)
    g = s.grid
    values = sp_fft.ifft(s.amplitudes * np.exp(1j * g.p * g.x_min / g.hbar))
    amplitudes = values * _alternating(g.n) * (g.n * g.dp / math.sqrt(2 * math.pi * g.hbar))
    return s.evolve(amplitudes, representation=POSITION)


def as_position(s: WaveState) -> WaveState:
    return s if s.representation == POSITION else to_position(s)


def as_momentum(s: WaveState) -> WaveState:
    return s if s.representation == MOMENTUM else to_momentum(s)


def _check_compatible(a: WaveState, b: WaveState):
    if a.grid != b.grid:
        raise ContractError(code='GridMismatch', message=f'{a.grid} differs from {b.grid}')
    if a.representation != b.representation:
        raise ContractError(code='WrongRepresentation',
                            message=f'Cannot combine {a.representation} and {b.representation} states')


def inner(a: WaveState, b: WaveState) -> complex:
    """<a|b> by the rectangle rule, which is exact for the trigonometric interpolants of the samples."""
    _check_compatible(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes) * a.spacing)


def norm(s: WaveState) -> float:
    return float(np.sum(np.abs(s.amplitudes)**2) * s.spacing)


def normalise(s: WaveState) -> WaveState:
    value = norm(s)
    if not value > 0:
        raise ContractError(code='ZeroNorm', message='Cannot normalise a state with zero norm')
    return s.evolve(s.amplitudes / math.sqrt(value))


def momentum_amplitudes_at(s: WaveState, p_start: float, dp: float, m: int) -> np.ndarray:
    """Evaluate psi~ at p_start + k * dp, k = 0..m-1, directly from the position samples.

    This is the continuum transform restricted to the band-limited interpolant of the samples, computed with a
    chirp-z transform in O((n + m) log(n + m)).
    """
    s = as_position(s)
    g = s.grid
    a = np.exp(1j * p_start * g.dx / g.hbar)
    w = np.exp(-1j * dp * g.dx / g.hbar)
    values = czt(s.amplitudes, m=m, w=w, a=a)
    p = p_start + np.arange(m) * dp
    return values * np.exp(-1j * p * g.x_min / g.hbar) * (g.dx / math.sqrt(2 * math.pi * g.hbar))


def position_amplitudes_at(s: WaveState, x_start: float, dx: float, m: int) -> np.ndarray:
    """Evaluate psi at x_start + k * dx, k = 0..m-1, from the momentum samples (the inverse of the above)."""
    s = as_momentum(s)
    g = s.grid
    p0 = g.p[0]
    a = np.exp(-1j * x_start * g.dp / g.hbar)
    w = np.exp(1j * dx * g.dp / g.hbar)
    values = czt(s.amplitudes, m=m, w=w, a=a)
    x = x_start + np.arange(m) * dx
    return values * np.exp(1j * p0 * x / g.hbar) * (g.dp / math.sqrt(2 * math.pi * g.hbar))


def boundary_amplitude(s: WaveState) -> float:
    amplitudes = np.abs(s.amplitudes)
    return float(max(amplitudes[0], amplitudes[-1]))


def check_boundary(s: WaveState, tol: float = BOUNDARY_TOLERANCE, strict: bool = True, what: str = 'state') -> float:
    """Refuse (strict) or warn when the amplitude at a grid edge exceeds tol; the transform is periodic."""
    amplitude = boundary_amplitude(s)
    if amplitude > tol:
        message = (f'The {what} reaches the {s.representation} grid edge with amplitude {amplitude:.3g} > {tol:.3g}; '
                   f'enlarge the grid (x in [{s.grid.x_min}, {s.grid.x_max}], n={s.grid.n})')
        if strict:
            raise RegimeError(code='GridEdge',
                              message=message,
                              extra={
                                  'boundary_amplitude': amplitude,
                                  'tolerance': tol,
                                  'representation': s.representation
                              })
        logger.warning(message)
    return amplitude


def support_radius(s: WaveState, tol: float = BOUNDARY_TOLERANCE) -> float:
    amplitudes = np.abs(s.amplitudes)
    peak = amplitudes.max()
    if peak == 0:
        return 0.0
    return float(np.max(np.abs(s.lattice[amplitudes > tol * peak])))
