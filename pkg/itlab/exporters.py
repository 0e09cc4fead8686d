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
from typing import Dict, Iterable, List, Optional, Union

import jsonlines
import numpy as np
import pandas as pd
from pydantic import BaseModel

from itlab.errors import ExportError
from itlab.log import logger
from itlab.schema import DensityMatrixSlice, RealField, TrajectoryEnsemble
from itlab.utils.utils import hash_sha256_file, json_dumps_pretty, json_loads, read_text_from_file, save_text_to_file

FLOAT_FORMAT = '%.17g'  # round-trips IEEE-754 doubles
FORMATS = ('csv', 'json')

Exportable = Union[pd.DataFrame, List[dict], Dict[str, Iterable], RealField, DensityMatrixSlice, TrajectoryEnsemble]


def to_frame(obj: Exportable) -> pd.DataFrame:
    if isinstance(obj, pd.DataFrame):
        return obj
    if isinstance(obj, RealField):
        coordinate = 'x' if obj.representation == 'position' else 'p'
        return pd.DataFrame({coordinate: obj.lattice, 'density': obj.values})
    if isinstance(obj, DensityMatrixSlice):
        x, x_prime = np.meshgrid(obj.x, obj.x_prime, indexing='ij')
        return pd.DataFrame({
            'x': x.ravel(),
            'x_prime': x_prime.ravel(),
            're': obj.values.real.ravel(),
            'im': obj.values.imag.ravel()
        })
    if isinstance(obj, TrajectoryEnsemble):
        return pd.DataFrame({'p': obj.momenta, 'x_t': obj.positions})
    if isinstance(obj, (list, dict)):
        return pd.DataFrame(obj)
    raise ExportError(code='UnsupportedObject', message=f'Cannot export an object of type {type(obj).__name__}')


def _meta_of(obj: Exportable) -> dict:
    if isinstance(obj, RealField):
        return {'kind': 'field', 'representation': obj.representation, 't': obj.t, 'warnings': list(obj.warnings)}
    if isinstance(obj, DensityMatrixSlice):
        return {'kind': 'density_matrix', 't': obj.t, 'averaged_over': obj.averaged_over}
    if isinstance(obj, TrajectoryEnsemble):
        return {'kind': 'ensemble', 't': obj.t, 'seed': obj.seed, 'rng_algorithm': obj.rng_algorithm}
    return {'kind': 'table'}


def export(obj: Exportable, path: str, format: str = 'csv', meta: Optional[dict] = None) -> str:
    """Write a field, density-matrix slice, ensemble or table as CSV or as JSON {"meta", "data"}."""
    if format not in FORMATS:
        raise ExportError(code='UnsupportedFormat', message=f'Unknown format `{format}`; choose one of {FORMATS}')
    frame = to_frame(obj)
    try:
        if format == 'csv':
            frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
        else:
            payload = {'meta': {**_meta_of(obj), **(meta or {})}, 'data': frame.to_dict(orient='list')}
            save_text_to_file(path, json_dumps_pretty(payload) + '\n')
    except OSError as e:
        raise ExportError(code='WriteFailed', message=f'Cannot write `{path}`: {e}') from e
    return path


def read_table(path: str) -> pd.DataFrame:
    """Parse a file written by `export` back into a table."""
    if path.endswith('.json'):
        return pd.DataFrame(json_loads(read_text_from_file(path))['data'])
    return pd.read_csv(path, float_precision='round_trip')


class RunWriter:
    """Writes the files of one run under <out_dir>/<experiment>/ and records their digests."""

    def __init__(self, out_dir: str, experiment: str, format: str = 'csv'):
        self.root = os.path.realpath(os.path.join(out_dir, experiment))
        self.format = format
        self.outputs: Dict[str, str] = {}
        try:
            os.makedirs(self.root, exist_ok=True)
        except OSError as e:
            raise ExportError(code='WriteFailed', message=f'Cannot create `{self.root}`: {e}') from e

    def path_for(self, name: str) -> str:
        path = os.path.realpath(os.path.join(self.root, name))
        if os.path.commonpath([self.root, path]) != self.root:
            raise ExportError(code='PathEscape', message=f'`{name}` would be written outside {self.root}')
        return path

    def _record(self, name: str, path: str):
        self.outputs[name] = hash_sha256_file(path)
        logger.info(f'Wrote {path}')

    def write(self, stem: str, obj: Exportable, meta: Optional[dict] = None) -> str:
        name = f'{stem}.{self.format}'
        path = export(obj, self.path_for(name), self.format, meta=meta)
        self._record(name, path)
        return path

    def write_jsonl(self, name: str, records: Iterable[Union[dict, BaseModel]]) -> str:
        path = self.path_for(name)
        try:
            with jsonlines.open(path, mode='w') as writer:
                for record in records:
                    writer.write(record.model_dump(mode='json') if isinstance(record, BaseModel) else record)
        except OSError as e:
            raise ExportError(code='WriteFailed', message=f'Cannot write `{path}`: {e}') from e
        self._record(name, path)
        return path

    def write_manifest(self, manifest: BaseModel) -> str:
        path = self.path_for('manifest.json')
        try:
            save_text_to_file(path, json_dumps_pretty(manifest.model_dump(mode='json')) + '\n')
        except OSError as e:
            raise ExportError(code='WriteFailed', message=f'Cannot write `{path}`: {e}') from e
        return path
