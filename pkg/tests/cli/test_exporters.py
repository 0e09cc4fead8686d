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

import numpy as np
import pandas as pd
import pytest

from itlab.ensemble import transport
from itlab.errors import ExportError
from itlab.exporters import RunWriter, export, read_table, to_frame
from itlab.schema import DensityMatrixSlice, PhysicalParams, RealField
from itlab.utils.utils import hash_sha256_file, json_loads, read_text_from_file

FIELD = RealField(lattice=np.linspace(-1.0, 1.0, 7), values=np.exp(-np.linspace(-1.0, 1.0, 7)**2) / 3, t=2.5)


def test_field_round_trips_bit_exactly(tmp_path):
    path = export(FIELD, str(tmp_path / 'density.csv'))
    table = read_table(path)
    assert list(table.columns) == ['x', 'density']
    np.testing.assert_array_equal(table['x'].to_numpy(), FIELD.lattice)
    np.testing.assert_array_equal(table['density'].to_numpy(), FIELD.values)
    with open(path, 'rb') as f:
        content = f.read()
    assert b'\r\n' not in content
    assert content.startswith(b'x,density\n')


def test_json_export(tmp_path):
    path = export(FIELD, str(tmp_path / 'density.json'), format='json', meta={'run': 'test'})
    payload = json_loads(read_text_from_file(path))
    assert payload['meta']['kind'] == 'field'
    assert payload['meta']['t'] == 2.5
    assert payload['meta']['run'] == 'test'
    np.testing.assert_array_equal(read_table(path)['density'].to_numpy(), FIELD.values)


def test_density_matrix_is_long_form():
    x = np.array([0.0, 1.0])
    x_prime = np.array([-1.0, 0.0, 1.0])
    values = np.arange(6).reshape(2, 3) + 1j * np.arange(6).reshape(2, 3) / 10
    frame = to_frame(DensityMatrixSlice(x=x, x_prime=x_prime, values=values, t=1.0))
    assert list(frame.columns) == ['x', 'x_prime', 're', 'im']
    assert len(frame) == 6
    row = frame.iloc[4]
    assert (row['x'], row['x_prime'], row['re'], row['im']) == (1.0, 0.0, 4.0, 0.4)


def test_ensemble_and_tables():
    ensemble = transport([1.0, 2.0], 3.0, PhysicalParams())
    assert list(to_frame(ensemble).columns) == ['p', 'x_t']
    assert list(to_frame([{'a': 1, 'b': 2.0}]).columns) == ['a', 'b']
    with pytest.raises(ExportError):
        to_frame(42)


def test_unknown_format(tmp_path):
    with pytest.raises(ExportError):
        export(FIELD, str(tmp_path / 'density.xml'), format='xml')


def test_unwritable_path(tmp_path):
    with pytest.raises(ExportError) as e:
        export(FIELD, str(tmp_path / 'missing' / 'density.csv'))
    assert e.value.exit_code == 4


def test_run_writer(tmp_path):
    writer = RunWriter(str(tmp_path), 'densmat', 'csv')
    path = writer.write('diagonal', pd.DataFrame({'x': [0.0, 1.0], 'rho': [0.5, 0.25]}))
    assert path == os.path.join(writer.root, 'diagonal.csv')
    jsonl = writer.write_jsonl('events.jsonl', [{'index': 0}, {'index': 1}])
    assert read_text_from_file(jsonl).splitlines() == ['{"index": 0}', '{"index": 1}']
    assert writer.outputs == {
        'diagonal.csv': hash_sha256_file(path),
        'events.jsonl': hash_sha256_file(jsonl),
    }


@pytest.mark.parametrize('name', ['../escape.csv', '/tmp/escape.csv', 'a/../../escape.csv'])
def test_writes_stay_in_the_run_directory(tmp_path, name):
    writer = RunWriter(str(tmp_path), 'mott')
    with pytest.raises(ExportError) as e:
        writer.path_for(name)
    assert e.value.code == 'PathEscape'


if __name__ == '__main__':
    import tempfile
    from pathlib import Path
    with tempfile.TemporaryDirectory() as d:
        test_field_round_trips_bit_exactly(Path(d))
