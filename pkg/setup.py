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

import re

from setuptools import find_packages, setup


def get_version() -> str:
    with open('itlab/__init__.py', encoding='utf-8') as f:
        version = re.search(
            r'^__version__\s*=\s*[\'"]([^\'"]*)[\'"]',
            f.read(),
            re.MULTILINE,
        ).group(1)
    return version


def read_description() -> str:
    with open('README.md', 'r', encoding='UTF-8') as f:
        long_description = f.read()
    return long_description


setup(
    name='itlab',
    version=get_version(),
    author='The itlab authors',
    description='itlab: numerical experiments on the imaging theorem, free propagation and decoherence by resolution.',
    long_description=read_description(),
    long_description_content_type='text/markdown',
    keywords=['quantum mechanics', 'imaging theorem', 'wave packet', 'density matrix', 'decoherence'],
    packages=find_packages(exclude=['examples', 'examples.*', 'tests', 'tests.*']),
    python_requires='>=3.9',
    install_requires=[
        'numpy>=1.22',
        'scipy>=1.8',
        'pandas>=1.5',
        'pydantic>=2.3.0',
        'json5',
        'jsonlines',
        'python-dotenv',
        'pyyaml',
        'tomli; python_version < "3.11"',
    ],
    extras_require={
        'test': [
            'pytest',
        ],
    },
    entry_points={
        'console_scripts': [
            'itlab = itlab.cli:main',
        ],
    },
)
