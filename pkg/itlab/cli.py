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

"""Command-line runner: one subcommand per experiment plus `validate-config`."""

import argparse
import sys
import time
from datetime import datetime, timezone
from typing import List, Optional

try:
    from dotenv import load_dotenv
except ImportError:
    load_dotenv = None

from itlab import __version__
from itlab.config import EXPERIMENTS, ExperimentConfig, RunManifest, build_config, load_config_file
from itlab.errors import ConfigError, ITLabError
from itlab.experiments import get_experiment
from itlab.exporters import RunWriter
from itlab.log import logger
from itlab.settings import RNG_ALGORITHM
from itlab.utils.utils import json_dumps_compact, json_dumps_pretty, json_loads, print_traceback

VALIDATE = 'validate-config'


def _add_common(parser: argparse.ArgumentParser, config_required: bool = False):
    parser.add_argument(
        '-c',
        '--config',
        type=str,
        default=None,
        required=config_required,
        help='Experiment config file (.json, .json5, .yaml, .yml or .toml).',
    )
    parser.add_argument(
        '--seed',
        type=int,
        default=None,
        help='Unsigned 64-bit seed; overrides the config file and ITLAB_SEED.',
    )
    parser.add_argument(
        '-o',
        '--out',
        type=str,
        default=None,
        help='Output directory; files go to <out>/<experiment>/.',
    )
    parser.add_argument(
        '-f',
        '--format',
        type=str,
        choices=['csv', 'json'],
        default=None,
        help='Table format. Default: csv',
    )


def parse_args(argv: Optional[List[str]] = None):
    parser = argparse.ArgumentParser(prog='itlab', description='Numerical experiments on the imaging theorem.')
    subparsers = parser.add_subparsers(dest='command', required=True)
    for name in EXPERIMENTS:
        _add_common(subparsers.add_parser(name, help=f'Run the {name} experiment.'))
    _add_common(subparsers.add_parser(VALIDATE, help='Validate a config file and print it normalised.'),
                config_required=True)
    return parser.parse_args(argv)


def run(config: ExperimentConfig) -> RunManifest:
    """Execute the configured experiment, write its tables and the manifest."""
    experiment = get_experiment(config.experiment)
    writer = RunWriter(config.output.out_dir, config.experiment, config.output.format)
    started_at = datetime.now(timezone.utc).isoformat()
    start = time.perf_counter()
    logger.info(f'Running `{config.experiment}` with seed {config.seed} into {writer.root}')
    summary = experiment.run(config, writer)
    manifest = RunManifest(experiment=config.experiment,
                           config=config.model_dump(mode='json'),
                           code_version=__version__,
                           rng_algorithm=RNG_ALGORITHM,
                           seed=config.seed,
                           started_at=started_at,
                           wall_time_seconds=time.perf_counter() - start,
                           outputs=dict(writer.outputs),
                           summary=json_loads(json_dumps_compact(summary)))
    writer.write_manifest(manifest)
    return manifest


def main(argv: Optional[List[str]] = None) -> int:
    if load_dotenv:
        load_dotenv()
    args = parse_args(argv)
    try:
        raw = load_config_file(args.config) if args.config else {}
        experiment = None if args.command == VALIDATE else args.command
        config = build_config(raw, experiment=experiment, seed=args.seed, out_dir=args.out, fmt=args.format)
        if args.command == VALIDATE:
            print(json_dumps_pretty(config.model_dump(mode='json')))
            return 0
        manifest = run(config)
        logger.info(f'Finished `{manifest.experiment}` in {manifest.wall_time_seconds:.2f} s; '
                    f'{len(manifest.outputs)} file(s) written')
        return 0
    except ITLabError as e:
        logger.error(f'[{type(e).__name__}] {e.code}: {e.message}')
        if not isinstance(e, ConfigError):
            print_traceback()
        return e.exit_code
    except Exception:
        print_traceback()
        return 1


if __name__ == '__main__':
    sys.exit(main())
