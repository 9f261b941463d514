# -*- coding: utf-8 -*-
# Copyright 2023 The plume-utils Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Run configuration.

A run is described by one nested mapping. Values come from the built-in
defaults, then from a YAML file, then from command line overrides; the
merged result is validated against a json schema that rejects unknown
keys. Typed, read-only views of each section are handed to the
modules doing the work.
"""
import copy
import logging
import os
from collections import namedtuple

import jsonschema
import yaml

from plume_utils.util.error import InvalidConfigurationError
from plume_utils.util.error import MissingConfigurationError


CONFIG_ENV_VAR = 'PLUME_UTILS_CONFIG'
HOME_OVERRIDE = '.plume_utils.yaml'

VARIANTS = ('st_gasnet', 'pred_rnn')
BOUNDARIES = ('absorbing', 'closed')

DEFAULTS = {
    'seed': 0,
    'out': 'plume_run',
    'sim': {
        'grid': [32, 32],
        'dx': 62.5,
        'dt': 4.0,
        'kappa': 10.0,
        'canopy_factor': 0.25,
        'frames': 50,
        'output_interval': 36.0,
        'threshold': 1e-3,
        'boundary': 'absorbing',
        'release_duration': 300.0,
        'emission_rate': 1.0,
        'source': None,
    },
    'city': {
        'buildings': 12,
        'size_range': [2, 5],
        'downstream_radius': 6,
        'max_attempts': 1000,
    },
    'corpus': {
        'angles': [180, 190, 200, 210, 220, 230, 240, 250, 260],
        'speeds': [1.0, 2.0, 3.0, 4.0, 5.0],
        'count': None,
        'workers': 1,
        'images': False,
    },
    'data': {
        'input_frames': 5,
        'horizon': 15,
        'stride': 2,
        'n_train': 36,
    },
    'model': {
        'variant': 'st_gasnet',
        'layers': 4,
        'hidden_channels': 16,
        'kernel_size': 3,
        'with_wind': False,
        'bias': False,
        'share_input_kernels': True,
    },
    'loss': {
        'pixel_normalized': True,
        'prediction_weight': 1.0,
        'decouple_m_weight': 1.0,
        'decouple_m2_weight': 1.0,
        'epsilon': 1e-8,
    },
    'train': {
        'learning_rate': 1e-3,
        'beta1': 0.9,
        'beta2': 0.999,
        'epsilon': 1e-8,
        'batch_size': 4,
        'iterations': 200,
        'clip_norm': 5.0,
        'log_every': 10,
        'checkpoint_every': 50,
    },
    'eval': {
        'threshold': 0.5,
        'tn_divisor': 4.0,
    },
}


def _section(properties, required=None):
    return {
        'type': 'object',
        'properties': properties,
        'required': required or [],
        'additionalProperties': False,
    }


_NUMBER = {'type': 'number'}
_POSITIVE = {'type': 'number', 'exclusiveMinimum': 0}
_NON_NEGATIVE = {'type': 'number', 'minimum': 0}
_COUNT = {'type': 'integer', 'minimum': 1}
_BOOL = {'type': 'boolean'}
_PAIR = {
    'type': 'array',
    'items': {'type': 'integer', 'minimum': 1},
    'minItems': 2,
    'maxItems': 2,
}

SCHEMA = _section({
    'seed': {'type': 'integer', 'minimum': 0},
    'out': {'type': 'string'},
    'sim': _section({
        'grid': _PAIR,
        'dx': _POSITIVE,
        'dt': _POSITIVE,
        'kappa': _NON_NEGATIVE,
        'canopy_factor': _NON_NEGATIVE,
        'frames': {'type': 'integer', 'minimum': 2},
        'output_interval': _POSITIVE,
        'threshold': _POSITIVE,
        'boundary': {'enum': list(BOUNDARIES)},
        'release_duration': _NON_NEGATIVE,
        'emission_rate': _NON_NEGATIVE,
        'source': {
            'oneOf': [
                {'type': 'null'},
                {
                    'type': 'array',
                    'items': {'type': 'integer', 'minimum': 0},
                    'minItems': 2,
                    'maxItems': 2,
                },
            ],
        },
    }),
    'city': _section({
        'buildings': {'type': 'integer', 'minimum': 0},
        'size_range': _PAIR,
        'downstream_radius': _NON_NEGATIVE,
        'max_attempts': _COUNT,
    }),
    'corpus': _section({
        'angles': {'type': 'array', 'items': _NUMBER, 'minItems': 1},
        'speeds': {'type': 'array', 'items': _NON_NEGATIVE, 'minItems': 1},
        'count': {'oneOf': [{'type': 'null'}, _COUNT]},
        'workers': _COUNT,
        'images': _BOOL,
    }),
    'data': _section({
        'input_frames': _COUNT,
        'horizon': {'type': 'integer', 'minimum': 0},
        'stride': _COUNT,
        'n_train': _COUNT,
    }),
    'model': _section({
        'variant': {'enum': list(VARIANTS)},
        'layers': _COUNT,
        'hidden_channels': _COUNT,
        'kernel_size': _COUNT,
        'with_wind': _BOOL,
        'bias': _BOOL,
        'share_input_kernels': _BOOL,
    }),
    'loss': _section({
        'pixel_normalized': _BOOL,
        'prediction_weight': _NON_NEGATIVE,
        'decouple_m_weight': _NON_NEGATIVE,
        'decouple_m2_weight': _NON_NEGATIVE,
        'epsilon': _POSITIVE,
    }),
    'train': _section({
        'learning_rate': _NON_NEGATIVE,
        'beta1': {'type': 'number', 'minimum': 0, 'exclusiveMaximum': 1},
        'beta2': {'type': 'number', 'minimum': 0, 'exclusiveMaximum': 1},
        'epsilon': _POSITIVE,
        'batch_size': _COUNT,
        'iterations': _COUNT,
        'clip_norm': {'oneOf': [{'type': 'null'}, _POSITIVE]},
        'log_every': _COUNT,
        'checkpoint_every': _COUNT,
    }),
    'eval': _section({
        'threshold': {'type': 'number', 'exclusiveMinimum': 0, 'exclusiveMaximum': 1},
        'tn_divisor': _POSITIVE,
    }),
})


SimConfig = namedtuple(
    'SimConfig',
    [
        'grid', 'dx', 'dt', 'kappa', 'canopy_factor', 'frames',
        'output_interval', 'threshold', 'boundary', 'release_duration',
        'emission_rate', 'source',
    ],
)
SimConfig.__new__.__defaults__ = (
    (32, 32), 62.5, 4.0, 10.0, 0.25, 50, 36.0, 1e-3, 'absorbing', 300.0,
    1.0, None,
)
SimConfig.__doc__ = """Advection-diffusion simulation settings.

* **grid** (``tuple``): rows (north-south) and columns (west-east)
* **dx** (``float``): cell size in meters
* **dt** (``float``): solver timestep in seconds
* **kappa** (``float``): isotropic eddy diffusivity in m^2/s
* **canopy_factor** (``float``): near-ground fraction of the inflow speed
* **frames** (``int``): number of output frames
* **output_interval** (``float``): seconds between output frames
* **threshold** (``float``): binarization threshold, fraction of the
  first frame peak
* **boundary** (``str``): ``absorbing`` or ``closed`` domain edges
* **release_duration** (``float``): seconds of emission from t=0
* **emission_rate** (``float``): concentration units added per second
* **source** (``tuple``): release cell (row, col), None for the centre
"""

CityConfig = namedtuple(
    'CityConfig',
    ['buildings', 'size_range', 'downstream_radius', 'max_attempts'],
)
CityConfig.__new__.__defaults__ = (12, (2, 5), 6, 1000)

CorpusConfig = namedtuple(
    'CorpusConfig',
    ['angles', 'speeds', 'count', 'workers', 'images'],
)
CorpusConfig.__new__.__defaults__ = (
    tuple(DEFAULTS['corpus']['angles']),
    tuple(DEFAULTS['corpus']['speeds']),
    None,
    1,
    False,
)

ClipConfig = namedtuple(
    'ClipConfig',
    ['input_frames', 'horizon', 'stride', 'n_train'],
)
ClipConfig.__new__.__defaults__ = (5, 15, 2, 36)

ModelConfig = namedtuple(
    'ModelConfig',
    [
        'variant', 'layers', 'hidden_channels', 'kernel_size',
        'input_channels', 'frame_shape', 'bias', 'share_input_kernels',
    ],
)
ModelConfig.__new__.__defaults__ = (
    'st_gasnet', 4, 16, 3, 1, (32, 32), False, True,
)
ModelConfig.__doc__ = """Network architecture.

* **variant** (``str``): ``st_gasnet`` (ST-LSTM++ stack) or ``pred_rnn``
  (ST-LSTM stack)
* **layers** (``int``): stacked layers L
* **hidden_channels** (``int``): channels of every hidden state
* **kernel_size** (``int``): odd spatial extent of the gate kernels
* **input_channels** (``int``): 1 without wind, 4 with wind channels
* **frame_shape** (``tuple``): frame rows and columns
* **bias** (``bool``): add per-channel gate biases
* **share_input_kernels** (``bool``): reuse the first-order zigzag input
  kernels for the second-order gate set
"""

LossConfig = namedtuple(
    'LossConfig',
    [
        'pixel_normalized', 'prediction_weight', 'decouple_m_weight',
        'decouple_m2_weight', 'epsilon',
    ],
)
LossConfig.__new__.__defaults__ = (True, 1.0, 1.0, 1.0, 1e-8)

TrainConfig = namedtuple(
    'TrainConfig',
    [
        'learning_rate', 'beta1', 'beta2', 'epsilon', 'batch_size',
        'iterations', 'clip_norm', 'seed', 'variant', 'with_wind',
        'log_every', 'checkpoint_every',
    ],
)
TrainConfig.__new__.__defaults__ = (
    1e-3, 0.9, 0.999, 1e-8, 4, 200, 5.0, 0, 'st_gasnet', False, 10, 50,
)

EvalConfig = namedtuple('EvalConfig', ['threshold', 'tn_divisor'])
EvalConfig.__new__.__defaults__ = (0.5, 4.0)


def validate_model_config(cfg):
    """Raise InvalidConfigurationError if cfg cannot describe a network."""
    if cfg.variant not in VARIANTS:
        raise InvalidConfigurationError(
            "Unknown variant {0}".format(cfg.variant),
        )
    if cfg.layers < 1:
        raise InvalidConfigurationError("At least one layer is required")
    if cfg.input_channels not in (1, 4):
        raise InvalidConfigurationError(
            "input_channels must be 1 or 4, {0} given".format(cfg.input_channels),
        )
    if cfg.kernel_size % 2 != 1:
        raise InvalidConfigurationError(
            "kernel_size must be odd, {0} given".format(cfg.kernel_size),
        )
    return cfg


def load_yaml_config(config_path):
    with open(config_path, 'r') as config_file:
        return yaml.safe_load(config_file)


def get_config_path(config_path=None):
    """Return the config file to use, or None to run on defaults.

    An explicit path wins, then $PLUME_UTILS_CONFIG, then
    $HOME/.plume_utils.yaml when it exists.
    """
    if config_path:
        return config_path
    if os.environ.get(CONFIG_ENV_VAR):
        return os.environ[CONFIG_ENV_VAR]
    if os.environ.get('HOME'):
        home_config = os.path.join(
            os.path.abspath(os.environ['HOME']),
            HOME_OVERRIDE,
        )
        if os.path.isfile(home_config):
            return home_config
    return None


def parse_override(override):
    """Parse a ``section.key=value`` string into (path, value).

    The value is read as YAML so numbers, booleans, lists and null keep
    their type.
    """
    if '=' not in override:
        raise InvalidConfigurationError(
            "Override {0} is not of the form section.key=value".format(override),
        )
    key, raw_value = override.split('=', 1)
    path = [part for part in key.strip().split('.') if part]
    if not path:
        raise InvalidConfigurationError("Empty key in override {0}".format(override))
    try:
        value = yaml.safe_load(raw_value)
    except yaml.YAMLError:
        raise InvalidConfigurationError(
            "Unparseable value in override {0}".format(override),
        )
    return path, value


def deep_merge(base, update, prefix, sources, origin):
    """Merge update into a copy of base, recording the origin of each leaf."""
    merged = copy.deepcopy(base)
    for key, value in update.items():
        path = prefix + (key,)
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value, path, sources, origin)
        else:
            merged[key] = copy.deepcopy(value)
            sources['.'.join(path)] = origin
    return merged


class RunConfiguration(object):
    """Validated configuration for one pipeline run.

    :param config_path: YAML file to read, see :func:`get_config_path`
    :type config_path: string
    :param overrides: ``section.key=value`` strings, highest precedence
    :type overrides: list
    """

    def __init__(self, config_path=None, overrides=None):
        self.log = logging.getLogger(self.__class__.__name__)
        self.config_path = get_config_path(config_path)
        self.sources = {}
        self.data = None
        self.load(overrides or [])

    def __eq__(self, other):
        return self.data == other.data

    def __ne__(self, other):
        return not self.__eq__(other)

    def load(self, overrides):
        data = copy.deepcopy(DEFAULTS)
        if self.config_path:
            data = deep_merge(
                data,
                self._read_file(self.config_path),
                (),
                self.sources,
                'file',
            )
        for override in overrides:
            path, value = parse_override(override)
            update = value
            for key in reversed(path):
                update = {key: update}
            data = deep_merge(data, update, (), self.sources, 'command line')
        self.validate(data)
        self.data = data
        for key, origin in sorted(self.sources.items()):
            self.log.info("Config %s set from %s", key, origin)

    def _read_file(self, config_path):
        self.log.debug("Loading configuration from %s", config_path)
        if not os.path.isfile(config_path):
            raise MissingConfigurationError(
                "Configuration file {0} does not exist".format(config_path),
            )
        try:
            content = load_yaml_config(config_path)
        except yaml.YAMLError as e:
            raise InvalidConfigurationError(
                "Invalid configuration file {0}: {1}".format(config_path, e),
            )
        if content is None:
            return {}
        if not isinstance(content, dict):
            raise InvalidConfigurationError(
                "Invalid configuration file {0}: a mapping is required"
                .format(config_path),
            )
        return content

    def validate(self, data):
        try:
            jsonschema.validate(data, SCHEMA)
        except jsonschema.ValidationError as e:
            raise InvalidConfigurationError(
                "Invalid configuration at {path}: {msg}".format(
                    path='.'.join(str(p) for p in e.absolute_path) or '<root>',
                    msg=e.message,
                )
            )
        if data['model']['kernel_size'] % 2 != 1:
            raise InvalidConfigurationError("model.kernel_size must be odd")
        low, high = data['city']['size_range']
        if low > high:
            raise InvalidConfigurationError(
                "city.size_range lower bound exceeds upper bound",
            )
        source = data['sim']['source']
        if source is not None:
            rows, cols = data['sim']['grid']
            if source[0] >= rows or source[1] >= cols:
                raise InvalidConfigurationError("sim.source is outside the grid")

    @property
    def seed(self):
        return self.data['seed']

    @property
    def out(self):
        return self.data['out']

    def sim_config(self):
        sim = self.data['sim']
        return SimConfig(
            grid=tuple(sim['grid']),
            dx=float(sim['dx']),
            dt=float(sim['dt']),
            kappa=float(sim['kappa']),
            canopy_factor=float(sim['canopy_factor']),
            frames=sim['frames'],
            output_interval=float(sim['output_interval']),
            threshold=float(sim['threshold']),
            boundary=sim['boundary'],
            release_duration=float(sim['release_duration']),
            emission_rate=float(sim['emission_rate']),
            source=tuple(sim['source']) if sim['source'] is not None else None,
        )

    def city_config(self):
        city = self.data['city']
        return CityConfig(
            buildings=city['buildings'],
            size_range=tuple(city['size_range']),
            downstream_radius=float(city['downstream_radius']),
            max_attempts=city['max_attempts'],
        )

    def corpus_config(self):
        corpus = self.data['corpus']
        return CorpusConfig(
            angles=tuple(float(a) for a in corpus['angles']),
            speeds=tuple(float(s) for s in corpus['speeds']),
            count=corpus['count'],
            workers=corpus['workers'],
            images=corpus['images'],
        )

    def clip_config(self):
        return ClipConfig(**self.data['data'])

    def model_config(self):
        model = self.data['model']
        return validate_model_config(ModelConfig(
            variant=model['variant'],
            layers=model['layers'],
            hidden_channels=model['hidden_channels'],
            kernel_size=model['kernel_size'],
            input_channels=4 if model['with_wind'] else 1,
            frame_shape=tuple(self.data['sim']['grid']),
            bias=model['bias'],
            share_input_kernels=model['share_input_kernels'],
        ))

    def loss_config(self):
        return LossConfig(**self.data['loss'])

    def train_config(self):
        train = self.data['train']
        return TrainConfig(
            seed=self.seed,
            variant=self.data['model']['variant'],
            with_wind=self.data['model']['with_wind'],
            **train
        )

    def eval_config(self):
        return EvalConfig(**self.data['eval'])

    def as_dict(self):
        return copy.deepcopy(self.data)

    def __repr__(self):
        return "RunConfiguration: path {0}, overrides {1}".format(
            self.config_path,
            self.sources,
        )
