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
import os

import mock
import pytest
import yaml

from plume_utils.util.config import CONFIG_ENV_VAR
from plume_utils.util.config import DEFAULTS
from plume_utils.util.config import get_config_path
from plume_utils.util.config import load_yaml_config
from plume_utils.util.config import ModelConfig
from plume_utils.util.config import parse_override
from plume_utils.util.config import RunConfiguration
from plume_utils.util.config import validate_model_config
from plume_utils.util.error import ConfigurationError
from plume_utils.util.error import InvalidConfigurationError
from plume_utils.util.error import MissingConfigurationError

MOCK_RUN_CONFIG = """
---
  seed: 3
  model:
    layers: 2
    hidden_channels: 8
  sim:
    grid: [24, 24]
"""

MOCK_YAML = {
    'seed': 3,
    'model': {
        'layers': 2,
        'hidden_channels': 8,
    },
    'sim': {
        'grid': [24, 24],
    },
}


@pytest.fixture
def clean_env():
    with mock.patch.dict(os.environ, {}, clear=True):
        yield


@pytest.fixture
def mock_yaml(clean_env):
    with mock.patch(
        'plume_utils.util.config.load_yaml_config',
        return_value=MOCK_YAML,
    ) as m, \
            mock.patch('os.path.isfile', return_value=True):
        yield m


def test_load_yaml():
    mocked_open = mock.mock_open(read_data=MOCK_RUN_CONFIG)
    with mock.patch('plume_utils.util.config.open', mocked_open, create=True) as mock_open:
        actual = load_yaml_config('test')
        mock_open.assert_called_once_with("test", "r")
        assert actual == MOCK_YAML


class TestGetConfigPath(object):

    def test_explicit(self, clean_env):
        assert get_config_path('/etc/run.yaml') == '/etc/run.yaml'

    def test_env(self):
        with mock.patch.dict(os.environ, {CONFIG_ENV_VAR: '/tmp/run.yaml'}, clear=True):
            assert get_config_path() == '/tmp/run.yaml'

    def test_home(self):
        with mock.patch.dict(os.environ, {'HOME': '/home/user'}, clear=True), \
                mock.patch('os.path.isfile', return_value=True):
            assert get_config_path() == '/home/user/.plume_utils.yaml'

    def test_defaults_only(self, clean_env):
        assert get_config_path() is None


class TestParseOverride(object):

    def test_typed_values(self):
        assert parse_override('train.learning_rate=0.01') == (['train', 'learning_rate'], 0.01)
        assert parse_override('model.with_wind=true') == (['model', 'with_wind'], True)
        assert parse_override('sim.grid=[8, 8]') == (['sim', 'grid'], [8, 8])
        assert parse_override('corpus.count=null') == (['corpus', 'count'], None)

    def test_value_with_equals(self):
        assert parse_override('out=a=b') == (['out'], 'a=b')

    @pytest.mark.parametrize('override', ['seed', '=3', 'sim.grid=[1,'])
    def test_invalid(self, override):
        with pytest.raises(InvalidConfigurationError):
            parse_override(override)


class TestRunConfiguration(object):

    def test_defaults(self, clean_env):
        cfg = RunConfiguration()
        assert cfg.config_path is None
        assert cfg.as_dict() == DEFAULTS
        assert cfg.seed == 0
        assert cfg.model_config() == ModelConfig()
        assert len(cfg.corpus_config().angles) == 9
        assert cfg.clip_config() == (5, 15, 2, 36)

    def test_file(self, mock_yaml):
        cfg = RunConfiguration('run.yaml')
        assert cfg.seed == 3
        model = cfg.model_config()
        assert model.layers == 2
        assert model.hidden_channels == 8
        assert model.frame_shape == (24, 24)
        assert model.kernel_size == 3
        assert cfg.sources['model.layers'] == 'file'
        assert cfg.train_config().seed == 3

    def test_command_line_wins(self, mock_yaml):
        cfg = RunConfiguration('run.yaml', ['seed=9', 'model.variant=pred_rnn'])
        assert cfg.seed == 9
        assert cfg.sources['seed'] == 'command line'
        assert cfg.model_config().variant == 'pred_rnn'
        assert cfg.train_config().variant == 'pred_rnn'

    def test_with_wind(self, clean_env):
        cfg = RunConfiguration(overrides=['model.with_wind=true'])
        assert cfg.model_config().input_channels == 4
        assert cfg.train_config().with_wind is True

    def test_missing_file(self, clean_env):
        with mock.patch('os.path.isfile', return_value=False):
            with pytest.raises(MissingConfigurationError):
                RunConfiguration('absent.yaml')

    def test_empty_file(self, clean_env):
        with mock.patch('plume_utils.util.config.load_yaml_config', return_value=None), \
                mock.patch('os.path.isfile', return_value=True):
            assert RunConfiguration('empty.yaml').as_dict() == DEFAULTS

    @pytest.mark.parametrize('content', [
        [1, 2],
        {'model': {'unknown': 1}},
        {'unknown': 1},
        {'model': {'kernel_size': 4}},
        {'model': {'variant': 'conv_lstm'}},
        {'sim': {'source': [40, 2]}},
        {'city': {'size_range': [5, 2]}},
        {'data': {'input_frames': 0}},
        {'eval': {'threshold': 1.0}},
    ])
    def test_invalid(self, clean_env, content):
        with mock.patch('plume_utils.util.config.load_yaml_config', return_value=content), \
                mock.patch('os.path.isfile', return_value=True):
            with pytest.raises(InvalidConfigurationError):
                RunConfiguration('bad.yaml')

    def test_unparseable_file(self, clean_env):
        with mock.patch(
            'plume_utils.util.config.load_yaml_config',
            side_effect=yaml.YAMLError('bad'),
        ), mock.patch('os.path.isfile', return_value=True):
            with pytest.raises(ConfigurationError):
                RunConfiguration('bad.yaml')

    def test_invalid_override(self, clean_env):
        with pytest.raises(InvalidConfigurationError):
            RunConfiguration(overrides=['train.batch_size=0'])

    def test_equality(self, clean_env):
        assert RunConfiguration() == RunConfiguration()
        assert RunConfiguration() != RunConfiguration(overrides=['seed=1'])


class TestValidateModelConfig(object):

    def test_valid(self):
        cfg = ModelConfig()
        assert validate_model_config(cfg) is cfg

    @pytest.mark.parametrize('changes', [
        {'variant': 'other'},
        {'layers': 0},
        {'input_channels': 2},
        {'kernel_size': 2},
    ])
    def test_invalid(self, changes):
        with pytest.raises(InvalidConfigurationError):
            validate_model_config(ModelConfig()._replace(**changes))
