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
import numpy as np
import pytest

from plume_utils.tensor.gradcheck import gradcheck
from plume_utils.tensor.gradcheck import relative_error
from plume_utils.tensor.parameters import ParameterSet
from plume_utils.util.error import ContractError


@pytest.fixture
def params():
    return ParameterSet([
        ('layer0.w_xg', np.arange(6, dtype=np.float32).reshape(2, 3)),
        ('head.w', np.ones((1, 2, 1, 1), dtype=np.float32)),
    ])


class TestParameterSet(object):

    def test_order_and_grad(self, params):
        assert params.names() == ['layer0.w_xg', 'head.w']
        assert all(t.requires_grad for _, t in params.items())
        assert params.count() == 8

    def test_duplicate_name(self, params):
        with pytest.raises(ContractError):
            params.add('head.w', np.zeros(1))

    def test_unknown_name(self, params):
        with pytest.raises(ContractError):
            params['missing']
        assert params.get('missing') is None

    def test_copy_is_independent(self, params):
        clone = params.copy()
        assert clone == params
        clone['head.w'].data[...] = 2.0
        assert clone != params

    def test_checksum_tracks_values(self, params):
        before = params.checksum()
        assert before == params.copy().checksum()
        params['head.w'].data[0, 0, 0, 0] += 1.0
        assert params.checksum() != before

    def test_astype(self, params):
        wide = params.astype(np.float64)
        assert wide['head.w'].dtype == np.float64
        assert wide != params

    def test_global_grad_norm(self, params):
        params['head.w'].grad[...] = 3.0
        params['layer0.w_xg'].grad[0, 0] = 4.0
        # sqrt(2 * 9 + 16)
        assert params.global_grad_norm() == pytest.approx(np.sqrt(34.0))


class TestGradcheck(object):

    def test_relative_error(self):
        assert relative_error([0.0], [0.0]) == 0.0
        assert relative_error([1.0, 0.0], [1.0, 0.0]) == 0.0
        assert relative_error([1.0], [-1.0]) == 1.0

    def test_exact_gradient(self):
        params = ParameterSet({'w': np.array([1.0, 2.0, 3.0])})
        errors = gradcheck(lambda p: (p['w'] * p['w']).sum(), params)
        assert errors['w'] < 1e-8
        np.testing.assert_allclose(params['w'].grad, [2.0, 4.0, 6.0])

    def test_sub_sampling(self):
        params = ParameterSet({'w': np.linspace(-1.0, 1.0, 50)})
        counted = []

        def fn(p):
            counted.append(1)
            return (p['w'] * p['w'] * p['w']).sum()

        errors = gradcheck(fn, params, max_entries=5)
        assert errors['w'] < 1e-6
        # one analytic pass plus two evaluations per sampled entry
        assert len(counted) == 1 + 2 * 5

    def test_restores_values(self):
        values = np.array([0.5, -0.25])
        params = ParameterSet({'w': values.copy()})
        gradcheck(lambda p: (p['w'] * p['w']).sum(), params)
        np.testing.assert_array_equal(params['w'].data, values)
