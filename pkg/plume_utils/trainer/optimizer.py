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
"""Adaptive moment estimation and gradient clipping."""
import logging

import numpy as np


_log = logging.getLogger(__name__)


class Adam(object):
    """Adam over a ParameterSet, updating parameter data in place.

    :param learning_rate: step size
    :param beta1: decay of the first moment estimate
    :param beta2: decay of the second moment estimate
    :param epsilon: added to the root of the second moment
    """

    def __init__(self, learning_rate=1e-3, beta1=0.9, beta2=0.999, epsilon=1e-8):
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.m = {}
        self.v = {}
        self.t = 0

    @classmethod
    def from_config(cls, cfg):
        return cls(cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon)

    def step(self, params):
        self.t += 1
        correction1 = 1.0 - self.beta1 ** self.t
        correction2 = 1.0 - self.beta2 ** self.t
        for name, tensor in params.items():
            grad = tensor.grad
            if grad is None:
                continue
            if name not in self.m:
                self.m[name] = np.zeros_like(tensor.data)
                self.v[name] = np.zeros_like(tensor.data)
            m, v = self.m[name], self.v[name]
            m *= self.beta1
            m += (1.0 - self.beta1) * grad
            v *= self.beta2
            v += (1.0 - self.beta2) * (grad * grad)
            m_hat = m / correction1
            v_hat = v / correction2
            tensor.data -= self.learning_rate * m_hat / (np.sqrt(v_hat) + self.epsilon)


def clip_grad_norm(params, max_norm):
    """Scale every gradient so the global norm is at most max_norm.

    :returns: the norm before clipping
    """
    norm = params.global_grad_norm()
    if max_norm is not None and norm > max_norm:
        scale = max_norm / (norm + 1e-12)
        for _, tensor in params.items():
            if tensor.grad is not None:
                tensor.grad *= scale
        _log.debug("Clipped gradient norm %.4g to %.4g", norm, max_norm)
    return norm
