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


def reference_conv(x, w):
    """Zero-padded cross-correlation by explicit kernel offsets."""
    _, _, kh, kw = w.shape
    ph, pw = kh // 2, kw // 2
    rows, cols = x.shape[2:]
    padded = np.pad(x, ((0, 0), (0, 0), (ph, ph), (pw, pw)))
    out = np.zeros((x.shape[0], w.shape[0], rows, cols))
    for dr in range(kh):
        for dc in range(kw):
            window = padded[:, :, dr:dr + rows, dc:dc + cols]
            out += np.einsum('bchw,oc->bohw', window, w[:, :, dr, dc])
    return out


def reference_sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def layer_weights(params, layer=0):
    prefix = 'layer{0}.'.format(layer)
    return {
        name[len(prefix):]: tensor.data
        for name, tensor in params.items()
        if name.startswith(prefix)
    }


def reference_st_lstm(x, h1, c_prev, m_in, w):
    conv = reference_conv
    sig = reference_sigmoid
    g = np.tanh(conv(x, w['w_xg']) + conv(h1, w['w_hg']))
    i = sig(conv(x, w['w_xi']) + conv(h1, w['w_hi']))
    f = sig(conv(x, w['w_xf']) + conv(h1, w['w_hf']))
    c = f * c_prev + i * g
    g_m = np.tanh(conv(x, w['w_xg_m']) + conv(m_in, w['w_mg']))
    i_m = sig(conv(x, w['w_xi_m']) + conv(m_in, w['w_mi']))
    f_m = sig(conv(x, w['w_xf_m']) + conv(m_in, w['w_mf']))
    m = f_m * m_in + i_m * g_m
    o = sig(
        conv(x, w['w_xo']) + conv(h1, w['w_ho']) +
        conv(c, w['w_co']) + conv(m, w['w_mo'])
    )
    h = o * np.tanh(conv(np.concatenate([c, m], axis=1), w['w_11']))
    return h, c, m


def reference_st_lstm_pp(x, h1, h2, c_prev, m_in, m2_in, w):
    conv = reference_conv
    sig = reference_sigmoid
    x_m2 = {
        gate: w.get('w_x' + gate + '_m2', w['w_x' + gate + '_m'])
        for gate in ('g', 'i', 'f')
    }
    g = np.tanh(conv(x, w['w_xg']) + conv(h1, w['w_hg']) + conv(h2, w['w_h2g']))
    i = sig(conv(x, w['w_xi']) + conv(h1, w['w_hi']) + conv(h2, w['w_h2i']))
    f = sig(conv(x, w['w_xf']) + conv(h1, w['w_hf']) + conv(h2, w['w_h2f']))
    c = f * c_prev + i * g
    g_m = np.tanh(conv(x, w['w_xg_m']) + conv(m_in, w['w_mg']))
    i_m = sig(conv(x, w['w_xi_m']) + conv(m_in, w['w_mi']))
    f_m = sig(conv(x, w['w_xf_m']) + conv(m_in, w['w_mf']))
    m = f_m * m_in + i_m * g_m
    g_m2 = np.tanh(conv(x, x_m2['g']) + conv(m2_in, w['w_m2g']))
    i_m2 = sig(conv(x, x_m2['i']) + conv(m2_in, w['w_m2i']))
    f_m2 = sig(conv(x, x_m2['f']) + conv(m2_in, w['w_m2f']))
    m2 = f_m2 * m2_in + i_m2 * g_m2
    o = sig(
        conv(x, w['w_xo']) + conv(h1, w['w_ho']) + conv(h2, w['w_h2o']) +
        conv(c, w['w_co']) + conv(m, w['w_mo']) + conv(m2, w['w_m2o'])
    )
    fused = conv(np.concatenate([c, m, m2], axis=1), w['w_11'])
    h = o * np.tanh(fused)
    return h, c, m, m2
