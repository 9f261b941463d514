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
"""Differentiable primitives used by the recurrent cells and the loss."""
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from plume_utils.tensor.tensor import Tensor
from plume_utils.util.error import ContractError
from plume_utils.util.error import ShapeError


def _check_same_shape(op_name, *tensors):
    shapes = set(t.shape for t in tensors)
    if len(shapes) != 1:
        raise ShapeError(
            "{0} needs equal shapes, got {1}".format(
                op_name,
                [t.shape for t in tensors],
            ),
        )


def sigmoid(x):
    # tanh form does not overflow for large negative inputs
    out = 0.5 * (np.tanh(0.5 * x.data) + 1.0)

    def backward(g):
        return (g * out * (1.0 - out),)

    return Tensor.from_op(out, (x,), backward)


def tanh(x):
    out = np.tanh(x.data)

    def backward(g):
        return (g * (1.0 - out * out),)

    return Tensor.from_op(out, (x,), backward)


def hadamard(a, b):
    _check_same_shape('hadamard', a, b)
    return a * b


def add(*tensors):
    _check_same_shape('add', *tensors)
    out = tensors[0]
    for tensor in tensors[1:]:
        out = out + tensor
    return out


def square(x):
    def backward(g):
        return (2.0 * g * x.data,)

    return Tensor.from_op(x.data * x.data, (x,), backward)


def sqrt(x):
    """Square root; the gradient is taken as zero where the result is zero."""
    out = np.sqrt(x.data)

    def backward(g):
        safe = out > 0
        grad = np.zeros_like(out)
        np.divide(0.5 * g, out, out=grad, where=safe)
        return (grad,)

    return Tensor.from_op(out, (x,), backward)


def concat(tensors, axis=1):
    tensors = list(tensors)
    if not tensors:
        raise ContractError("concat needs at least one tensor")
    ndim = tensors[0].ndim
    axis = axis % ndim
    reference = tensors[0].shape[:axis] + tensors[0].shape[axis + 1:]
    for tensor in tensors[1:]:
        if tensor.ndim != ndim or tensor.shape[:axis] + tensor.shape[axis + 1:] != reference:
            raise ShapeError(
                "Cannot concatenate shapes {0} along axis {1}".format(
                    [t.shape for t in tensors],
                    axis,
                ),
            )
    offsets = np.cumsum([t.shape[axis] for t in tensors])[:-1]

    def backward(g):
        return tuple(np.split(g, offsets, axis=axis))

    return Tensor.from_op(
        np.concatenate([t.data for t in tensors], axis=axis),
        tensors,
        backward,
    )


def concat_channels(*tensors):
    return concat(tensors, axis=1)


def slice_axis(x, start, stop, axis=1):
    axis = axis % x.ndim
    if not 0 <= start < stop <= x.shape[axis]:
        raise ShapeError(
            "Slice [{0}:{1}] out of range for axis {2} of {3}".format(
                start, stop, axis, x.shape,
            ),
        )
    index = [slice(None)] * x.ndim
    index[axis] = slice(start, stop)
    index = tuple(index)

    def backward(g):
        grad = np.zeros_like(x.data)
        grad[index] = g
        return (grad,)

    return Tensor.from_op(x.data[index].copy(), (x,), backward)


def split(x, sizes, axis=1):
    """Split x along axis into consecutive pieces of the given sizes."""
    if sum(sizes) != x.shape[axis]:
        raise ShapeError(
            "Sizes {0} do not add up to axis {1} of {2}".format(sizes, axis, x.shape),
        )
    pieces = []
    start = 0
    for size in sizes:
        pieces.append(slice_axis(x, start, start + size, axis))
        start += size
    return pieces


def conv2d(x, kernel):
    """Zero same-padded 2-D cross-correlation.

    :param x: input of shape [B, Cin, H, W]
    :param kernel: weights of shape [Cout, Cin, kh, kw], kh and kw odd
    :returns: Tensor of shape [B, Cout, H, W]
    """
    if x.ndim != 4 or kernel.ndim != 4:
        raise ShapeError(
            "conv2d needs 4-d input and kernel, got {0} and {1}".format(
                x.shape,
                kernel.shape,
            ),
        )
    _, c_in, _, _ = x.shape
    c_out, k_in, kh, kw = kernel.shape
    if c_in != k_in:
        raise ShapeError(
            "conv2d channel mismatch: input has {0}, kernel expects {1}".format(
                c_in,
                k_in,
            ),
        )
    if kh % 2 == 0 or kw % 2 == 0:
        raise ShapeError("conv2d kernel extent must be odd, got {0}x{1}".format(kh, kw))
    pad = ((0, 0), (0, 0), (kh // 2, kh // 2), (kw // 2, kw // 2))
    windows = sliding_window_view(np.pad(x.data, pad), (kh, kw), axis=(2, 3))
    out = np.tensordot(windows, kernel.data, axes=([1, 4, 5], [1, 2, 3]))
    out = np.ascontiguousarray(out.transpose(0, 3, 1, 2))

    def backward(g):
        grad_kernel = np.tensordot(g, windows, axes=([0, 2, 3], [0, 2, 3]))
        g_windows = sliding_window_view(np.pad(g, pad), (kh, kw), axis=(2, 3))
        flipped = kernel.data[:, :, ::-1, ::-1]
        grad_x = np.tensordot(g_windows, flipped, axes=([1, 4, 5], [0, 2, 3]))
        return np.ascontiguousarray(grad_x.transpose(0, 3, 1, 2)), grad_kernel

    return Tensor.from_op(out, (x, kernel), backward)


POINTWISE = {
    'sigmoid': sigmoid,
    'tanh': tanh,
    'hadamard': hadamard,
    'add': add,
    'concat_channels': concat_channels,
}


def pointwise(op, *args):
    """Dispatch an elementwise operation by name."""
    try:
        fn = POINTWISE[op]
    except KeyError:
        raise ContractError(
            "Unknown pointwise operation {0}, expected one of {1}".format(
                op,
                sorted(POINTWISE),
            ),
        )
    return fn(*args)
