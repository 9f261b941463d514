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
"""Dense tensors with reverse-mode gradients.

A :class:`Tensor` wraps a numpy array. Tensors produced by an operation
remember their parents and a backward function mapping the gradient of
the output to one gradient per parent; :meth:`Tensor.backward` walks
that graph in reverse topological order and accumulates ``grad`` on the
leaves that require it.
"""
import contextlib

import numpy as np

from plume_utils.util.error import ContractError
from plume_utils.util.error import ShapeError


DEFAULT_DTYPE = np.float32

_grad_enabled = [True]


@contextlib.contextmanager
def no_grad():
    """Disable graph recording inside the block."""
    previous = _grad_enabled[0]
    _grad_enabled[0] = False
    try:
        yield
    finally:
        _grad_enabled[0] = previous


def is_grad_enabled():
    return _grad_enabled[0]


def _unbroadcast(grad, shape):
    """Sum grad down to shape, undoing numpy broadcasting."""
    if grad.shape == shape:
        return grad
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, extent in enumerate(shape):
        if extent == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


class Tensor(object):
    """N-dimensional array carrying an optional gradient accumulator.

    :param data: values, wrapped without copying when the dtype matches
    :param requires_grad: accumulate gradients on :meth:`backward`
    :param dtype: numpy dtype, float32 unless data is already floating point
    """

    def __init__(self, data, requires_grad=False, dtype=None):
        if dtype is None:
            array = np.asarray(data)
            dtype = array.dtype if array.dtype.kind == 'f' else DEFAULT_DTYPE
        self.data = np.asarray(data, dtype=dtype)
        self.requires_grad = requires_grad
        self.grad = np.zeros_like(self.data) if requires_grad else None
        self._parents = ()
        self._backward = None

    @classmethod
    def from_op(cls, data, parents, backward):
        """Build the output of an operation, recording the graph if needed."""
        out = cls(data, dtype=data.dtype)
        if is_grad_enabled() and any(p.requires_grad for p in parents):
            out.requires_grad = True
            out._parents = tuple(parents)
            out._backward = backward
        return out

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    @property
    def dtype(self):
        return self.data.dtype

    @property
    def is_leaf(self):
        return self._backward is None

    def numpy(self):
        return self.data

    def item(self):
        return self.data.item()

    def detach(self):
        return Tensor(self.data.copy(), dtype=self.dtype)

    def astype(self, dtype):
        return Tensor(self.data, requires_grad=self.requires_grad, dtype=dtype)

    def zero_grad(self):
        if self.requires_grad:
            self.grad = np.zeros_like(self.data)

    def backward(self):
        """Accumulate d(self)/d(leaf) into every leaf requiring gradients."""
        if self.data.size != 1 or self.ndim != 0:
            raise ContractError(
                "backward needs a scalar, got shape {0}".format(self.shape),
            )
        if not self.requires_grad:
            return
        grads = {id(self): np.ones_like(self.data)}
        for node in reversed(self._topological_order()):
            grad = grads.pop(id(node), None)
            if grad is None:
                continue
            if node.is_leaf:
                node.grad = grad.copy() if node.grad is None else node.grad + grad
                continue
            for parent, parent_grad in zip(node._parents, node._backward(grad)):
                if parent_grad is None or not parent.requires_grad:
                    continue
                key = id(parent)
                if key in grads:
                    grads[key] = grads[key] + parent_grad
                else:
                    grads[key] = parent_grad

    def _topological_order(self):
        order = []
        visited = set()
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for parent in node._parents:
                if parent.requires_grad and id(parent) not in visited:
                    stack.append((parent, False))
        return order

    def _lift(self, other):
        if isinstance(other, Tensor):
            return other
        return Tensor(np.asarray(other, dtype=self.dtype))

    def _broadcast(self, other, fn):
        try:
            return fn(self.data, other.data)
        except ValueError:
            raise ShapeError(
                "Shapes {0} and {1} do not broadcast".format(self.shape, other.shape),
            )

    def __add__(self, other):
        other = self._lift(other)
        a_shape, b_shape = self.shape, other.shape

        def backward(g):
            return _unbroadcast(g, a_shape), _unbroadcast(g, b_shape)

        return Tensor.from_op(self._broadcast(other, np.add), (self, other), backward)

    __radd__ = __add__

    def __neg__(self):
        return Tensor.from_op(-self.data, (self,), lambda g: (-g,))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        a, b = self, other

        def backward(g):
            return _unbroadcast(g * b.data, a.shape), _unbroadcast(g * a.data, b.shape)

        return Tensor.from_op(self._broadcast(other, np.multiply), (a, b), backward)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        a, b = self, other

        def backward(g):
            return (
                _unbroadcast(g / b.data, a.shape),
                _unbroadcast(-g * a.data / (b.data * b.data), b.shape),
            )

        return Tensor.from_op(self._broadcast(other, np.divide), (a, b), backward)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def sum(self, axis=None):
        """Sum over axis (int, tuple or None for every axis)."""
        shape = self.shape
        if axis is None:
            axes = tuple(range(self.ndim))
        elif isinstance(axis, int):
            axes = (axis % self.ndim,)
        else:
            axes = tuple(a % self.ndim for a in axis)

        def backward(g):
            return (np.broadcast_to(np.expand_dims(g, axes), shape).copy(),)

        return Tensor.from_op(
            np.asarray(self.data.sum(axis=axes), dtype=self.dtype),
            (self,),
            backward,
        )

    def __repr__(self):
        return "Tensor(shape={0}, dtype={1}, requires_grad={2})".format(
            self.shape,
            self.dtype,
            self.requires_grad,
        )


def zeros(shape, dtype=DEFAULT_DTYPE):
    return Tensor(np.zeros(shape, dtype=dtype), dtype=dtype)


def ones(shape, dtype=DEFAULT_DTYPE):
    return Tensor(np.ones(shape, dtype=dtype), dtype=dtype)
