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


class PlumeToolError(Exception):
    """Base class for plume tool exceptions."""
    pass


class ConfigurationError(PlumeToolError):
    """Error in configuration. For example: missing configuration file
    or misformatted configuration."""
    pass


class MissingConfigurationError(ConfigurationError):
    """Missing configuration file."""
    pass


class InvalidConfigurationError(ConfigurationError):
    """Invalid configuration file or override."""
    pass


class CFLViolationError(ConfigurationError):
    """The simulation timestep is too large for the grid, wind and
    diffusivity."""
    pass


class ShapeError(PlumeToolError):
    """Tensor extents are incompatible with the requested operation."""
    pass


class ContractError(PlumeToolError):
    """A caller broke the precondition of an operation."""
    pass


class GenerationError(PlumeToolError):
    """Synthetic data could not be generated."""
    pass


class StoreError(PlumeToolError):
    """Base class for container load errors."""
    pass


class MissingInputError(StoreError):
    """Input file does not exist."""
    pass


class InvalidContainerError(StoreError):
    """Not a plume-utils container, or its header is unreadable."""
    pass


class VersionMismatchError(StoreError):
    """Container written by an incompatible major version."""
    pass


class TruncatedPayloadError(StoreError):
    """Container is shorter than its header declares."""
    pass


class ChecksumError(StoreError):
    """Payload CRC32 does not match the value recorded in the header."""

    def __init__(self, name, expected, actual):
        super(ChecksumError, self).__init__(
            "Checksum mismatch for payload {name}: expected {expected:08x}, "
            "got {actual:08x}".format(
                name=name,
                expected=expected,
                actual=actual,
            )
        )
        self.name = name
        self.expected = expected
        self.actual = actual


class NonFiniteLossError(PlumeToolError):
    """Training produced a NaN or infinite loss."""

    def __init__(self, iteration, terms):
        super(NonFiniteLossError, self).__init__(
            "Non-finite loss at iteration {iteration}: {terms}".format(
                iteration=iteration,
                terms=", ".join(
                    "{0}={1!r}".format(name, value)
                    for name, value in sorted(terms.items())
                ),
            )
        )
        self.iteration = iteration
        self.terms = terms

    def __eq__(self, other):
        if all([
            self.iteration == other.iteration,
            self.terms == other.terms,
        ]):
            return True
        return False

    def __hash__(self):
        return hash((self.iteration, tuple(sorted(self.terms.items()))))
