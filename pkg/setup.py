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

from setuptools import find_packages
from setuptools import setup

from plume_utils import __version__


with open(
    os.path.join(
        os.path.abspath(os.path.dirname(__file__)),
        "README.md"
    )
) as f:
    README = f.read()


setup(
    name="plume-utils",
    version=__version__,
    author="The plume-utils Authors",
    description="Spatiotemporal plume forecasting utils",
    packages=find_packages(exclude=["scripts*", "tests*", "examples*"]),
    license="Apache License 2.0",
    long_description=README,
    long_description_content_type="text/markdown",
    keywords="plume dispersion forecasting lstm",
    scripts=[
        "scripts/plume-pipeline",
        "scripts/plume-utils",
    ],
    install_requires=[
        "humanfriendly>=4.8",
        "jsonschema>=3.0.1",
        "numpy>=1.20",
        "PyYAML>3.10",
    ],
    classifiers=[
        "Development Status :: 4 - Beta",
        "License :: OSI Approved :: Apache Software License",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.7",
        "Programming Language :: Python :: 3.8",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "Operating System :: POSIX",
        "Operating System :: MacOS :: MacOS X",
    ],
)
