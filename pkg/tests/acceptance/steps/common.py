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

from behave import given
from behave import then
from behave import when
from steps.util import call_pipeline


SUBCOMMANDS = ('generate', 'train', 'predict', 'evaluate')


def run_in(context, run, args, seed=None):
    out_dir = os.path.join(context.run_dir, run)
    context.returncode, context.result = call_pipeline(
        context.config_name,
        out_dir,
        args,
        seed=seed,
    )
    subcommand = next(arg for arg in args if arg in SUBCOMMANDS)
    context.runs.setdefault(run, {})[subcommand] = context.result
    return out_dir


@given(u'the {name} configuration')
def step_impl1(context, name):
    context.config_name = name


@given(u'a generated corpus in run {run}')
def step_impl2(context, run):
    run_in(context, run, ['generate'])
    assert context.returncode == 0, context.result


@when(u'we call plume-pipeline with "{args}" in run {run}')
def step_impl3(context, args, run):
    run_in(context, run, args.split())


@then(u'the command succeeds')
def step_impl4(context):
    assert context.returncode == 0, context.result
    assert context.result['status'] == 'OK'


@then(u'the command fails with status {status}')
def step_impl5(context, status):
    assert context.result['status'] == status, context.result
    assert context.returncode != 0
