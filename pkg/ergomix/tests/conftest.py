# Licensed under the Apache License, Version 2.0 (the "License"); you may
# not use this file except in compliance with the License. You may obtain
# a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations
# under the License.

"""Expand testscenarios classes under pytest, as stestr/unittest would."""

import inspect
import unittest

from _pytest import unittest as pytest_unittest


def pytest_pycollect_makeitem(collector, name, obj):
    if not (
        inspect.isclass(obj)
        and issubclass(obj, unittest.TestCase)
        and getattr(obj, "scenarios", None)
    ):
        return None
    items = []
    for scenario_name, attrs in obj.scenarios:
        cls_name = "%s_%s" % (name, scenario_name)
        body = dict(attrs)
        body["scenarios"] = None
        cls = type(cls_name, (obj,), body)
        cls.__module__ = obj.__module__
        cls.__qualname__ = cls_name
        setattr(collector.obj, cls_name, cls)
        items.append(
            pytest_unittest.UnitTestCase.from_parent(collector, name=cls_name, obj=cls)
        )
    return items
