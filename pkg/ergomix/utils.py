# -*- coding: utf-8 -*-

# Licensed under the Apache License, Version 2.0 (the "License"); you may
# not use this file except in compliance with the License. You may obtain
# a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations
# under the License.

import errno
import os

import prettytable
import six

from ergomix import exception


def format_value(value):
    """Render a value for CSV and tables; floats keep 17 digits."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def _cell(value):
    return "-" if value is None else format_value(value)


def print_list(objs, fields, sortby=None):
    pt = prettytable.PrettyTable(list(fields))
    pt.align = "l"
    for o in objs:
        pt.add_row([_cell(o.get(field)) for field in fields])
    print(pt.get_string(sortby=sortby))


def print_dict(d, dict_property="Property", dict_value="Value"):
    pt = prettytable.PrettyTable([dict_property, dict_value])
    pt.align = "l"
    for k, v in sorted(d.items()):
        # one row per line for multi-line values
        if v and isinstance(v, six.string_types) and "\n" in v:
            for i, line in enumerate(v.strip().split("\n")):
                pt.add_row([k if i == 0 else "", line])
        else:
            pt.add_row([k, _cell(v)])
    print(pt.get_string())


def makedirs(path):
    """Create an artifact directory and its parents.

    An existing directory is fine; anything else in the way raises
    CannotWriteArtifact.
    """
    try:
        os.makedirs(path)
    except OSError as exc:
        if exc.errno == errno.EEXIST and os.path.isdir(path):
            return
        raise exception.CannotWriteArtifact(file=path, errno=exc.errno or 0)
