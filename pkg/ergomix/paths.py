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

import os

from oslo_config import cfg

opts = [
    cfg.StrOpt(
        "basedir",
        default=os.path.abspath(os.path.dirname(__file__)),
        help="Directory where the ergomix python module is installed",
    ),
    cfg.StrOpt(
        "scenario_dir",
        default="$basedir/scenarios",
        help="Directory holding the bundled scenario files",
    ),
]

CONF = cfg.CONF
CONF.register_opts(opts)


def scenario_path_def(*args):
    """Return an uninterpolated path relative to $scenario_dir."""
    return os.path.join("$scenario_dir", *args)


def bundled_scenario(name):
    """Return the absolute path of a scenario shipped with the package."""
    return os.path.join(os.path.dirname(__file__), "scenarios", name)
