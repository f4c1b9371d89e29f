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

from oslo_config import cfg
from oslo_log import log

from ergomix.cmd import base
from ergomix.cmd import simulation
from ergomix.cmd import version

CONF = cfg.CONF


def add_command_parsers(subparsers):
    simulation.CommandRun(subparsers)
    simulation.CommandValidate(subparsers)
    version.CommandVersion(subparsers)


command_opt = cfg.SubCommandOpt(
    "command",
    title="Commands",
    help="Show available commands.",
    handler=add_command_parsers,
)

CONF.register_cli_opt(command_opt)

LOG = log.getLogger(__name__)


class CommandManager(object):
    def execute(self):
        """Run the selected command and return the process exit code."""
        LOG.info("Ergomix session starts >>>>>>>>>>")
        try:
            return base.guarded(CONF.command.func)
        finally:
            LOG.info("Ergomix session ends <<<<<<<<<<<<")
