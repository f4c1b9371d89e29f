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

import sys

from oslo_config import cfg
from oslo_log import log

import ergomix.config
from ergomix.cmd import commands

CONF = cfg.CONF


def main():
    ergomix.config.parse_args(sys.argv)
    log.setup(CONF, "ergomix")
    sys.exit(commands.CommandManager().execute())


if __name__ == "__main__":
    main()
