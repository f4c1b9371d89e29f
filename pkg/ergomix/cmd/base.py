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

from __future__ import print_function

import sys

from oslo_log import log

from ergomix import exception

LOG = log.getLogger(__name__)


def guarded(func, *args, **kwargs):
    """Call func and turn failures into a process exit code."""
    try:
        func(*args, **kwargs)
    except exception.ErgomixException as e:
        print("ERROR: %s" % e, file=sys.stderr)
        return e.exit_code
    except KeyboardInterrupt:
        print("\nExiting...", file=sys.stderr)
        return 0
    except Exception as e:
        LOG.exception("Unexpected error")
        print("ERROR: %s" % e, file=sys.stderr)
        return exception.EXIT_RUNTIME
    return 0


class BaseCommand(object):
    def __init__(self, parser, name, cmd_help):
        self.name = name
        self.cmd_help = cmd_help
        self.parser = parser.add_parser(name, help=cmd_help)
        self.parser.set_defaults(func=self.run)

    def run(self):
        raise NotImplementedError("Method must be overriden on subclass")
