# -*- coding: utf-8 -*-

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

import ergomix.engine
import ergomix.output
import ergomix.paths
import ergomix.scenario
import ergomix.snapshot.manager


def list_opts():
    return [
        ("DEFAULT", ergomix.paths.opts),
        ("scenario", ergomix.scenario.opts),
        ("simulation", ergomix.engine.opts),
        ("snapshots", ergomix.snapshot.manager.opts),
        ("output", ergomix.output.opts),
    ]
