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
from ergomix import engine
from ergomix import exception
from ergomix import output
from ergomix import scenario
from ergomix import utils

CONF = cfg.CONF

LOG = log.getLogger(__name__)


def _overrides(overrides=None, max_steps=None, grid=None):
    result = list(overrides or [])
    if max_steps is not None:
        result.append("run.max_steps=%d" % max_steps)
    if grid:
        nx, ny = grid
        result.extend(["grid.nx=%d" % nx, "grid.ny=%d" % ny])
    return result


def run_simulation(path, out_dir, overrides=None, max_steps=None, grid=None):
    """Load a scenario, run it and write its artifacts."""
    config = scenario.load(path, _overrides(overrides, max_steps, grid))
    trace = engine.run(config)
    manifest = output.OutputManager(out_dir).write_trace(trace)

    utils.print_dict(
        {
            "steps": manifest.steps,
            "cycles": manifest.cycles,
            "tour": " -> ".join(str(h) for h in manifest.tour),
            "initial V": manifest.initial_V,
            "final V": manifest.final_V,
            "duration (s)": "%.2f" % manifest.duration,
            "output": str(out_dir or CONF.output.directory),
        }
    )
    try:
        cycles = engine.end_of_cycle_values(trace)
    except exception.NotEnoughCycles:
        LOG.debug("Fewer than two completed cycles, no cycle table")
    else:
        utils.print_list(
            [{"cycle": n, "V": v} for n, v in cycles],
            ["cycle", "V"],
        )
    return manifest


def run_command(path, out_dir, overrides=None, max_steps=None, grid=None):
    """run_simulation, returning the process exit code."""
    return base.guarded(run_simulation, path, out_dir, overrides, max_steps, grid)


class CommandRun(base.BaseCommand):
    def __init__(
        self,
        parser,
        name="run",
        cmd_help="Run a simulation and write its artifacts.",
    ):
        super(CommandRun, self).__init__(parser, name, cmd_help)

        self.parser.add_argument(
            "--scenario",
            dest="scenario_path",
            default=None,
            help="Scenario file to run. Defaults to [scenario]/default_file.",
        )
        self.parser.add_argument(
            "--out",
            dest="out",
            default=None,
            help="Output directory. Defaults to [output]/directory.",
        )
        self.parser.add_argument(
            "--max-steps",
            dest="max_steps",
            type=int,
            default=None,
            help="Override run.max_steps.",
        )
        self.parser.add_argument(
            "--grid",
            dest="grid",
            type=int,
            nargs=2,
            metavar=("NX", "NY"),
            default=None,
            help="Override the grid resolution.",
        )
        self.parser.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=None,
            metavar="KEY=VALUE",
            help="Override a scenario key. Can be given several times.",
        )

    def run(self):
        run_simulation(
            CONF.command.scenario_path,
            CONF.command.out,
            CONF.command.overrides,
            CONF.command.max_steps,
            CONF.command.grid,
        )


class CommandValidate(base.BaseCommand):
    def __init__(
        self,
        parser,
        name="validate",
        cmd_help="Check a scenario file and show its resolved values.",
    ):
        super(CommandValidate, self).__init__(parser, name, cmd_help)

        self.parser.add_argument(
            "--scenario",
            dest="scenario_path",
            default=None,
            help="Scenario file to check. Defaults to [scenario]/default_file.",
        )

    def run(self):
        config = scenario.load(CONF.command.scenario_path)
        utils.print_dict(
            dict((k, scenario.render_value(v)) for k, v in config.as_dict().items()),
            dict_property="Key",
        )
