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

import collections
import csv
import pathlib

from oslo_config import cfg
from oslo_log import log
import yaml

import ergomix
from ergomix import engine
from ergomix import exception
from ergomix import scenario
from ergomix.snapshot import manager
from ergomix import utils

opts = [
    cfg.StrOpt(
        "directory",
        default="ergomix-out",
        help="Directory where run artifacts are written when a command "
        "is not given one explicitly.",
    ),
]

CONF = cfg.CONF
CONF.register_opts(opts, group="output")

LOG = log.getLogger(__name__)

MANIFEST = "manifest.yaml"
SCENARIO = "scenario.toml"


class RunManifest(object):
    """Enough information to reproduce and identify a run."""

    def __init__(self, trace, artifacts):
        self.scenario_text = scenario.emit(trace.config)
        self.artifacts = [str(a) for a in artifacts]
        self.started_at = trace.started_at
        self.duration = trace.duration
        self.steps = trace.steps
        self.cycles = trace.cycles
        self.initial_V = trace.initial_V
        self.final_V = trace.final_V
        self.tour = [hole + 1 for hole in trace.tour]
        self.version = ergomix.__version__

    def as_dict(self):
        d = collections.OrderedDict()
        d["version"] = self.version
        d["started_at"] = self.started_at.isoformat() if self.started_at else None
        d["duration_seconds"] = self.duration
        d["steps"] = self.steps
        d["cycles"] = self.cycles
        d["tour"] = self.tour
        d["initial_V"] = self.initial_V
        d["final_V"] = self.final_V
        d["artifacts"] = self.artifacts
        d["scenario"] = self.scenario_text
        return d


class OutputManager(object):
    """Writes the CSV, snapshot and manifest artifacts of a run."""

    def __init__(self, path=None, snapshots=None):
        self.path = pathlib.Path(path or CONF.output.directory)
        self.snapshots = snapshots or manager.SnapshotManager()
        utils.makedirs(str(self.path))

    def _write_rows(self, name, fields, rows):
        path = self.path / name
        LOG.debug("Writing %s" % path)
        try:
            with open(path, "w", newline="") as f:
                writer = csv.writer(f)
                writer.writerow(fields)
                for row in rows:
                    writer.writerow([utils.format_value(v) for v in row])
        except (IOError, OSError) as e:
            raise exception.CannotWriteArtifact(file=path, errno=e.errno or 0)
        return path

    def _write_text(self, name, text):
        path = self.path / name
        try:
            with open(path, "w") as f:
                f.write(text)
        except (IOError, OSError) as e:
            raise exception.CannotWriteArtifact(file=path, errno=e.errno or 0)
        return path

    def write_trace(self, trace):
        """Write every artifact of a finished run; returns the manifest."""
        LOG.info("Writing run artifacts to %s" % self.path)
        artifacts = [
            self._write_rows("metrics.csv", engine.METRIC_FIELDS, trace.metrics),
            self._write_rows(
                "trajectory.csv", engine.TRAJECTORY_FIELDS, trace.trajectory
            ),
            self._write_rows(
                "events.csv",
                engine.EVENT_FIELDS,
                ([e[f] for f in engine.EVENT_FIELDS] for e in trace.events),
            ),
            self._write_rows(
                "timing.csv",
                engine.VISIT_FIELDS,
                ([v[f] for f in engine.VISIT_FIELDS] for v in trace.visits),
            ),
        ]
        if trace.rho_star is not None:
            artifacts.extend(
                self.snapshots.write(self.path, "rho_star_neg", -trace.rho_star)
            )
        for k, phi in trace.snapshots.items():
            artifacts.extend(self.snapshots.write(self.path, "phi_k%d" % k, phi))
        artifacts.append(self._write_text(SCENARIO, scenario.emit(trace.config)))

        manifest = RunManifest(trace, artifacts)
        self._write_text(
            MANIFEST,
            yaml.safe_dump(
                dict(manifest.as_dict()), default_flow_style=False, sort_keys=False
            ),
        )
        return manifest
