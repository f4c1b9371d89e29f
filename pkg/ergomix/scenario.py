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

"""Scenario files: the free parameters of one simulation run.

A scenario is a flat list of ``key = value`` lines. Keys are dotted
(``robot.v_max``, ``hole.2.cov``), values are YAML flow values, and ``#``
starts a comment. See README.md for the list of keys and their defaults.
"""

import collections
import math
import re

import numpy as np
from oslo_config import cfg
from oslo_log import log
import yaml

from ergomix import exception
from ergomix import field
from ergomix import mixture
from ergomix import paths

opts = [
    cfg.StrOpt(
        "default_file",
        default=paths.scenario_path_def("three_holes.toml"),
        help="Scenario used when a command is not given one explicitly.",
    ),
]

CONF = cfg.CONF
CONF.register_opts(opts, group="scenario")

LOG = log.getLogger(__name__)

FLOAT, INT, BOOL, POINT, MATRIX, FRACTIONS = (
    "float",
    "int",
    "bool",
    "point",
    "matrix",
    "fractions",
)

# key -> (kind, default); None marks a default derived from other keys.
KEYS = collections.OrderedDict(
    [
        ("domain.x_min", (FLOAT, 0.0)),
        ("domain.x_max", (FLOAT, 400.0)),
        ("domain.y_min", (FLOAT, 0.0)),
        ("domain.y_max", (FLOAT, 400.0)),
        ("grid.nx", (INT, 400)),
        ("grid.ny", (INT, 400)),
        ("robot.start", (POINT, None)),
        ("robot.cov", (MATRIX, [[3.0, 0.0], [0.0, 3.0]])),
        ("robot.v_max", (FLOAT, 10.0)),
        ("timing.beta", (FLOAT, 0.1)),
        ("timing.gamma", (FLOAT, 0.05)),
        ("timing.saturation_exit", (BOOL, True)),
        ("timing.dwell_floor", (BOOL, True)),
        ("timing.lone_hole_progress", (BOOL, True)),
        ("holes.sigma_level", (FLOAT, 3.0)),
        ("stamp.radius", (FLOAT, 5.0)),
        ("run.v_every", (INT, 100)),
        ("run.max_steps", (INT, 200000)),
        ("run.snapshot_fractions", (FRACTIONS, [0.0, 0.05, 0.25, 0.5, 0.75, 1.0])),
    ]
)

HOLE_FIELDS = collections.OrderedDict(
    [("weight", FLOAT), ("mean", POINT), ("cov", MATRIX)]
)
HOLE_KEY = re.compile(r"^hole\.([1-9][0-9]*)\.(weight|mean|cov)$")
# first word of a GaussianComponent.check problem -> hole field
PROBLEM_FIELDS = {"weight": "weight", "mean": "mean", "covariance": "cov"}


class SimConfig(object):
    """Fully resolved, validated parameters of a simulation run."""

    def __init__(
        self,
        model,
        grid,
        start,
        robot_cov,
        v_max,
        beta,
        gamma,
        saturation_exit,
        dwell_floor,
        lone_hole_progress,
        sigma_level,
        stamp_radius,
        v_every,
        max_steps,
        snapshot_fractions,
    ):
        self.model = model
        self.grid = grid
        self.start = np.array(start, dtype=np.float64)
        self.robot_cov = np.array(robot_cov, dtype=np.float64)
        self.v_max = float(v_max)
        self.beta = float(beta)
        self.gamma = float(gamma)
        self.saturation_exit = bool(saturation_exit)
        self.dwell_floor = bool(dwell_floor)
        self.lone_hole_progress = bool(lone_hole_progress)
        self.sigma_level = float(sigma_level)
        self.stamp_radius = float(stamp_radius)
        self.v_every = int(v_every)
        self.max_steps = int(max_steps)
        self.snapshot_fractions = [float(f) for f in snapshot_fractions]

    @property
    def snapshot_steps(self):
        """Steps at which the error field is exported, ascending."""
        steps = set(
            int(math.floor(f * self.max_steps + 0.5)) for f in self.snapshot_fractions
        )
        return sorted(steps)

    def as_dict(self):
        d = collections.OrderedDict()
        d["domain.x_min"] = self.grid.x_min
        d["domain.x_max"] = self.grid.x_max
        d["domain.y_min"] = self.grid.y_min
        d["domain.y_max"] = self.grid.y_max
        d["grid.nx"] = self.grid.nx
        d["grid.ny"] = self.grid.ny
        for index, comp in enumerate(self.model):
            prefix = "hole.%d." % (index + 1)
            d[prefix + "weight"] = comp.weight
            d[prefix + "mean"] = comp.mean.tolist()
            d[prefix + "cov"] = comp.cov.tolist()
        d["robot.start"] = self.start.tolist()
        d["robot.cov"] = self.robot_cov.tolist()
        d["robot.v_max"] = self.v_max
        d["timing.beta"] = self.beta
        d["timing.gamma"] = self.gamma
        d["timing.saturation_exit"] = self.saturation_exit
        d["timing.dwell_floor"] = self.dwell_floor
        d["timing.lone_hole_progress"] = self.lone_hole_progress
        d["holes.sigma_level"] = self.sigma_level
        d["stamp.radius"] = self.stamp_radius
        d["run.v_every"] = self.v_every
        d["run.max_steps"] = self.max_steps
        d["run.snapshot_fractions"] = list(self.snapshot_fractions)
        return d

    def __eq__(self, other):
        return isinstance(other, SimConfig) and self.as_dict() == other.as_dict()

    def __ne__(self, other):
        return not self == other


def render_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return "%d" % value
    if isinstance(value, float):
        return "%.17g" % value
    return "[%s]" % ", ".join(render_value(v) for v in value)


def emit(config):
    """Render a SimConfig as scenario text that parses back to it."""
    lines = [
        "%s = %s" % (key, render_value(value))
        for key, value in config.as_dict().items()
    ]
    return "\n".join(lines) + "\n"


def resolve_key(key):
    """Map a possibly abbreviated key (``v_max``) to its full name."""
    if key in KEYS or HOLE_KEY.match(key):
        return key
    matches = [k for k in KEYS if k.endswith("." + key)]
    if len(matches) == 1:
        return matches[0]
    return None


def _number(value):
    if isinstance(value, bool):
        raise ValueError("expected a number, got %r" % (value,))
    if isinstance(value, (int, float)):
        result = float(value)
    elif isinstance(value, str):
        # YAML leaves forms like "2e5" as strings
        result = float(value)
    else:
        raise ValueError("expected a number, got %r" % (value,))
    if not math.isfinite(result):
        raise ValueError("expected a finite number, got %r" % (value,))
    return result


def _convert(kind, value):
    if kind == FLOAT:
        return _number(value)
    if kind == INT:
        number = _number(value)
        if not number.is_integer():
            raise ValueError("expected an integer, got %r" % (value,))
        return int(number)
    if kind == BOOL:
        if not isinstance(value, bool):
            raise ValueError("expected true or false, got %r" % (value,))
        return value
    if kind == POINT:
        if not isinstance(value, list) or len(value) != 2:
            raise ValueError("expected a point [x, y], got %r" % (value,))
        return [_number(v) for v in value]
    if kind == MATRIX:
        if (
            not isinstance(value, list)
            or len(value) != 2
            or not all(isinstance(row, list) and len(row) == 2 for row in value)
        ):
            raise ValueError(
                "expected a 2x2 matrix [[a, b], [c, d]], got %r" % (value,)
            )
        return [[_number(v) for v in row] for row in value]
    if kind == FRACTIONS:
        if not isinstance(value, list):
            raise ValueError("expected a list of fractions, got %r" % (value,))
        fractions = [_number(v) for v in value]
        for f in fractions:
            if not 0.0 <= f <= 1.0:
                raise ValueError("fraction %s is outside [0, 1]" % f)
        return fractions
    raise ValueError("unknown kind %s" % kind)


def _kind_of(key):
    match = HOLE_KEY.match(key)
    if match:
        return HOLE_FIELDS[match.group(2)]
    return KEYS[key][0]


class _Reader(object):
    """Collects raw values and their origin while reading lines."""

    def __init__(self, source):
        self.source = source
        self.values = {}
        self.origin = {}
        self.errors = []

    def where(self, key):
        return "%s (%s)" % (key, self.origin[key]) if key in self.origin else key

    def add_line(self, lineno, raw, origin=None, replace=False):
        line = raw.split("#", 1)[0].strip()
        if not line:
            return
        key, sep, text = line.partition("=")
        if not sep:
            raise exception.ScenarioSyntaxError(
                source=self.source, line=lineno, reason="expected 'key = value'"
            )
        key = key.strip()
        try:
            value = yaml.safe_load(text.strip())
        except yaml.YAMLError as e:
            raise exception.ScenarioSyntaxError(
                source=self.source,
                line=lineno,
                reason="cannot parse value of %s: %s" % (key, e),
            )
        origin = origin or "line %d" % lineno

        full = resolve_key(key)
        if full is None:
            self.errors.append("%s (%s): unknown key" % (key, origin))
            return
        if full in self.values and not replace:
            self.errors.append(
                "%s (%s): duplicate key, first set at %s"
                % (full, origin, self.origin[full])
            )
            return
        try:
            self.values[full] = _convert(_kind_of(full), value)
        except ValueError as e:
            self.errors.append("%s (%s): %s" % (full, origin, e))
            self.values.pop(full, None)
            return
        self.origin[full] = origin


def parse_text(text, source="<string>", overrides=()):
    """Parse and validate scenario text.

    ``overrides`` are extra ``key=value`` strings applied after the text,
    replacing values it sets.
    """
    reader = _Reader(source)
    for lineno, raw in enumerate(text.splitlines(), 1):
        reader.add_line(lineno, raw)
    for override in overrides:
        reader.add_line(0, override, origin="--set %s" % override, replace=True)

    config = _build(reader)
    if reader.errors:
        raise exception.ScenarioValidationFailed(source=source, errors=reader.errors)
    return config


def _build(reader):
    """Validate the collected values and assemble a SimConfig.

    Every problem found is appended to ``reader.errors``; None is returned
    when there is any.
    """
    errors = reader.errors
    values = dict((k, default) for k, (_kind, default) in KEYS.items())
    values.update((k, v) for k, v in reader.values.items() if k in KEYS)

    grid = None
    grid_problems = field.GridSpec.check(
        values["domain.x_min"],
        values["domain.x_max"],
        values["domain.y_min"],
        values["domain.y_max"],
        values["grid.nx"],
        values["grid.ny"],
    )
    for problem in grid_problems:
        errors.append("domain/grid: %s" % problem)
    if not grid_problems:
        grid = field.GridSpec(
            values["domain.x_min"],
            values["domain.x_max"],
            values["domain.y_min"],
            values["domain.y_max"],
            values["grid.nx"],
            values["grid.ny"],
        )

    model = _build_model(reader, grid)

    if values["robot.start"] is None and grid is not None:
        values["robot.start"] = [
            (grid.x_min + grid.x_max) / 2.0,
            (grid.y_min + grid.y_max) / 2.0,
        ]
    if grid is not None and values["robot.start"] is not None:
        if not grid.contains(values["robot.start"]):
            errors.append(
                "%s: start %s lies outside the domain"
                % (reader.where("robot.start"), values["robot.start"])
            )
    for problem in mixture.GaussianComponent.check(
        1.0, [0.0, 0.0], values["robot.cov"]
    ):
        errors.append("%s: %s" % (reader.where("robot.cov"), problem))

    checks = [
        ("robot.v_max", values["robot.v_max"] > 0, "must be positive"),
        ("timing.beta", values["timing.beta"] > 0, "must be positive"),
        ("timing.gamma", values["timing.gamma"] >= 0, "must not be negative"),
        ("holes.sigma_level", values["holes.sigma_level"] > 0, "must be positive"),
        (
            "stamp.radius",
            values["stamp.radius"] >= field.MIN_STAMP_RADIUS,
            "must be at least %s sigmas" % field.MIN_STAMP_RADIUS,
        ),
        ("run.v_every", values["run.v_every"] >= 1, "must be at least 1"),
        ("run.max_steps", values["run.max_steps"] >= 0, "must not be negative"),
    ]
    for key, ok, reason in checks:
        if not ok:
            errors.append("%s: %s, got %s" % (reader.where(key), reason, values[key]))

    if errors:
        return None
    return SimConfig(
        model=model,
        grid=grid,
        start=values["robot.start"],
        robot_cov=values["robot.cov"],
        v_max=values["robot.v_max"],
        beta=values["timing.beta"],
        gamma=values["timing.gamma"],
        saturation_exit=values["timing.saturation_exit"],
        dwell_floor=values["timing.dwell_floor"],
        lone_hole_progress=values["timing.lone_hole_progress"],
        sigma_level=values["holes.sigma_level"],
        stamp_radius=values["stamp.radius"],
        v_every=values["run.v_every"],
        max_steps=values["run.max_steps"],
        snapshot_fractions=values["run.snapshot_fractions"],
    )


def _build_model(reader, grid):
    errors = reader.errors
    holes = collections.defaultdict(dict)
    for key, value in reader.values.items():
        match = HOLE_KEY.match(key)
        if match:
            holes[int(match.group(1))][match.group(2)] = value

    if not holes:
        errors.append("hole.<i>.*: no hole defined, the mixture model is mandatory")
        return None

    count = max(holes)
    missing = [i for i in range(1, count + 1) if i not in holes]
    if missing:
        errors.append(
            "hole.<i>.*: holes must be numbered 1..%d, missing %s" % (count, missing)
        )
        return None

    components = []
    for index in range(1, count + 1):
        spec = holes[index]
        prefix = "hole.%d." % index
        absent = [name for name in HOLE_FIELDS if name not in spec]
        if absent:
            errors.append(
                "%s*: missing %s" % (prefix, ", ".join(prefix + a for a in absent))
            )
            continue
        problems = mixture.GaussianComponent.check(
            spec["weight"], spec["mean"], spec["cov"]
        )
        for problem in problems:
            name = PROBLEM_FIELDS.get(problem.split(" ", 1)[0], "*")
            errors.append("%s: %s" % (reader.where(prefix + name), problem))
        if problems:
            continue
        if grid is not None and not grid.contains(spec["mean"]):
            errors.append(
                "%s: mean %s lies outside the domain"
                % (reader.where(prefix + "mean"), spec["mean"])
            )
            continue
        components.append(
            mixture.GaussianComponent(spec["weight"], spec["mean"], spec["cov"])
        )

    if len(components) != count:
        return None
    try:
        return mixture.MixtureModel(components)
    except exception.InvalidMixture:
        weights = [c.weight for c in components]
        keys = ", ".join(
            reader.where("hole.%d.weight" % i) for i in range(1, count + 1)
        )
        total = math.fsum(weights)
        errors.append("%s: weights %s add up to %.17g, not 1" % (keys, weights, total))
        return None


def parse_config(path, overrides=()):
    """Read, parse and validate a scenario file."""
    try:
        with open(path) as f:
            text = f.read()
    except (IOError, OSError) as e:
        raise exception.CannotOpenScenario(file=path, errno=e.errno or 0)
    except UnicodeDecodeError as e:
        raise exception.CannotOpenScenario(file=path, reason=str(e))
    LOG.debug("Loaded scenario %s" % path)
    return parse_text(text, source=path, overrides=overrides)


def load(path=None, overrides=()):
    """parse_config on ``path``, or on the configured default scenario."""
    return parse_config(path or CONF.scenario.default_file, overrides)
