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

import os

import fixtures

from ergomix import exception
from ergomix import field
from ergomix import scenario
from ergomix.tests import base

SINGLE_HOLE = base.SINGLE_HOLE


class TestParse(base.TestCase):
    def test_three_hole_file(self):
        config = scenario.parse_config(base.THREE_HOLES)
        self.assertEqual(base.three_hole_model(), config.model)
        self.assertEqual(base.square_grid(400), config.grid)
        self.assertEqual([180.0, 175.0], config.start.tolist())
        self.assertEqual([[3.0, 0.0], [0.0, 3.0]], config.robot_cov.tolist())
        self.assertEqual(10.0, config.v_max)
        self.assertEqual(0.1, config.beta)
        self.assertEqual(0.05, config.gamma)
        self.assertTrue(config.saturation_exit)
        self.assertTrue(config.dwell_floor)
        self.assertTrue(config.lone_hole_progress)
        self.assertEqual(3.0, config.sigma_level)
        self.assertEqual(5.0, config.stamp_radius)
        self.assertEqual(100, config.v_every)
        self.assertEqual(200000, config.max_steps)

    def test_defaults(self):
        config = scenario.parse_text(SINGLE_HOLE)
        self.assertEqual([50.0, 50.0], config.start.tolist())
        self.assertEqual(10.0, config.v_max)
        self.assertEqual(200000, config.max_steps)
        self.assertEqual(field.GridSpec(0, 100, 0, 100, 100, 100), config.grid)

    def test_comments_and_blanks(self):
        text = "# heading\n\n" + SINGLE_HOLE.replace(
            "grid.nx = 100", "grid.nx = 100  # cells"
        )
        self.assertEqual(100, scenario.parse_text(text).grid.nx)

    def test_exponent_integer(self):
        config = scenario.parse_text(SINGLE_HOLE + "run.max_steps = 2e5\n")
        self.assertEqual(200000, config.max_steps)
        self.assertIsInstance(config.max_steps, int)

    def test_snapshot_steps(self):
        config = scenario.parse_text(SINGLE_HOLE + "run.max_steps = 20000\n")
        self.assertEqual([0, 1000, 5000, 10000, 15000, 20000], config.snapshot_steps)
        config = scenario.parse_text(
            SINGLE_HOLE + "run.max_steps = 3\nrun.snapshot_fractions = [0, 0.5, 1]\n"
        )
        self.assertEqual([0, 2, 3], config.snapshot_steps)


class TestValidation(base.TestCase):
    def _errors(self, text, overrides=()):
        e = self.assertRaises(
            exception.ScenarioValidationFailed,
            scenario.parse_text,
            text,
            "test.toml",
            overrides,
        )
        self.assertEqual(exception.EXIT_VALIDATION, e.exit_code)
        return e.errors

    def test_empty(self):
        errors = self._errors("")
        self.assertEqual(1, len(errors))
        self.assertIn("mixture model is mandatory", errors[0])

    def test_weights(self):
        errors = self._errors(SINGLE_HOLE.replace("weight = 1", "weight = 0.9"))
        self.assertEqual(1, len(errors))
        self.assertIn("add up to 0.9", errors[0])
        self.assertTrue(errors[0].startswith("hole.1.weight (line 6): weights"))

    def test_unknown_key(self):
        errors = self._errors(SINGLE_HOLE + "robot.colour = 3\n")
        self.assertEqual(["robot.colour (line 9): unknown key"], errors)

    def test_duplicate_key(self):
        errors = self._errors(SINGLE_HOLE + "grid.nx = 50\n")
        self.assertEqual(1, len(errors))
        self.assertIn("grid.nx (line 9): duplicate key, first set at line 4", errors)

    def test_errors_collected(self):
        text = SINGLE_HOLE + "robot.v_max = -1\nrun.v_every = 0\nstamp.radius = 2\n"
        errors = self._errors(text)
        self.assertEqual(3, len(errors))
        self.assertTrue(errors[0].startswith("robot.v_max (line 9)"))

    def test_type_error(self):
        errors = self._errors(SINGLE_HOLE + "run.v_every = 10.5\n")
        self.assertEqual(1, len(errors))
        self.assertIn("run.v_every (line 9): expected an integer", errors[0])
        errors = self._errors(SINGLE_HOLE + "robot.start = [1, 2, 3]\n")
        self.assertIn("expected a point", errors[0])

    def test_mean_outside(self):
        errors = self._errors(SINGLE_HOLE.replace("[50, 50]", "[150, 50]"))
        self.assertIn(
            "hole.1.mean (line 7): mean [150.0, 50.0] lies outside", errors[0]
        )

    def test_missing_hole_field(self):
        text = SINGLE_HOLE.replace("hole.1.cov = [[16, 0], [0, 16]]", "")
        errors = self._errors(text)
        self.assertEqual(["hole.1.*: missing hole.1.cov"], errors)

    def test_hole_numbering(self):
        text = SINGLE_HOLE.replace("hole.1.", "hole.2.")
        errors = self._errors(text)
        self.assertIn("missing [1]", errors[0])

    def test_bad_covariance(self):
        text = SINGLE_HOLE.replace("[[16, 0], [0, 16]]", "[[1, 2], [2, 1]]")
        errors = self._errors(text)
        self.assertIn("not positive definite", errors[0])
        self.assertTrue(errors[0].startswith("hole.1.cov (line 8): covariance"))

    def test_bad_weight_names_line(self):
        errors = self._errors(SINGLE_HOLE.replace("weight = 1", "weight = 1.5"))
        self.assertEqual(
            ["hole.1.weight (line 6): weight 1.5 is outside (0, 1]"], errors
        )

    def test_weights_of_several_holes(self):
        text = SINGLE_HOLE.replace("weight = 1", "weight = 0.5") + (
            "hole.2.weight = 0.3\n"
            "hole.2.mean = [20, 20]\n"
            "hole.2.cov = [[16, 0], [0, 16]]\n"
        )
        errors = self._errors(text)
        self.assertEqual(1, len(errors))
        self.assertTrue(
            errors[0].startswith(
                "hole.1.weight (line 6), hole.2.weight (line 9): weights"
            )
        )

    def test_start_outside(self):
        errors = self._errors(SINGLE_HOLE + "robot.start = [-5, 50]\n")
        self.assertIn("robot.start (line 9): start", errors[0])

    def test_syntax_error(self):
        e = self.assertRaises(
            exception.ScenarioSyntaxError,
            scenario.parse_text,
            SINGLE_HOLE + "just words\n",
            "test.toml",
        )
        self.assertEqual("test.toml, line 9: expected 'key = value'", str(e))

    def test_yaml_error(self):
        self.assertRaises(
            exception.ScenarioSyntaxError,
            scenario.parse_text,
            "robot.start = [1, 2\n",
        )


class TestOverrides(base.TestCase):
    def test_short_key(self):
        config = scenario.parse_text(SINGLE_HOLE, overrides=["v_max=4"])
        self.assertEqual(4.0, config.v_max)

    def test_replaces_file_value(self):
        config = scenario.parse_text(SINGLE_HOLE, overrides=["grid.nx=50"])
        self.assertEqual(50, config.grid.nx)

    def test_invalid_override(self):
        e = self.assertRaises(
            exception.ScenarioValidationFailed,
            scenario.parse_text,
            SINGLE_HOLE,
            "test.toml",
            ["v_max=0"],
        )
        self.assertEqual(
            ["robot.v_max (--set v_max=0): must be positive, got 0.0"], e.errors
        )

    def test_resolve_key(self):
        self.assertIsNone(scenario.resolve_key("x"))
        self.assertIsNone(scenario.resolve_key("hole.0.cov"))
        self.assertEqual("robot.cov", scenario.resolve_key("cov"))
        self.assertEqual("robot.start", scenario.resolve_key("start"))
        self.assertEqual("hole.12.cov", scenario.resolve_key("hole.12.cov"))


class TestEmit(base.TestCase):
    def test_round_trip_three_holes(self):
        config = scenario.parse_config(base.THREE_HOLES)
        self.assertEqual(config, scenario.parse_text(scenario.emit(config)))

    def test_round_trip_awkward_values(self):
        text = SINGLE_HOLE + (
            "robot.v_max = 0.1\n"
            "timing.beta = 0.3333333333333333\n"
            "timing.gamma = 1e-7\n"
            "timing.saturation_exit = false\n"
            "timing.dwell_floor = false\n"
            "run.snapshot_fractions = [0.1, 0.7]\n"
        )
        config = scenario.parse_text(text)
        emitted = scenario.emit(config)
        self.assertIn("timing.saturation_exit = false\n", emitted)
        self.assertIn("timing.dwell_floor = false\n", emitted)
        self.assertEqual(config, scenario.parse_text(emitted))

    def test_render_value(self):
        self.assertEqual("true", scenario.render_value(True))
        self.assertEqual("12", scenario.render_value(12))
        self.assertEqual("0.10000000000000001", scenario.render_value(0.1))
        self.assertEqual("[[1, 2], [3, 4]]", scenario.render_value([[1, 2], [3, 4]]))


class TestLoad(base.TestCase):
    def test_missing_file(self):
        e = self.assertRaises(
            exception.CannotOpenScenario, scenario.parse_config, "/nonexistent.toml"
        )
        self.assertEqual(exception.EXIT_VALIDATION, e.exit_code)
        self.assertIn("/nonexistent.toml", str(e))

    def test_default_file(self):
        self.assertEqual(scenario.parse_config(base.THREE_HOLES), scenario.load())

    def test_configured_default(self):
        tmp = self.useFixture(fixtures.TempDir()).path
        path = os.path.join(tmp, "single.toml")
        with open(path, "w") as f:
            f.write(SINGLE_HOLE)
        self.flags(default_file=path, group="scenario")
        self.assertEqual(1, len(scenario.load().model))
        config = scenario.load(overrides=["grid.nx=20"])
        self.assertEqual(20, config.grid.nx)
