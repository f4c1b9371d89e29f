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

import fixtures

from ergomix import engine
from ergomix import exception
from ergomix import planner
from ergomix.tests import base


class TestSetup(base.TestCase):
    def test_no_steps(self):
        config = base.three_hole_config("run.max_steps=0", "grid.nx=200", "grid.ny=200")
        trace = engine.run(config)
        self.assertEqual(0, trace.steps)
        self.assertEqual([(0, 180.0, 175.0)], trace.trajectory)
        self.assertEqual(1, len(trace.metrics))
        self.assertGreater(trace.initial_V, 1.998)
        self.assertEqual(trace.initial_V, trace.final_V)
        self.assertEqual([0], list(trace.snapshots))
        self.assertEqual([0, 1, 2], trace.tour)
        row = trace.metrics[0]
        self.assertEqual([0, 1, planner.TRANSIT, 0], [row[0]] + row[2:])
        self.assertEqual([], trace.events)

    def test_hole_without_cells(self):
        config = base.single_hole_config(
            "grid.nx=10", "grid.ny=10", "hole.1.cov=[[1, 0], [0, 1]]"
        )
        e = self.assertRaises(exception.InvalidConfiguration, engine.run, config)
        self.assertIn("hole 1 covers no grid cell", str(e))

    def test_progress_logged(self):
        self.flags(progress_interval=5, group="simulation")
        engine.run(base.single_hole_config("run.max_steps=10"))
        self.assertIn("Step 5/10", self.log_fixture.output)
        self.assertIn("Step 10/10", self.log_fixture.output)


class TestTimingLoop(base.TestCase):
    def _quick(self, *overrides):
        # With beta = 2 every residual is below the threshold, so the robot
        # leaves after the single step its stay bound asks for.
        return engine.run(
            base.single_hole_config(
                "timing.beta=2",
                "timing.gamma=0",
                "timing.lone_hole_progress=false",
                *overrides
            ),
            check_invariants=True,
        )

    def test_single_hole_cycles(self):
        trace = self._quick("run.max_steps=10")
        kinds = [(e["k"], e["event"]) for e in trace.events]
        self.assertEqual((0, engine.ARRIVE), kinds[0])
        self.assertEqual((1, engine.DEPART), kinds[1])
        self.assertEqual((2, engine.ARRIVE), kinds[2])
        self.assertEqual(5, trace.cycles)
        values = engine.end_of_cycle_values(trace)
        self.assertEqual([1, 2, 3, 4, 5], [n for n, _ in values])
        for _, V in values:
            self.assertIsNotNone(V)

    def test_visits(self):
        trace = self._quick("run.max_steps=10")
        first = trace.visits[0]
        self.assertEqual(1, first["hole"])
        self.assertEqual(1, first["visit"])
        self.assertEqual(0, first["arrive_k"])
        self.assertEqual(1, first["depart_k"])
        self.assertEqual(0, first["transit_h"])
        self.assertEqual(1, first["dwell"])
        self.assertEqual(2, trace.visits[1]["visit"])

    def test_legs(self):
        trace = self._quick("run.max_steps=10")
        leg = trace.legs[0]
        self.assertEqual(1, leg["depart_k"])
        self.assertEqual(2, leg["arrive_k"])
        self.assertEqual(0, leg["h"])
        self.assertEqual(leg["V_depart"], leg["V_arrive"])

    def test_metrics_rows(self):
        trace = self._quick("run.max_steps=10", "run.v_every=4")
        self.assertEqual(11, len(trace.metrics))
        self.assertEqual(list(range(11)), [row[0] for row in trace.metrics])
        for row in trace.metrics:
            self.assertEqual(1, row[2])
            self.assertIn(row[3], (planner.DWELL, planner.TRANSIT))
        # Every step arrives or departs here, so V is always evaluated.
        self.assertEqual(11, len(trace.values()))

    def test_no_exit_without_saturation(self):
        trace = engine.run(
            base.single_hole_config(
                "timing.beta=1e-9", "timing.saturation_exit=false", "run.max_steps=50"
            )
        )
        self.assertEqual([engine.ARRIVE], [e["event"] for e in trace.events])
        self.assertEqual(0, trace.cycles)
        self.assertRaises(exception.NotEnoughCycles, engine.end_of_cycle_values, trace)


class TestSingleHole(base.TestCase):
    def test_value_decreases_until_departure(self):
        config = base.single_hole_config("run.v_every=5", "run.max_steps=3000")
        trace = engine.run(config)
        departures = [e["k"] for e in trace.events if e["event"] != engine.ARRIVE]
        self.assertTrue(departures)
        values = [V for k, V in trace.values() if k <= departures[0]]
        self.assertGreater(len(values), 2)
        for before, after in zip(values, values[1:]):
            self.assertLess(after, before)

    def test_deterministic(self):
        config = base.single_hole_config("run.max_steps=300", "robot.start=[10, 90]")
        first = engine.run(config)
        second = engine.run(config)
        self.assertEqual(first.trajectory, second.trajectory)
        self.assertEqual(first.metrics, second.metrics)
        self.assertEqual(first.events, second.events)

    def test_snapshot_steps(self):
        trace = engine.run(base.single_hole_config("run.max_steps=10"))
        self.assertEqual([0, 1, 3, 5, 8, 10], list(trace.snapshots))
        for k, phi in trace.snapshots.items():
            self.assertIsNotNone(trace.metrics[k][1])
            self.assertEqual(trace.rho_star.spec, phi.spec)

    def test_each_visit_reaches_a_new_low(self):
        config = base.single_hole_config("run.v_every=100", "run.max_steps=5000")
        trace = engine.run(config)
        values = trace.values()
        lows = []
        for visit in trace.visits:
            lows.append(
                min(
                    V
                    for k, V in values
                    if visit["arrive_k"] <= k <= visit["depart_k"]
                )
            )
        self.assertGreater(len(lows), 1)
        for before, after in zip(lows, lows[1:]):
            self.assertLess(after, before)

    def test_lone_hole_progress_off(self):
        on = engine.run(base.single_hole_config("run.max_steps=2000"))
        off = engine.run(
            base.single_hole_config(
                "run.max_steps=2000", "timing.lone_hole_progress=false"
            )
        )
        # one hole is both the dwell and the transit goal
        self.assertEqual(on.trajectory, off.trajectory)


class TestInvariants(base.TestCase):
    def test_step_too_long(self):
        def jump(robot, goal):
            return robot.position + [20.0, 0.0]

        self.useFixture(fixtures.MonkeyPatch("ergomix.planner.motion_step", jump))
        config = base.single_hole_config("run.max_steps=5", "robot.start=[30, 50]")
        e = self.assertRaises(
            exception.InvariantViolation, engine.run, config, check_invariants=True
        )
        self.assertIn("exceeds v_max", str(e))

    def test_unchecked_by_default(self):
        def jump(robot, goal):
            return robot.position + [20.0, 0.0]

        self.useFixture(fixtures.MonkeyPatch("ergomix.planner.motion_step", jump))
        config = base.single_hole_config("run.max_steps=2", "robot.start=[10, 50]")
        trace = engine.run(config)
        self.assertEqual((2, 50.0, 50.0), trace.trajectory[-1])

    def test_configured(self):
        self.flags(check_invariants=True, group="simulation")
        sim = engine.Simulation(base.single_hole_config("run.max_steps=1"))
        self.assertTrue(sim.check_invariants)
