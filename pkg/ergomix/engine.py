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

"""The exploration loop.

Step 0 deposits the first stamp at the start position. Every later step
picks the goal inside the target hole, moves the robot, deposits, and then
runs the timing bookkeeping: hole arrival, dwell residuals and the
departure decision.
"""

import collections
import datetime
import time

from dateutil import tz
import numpy as np
from oslo_config import cfg
from oslo_log import log

from ergomix import ergodic
from ergomix import exception
from ergomix import field
from ergomix import mixture
from ergomix import planner

opts = [
    cfg.BoolOpt(
        "check_invariants",
        default=False,
        help="Verify positions, step lengths, V range and time-average "
        "mass while the simulation runs, and abort on the first violation.",
    ),
    cfg.IntOpt(
        "progress_interval",
        default=10000,
        min=0,
        help="Log the simulation progress every this many steps. "
        "Set to 0 to disable progress messages.",
    ),
]

CONF = cfg.CONF
CONF.register_opts(opts, group="simulation")

LOG = log.getLogger(__name__)

V_TOLERANCE = 2e-3
MASS_TOLERANCE = 1e-3
STEP_TOLERANCE = 1e-9

ARRIVE = "arrive"
DEPART = "depart"
DEPART_SATURATED = "depart_saturated"

METRIC_FIELDS = ("k", "V", "target_hole", "phase", "cycle")
TRAJECTORY_FIELDS = ("k", "x", "y")
EVENT_FIELDS = (
    "k",
    "event",
    "hole",
    "h",
    "h_bar_prime",
    "h_bar_dprime",
    "frozen_a",
    "residual",
    "cycle",
)
VISIT_FIELDS = ("hole", "visit", "cycle", "arrive_k", "depart_k", "transit_h", "dwell")


class SimTrace(object):
    """Everything recorded during a run.

    ``metrics`` rows are ``[k, V, target_hole, phase, cycle]`` lists with V
    left as None on steps where it was not evaluated. Hole numbers in rows
    and events are 1-based.
    """

    def __init__(self, config):
        self.config = config
        self.metrics = []
        self.trajectory = []
        self.events = []
        self.visits = []
        self.legs = []
        self.snapshots = collections.OrderedDict()
        self.rho_star = None
        self.tour = []
        self.started_at = None
        self.duration = None

    @property
    def steps(self):
        return len(self.trajectory) - 1

    @property
    def cycles(self):
        return self.metrics[-1][4] if self.metrics else 0

    def values(self):
        """(k, V) for every step where V was evaluated."""
        return [(row[0], row[1]) for row in self.metrics if row[1] is not None]

    @property
    def initial_V(self):
        values = self.values()
        return values[0][1] if values else None

    @property
    def final_V(self):
        values = self.values()
        return values[-1][1] if values else None


class Simulation(object):
    """One run of the exploration loop over a SimConfig."""

    def __init__(self, config, check_invariants=None, progress_interval=None):
        if check_invariants is None:
            check_invariants = CONF.simulation.check_invariants
        if progress_interval is None:
            progress_interval = CONF.simulation.progress_interval

        self.config = config
        self.spec = config.grid
        self.check_invariants = check_invariants
        self.progress_interval = progress_interval
        self.timing = ergodic.TimingParams(config.beta, config.gamma)

        self.rho_star = None
        self.mask = None
        self.acc = None
        self.robot = None
        self.plan = None
        self.trace = None
        self._snapshot_steps = set()
        self._visit = None
        self._visits_per_hole = collections.Counter()
        self._leg = None

    def _setup(self):
        config = self.config
        self.rho_star = mixture.rasterize_mixture(config.model, self.spec)
        self.mask = mixture.build_hole_masks(
            config.model, self.spec, config.sigma_level
        )
        for hole in range(len(config.model)):
            if not len(self.mask.hole_cells(hole)):
                raise exception.InvalidConfiguration(
                    reason="hole %d covers no grid cell, use a finer grid" % (hole + 1)
                )
        self.acc = ergodic.MassAccumulator(
            self.spec, config.robot_cov, config.stamp_radius
        )
        self.robot = planner.RobotState(config.start, config.v_max)
        self._snapshot_steps = set(config.snapshot_steps)
        self.trace = SimTrace(config)
        self.trace.rho_star = self.rho_star

    def run(self):
        config = self.config
        started = time.time()
        self._setup()
        self.trace.started_at = datetime.datetime.now(tz.tzlocal())

        self.acc.deposit(self.robot.position)
        first = planner.initial_target(
            self.robot, self.mask, config.model, config.sigma_level
        )
        self.plan = planner.MissionPlan(
            planner.tour_order(config.model, first),
            keep_dwell=config.dwell_floor,
            lone_hole_progress=config.lone_hole_progress,
        )
        self.trace.tour = list(self.plan.tour)
        LOG.info(
            "Exploring %d holes for %d steps, tour %s"
            % (
                len(config.model),
                config.max_steps,
                [hole + 1 for hole in self.plan.tour],
            )
        )

        self._record(0)
        for k in range(1, config.max_steps + 1):
            self._move(k)
            self._record(k)

        self.trace.duration = time.time() - started
        LOG.info(
            "Run finished after %d steps and %d cycles, V=%.6g"
            % (self.trace.steps, self.trace.cycles, self.trace.final_V)
        )
        return self.trace

    def _move(self, k):
        plan = self.plan
        cells = self.mask.hole_cells(plan.current_target)
        goal = planner.goal_among(
            self.spec, cells, self.acc.phi_at(cells, self.rho_star)
        )
        position = planner.motion_step(self.robot, goal)
        if self.check_invariants:
            self._check_motion(k, position)
        if (
            plan.phase == planner.TRANSIT
            and self.mask.hole_at(position) == plan.current_target
        ):
            # V at the last transit step, before the arrival stamp lands
            self._backfill(k - 1)
        self.robot.position = position
        self.acc.deposit(position)

    def _record(self, k):
        plan = self.plan
        position = self.robot.position
        self.trace.trajectory.append((k, float(position[0]), float(position[1])))

        evaluate = (
            k % self.config.v_every == 0
            or k in self._snapshot_steps
            or k == self.config.max_steps
        )
        arrived = False
        if plan.phase == planner.TRANSIT:
            if self.mask.hole_at(position) == plan.current_target:
                self._arrive(k)
                arrived = evaluate = True
            else:
                plan.transit_h += 1

        row = [k, None, plan.current_target + 1, plan.phase, plan.cycle]
        self.trace.metrics.append(row)

        V = self._evaluate(k) if evaluate else None
        departing, residual = False, None
        if plan.phase == planner.DWELL:
            departing, residual, V = self._dwell(k, V)
        if departing and V is None:
            V = self._evaluate(k)
        row[1] = V
        if arrived:
            self.trace.events[-1]["V"] = row[1]
        if departing:
            self._depart(k, row[1], residual)

        if self.progress_interval and k and k % self.progress_interval == 0:
            LOG.info(
                "Step %d/%d: cycle %d, target hole %d, V=%s"
                % (
                    k,
                    self.config.max_steps,
                    plan.cycle,
                    plan.current_target + 1,
                    "%.6g" % row[1] if row[1] is not None else "-",
                )
            )

    def _hole_mass(self):
        values = self.acc.sum_field.values[self.mask.inside] / self.acc.count
        return field.quadrature(values, self.spec.cell_area)

    def _arrive(self, k):
        plan = self.plan
        a = self._hole_mass()
        completed = plan.arrive(k, a)
        hole = plan.current_target
        if completed:
            LOG.info("Cycle %d completed at step %d" % (plan.cycle, k))
        LOG.debug(
            "Step %d: arrived at hole %d after %d transit steps, "
            "a=%.6g, minimum dwell %d"
            % (k, hole + 1, plan.transit_h, a, plan.h_bar_prime)
        )

        self.trace.events.append(
            {
                "k": k,
                "event": ARRIVE,
                "hole": hole + 1,
                "h": plan.transit_h,
                "h_bar_prime": plan.h_bar_prime,
                "h_bar_dprime": None,
                "frozen_a": a,
                "residual": None,
                "cycle": plan.cycle,
                "completes_cycle": completed,
                "V": None,
            }
        )
        self._visits_per_hole[hole] += 1
        self._visit = {
            "hole": hole + 1,
            "visit": self._visits_per_hole[hole],
            "cycle": plan.cycle,
            "arrive_k": k,
            "transit_h": plan.transit_h,
        }
        if self._leg is not None:
            self._leg["arrive_k"] = k
            self._leg["h"] = plan.transit_h
            # metrics[-1] is still the row of step k - 1
            self._leg["V_arrive"] = self.trace.metrics[-1][1]
            self.trace.legs.append(self._leg)
            self._leg = None

    def _dwell(self, k, V):
        plan = self.plan
        plan.dwell_elapsed = k - plan.phase_start_k
        cells = self.mask.hole_cells(plan.current_target)
        phi = self.acc.phi_at(cells, self.rho_star)
        area = self.spec.cell_area
        residual = ergodic.residual_of(phi, area)

        if plan.h_bar_dprime is None:
            c_n = ergodic.departure_threshold(self.timing.for_cycle(plan.cycle))
            if residual <= c_n:
                plan.h_bar_dprime = plan.dwell_elapsed
            elif self.config.saturation_exit:
                deficit = ergodic.deficit_of(phi, area)
                if deficit <= c_n / 2.0:
                    plan.h_bar_dprime = plan.dwell_elapsed
                    plan.saturated = True

        timing = (plan.dwell_elapsed, plan.h_bar_prime, plan.h_bar_dprime)
        if V is None and plan.lone and planner.dwell_complete(plan, *timing):
            # a lone hole is left at a new low of V, so look at every step
            V = self._evaluate(k)
        if V is not None:
            plan.note_V(V)
        decision = planner.departure_decision(plan, *timing)
        return decision == planner.ADVANCE, residual, V

    def _depart(self, k, V, residual):
        plan = self.plan
        hole = plan.current_target
        if self.check_invariants:
            self._check_departure(k, residual)
        if plan.saturated:
            LOG.warning(
                "Step %d: residual %.6g of hole %d stayed above the departure "
                "threshold, leaving once the hole is filled" % (k, residual, hole + 1)
            )
        LOG.debug(
            "Step %d: leaving hole %d after %d steps for hole %d"
            % (k, hole + 1, plan.dwell_elapsed, plan.next_target + 1)
        )

        self.trace.events.append(
            {
                "k": k,
                "event": DEPART_SATURATED if plan.saturated else DEPART,
                "hole": hole + 1,
                "h": plan.transit_h,
                "h_bar_prime": plan.h_bar_prime,
                "h_bar_dprime": plan.h_bar_dprime,
                "frozen_a": plan.frozen_a,
                "residual": residual,
                "cycle": plan.cycle,
                "completes_cycle": False,
                "V": V,
            }
        )
        self._visit["depart_k"] = k
        self._visit["dwell"] = plan.dwell_elapsed
        self.trace.visits.append(self._visit)
        self._visit = None

        self._leg = {
            "from_hole": hole + 1,
            "to_hole": plan.next_target + 1,
            "depart_k": k,
            "a": self._hole_mass(),
            "V_depart": V,
        }
        plan.advance(k)

    def _evaluate(self, k):
        rho = self.acc.time_average()
        phi = ergodic.compute_phi(rho, self.rho_star)
        V = ergodic.ergodic_value(phi)
        if k in self._snapshot_steps:
            self.trace.snapshots[k] = phi
        if self.check_invariants:
            self._check_state(k, rho, V)
        return V

    def _backfill(self, k):
        row = self.trace.metrics[-1]
        if k >= 0 and row[1] is None:
            row[1] = self._evaluate(k)

    def _check_motion(self, k, position):
        if not self.spec.contains(position):
            raise exception.InvariantViolation(
                k=k, reason="position %s left the domain" % position.tolist()
            )
        step = float(np.hypot(*(position - self.robot.position)))
        if step > self.robot.v_max + STEP_TOLERANCE:
            raise exception.InvariantViolation(
                k=k, reason="step of %.17g exceeds v_max" % step
            )

    def _check_state(self, k, rho, V):
        if not 0.0 <= V <= 2.0 + V_TOLERANCE:
            raise exception.InvariantViolation(k=k, reason="V=%.17g out of range" % V)
        mass = field.integrate(rho)
        if abs(mass - 1.0) > MASS_TOLERANCE:
            raise exception.InvariantViolation(
                k=k, reason="time-average mass is %.17g" % mass
            )

    def _check_departure(self, k, residual):
        plan = self.plan
        if plan.transit_h:
            bound = ergodic.stay_bound(plan.transit_h, plan.frozen_a)
            if not plan.dwell_elapsed > bound:
                raise exception.InvariantViolation(
                    k=k,
                    reason="dwell of %d steps does not exceed the stay bound %.17g"
                    % (plan.dwell_elapsed, bound),
                )
        if plan.h_bar_dprime is None or plan.dwell_elapsed < plan.h_bar_dprime:
            raise exception.InvariantViolation(
                k=k,
                reason="left hole %d before its residual %.17g reached the threshold"
                % (plan.current_target + 1, residual),
            )


def run(config, **kwargs):
    """Run a simulation and return its SimTrace."""
    return Simulation(config, **kwargs).run()


def end_of_cycle_values(trace):
    """(N, V) at the arrival that completes each tour cycle N."""
    values = [
        (event["cycle"], event["V"])
        for event in trace.events
        if event["event"] == ARRIVE and event["completes_cycle"]
    ]
    if len(values) < 2:
        raise exception.NotEnoughCycles(count=len(values), required=2)
    return values
