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

"""Hole selection, tour ordering, goal points, motion and dwell decisions."""

import itertools
import math

import numpy as np
from oslo_log import log
from scipy.spatial import distance

from ergomix import ergodic
from ergomix import exception

LOG = log.getLogger(__name__)

TRANSIT = "transit"
DWELL = "dwell"

STAY = "stay"
ADVANCE = "advance"

# Tours over more holes than this use the nearest-neighbour heuristic.
EXACT_TOUR_LIMIT = 8
TIE_TOLERANCE = 1e-9


class RobotState(object):
    def __init__(self, position, v_max):
        if not v_max > 0:
            raise exception.InvalidConfiguration(
                reason="v_max must be positive, got %s" % v_max
            )
        self.position = np.array(position, dtype=np.float64)
        self.v_max = float(v_max)

    def __repr__(self):
        return "<RobotState at %s>" % self.position.tolist()


class MissionPlan(object):
    """Where the robot is heading and how long it has been there.

    The tour is cyclic. ``cycle`` counts completed tours and is bumped each
    time the robot enters the tour's first hole again.

    With ``keep_dwell`` a hole is never left sooner than on the previous
    visit to it. With ``lone_hole_progress`` a single-hole tour only leaves
    its hole once the lowest V seen in the dwell beats the previous dwell's.
    """

    def __init__(self, tour, keep_dwell=False, lone_hole_progress=False):
        self.tour = list(tour)
        if not self.tour:
            raise exception.InvalidMixture(reason="the tour visits no hole")
        self.tour_index = 0
        self.current_target = self.tour[0]
        self.phase = TRANSIT
        self.phase_start_k = 0
        self.transit_h = 0
        self.dwell_elapsed = 0
        self.frozen_a = None
        self.cycle = 0
        self.h_bar_prime = None
        self.h_bar_dprime = None
        self.saturated = False
        self.arrivals = 0
        self.keep_dwell = keep_dwell
        self.last_dwell = {}
        self.dwell_floor = 0
        self.lone = lone_hole_progress and len(self.tour) == 1
        self.best_V = None
        self.previous_best_V = None
        self.V_to_beat = None

    def __repr__(self):
        return "<MissionPlan %s hole %d cycle %d>" % (
            self.phase,
            self.current_target + 1,
            self.cycle,
        )

    @property
    def next_target(self):
        return self.tour[(self.tour_index + 1) % len(self.tour)]

    def arrive(self, k, frozen_a):
        """Switch to DWELL at step k; returns True if a cycle completed."""
        completed = self.arrivals > 0 and self.tour_index == 0
        if completed:
            self.cycle += 1
        self.arrivals += 1
        self.phase = DWELL
        self.phase_start_k = k
        self.dwell_elapsed = 0
        self.frozen_a = frozen_a
        self.h_bar_prime = required_dwell(self.transit_h, frozen_a)
        self.h_bar_dprime = None
        self.saturated = False
        self.dwell_floor = 0
        if self.keep_dwell:
            self.dwell_floor = self.last_dwell.get(self.current_target, 0)
        self.best_V = None
        self.V_to_beat = self.previous_best_V if self.lone else None
        return completed

    def note_V(self, V):
        """Track the lowest V evaluated during the current dwell."""
        if self.best_V is None or V < self.best_V:
            self.best_V = V

    def advance(self, k):
        """Leave the current hole for the next one in the tour."""
        self.last_dwell[self.current_target] = self.dwell_elapsed
        self.previous_best_V = self.best_V
        self.best_V = None
        self.tour_index = (self.tour_index + 1) % len(self.tour)
        self.current_target = self.tour[self.tour_index]
        self.phase = TRANSIT
        self.phase_start_k = k
        self.transit_h = 0
        self.dwell_elapsed = 0
        self.h_bar_prime = None
        self.h_bar_dprime = None


def required_dwell(h, a):
    """First dwell length strictly above the stay bound.

    A transit of zero steps needs a single dwell step whatever the hole
    mass is.
    """
    if h == 0:
        return 1
    return int(math.floor(ergodic.stay_bound(h, a))) + 1


def initial_target(robot, masks, model, sigma_level=3.0):
    """The hole whose sigma ellipse is closest to the robot."""
    hole = masks.hole_at(robot.position)
    if hole is not None:
        return hole
    distances = [c.boundary_distance(robot.position, sigma_level) for c in model]
    best = min(distances)
    for index, d in enumerate(distances):
        if d <= best + TIE_TOLERANCE * max(1.0, best):
            return index


def _tour_length(dist, tour):
    legs = [dist[a, b] for a, b in zip(tour, tour[1:] + tour[:1])]
    return math.fsum(legs)


def _nearest_neighbour(dist, first):
    tour = [first]
    left = set(range(len(dist))) - set(tour)
    while left:
        here = tour[-1]
        nxt = min(sorted(left), key=lambda j: dist[here, j])
        tour.append(nxt)
        left.remove(nxt)
    return tour


def tour_order(model, first):
    """Shortest closed tour over the hole means starting at ``first``.

    Exact for up to EXACT_TOUR_LIMIT holes, where equally long tours are
    resolved in favour of the lexicographically smallest one. Larger models
    get a nearest-neighbour tour.
    """
    count = len(model)
    if not 0 <= first < count:
        raise exception.InvalidHole(hole=first, count=count)
    dist = distance.cdist(model.means, model.means)
    if count > EXACT_TOUR_LIMIT:
        LOG.debug("Using nearest-neighbour tour for %d holes" % count)
        return _nearest_neighbour(dist, first)

    others = [i for i in range(count) if i != first]
    best, best_length = None, None
    for rest in itertools.permutations(others):
        tour = [first] + list(rest)
        length = _tour_length(dist, tour)
        if best is None or length < best_length - TIE_TOLERANCE * max(1.0, best_length):
            best, best_length = tour, length
    return best


def goal_among(spec, cells, phi_values):
    """Centre of the cell with the lowest error among ``cells``."""
    if not len(cells):
        raise exception.InvalidConfiguration(reason="target hole covers no grid cell")
    return spec.flat_center(cells[int(np.argmin(phi_values))])


def goal_point(phi, masks, hole):
    """Centre of the most under-covered cell of a hole."""
    cells = masks.hole_cells(hole)
    return goal_among(phi.spec, cells, phi.values.ravel()[cells])


def motion_step(robot, goal):
    """Position after one step of at most v_max towards ``goal``."""
    goal = np.asarray(goal, dtype=np.float64)
    delta = goal - robot.position
    length = math.hypot(delta[0], delta[1])
    if length <= robot.v_max:
        return goal.copy()
    return robot.position + robot.v_max * delta / length


def dwell_complete(plan, dwell_elapsed, h_bar_prime, h_bar_dprime):
    """Whether the stay bound, the residual and the dwell floor are met."""
    if plan.phase != DWELL or h_bar_dprime is None:
        return False
    return dwell_elapsed >= max(h_bar_prime, h_bar_dprime, plan.dwell_floor)


def departure_decision(plan, dwell_elapsed, h_bar_prime, h_bar_dprime):
    """Advance once the dwell covers both the stay bound and the residual."""
    if not dwell_complete(plan, dwell_elapsed, h_bar_prime, h_bar_dprime):
        return STAY
    if plan.V_to_beat is not None and (
        plan.best_V is None or plan.best_V >= plan.V_to_beat
    ):
        return STAY
    return ADVANCE
