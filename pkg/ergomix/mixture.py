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

"""Mixture-of-Gaussians reference distributions and their hole masks."""

import math

import numpy as np
from oslo_log import log
from scipy import optimize

from ergomix import exception
from ergomix import field

LOG = log.getLogger(__name__)

WEIGHT_TOLERANCE = 1e-12
SYMMETRY_TOLERANCE = 1e-12
DEFAULT_SIGMA_LEVEL = 3.0


class GaussianComponent(object):
    """One weighted Gaussian of the reference distribution.

    The weight lies in (0, 1]; a weight of exactly one is only meaningful
    for a single-component mixture.
    """

    def __init__(self, weight, mean, cov):
        problems = self.check(weight, mean, cov)
        if problems:
            raise exception.InvalidComponent(reason="; ".join(problems))

        self.weight = float(weight)
        self.mean = np.array(mean, dtype=np.float64)
        self.cov = np.array(cov, dtype=np.float64)
        self.inv_cov = np.linalg.inv(self.cov)
        self.norm = 1.0 / (2.0 * math.pi * math.sqrt(np.linalg.det(self.cov)))

    @staticmethod
    def check(weight, mean, cov):
        """Return the list of problems with a component definition."""
        problems = []
        try:
            w = float(weight)
        except (TypeError, ValueError):
            problems.append("weight %r is not a number" % (weight,))
        else:
            if not 0.0 < w <= 1.0:
                problems.append("weight %s is outside (0, 1]" % weight)

        try:
            m = np.array(mean, dtype=np.float64)
        except (TypeError, ValueError):
            m = None
        if m is None or m.shape != (2,) or not np.isfinite(m).all():
            problems.append("mean %r is not a finite 2D point" % (mean,))

        try:
            c = np.array(cov, dtype=np.float64)
        except (TypeError, ValueError):
            c = None
        if c is None or c.shape != (2, 2) or not np.isfinite(c).all():
            problems.append("covariance %r is not a finite 2x2 matrix" % (cov,))
        else:
            scale = max(1.0, abs(c[0, 1]), abs(c[1, 0]))
            if abs(c[0, 1] - c[1, 0]) > SYMMETRY_TOLERANCE * scale:
                problems.append("covariance %r is not symmetric" % (cov,))
            elif np.linalg.eigvalsh(c).min() <= 0.0:
                problems.append("covariance %r is not positive definite" % (cov,))
        return problems

    def __repr__(self):
        return "<GaussianComponent weight=%s mean=%s>" % (
            self.weight,
            self.mean.tolist(),
        )

    def __eq__(self, other):
        return (
            isinstance(other, GaussianComponent)
            and self.weight == other.weight
            and np.array_equal(self.mean, other.mean)
            and np.array_equal(self.cov, other.cov)
        )

    def __ne__(self, other):
        return not self == other

    def mahalanobis_sq(self, points):
        d = np.asarray(points, dtype=np.float64) - self.mean
        return np.einsum("...i,ij,...j->...", d, self.inv_cov, d)

    def density(self, points):
        """Unweighted density of this component at point(s)."""
        return self.norm * np.exp(-0.5 * self.mahalanobis_sq(points))

    def half_extents(self, sigma_level=DEFAULT_SIGMA_LEVEL):
        """Half widths of the axis-aligned box around the sigma ellipse."""
        return (
            sigma_level * math.sqrt(self.cov[0, 0]),
            sigma_level * math.sqrt(self.cov[1, 1]),
        )

    def boundary_distance(self, point, sigma_level=DEFAULT_SIGMA_LEVEL):
        """Euclidean distance from a point to the sigma-level ellipse.

        Points on or inside the ellipse are at distance zero. Outside, the
        closest ellipse point is found in the principal frame by solving the
        secular equation for its Lagrange multiplier.
        """
        if self.mahalanobis_sq(point) <= sigma_level**2:
            return 0.0

        evals, evecs = np.linalg.eigh(self.cov)
        axes = sigma_level * np.sqrt(evals)
        y = np.abs(evecs.T.dot(np.asarray(point, dtype=np.float64) - self.mean))

        def excess(t):
            return float(np.sum((axes * y / (t + axes**2)) ** 2) - 1.0)

        upper = float(axes.max() * np.linalg.norm(y))
        t = optimize.brentq(excess, 0.0, upper, xtol=1e-12)
        closest = axes**2 * y / (t + axes**2)
        return float(np.linalg.norm(y - closest))


class MixtureModel(object):
    """The reference distribution: an ordered list of components."""

    def __init__(self, components):
        self.components = list(components)
        if not self.components:
            raise exception.InvalidMixture(reason="at least one component needed")
        total = math.fsum(c.weight for c in self.components)
        if abs(total - 1.0) > WEIGHT_TOLERANCE:
            raise exception.InvalidMixture(
                reason="component weights %s add up to %.17g, not 1"
                % ([c.weight for c in self.components], total)
            )

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, index):
        return self.components[index]

    def __eq__(self, other):
        return isinstance(other, MixtureModel) and self.components == other.components

    def __ne__(self, other):
        return not self == other

    @property
    def weights(self):
        return [c.weight for c in self.components]

    @property
    def means(self):
        return np.array([c.mean for c in self.components])

    def density(self, points):
        total = 0.0
        for comp in self.components:
            total = total + comp.weight * comp.density(points)
        return total


def rasterize_mixture(model, spec):
    """Sample the mixture density at every cell centre of the grid."""
    for index, comp in enumerate(model):
        if not spec.contains(comp.mean):
            raise exception.OutOfDomain(
                point="%s (mean of hole %d)" % (comp.mean.tolist(), index + 1),
                domain=spec,
            )
        hx, hy = comp.half_extents()
        x, y = comp.mean
        if (
            x - hx < spec.x_min
            or x + hx > spec.x_max
            or y - hy < spec.y_min
            or y + hy > spec.y_max
        ):
            LOG.warning(
                "3-sigma ellipse of hole %d extends beyond the domain %s, "
                "part of its mass is lost" % (index + 1, spec)
            )

    return field.ScalarField(spec, model.density(spec.points()))


class RegionMask(object):
    """Hole membership of every grid cell.

    ``hole_id`` holds the component index of the hole a cell belongs to, or
    ``NO_HOLE`` for cells in the complement region.
    """

    NO_HOLE = -1

    def __init__(self, spec, hole_id, count):
        hole_id = np.asarray(hole_id, dtype=np.intp)
        if hole_id.shape != spec.shape:
            raise exception.InvalidGrid(
                reason="hole map of shape %s does not match %r" % (hole_id.shape, spec)
            )
        self.spec = spec
        self.hole_id = hole_id
        self.count = int(count)
        self.inside = hole_id != self.NO_HOLE
        self._cells = {}

    @property
    def omega2(self):
        return self.inside

    @property
    def omega1(self):
        return ~self.inside

    def _check(self, hole):
        if not isinstance(hole, (int, np.integer)) or not 0 <= hole < self.count:
            raise exception.InvalidHole(hole=hole, count=self.count)

    def hole(self, hole):
        """Boolean mask of the cells of one hole."""
        self._check(hole)
        return self.hole_id == hole

    def hole_cells(self, hole):
        """Flat indices of the cells of one hole, ascending."""
        self._check(hole)
        cells = self._cells.get(hole)
        if cells is None:
            cells = np.flatnonzero(self.hole_id.ravel() == hole)
            self._cells[hole] = cells
        return cells

    def hole_at(self, point):
        """Index of the hole holding a point, or None."""
        j, i = self.spec.cell_of(point)
        hole = int(self.hole_id[j, i])
        return None if hole == self.NO_HOLE else hole


def build_hole_masks(model, spec, sigma_level=DEFAULT_SIGMA_LEVEL):
    """Mark the cells inside each component's sigma-level ellipse.

    Cells claimed by more than one ellipse go to the lowest component index.
    """
    if not sigma_level > 0:
        raise exception.InvalidConfiguration(
            reason="sigma level must be positive, got %s" % sigma_level
        )
    points = spec.points()
    level = float(sigma_level) ** 2
    hole_id = np.full(spec.shape, RegionMask.NO_HOLE, dtype=np.intp)
    for index, comp in enumerate(model):
        claimed = (comp.mahalanobis_sq(points) <= level) & (
            hole_id == RegionMask.NO_HOLE
        )
        hole_id[claimed] = index
        if not claimed.any():
            LOG.warning("Hole %d covers no grid cell" % (index + 1))
    return RegionMask(spec, hole_id, len(model))
