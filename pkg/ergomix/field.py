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

"""Scalar fields sampled on a uniform grid over the exploration domain."""

import math

import numpy as np

from ergomix import exception

DEFAULT_STAMP_RADIUS = 5.0
MIN_STAMP_RADIUS = 3.0


class GridSpec(object):
    """Uniform rectangular grid over the domain X.

    Samples live at cell centres. Values are stored row-major with shape
    ``(ny, nx)``: row ``j`` holds ``y = y_min + (j + 0.5) * dy`` and column
    ``i`` holds ``x = x_min + (i + 0.5) * dx``.
    """

    def __init__(self, x_min, x_max, y_min, y_max, nx, ny):
        problems = self.check(x_min, x_max, y_min, y_max, nx, ny)
        if problems:
            raise exception.InvalidGrid(reason="; ".join(problems))

        self.x_min = float(x_min)
        self.x_max = float(x_max)
        self.y_min = float(y_min)
        self.y_max = float(y_max)
        self.nx = int(nx)
        self.ny = int(ny)
        self.dx = (self.x_max - self.x_min) / self.nx
        self.dy = (self.y_max - self.y_min) / self.ny
        self.cell_area = self.dx * self.dy

    @staticmethod
    def check(x_min, x_max, y_min, y_max, nx, ny):
        """Return the list of problems with the given grid definition."""
        problems = []
        try:
            if not float(x_max) > float(x_min):
                problems.append("x_max (%s) must exceed x_min (%s)" % (x_max, x_min))
            if not float(y_max) > float(y_min):
                problems.append("y_max (%s) must exceed y_min (%s)" % (y_max, y_min))
        except (TypeError, ValueError):
            problems.append("domain bounds must be numbers")
        for name, value in (("nx", nx), ("ny", ny)):
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                problems.append("%s must be an integer, got %r" % (name, value))
            elif value < 2:
                problems.append("%s must be at least 2, got %s" % (name, value))
        return problems

    @property
    def shape(self):
        return (self.ny, self.nx)

    @property
    def size(self):
        return self.nx * self.ny

    def _key(self):
        return (self.x_min, self.x_max, self.y_min, self.y_max, self.nx, self.ny)

    def __eq__(self, other):
        return isinstance(other, GridSpec) and self._key() == other._key()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return "<GridSpec [%s, %s]x[%s, %s] %dx%d>" % self._key()

    def x_centers(self):
        return self.x_min + (np.arange(self.nx) + 0.5) * self.dx

    def y_centers(self):
        return self.y_min + (np.arange(self.ny) + 0.5) * self.dy

    def points(self):
        """Cell centres as an array of shape (ny, nx, 2)."""
        xs, ys = np.meshgrid(self.x_centers(), self.y_centers())
        return np.stack([xs, ys], axis=-1)

    def contains(self, point):
        x, y = point
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max

    def ensure_contains(self, point):
        if not self.contains(point):
            raise exception.OutOfDomain(point=_fmt_point(point), domain=self)

    def cell_of(self, point):
        """Return the (row, column) of the cell holding a world point."""
        self.ensure_contains(point)
        x, y = point
        i = int(math.floor((x - self.x_min) / self.dx))
        j = int(math.floor((y - self.y_min) / self.dy))
        return min(max(j, 0), self.ny - 1), min(max(i, 0), self.nx - 1)

    def flat_index(self, point):
        j, i = self.cell_of(point)
        return j * self.nx + i

    def center(self, j, i):
        return np.array(
            [self.x_min + (i + 0.5) * self.dx, self.y_min + (j + 0.5) * self.dy]
        )

    def flat_center(self, index):
        j, i = divmod(int(index), self.nx)
        return self.center(j, i)


def _fmt_point(point):
    return "[%s]" % ", ".join("%.6g" % c for c in point)


class ScalarField(object):
    """Real values sampled on a GridSpec."""

    def __init__(self, spec, values=None):
        self.spec = spec
        if values is None:
            values = np.zeros(spec.shape)
        values = np.asarray(values, dtype=np.float64)
        if values.shape != spec.shape:
            if values.size != spec.size:
                raise exception.InvalidGrid(
                    reason="%d values cannot fill a %dx%d grid"
                    % (values.size, spec.nx, spec.ny)
                )
            values = values.reshape(spec.shape)
        bad = values.size - int(np.count_nonzero(np.isfinite(values)))
        if bad:
            raise exception.NonFiniteField(count=bad)
        self.values = values

    @classmethod
    def zeros(cls, spec):
        return cls(spec)

    def __repr__(self):
        return "<ScalarField on %r>" % self.spec

    def copy(self):
        return ScalarField(self.spec, self.values.copy())

    def _other_values(self, other):
        if isinstance(other, ScalarField):
            if other.spec != self.spec:
                raise exception.GridMismatch(left=self.spec, right=other.spec)
            return other.values
        return other

    def __add__(self, other):
        return ScalarField(self.spec, self.values + self._other_values(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ScalarField(self.spec, self.values - self._other_values(other))

    def __mul__(self, factor):
        return ScalarField(self.spec, self.values * self._other_values(factor))

    __rmul__ = __mul__

    def __truediv__(self, factor):
        return ScalarField(self.spec, self.values / factor)

    def __neg__(self):
        return ScalarField(self.spec, -self.values)

    def __abs__(self):
        return ScalarField(self.spec, np.abs(self.values))

    def min(self):
        return float(self.values.min())

    def max(self):
        return float(self.values.max())


def mahalanobis_sq(x, mean, cov):
    """Squared Mahalanobis distance of point(s) x from a Gaussian."""
    d = np.asarray(x, dtype=np.float64) - np.asarray(mean, dtype=np.float64)
    inv = np.linalg.inv(np.asarray(cov, dtype=np.float64))
    return np.einsum("...i,ij,...j->...", d, inv, d)


def gaussian_density(x, mean, cov):
    """Bivariate normal density N(mean, cov) evaluated at point(s) x.

    The covariance is assumed to be symmetric positive definite; callers
    validate it once when the model is built.
    """
    det = np.linalg.det(np.asarray(cov, dtype=np.float64))
    norm = 1.0 / (2.0 * math.pi * math.sqrt(det))
    return norm * np.exp(-0.5 * mahalanobis_sq(x, mean, cov))


def quadrature(values, cell_area):
    """Midpoint-rule sum of cell values.

    Uses compensated summation, so the result does not depend on the order
    the cells are visited in.
    """
    return math.fsum(np.ravel(values).tolist()) * cell_area


def integrate(field, mask=None):
    """Integrate a field over the whole grid or over the cells of a mask."""
    if mask is None:
        return quadrature(field.values, field.spec.cell_area)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != field.spec.shape:
        raise exception.InvalidGrid(
            reason="mask of shape %s does not match %r" % (mask.shape, field.spec)
        )
    return quadrature(field.values[mask], field.spec.cell_area)


class GaussianKernel(object):
    """A truncated Gaussian that can be stamped repeatedly onto fields.

    Cells whose centre lies farther than ``radius_sigmas`` (Mahalanobis)
    from the mean receive exactly nothing.
    """

    def __init__(self, cov, radius_sigmas=DEFAULT_STAMP_RADIUS):
        if radius_sigmas < MIN_STAMP_RADIUS:
            raise exception.InvalidStampRadius(
                minimum=MIN_STAMP_RADIUS, radius=radius_sigmas
            )
        self.cov = np.asarray(cov, dtype=np.float64)
        self.radius_sigmas = float(radius_sigmas)
        self._inv = np.linalg.inv(self.cov)
        self._norm = 1.0 / (2.0 * math.pi * math.sqrt(np.linalg.det(self.cov)))
        self._r2 = self.radius_sigmas**2
        self.half_x = self.radius_sigmas * math.sqrt(self.cov[0, 0])
        self.half_y = self.radius_sigmas * math.sqrt(self.cov[1, 1])

    def _window(self, spec, mean):
        x, y = float(mean[0]), float(mean[1])
        i0 = max(0, int(math.floor((x - self.half_x - spec.x_min) / spec.dx)))
        i1 = min(spec.nx, int(math.ceil((x + self.half_x - spec.x_min) / spec.dx)) + 1)
        j0 = max(0, int(math.floor((y - self.half_y - spec.y_min) / spec.dy)))
        j1 = min(spec.ny, int(math.ceil((y + self.half_y - spec.y_min) / spec.dy)) + 1)

        ddx = (spec.x_min + (np.arange(i0, i1) + 0.5) * spec.dx - x)[np.newaxis, :]
        ddy = (spec.y_min + (np.arange(j0, j1) + 0.5) * spec.dy - y)[:, np.newaxis]
        inv = self._inv
        m2 = inv[0, 0] * ddx * ddx + (inv[0, 1] + inv[1, 0]) * ddx * ddy
        m2 = m2 + inv[1, 1] * ddy * ddy
        inside = m2 <= self._r2
        density = self._norm * np.exp(-0.5 * m2)
        return (slice(j0, j1), slice(i0, i1)), inside, density

    def stamp(self, field, mean):
        """Add the truncated density centred at ``mean`` to ``field``."""
        field.spec.ensure_contains(mean)
        window, inside, density = self._window(field.spec, mean)
        block = field.values[window]
        block[inside] += density[inside]
        return field

    def render(self, spec, mean):
        """Return a fresh field holding a single stamp."""
        return self.stamp(ScalarField.zeros(spec), mean)


def stamp_gaussian(field, mean, cov, radius_sigmas=DEFAULT_STAMP_RADIUS):
    """Deposit N(mean, cov), truncated at radius_sigmas, into field."""
    return GaussianKernel(cov, radius_sigmas).stamp(field, mean)
