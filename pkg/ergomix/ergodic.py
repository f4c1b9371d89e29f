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

"""Time-averaged coverage bookkeeping and the quantities derived from it.

The robot deposits a unit-mass Gaussian ``f_k`` at its position on every
step. The time average ``rho_k = (f_0 + ... + f_k) / (k + 1)`` is compared
against the reference ``rho*``: the error is ``phi_k = rho_k - rho*`` and
the ergodic function ``V_k`` is the integral of ``|phi_k|``, which always
lies in [0, 2].
"""

import math

import numpy as np

from ergomix import exception
from ergomix import field


class MassAccumulator(object):
    """Running sum of the robot's deposits.

    Only the unnormalized sum is stored; the time average is derived on
    demand by a single division, so no whole-grid rescaling happens per
    step.
    """

    def __init__(self, spec, sigma_r, radius_sigmas=field.DEFAULT_STAMP_RADIUS):
        self.spec = spec
        self.kernel = field.GaussianKernel(sigma_r, radius_sigmas)
        self.sum_field = field.ScalarField.zeros(spec)
        self.count = 0

    @classmethod
    def from_distribution(
        cls, rho, k, sigma_r, radius_sigmas=field.DEFAULT_STAMP_RADIUS
    ):
        """Build an accumulator whose time average at step k equals rho."""
        if k < 0:
            raise exception.InvalidTiming(reason="step %s is negative" % k)
        acc = cls(rho.spec, sigma_r, radius_sigmas)
        acc.sum_field = field.ScalarField(rho.spec, rho.values * (k + 1))
        acc.count = k + 1
        return acc

    @property
    def sigma_r(self):
        return self.kernel.cov

    @property
    def k(self):
        """Index of the latest deposit, -1 while the accumulator is empty."""
        return self.count - 1

    def deposit(self, position):
        self.kernel.stamp(self.sum_field, position)
        self.count += 1
        return self

    def time_average(self):
        if not self.count:
            raise exception.EmptyAccumulator()
        return field.ScalarField(self.spec, self.sum_field.values / self.count)

    def phi_at(self, cells, rho_star):
        """Error values on a set of flat cell indices."""
        if not self.count:
            raise exception.EmptyAccumulator()
        return (
            self.sum_field.values.ravel()[cells] / self.count
            - rho_star.values.ravel()[cells]
        )

    def mass(self):
        return field.integrate(self.sum_field)


class ErgodicState(object):
    """Error field, ergodic value and per-hole residuals at one step."""

    def __init__(self, phi, V, residuals):
        self.phi = phi
        self.V = V
        self.residuals = residuals

    def __repr__(self):
        return "<ErgodicState V=%.6g>" % self.V


class TimingParams(object):
    """Departure threshold parameters for a given tour cycle."""

    def __init__(self, beta, gamma, cycle=0):
        if not beta > 0:
            raise exception.InvalidTiming(reason="beta must be positive, got %s" % beta)
        if not gamma >= 0:
            raise exception.InvalidTiming(
                reason="gamma must not be negative, got %s" % gamma
            )
        if cycle < 0:
            raise exception.InvalidTiming(
                reason="cycle must not be negative, got %s" % cycle
            )
        self.beta = float(beta)
        self.gamma = float(gamma)
        self.cycle = int(cycle)

    def for_cycle(self, cycle):
        return TimingParams(self.beta, self.gamma, cycle)


def departure_threshold(params):
    """c_N = beta * exp(-gamma * N)."""
    return params.beta * math.exp(-params.gamma * params.cycle)


def compute_phi(rho_k, rho_star):
    return rho_k - rho_star


def ergodic_value(phi):
    return field.integrate(abs(phi))


def evaluate(acc, rho_star, mask=None):
    """Full ErgodicState for the accumulator's current step."""
    phi = compute_phi(acc.time_average(), rho_star)
    residuals = {}
    if mask is not None:
        residuals = dict(
            (hole, hole_residual(phi, mask, hole)) for hole in range(mask.count)
        )
    return ErgodicState(phi, ergodic_value(phi), residuals)


def delta_rho_oracle(acc, stamps):
    """Change of the time average caused by the given future stamps.

    ``stamps`` are the fields f_{k+1}, ..., f_{k+h}; the result is
    ``(sum(stamps) - h * rho_k) / (k + h + 1)``.
    """
    stamps = list(stamps)
    h = len(stamps)
    if h < 1:
        raise exception.InvalidTiming(reason="at least one future stamp needed")
    rho_k = acc.time_average()
    total = np.zeros(acc.spec.shape)
    for stamp in stamps:
        if stamp.spec != acc.spec:
            raise exception.GridMismatch(left=acc.spec, right=stamp.spec)
        total += stamp.values
    k = acc.k
    return field.ScalarField(acc.spec, (total - h * rho_k.values) / (k + h + 1))


def _check_timing(h, a, *steps):
    for value in (h,) + steps:
        if value < 0:
            raise exception.InvalidTiming(reason="step count %s is negative" % value)
    if a < 0:
        raise exception.InvalidTiming(reason="hole mass %s is negative" % a)


def stay_bound(h, a):
    """Minimum dwell after h transit steps: h * a / (1 - a).

    The dwell actually spent must be strictly greater than this value.
    """
    _check_timing(h, a)
    if a >= 1:
        raise exception.DegenerateHoleMass(a=a)
    return h * a / (1.0 - a)


def predict_V_rise(k, h, a):
    """Ideal increase of V over h steps spent outside every hole."""
    _check_timing(h, a, k)
    return 2.0 * h * a / (k + h + 1)


def predict_V_fall(k, h, h_prime, a):
    """Ideal decrease of V over h_prime steps spent inside an unfilled hole."""
    _check_timing(h, a, k, h_prime)
    a_shrunk = (k + 1.0) / (k + h + 1) * a
    return 2.0 * h_prime * (1.0 - a_shrunk) / (k + h + h_prime + 1)


def residual_of(phi_values, cell_area):
    """Integral of |phi| given its values on a set of cells."""
    return field.quadrature(np.abs(phi_values), cell_area)


def deficit_of(phi_values, cell_area):
    """Integral of max(-phi, 0) given its values on a set of cells."""
    return field.quadrature(np.maximum(-np.asarray(phi_values), 0.0), cell_area)


def hole_residual(phi, mask, hole):
    """Integral of |phi| over one hole."""
    values = phi.values.ravel()[mask.hole_cells(hole)]
    return residual_of(values, phi.spec.cell_area)


def hole_deficit(phi, mask, hole):
    """Integral of the unfilled part, max(-phi, 0), over one hole."""
    values = phi.values.ravel()[mask.hole_cells(hole)]
    return deficit_of(values, phi.spec.cell_area)
