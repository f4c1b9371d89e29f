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

import os

from oslo_log import log

LOG = log.getLogger(__name__)

EXIT_VALIDATION = 1
EXIT_RUNTIME = 2
EXIT_IO = 3


class ErgomixException(Exception):
    msg_fmt = "An unknown exception occurred."
    exit_code = EXIT_RUNTIME

    def __init__(self, message=None, **kwargs):
        self.kwargs = kwargs

        if not message:
            try:
                message = self.msg_fmt % kwargs
            except Exception:
                # kwargs doesn't match a variable in the message
                LOG.exception("Exception in string format operation")
                for name, value in kwargs.items():
                    LOG.error("%s: %s" % (name, value))
                message = self.msg_fmt

        super(ErgomixException, self).__init__(message)


class CannotOpenFile(ErgomixException):
    msg_fmt = "Cannot open file %(file)s: %(reason)s"
    exit_code = EXIT_IO

    def __init__(self, message=None, errno=0, **kwargs):
        kwargs.setdefault("reason", os.strerror(errno))
        super(CannotOpenFile, self).__init__(message=message, **kwargs)


class CannotWriteArtifact(CannotOpenFile):
    msg_fmt = "Cannot write artifact %(file)s: %(reason)s"


class InvalidConfiguration(ErgomixException):
    msg_fmt = "Invalid configuration: %(reason)s"
    exit_code = EXIT_VALIDATION


class CannotOpenScenario(CannotOpenFile):
    msg_fmt = "Cannot open scenario file %(file)s: %(reason)s"
    exit_code = EXIT_VALIDATION


class ScenarioSyntaxError(InvalidConfiguration):
    msg_fmt = "%(source)s, line %(line)s: %(reason)s"


class ScenarioValidationFailed(InvalidConfiguration):
    msg_fmt = "Scenario %(source)s is not valid:\n%(errors)s"

    def __init__(self, message=None, errors=(), **kwargs):
        self.errors = list(errors)
        kwargs["errors"] = "\n".join("  - %s" % e for e in self.errors)
        super(ScenarioValidationFailed, self).__init__(message=message, **kwargs)


class InvalidGrid(InvalidConfiguration):
    msg_fmt = "Invalid grid: %(reason)s"


class InvalidComponent(InvalidConfiguration):
    msg_fmt = "Invalid Gaussian component: %(reason)s"


class InvalidMixture(InvalidConfiguration):
    msg_fmt = "Invalid mixture model: %(reason)s"


class InvalidStampRadius(InvalidConfiguration):
    msg_fmt = "Stamp radius must be at least %(minimum)s sigmas, got %(radius)s"


class InvalidTiming(InvalidConfiguration):
    msg_fmt = "Invalid timing quantity: %(reason)s"


class GridMismatch(ErgomixException):
    msg_fmt = "Fields live on different grids: %(left)s != %(right)s"


class NonFiniteField(ErgomixException):
    msg_fmt = "Field contains %(count)s non-finite values"


class OutOfDomain(ErgomixException):
    msg_fmt = "Point %(point)s lies outside the domain %(domain)s"


class InvalidHole(ErgomixException):
    msg_fmt = "Hole index %(hole)s is not valid for %(count)s holes"


class EmptyAccumulator(ErgomixException):
    msg_fmt = "No mass has been deposited yet, the time average is undefined"


class DegenerateHoleMass(ErgomixException):
    msg_fmt = (
        "Time-averaged mass inside the holes is %(a)s, there is no mass "
        "left outside them to bound the dwell time"
    )


class NotEnoughCycles(ErgomixException):
    msg_fmt = "Trace holds %(count)s completed cycles, at least %(required)s needed"


class InvariantViolation(ErgomixException):
    msg_fmt = "Invariant violated at step %(k)s: %(reason)s"
