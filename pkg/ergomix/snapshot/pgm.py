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

"""16-bit binary portable graymap snapshots.

Values are scaled linearly so the field minimum maps to 0 and its maximum
to 65535. The first image row is the top of the domain (largest y).
"""

import numpy as np

from ergomix.snapshot import base

MAXVAL = 65535


def to_gray(values):
    values = np.asarray(values, dtype=np.float64)
    low, high = values.min(), values.max()
    if high > low:
        scaled = np.rint((values - low) / (high - low) * MAXVAL)
    else:
        scaled = np.zeros(values.shape)
    return np.flipud(scaled).astype(">u2")


class Writer(base.BaseWriter):
    extension = "pgm"

    def write(self, path, field):
        gray = to_gray(field.values)
        header = "P5\n%d %d\n%d\n" % (field.spec.nx, field.spec.ny, MAXVAL)
        with open(path, "wb") as f:
            f.write(header.encode("ascii"))
            f.write(gray.tobytes())
