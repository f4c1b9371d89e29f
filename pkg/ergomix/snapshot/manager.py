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

import importlib

from oslo_config import cfg
from oslo_log import log

from ergomix import exception

opts = [
    cfg.ListOpt(
        "formats",
        default=["pgm", "csv"],
        help="Formats in which field snapshots are written.",
    ),
]

CONF = cfg.CONF
CONF.register_opts(opts, group="snapshots")

LOG = log.getLogger(__name__)

WRITER_NAMESPACE = "ergomix.snapshot"


def load_writer(name):
    """Instantiate the Writer class of a snapshot format module."""
    try:
        module = importlib.import_module("%s.%s" % (WRITER_NAMESPACE, name))
        return getattr(module, "Writer")()
    except (ImportError, AttributeError):
        raise exception.InvalidConfiguration(
            reason="unknown snapshot format '%s'" % name
        )


class SnapshotManager(object):
    def __init__(self, formats=None):
        if formats is None:
            formats = CONF.snapshots.formats
        self.writers = [load_writer(name) for name in formats]

    def write(self, directory, stem, field):
        """Write one field in every configured format.

        :param directory: pathlib.Path of the output directory
        :param stem: file name without extension
        :returns: the paths written
        """
        written = []
        for writer in self.writers:
            path = writer.path_for(directory, stem)
            LOG.debug("Writing snapshot %s" % path)
            try:
                writer.write(path, field)
            except (IOError, OSError) as e:
                raise exception.CannotWriteArtifact(file=path, errno=e.errno or 0)
            written.append(path)
        return written
