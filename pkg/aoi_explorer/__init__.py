#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""The Age of Information explorer.

Average age of information of G/G/1/1 queues under the blocking and the
preemption in service disciplines: exact expressions, closed forms,
upper bounds and a discrete-event simulator to check them.
"""
import os

PACKAGE_DIRECTORY = os.path.split(__path__[0])[0]

DISCIPLINES = ["blocking", "preemption"]

# Environment variable giving the default number of workers (grid points,
# simulation replications). When unset, the number of physical cores is used.
WORKERS_ENVVAR = "AOI_EXPLORER_WORKERS"

__version__ = "unknown"
pyproject = os.path.join(PACKAGE_DIRECTORY, "pyproject.toml")
if os.path.isfile(pyproject):
    with open(pyproject, "r") as f:
        for l in f.readlines():
            if l.startswith("version"):
                __version__ = l.split('"')[1]
                break

    del f, l
else:
    from importlib import metadata

    try:
        __version__ = metadata.version("aoi_explorer")
    except metadata.PackageNotFoundError:
        pass

    del metadata

del os, pyproject
