#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""The Age of Information explorer.

Program to test import of the package.
"""
import aoi_explorer
from aoi_explorer import distributions
from aoi_explorer import models
from aoi_explorer import montecarlo
from aoi_explorer import blocking
from aoi_explorer import preemption
from aoi_explorer import simulator
from aoi_explorer import experiments
from aoi_explorer import cli

from aoi_explorer import PACKAGE_DIRECTORY, DISCIPLINES, WORKERS_ENVVAR


def test_import():
    assert aoi_explorer.__version__ != "unknown", "Version not read from pyproject.toml"
    assert DISCIPLINES == ["blocking", "preemption"]
    assert len(experiments.list_presets()) > 0, f"No preset found in {experiments.PRESETS_DIRECTORY}"


if __name__ == "__main__":
    test_import()
    print(f"Package {aoi_explorer} (version {aoi_explorer.__version__}) successfully imported from {PACKAGE_DIRECTORY}")
    print(f"Presets are expected to be in {experiments.PRESETS_DIRECTORY}")
    print(f"Default number of workers can be set with ${WORKERS_ENVVAR}")
