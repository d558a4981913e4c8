#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""The Age of Information explorer.

Entry point of `python -m aoi_explorer`.
"""
import sys

from aoi_explorer.cli import main

sys.exit(main())
