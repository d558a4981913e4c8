#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""The Age of Information explorer: experiment presets"""
