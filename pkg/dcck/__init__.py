# -*- coding: utf-8 -*-

"""Top-level package for DCCK: growing and shrinking CNN kernels while training."""

__author__ = """DCCK Developers"""
__email__ = ''
__version__ = '0.1.0'
