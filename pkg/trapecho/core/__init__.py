"""
Constants, units, errors and logging used throughout trapecho.
"""
from trapecho.core.logging import logger

__all__ = ['logger']
