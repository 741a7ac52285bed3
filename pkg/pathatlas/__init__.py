"""
Regulated curves, manifold atlases and the chart structure of path spaces.
"""

from .conf import conf

__version__ = conf.version
