"""
latcirc: classical lattice partition functions as quantum circuit quantities.
"""
from latcirc.core.config import settings

__version__ = settings.VERSION

__all__ = ["settings", "__version__"]
