"""Cross-modality transformer efficiency profiling toolkit."""

from .backend import backend_name, has_compiled

__version__ = "0.1.0"

__all__ = ["backend_name", "has_compiled", "__version__"]
