"""Located words, exact number codecs, partition search and word-indexed recurrence."""

from .errors import LocWordsError
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["LocWordsError", "BACKEND", "__version__"]
