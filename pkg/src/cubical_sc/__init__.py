"""Cubical small cancellation: presentations, pieces, piece metrics, disc diagrams."""
from .complex_model import Presentation, SquareComplex, load_presentation, parse_presentation
from .errors import ScError

__version__ = "0.1.0"
