"""Workbench for the fuzzy chemical abstract machine."""
from .degree import ONE, ZERO, Degree, process_similarity
from .errors import DomainError, InfeasibleReaction, ParseError

__version__ = "0.1.0"
