"""
Operations module for JucysWorkbench
Contains handlers for the algebra families and their verification suites
"""

from .bmw import BmwOperations
from .braid import BraidOperations
from .affine_bmw import AffineBmwOperations
from .trace import TraceOperations
from .bethe import BetheOperations
from .qkz import QkzOperations

__all__ = [
    'BmwOperations',
    'BraidOperations',
    'AffineBmwOperations',
    'TraceOperations',
    'BetheOperations',
    'QkzOperations'
]
