"""
JucysWorkbench - exact verification of Jucys-Murphy families, BMW and Hecke
algebras, Markov traces, Bethe subalgebras and q-KZ connections
"""

__version__ = "0.1.0"
__author__ = "JucysWorkbench Contributors"

from .config import SuiteConfig
from .core import Workbench
from .report import Report

__all__ = ['Workbench', 'SuiteConfig', 'Report']
