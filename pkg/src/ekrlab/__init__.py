"""Intersecting-permutation toolkit: derangement graphs, maximum cocliques and the EKR-module check."""
from ._kernels import BACKEND
from .catalog import parse_family
from .cocliques import canonical_cocliques, max_cocliques
from .ekr_module import inner_distribution, module_check
from .perm_core import GroupTable, Permutation, conjugacy_classes
from .spectra import least_eigenvalue_report

__version__ = "0.1.0"
