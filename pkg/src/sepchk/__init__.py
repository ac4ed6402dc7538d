"""Separation checks for PL maps of finite complexes into spheres, over GF(2).

Hypothesis side: ``theorems.check_thm1`` / ``theorems.check_thm2``.
Conclusion side: ``separation.simulate`` on a raster, ``nerve`` for point clouds.
"""

from sepchk._backend import BACKEND
from sepchk.errors import SepchkError
from sepchk.simplicial import CellDesignation, SimplicialComplex, SimplicialMap
from sepchk.theorems import check_thm1, check_thm2

__all__ = ["BACKEND", "CellDesignation", "SepchkError", "SimplicialComplex", "SimplicialMap",
           "check_thm1", "check_thm2"]
__version__ = "0.1.0"
