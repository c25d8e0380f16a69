"""Motherbody measures for algebraic Cauchy transforms.

Subpackages and modules:

``polyalg``   polynomials, exact/extended-precision roots, resultants, Newton polygons
``branch``    the branch ``1/z + ...`` at infinity and atomic measures of rational germs
``eigen``     exactly solvable operators, eigenpolynomials and their root clouds
``quaddiff``  quadratic differentials, trajectory tracing and critical graphs
``mother``    candidate measures for quadratic equations
``verify``    quadrature checks (Cauchy transforms, moments, potentials, level curves)
``io``, ``cli``  file formats and the ``motherbody`` command
"""
from .errors import MotherbodyError
from .measure import Arc, Atom, SignedMeasure
from .polyalg import BiPoly, UniPoly

__all__ = ["MotherbodyError", "Arc", "Atom", "SignedMeasure", "BiPoly", "UniPoly"]
__version__ = "0.1.0"
