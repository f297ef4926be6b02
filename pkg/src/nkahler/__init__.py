"""Numerical verification of the nearly Kaehler geometry of the six-sphere.

Submodules: ``octonion`` (algebra and cross product), ``hypersurface``
(induced almost Hermitian geometry of level sets in R^7), ``connection``
(characteristic connection, torsion and nearly Kaehler forms), ``reductive``
(G2/SU(3) at the Lie algebra level), ``clifford`` (Cl(6) spinors and
SU(3)-structures), ``grayhervella`` (intrinsic torsion classes and the Theta
map) and ``suites``/``cli`` (the verification driver).
"""

__version__ = "0.1.0"
