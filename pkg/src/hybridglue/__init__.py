"""Exact and numerical checks for gluing constructions of SO(p,p+1) Higgs data.

Submodules:

- ``liealg``: B_p roots, root vectors and the principal sl(2) triple
- ``parabolic``: degree and weight calculus of parabolic line bundles
- ``models``: model Higgs bundles and their stability reports
- ``gluing``: connected-sum degrees, component classification, exhaustion
- ``dehn``: generalized Dehn filling coefficients
- ``hitchin_numeric``: finite-difference residuals on polar grids
- ``cli``: the ``hybridglue`` command
"""

__version__ = "0.1.0"
