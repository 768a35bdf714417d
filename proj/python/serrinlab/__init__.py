"""serrinlab: semilinear Dirichlet problems on constant-curvature space forms.

Radial and P1 finite-element solvers for Delta u = -f(u) with overdetermined
boundary data, plus checkers for the integral identities, inequalities and
rigidity criteria that characterize geodesic balls and concentric annuli
(Heintze-Karcher, soap bubble, Reilly decomposition, P-function maximum
principle, wall shear stress, annular Minkowski formula, umbilicity).

The compiled extension ``serrinlab._core`` carries the full API; this package
re-exports it.
"""

from serrinlab._core import *  # noqa: F401,F403

__version__ = "1.0.0"
