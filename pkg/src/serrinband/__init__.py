"""Spectral analysis and branch continuation for the constant-Neumann torsion
problem on bands around the equator of the round sphere S^N.

Module map:
  torsion     -- even torsion profile of the straight band and derivatives
  harmonics   -- axisymmetric spherical harmonics, quadrature, projections
  spectrum    -- eigenvalue curves sigma_j(lambda) by three independent routes
  bifurcation -- roots lambda_j of sigma_j and transversality data
  geometry    -- band shapes, pulled-back metric, normal trace, embedding
  pde         -- discrete torsion/harmonic solves on the band
  branch      -- amplitude-pinned Newton continuation of the nontrivial branch
  cli         -- batch command line front end (CSV/JSON outputs)
"""

from .bifurcation import BifurcationPoint, lambda_star, lambda_table, sigma_prime_closed
from .branch import Branch, BranchPoint, branch_record, continue_branch, export_branch, residual
from .errors import (
    AdmissibilityError,
    DomainError,
    ResolutionError,
    SerrinbandError,
    SeriesError,
    SolverError,
)
from .geometry import DomainShape, MetricBlock, embed, export_shape, make_shape, metric_block, neumann_trace
from .harmonics import AxisGrid, HarmonicBasis, make_basis, make_grid, project, project_all, sphere_area, y_eval
from .pde import DiscreteOperator, Field2D, assemble, evaluate_H, solve_linearized, solve_torsion
from .spectrum import BProfile, SpectralCurve, b_bvp, c_degree, f_heun, f_riccati, gamma_degree, sigma
from .torsion import TorsionProfile, u_diff, u_prime, u_second

__version__ = "0.1.0"
