"""Centralized numeric tolerances.

Every magic epsilon in the package lives in this one record so that test
oracles and library code agree on what "equal", "symplectic", and
"degenerate" mean.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    #: symmetry defect allowed in a covariance matrix
    cov_symmetry: float = 1e-12
    #: uncertainty bound: symplectic eigenvalues must be >= 1/2 - this slack
    symplectic_eig_slack: float = 1e-9
    #: defect allowed in S @ Omega @ S.T == Omega
    symplectic_check: float = 1e-10
    #: absolute singular-value cutoff for rank / span decisions
    rank: float = 1e-10
    #: pairwise generator orthogonality bound
    orthogonality: float = 1e-12
    #: measured-quadrature variance below this is a degenerate homodyne
    degenerate_variance: float = 1e-14
    #: synthesized circuit must reproduce its point matrix to this
    synthesis: float = 1e-10
    #: rewrite rules must preserve the window's symplectic map to this
    rewrite: float = 1e-10
    #: slack on lightlike causal-order comparisons
    causal_slack: float = 1e-9
    #: condition-number limit above which rank decisions are flagged
    condition_limit: float = 1e8
    #: simulated recovery fidelity must match the closed form to this
    fidelity_gate: float = 1e-8


TOL = Tolerances()
