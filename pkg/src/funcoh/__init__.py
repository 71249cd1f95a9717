"""funcoh: exact calculus of kernel-presented module functors.

Subpackages cover finitely presented modules over Euclidean rings (Smith
normal form, homology), a calculus of finite-limit/colimit expressions in
module functors with evaluation at finite test algebras, truncated Witt
vectors, Picard groups of monomial subrings via conductor squares, and the
growth harnesses for the two counterexample families.
"""

__version__ = "0.1.0"
