"""Finite group actions on nontrivial Severi-Brauer surfaces.

The package decides which finite groups act on a Severi-Brauer surface
without rational points, over fields of characteristic zero.  The answer
is arithmetic: everything reduces to residue computations mod n, to
metacyclic groups mu_n : mu_3 twisted by a cube root of unity d mod n,
and to explicit order computations inside cyclic division algebras of
degree three.

Modules, roughly bottom-up:

* ``residue_arith``: factorization, unit groups, cube roots of unity mod n.
* ``semidirect``: balanced characters and isomorphism classes of mu_n : mu_3.
* ``group_kernel``: dense multiplication tables, isomorphism testing.
* ``classifier``: the realizability verdict for orders, groups, descriptors.
* ``exact_fields``: exact cyclotomic towers Q(zeta_m)(cbrt(c)).
* ``cyclic_algebra``: degree-3 cyclic algebras and unit groups mod scalars.
* ``pgl3_checker``: exact PGL_3 computations backing the split case.
* ``cli``: command line front end with JSON output.
"""

__all__ = [
    "residue_arith",
    "semidirect",
    "group_kernel",
    "classifier",
    "exact_fields",
    "cyclic_algebra",
    "pgl3_checker",
    "cli",
]

__version__ = "0.1.0"
