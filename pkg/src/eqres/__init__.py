"""eqres: exact computations with finite group actions.

Subpackages cover permutation-group arithmetic, group-class predicates,
Burnside marks and resolving functions, equivariant simplicial complexes,
fixed-point resolutions, transfer witnesses, the Euler-characteristic level
fixed-point-removal induction, and crystallographic finite quotients.
"""

__version__ = "0.1.0"
