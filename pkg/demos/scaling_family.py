"""A family that is trivial pointwise but has no polynomial trivialisation.

[e1, e2]_t = (1 + t) e2 rescales aff(1).  A primitive at t is the
derivation e1 -> e1/(1 + t), which blows up at t = -1 where the algebra
becomes abelian.
"""

from fractions import Fraction

from defcoh import catalog, triviality_solve

F = catalog.aff1_scaling()
for sol in triviality_solve(F, samples=[0, Fraction(1, 2), 2, -1]):
    print(f"t = {sol.t}: ", sol.primitive if sol.solved else "not exact, class " + " ".join(str(c) for c in sol.class_coords))

for n in range(3):
    print(f"polynomial ansatz of degree {n}:", "solved" if triviality_solve(F, ansatz_degree=n).solved else "none")
