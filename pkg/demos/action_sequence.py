"""Long exact sequence of sl(2) acting linearly on the plane.

DC(A) sits between forms with values in vector fields (shifted) and
forms with values in the Lie algebra.
"""

from defcoh import betti_def, build_action_ses, catalog, les_from_ses

A = catalog.sl2_on_plane()
for w in range(0, 3):
    les = les_from_ses(build_action_ses(A, w))
    dh = betti_def(A, [w])
    row = [dh[(k, w)] for k in range(A.rank + 2)]
    print(f"weight {w}: DH = {row}  exact: {les.exact}")
