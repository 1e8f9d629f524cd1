"""Deformation cohomology of small Lie algebras.

sl(2) is rigid, the Heisenberg algebra is not.
"""

from defcoh import betti_def, catalog, center_and_outder


def main():
    for A in (catalog.sl2(), catalog.heisenberg(), catalog.abelian(2)):
        b = betti_def(A, [0])
        row = [b[(k, 0)] for k in range(A.rank + 1)]
        low = center_and_outder(A, [0])[0]
        print(f"{A.label:10} DH = {row}  center {low.center_dim}  outer derivations {low.outder_dim}")


if __name__ == "__main__":
    main()
