"""Poisson cohomology of the so(3) bivector and its image in the
deformation complex of the cotangent algebroid."""

from defcoh import (
    MultiVectorField,
    catalog,
    differential,
    embed_poisson,
    poisson_betti,
    poisson_embedding_map,
)

pi = catalog.so3_bivector()
A = catalog.so3_cotangent()

for w in range(0, 3):
    b = poisson_betti(pi, [w])
    _, defects = poisson_embedding_map(pi, w, A)
    print(f"weight {w}: H_pi = {[b[(k, w)] for k in range(4)]}  chain map: {not defects}")

x1, x2, x3 = pi.base.vars()
casimir = MultiVectorField.function(x1 * x1 + x2 * x2 + x3 * x3)
cert = embed_poisson(casimir, pi, A)
print("D_C for C = x1^2 + x2^2 + x3^2:", cert.cochain)
print("Casimir gives a cocycle:", not differential(cert.cochain, A))
