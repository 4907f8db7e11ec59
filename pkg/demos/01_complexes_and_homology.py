#!/usr/bin/env python3
# Build small sphere models and compute their exact homology.

from sqh import (
    barycentric_subdivision,
    betti,
    chain_complex,
    euler_characteristic,
    join,
    polygon,
    smith_normal_form,
    zero_sphere,
    F2,
    F5,
    RATIONALS,
)
from sqh.models import cross_polytope

# A triangle boundary is the smallest simplicial circle.
circle = polygon(3)
print("circle:", circle)
print("chi(S^1) =", euler_characteristic(circle))

# Joins build higher spheres: S^1 * S^1 = S^3.
s3 = join(polygon(3), polygon(3))
table = betti(chain_complex(s3), [RATIONALS, F2])
print("S^3 = S^1 * S^1 has Betti", table.betti(RATIONALS), "over Q")

# The octahedron is the 3-dimensional cross-polytope boundary.
octa = cross_polytope(3)
print("octahedron f-vector:", octa.f_vector(), "chi =", euler_characteristic(octa))

# Barycentric subdivision refines without changing the topology.
sd = barycentric_subdivision(octa)
print("sd(octahedron):", sd.complex.f_vector(), "chi =", euler_characteristic(sd.complex))

# Smith normal form of a boundary matrix reveals integral structure.
cc = chain_complex(octa)
for k, mat in enumerate(cc.boundaries):
    if k == 0:
        continue
    ed = smith_normal_form(mat)
    print(f"SNF(d_{k}) divisors: {ed.divisors}")

# Betti numbers over several fields at once, with torsion.
table = betti(cc, [RATIONALS, F2, F5])
for f in table.fields():
    print(f"betti over {f.label()}: {table.betti(f)}")
print("torsion per degree:", table.torsion)
