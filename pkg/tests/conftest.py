import random

from sqh.complexes import SimplicialComplex


def octahedron() -> SimplicialComplex:
    """Boundary of the 3-dimensional cross-polytope; +e_i = i, -e_i = 3 + i."""
    facets = [(a, b, c) for a in (0, 3) for b in (1, 4) for c in (2, 5)]
    return SimplicialComplex(6, facets)


def rp2_minimal() -> SimplicialComplex:
    """The 6-vertex triangulation of the real projective plane (test oracle)."""
    facets = [
        (0, 1, 4), (0, 1, 5), (0, 2, 3), (0, 2, 4), (0, 3, 5),
        (1, 2, 3), (1, 2, 5), (1, 3, 4), (2, 4, 5), (3, 4, 5),
    ]
    return SimplicialComplex(6, facets)


def random_small_complex(rng: random.Random) -> SimplicialComplex:
    n = rng.randint(3, 7)
    n_facets = rng.randint(1, 8)
    facets = []
    for _ in range(n_facets):
        size = rng.randint(1, min(4, n))
        facets.append(rng.sample(range(n), size))
    return SimplicialComplex(n, facets)
