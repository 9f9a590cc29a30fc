"""Root systems of types A and D, coweight pairings, and highest-root data.

Roots are stored as integer vectors in the standard ambient coordinates
(e_i - e_j for type A_{n-1} inside Z^n, and +-e_i +- e_j for D_n inside
Z^n), so pairing a root with a coweight exponent vector is a dot product.
Simple-root coordinates are derived on demand by exact linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Tuple

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class RootSystem:
    family: str
    rank: int
    roots: tuple[Vector, ...]
    simples: tuple[Vector, ...]

    @property
    def ambient_dim(self) -> int:
        return len(self.simples[0])

    def __post_init__(self):
        rootset = set(self.roots)
        for r in self.roots:
            if tuple(-c for c in r) not in rootset:
                raise ValueError("root list not closed under negation")


def generate_roots(family: str, rank: int) -> RootSystem:
    """Standard construction of the A_n and D_n root systems."""
    if family == "A":
        if rank < 1:
            raise ValueError("type A needs rank >= 1")
        dim = rank + 1
        roots = []
        for i in range(dim):
            for j in range(dim):
                if i != j:
                    v = [0] * dim
                    v[i], v[j] = 1, -1
                    roots.append(tuple(v))
        simples = []
        for i in range(rank):
            v = [0] * dim
            v[i], v[i + 1] = 1, -1
            simples.append(tuple(v))
        return RootSystem("A", rank, tuple(sorted(roots)), tuple(simples))
    if family == "D":
        if rank < 3:
            raise ValueError("type D needs rank >= 3")
        dim = rank
        roots = []
        for i, j in combinations(range(dim), 2):
            for si in (1, -1):
                for sj in (1, -1):
                    v = [0] * dim
                    v[i], v[j] = si, sj
                    roots.append(tuple(v))
        simples = []
        for i in range(rank - 1):
            v = [0] * dim
            v[i], v[i + 1] = 1, -1
            simples.append(tuple(v))
        v = [0] * dim
        v[rank - 2], v[rank - 1] = 1, 1
        simples.append(tuple(v))
        return RootSystem("D", rank, tuple(sorted(roots)), tuple(simples))
    raise ValueError(f"unsupported family {family!r}")


def simple_coordinates(rs: RootSystem, vector: Vector) -> tuple[int, ...]:
    """Coordinates of an ambient vector in the simple-root basis.

    Solves the exact linear system; raises if the vector is not an
    integer combination of the simple roots.
    """
    cols = rs.simples
    dim = rs.ambient_dim
    k = len(cols)
    aug = [[Fraction(cols[j][i]) for j in range(k)] + [Fraction(vector[i])] for i in range(dim)]
    row = 0
    pivots = []
    for col in range(k):
        p = next((r for r in range(row, dim) if aug[r][col] != 0), None)
        if p is None:
            continue
        aug[row], aug[p] = aug[p], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        for r in range(dim):
            if r != row and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
    coords = [Fraction(0)] * k
    for r, col in enumerate(pivots):
        coords[col] = aug[r][k]
    for r in range(row, dim):
        if aug[r][k] != 0:
            raise ValueError("vector not in the span of the simple roots")
    out = []
    for c in coords:
        if c.denominator != 1:
            raise ValueError("vector not an integer combination of simple roots")
        out.append(int(c))
    return tuple(out)


def highest_root(rs: RootSystem) -> Vector:
    """The unique root dominating all others in simple-root coordinates."""
    coords = {r: simple_coordinates(rs, r) for r in rs.roots}
    for r, rc in coords.items():
        if all(all(a - b >= 0 for a, b in zip(rc, coords[s])) for s in rs.roots):
            return r
    raise ValueError("no highest root found; system not irreducible?")


def pairing(alpha: Vector, x: Vector) -> int:
    """Natural pairing of a root with a coweight exponent vector."""
    if len(alpha) != len(x):
        raise ValueError(f"rank mismatch: root in Z^{len(alpha)}, coweight in Z^{len(x)}")
    return sum(a * b for a, b in zip(alpha, x))


def multiplicity_in_highest(rs: RootSystem, alpha: Vector) -> int:
    """Coefficient of a simple root in the highest root."""
    if alpha not in rs.simples:
        raise ValueError("root is not simple")
    idx = rs.simples.index(alpha)
    return simple_coordinates(rs, highest_root(rs))[idx]


def reflect(alpha: Vector, beta: Vector) -> Vector:
    """Reflection of beta in the hyperplane of alpha (all roots have norm 2)."""
    t = pairing(beta, alpha)
    return tuple(b - t * a for a, b in zip(alpha, beta))


def is_dominant_coweight(x: Vector) -> bool:
    """Weakly decreasing with final coordinate zero."""
    return all(a >= b for a, b in zip(x, x[1:])) and (not x or x[-1] == 0)


def type_a_root(i: int, j: int, n: int) -> Vector:
    """The root e_i - e_j of A_{n-1} in Z^n, indices 1-based."""
    if not (1 <= i <= n and 1 <= j <= n and i != j):
        raise ValueError(f"bad root indices ({i}, {j}) for rank {n}")
    v = [0] * n
    v[i - 1], v[j - 1] = 1, -1
    return tuple(v)
