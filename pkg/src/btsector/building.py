"""Lattice-class model of the Bruhat-Tits building of SL_n over F_q(t)
with the valuation at infinity.

Vertices are homothety classes of O-lattices in K^n, where O is the
valuation ring of omega_infty and s = 1/t its uniformizer.  Every class
has a unique canonical representative: a lower-triangular column basis
whose diagonal is (s^a_1, ..., s^a_n) with min(a_i) = 0 and whose entry
in row i below the diagonal is a Laurent polynomial in s reduced modulo
s^a_i (exponents below a_i, possibly negative).  Uniqueness follows from
reading the flag of coordinate subspaces off the lattice; it is also
property-tested against random right multiplications by integral
matrices.

All reduction arithmetic is exact.  Column operations stay inside
Laurent polynomials; the only divisions are by units of O, whose power
series inverses are computed to exactly the order that the reduced
output requires, so no truncation error can occur.  An operation that
would need coefficients beyond what is exactly known raises
PrecisionError instead of truncating (this is defensive; the chosen
orders make it unreachable).

Adjacency of classes [L], [M] means sL < M < L for suitable
representatives, equivalently M/sL is a proper nonzero subspace of
L/sL.  Simplices are cliques of pairwise adjacent vertices (flags of
lattices); balls are computed by breadth-first search on the 1-skeleton.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product as iproduct
from typing import Iterable, Sequence

from .chevalley import GroupElement
from .laurent import (
    LZERO,
    Laurent,
    lp_add,
    lp_from_poly_in_t,
    lp_is_zero,
    lp_mul,
    lp_principal_part,
    lp_scale,
    lp_shift,
    lp_str,
    lp_sub,
    lp_to_rational_in_t,
)
from .polyring import RationalFunction, check_modulus, pdivmod, pmul


class SingularMatrixError(ValueError):
    """The columns do not span K^n."""


class PrecisionError(RuntimeError):
    """An exact reduction step would need unknown series coefficients."""


class BudgetExceededError(RuntimeError):
    """A configured resource cap was hit."""


@dataclass(frozen=True)
class BuildingVertex:
    """Canonical form of a lattice homothety class."""

    n: int
    q: int
    exponents: tuple[int, ...]
    entries: tuple[tuple[tuple[int, int], Laurent], ...]

    @classmethod
    def standard(cls, n: int, q: int) -> "BuildingVertex":
        check_modulus(q)
        return cls(n, q, (0,) * n, ())

    @property
    def vertex_type(self) -> int:
        return sum(self.exponents) % self.n

    def sort_key(self):
        return (self.exponents, self.entries)

    def laurent_columns(self) -> list[list[Laurent]]:
        n = self.n
        cols = [[LZERO] * n for _ in range(n)]
        for i in range(n):
            cols[i][i] = (self.exponents[i], (1,))
        for (r, c), val in self.entries:
            cols[c][r] = val
        return cols

    def matrix(self) -> list[list[RationalFunction]]:
        """Canonical representative as a matrix over F_q(t), row major."""
        cols = self.laurent_columns()
        return [
            [lp_to_rational_in_t(cols[j][i], self.q) for j in range(self.n)]
            for i in range(self.n)
        ]

    def to_json(self) -> dict:
        return {
            "exponents": list(self.exponents),
            "entries": [
                {"row": r + 1, "col": c + 1, "value": lp_str(v)}
                for (r, c), v in self.entries
            ],
        }

    def __str__(self):
        exps = ",".join(str(a) for a in self.exponents)
        if not self.entries:
            return f"V({exps})"
        body = "; ".join(
            f"[{r + 1},{c + 1}]={lp_str(v)}" for (r, c), v in self.entries
        )
        return f"V({exps}; {body})"


def _canonicalize_columns(
    cols: Sequence[Sequence[Laurent]], n: int, q: int
) -> tuple[tuple[int, ...], tuple]:
    """Reduce spanning columns to the canonical lattice-class data."""
    work = [list(col) for col in cols]
    m = len(work)
    if m < n or any(len(col) != n for col in work):
        raise SingularMatrixError("need at least n spanning columns of height n")

    for i in range(n):
        best, best_ord = -1, None
        for j in range(i, m):
            e = work[j][i]
            if e[1] and (best_ord is None or e[0] < best_ord):
                best, best_ord = j, e[0]
        if best < 0:
            raise SingularMatrixError(f"no pivot in row {i}: matrix is singular")
        work[i], work[best] = work[best], work[i]
        a = best_ord
        u = (0, work[i][i][1])
        for j in range(i + 1, m):
            e = work[j][i]
            if not e[1]:
                continue
            fact = (e[0] - a, e[1])
            for k in range(i, n):
                work[j][k] = lp_sub(
                    lp_mul(u, work[j][k], q), lp_mul(fact, work[i][k], q), q
                )
            if work[j][i][1]:
                raise PrecisionError("elimination failed to clear a pivot row")

    for j in range(n, m):
        if any(e[1] for e in work[j]):
            raise SingularMatrixError("redundant columns failed to vanish")
    work = work[:n]

    raw = [work[i][i][0] for i in range(n)]
    shift = min(raw)
    exps = tuple(a - shift for a in raw)
    if shift:
        for i in range(n):
            for k in range(i, n):
                work[i][k] = lp_shift(work[i][k], -shift)

    # Normalize right to left: divide each column by the unit part of its
    # diagonal and reduce the entries below the diagonal modulo s^a_row,
    # subtracting integral multiples of the already-normalized later columns.
    entries: dict[tuple[int, int], Laurent] = {}
    for i in range(n - 1, -1, -1):
        a_i, u = work[i][i]
        assert a_i == exps[i]
        unit = (0, u)
        nums = {k: work[i][k] for k in range(i + 1, n)}
        for k in range(i + 1, n):
            numk = nums[k]
            if lp_is_zero(numk):
                continue
            a_k = exps[k]
            p = lp_principal_part(numk, u, a_k, q)
            h_num = lp_shift(lp_sub(numk, lp_mul(p, unit, q), q), -a_k)
            if h_num[1]:
                if h_num[0] < 0:
                    raise PrecisionError("non-integral reduction multiplier")
                for k2 in range(k + 1, n):
                    ck = entries.get((k2, k))
                    if ck is not None:
                        nums[k2] = lp_sub(nums[k2], lp_mul(h_num, ck, q), q)
            if p[1]:
                entries[(k, i)] = p
    ordered = tuple(sorted(entries.items()))
    return exps, ordered


def vertex_from_columns(
    cols: Sequence[Sequence[Laurent]], n: int, q: int
) -> BuildingVertex:
    exps, entries = _canonicalize_columns(cols, n, q)
    return BuildingVertex(n, q, exps, entries)


def _rational_to_s(f: RationalFunction) -> tuple[Laurent, tuple]:
    """Rewrite f(t) in s = 1/t as (Laurent numerator, unit denominator)."""
    num = lp_from_poly_in_t(f.num.coeffs)
    if f.den.is_one():
        return num, (1,)
    dden = len(f.den.coeffs) - 1
    return lp_shift(num, dden), f.den.reversed_coeffs()


def canonical_form(
    rows: Sequence[Sequence[RationalFunction]], q: int | None = None
) -> BuildingVertex:
    """Canonical lattice class of the column span of an invertible matrix.

    Entries are rational functions in t.  Scaling the whole matrix by the
    product of the denominator units leaves the homothety class unchanged
    and yields Laurent entries, which the reduction consumes.
    """
    if isinstance(rows, GroupElement):
        rows = rows.rows
    rows = [list(r) for r in rows]
    n = len(rows)
    if q is None:
        q = rows[0][0].q
    if any(len(r) != n for r in rows):
        raise SingularMatrixError("matrix must be square")
    pairs = [[_rational_to_s(rows[i][j]) for j in range(n)] for i in range(n)]
    total = (1,)
    for i in range(n):
        for j in range(n):
            den = pairs[i][j][1]
            if den != (1,):
                total = pmul(total, den, q)
    cols = []
    for j in range(n):
        col = []
        for i in range(n):
            num, den = pairs[i][j]
            if den == (1,):
                quo = total
            else:
                quo, rem = pdivmod(total, den, q)
                assert not rem
            col.append(num if quo == (1,) else lp_mul(num, (0, quo), q))
        cols.append(col)
    return vertex_from_columns(cols, n, q)


def act(g: GroupElement, v: BuildingVertex) -> BuildingVertex:
    """Image of a vertex under left multiplication by a group element."""
    if g.n != v.n or g.q != v.q:
        raise ValueError("incompatible group element and vertex")
    if g.is_polynomial():
        g_l = [
            [lp_from_poly_in_t(e.num.coeffs) for e in row] for row in g.rows
        ]
        return act_laurent(g_l, v)
    # general path: multiply in K, then clear the denominators of the
    # product by a global unit, which fixes the homothety class
    cols_l = v.laurent_columns()
    q = v.q
    n = v.n
    prod: list[list[RationalFunction]] = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = RationalFunction.zero(q)
            for k in range(n):
                a = g.rows[i][k]
                b = cols_l[j][k]
                if a and b[1]:
                    acc = acc + a * lp_to_rational_in_t(b, q)
            row.append(acc)
        prod.append(row)
    return canonical_form(prod, q)


def act_laurent(g_l: Sequence[Sequence[Laurent]], v: BuildingVertex) -> BuildingVertex:
    """Fast action path for matrices already written as Laurent entries."""
    n, q = v.n, v.q
    cols = v.laurent_columns()
    out = []
    for j in range(n):
        col = []
        for i in range(n):
            acc = LZERO
            for k in range(n):
                a = g_l[i][k]
                b = cols[j][k]
                if a[1] and b[1]:
                    acc = lp_add(acc, lp_mul(a, b, q), q)
            col.append(acc)
        out.append(col)
    return vertex_from_columns(out, n, q)


def group_element_laurent(g: GroupElement) -> list[list[Laurent]]:
    if not g.is_polynomial():
        raise ValueError("Laurent form needs polynomial entries")
    return [[lp_from_poly_in_t(e.num.coeffs) for e in row] for row in g.rows]


# ---------------------------------------------------------------------------
# Adjacency: intermediate lattices <-> proper nonzero subspaces of L/sL.
# ---------------------------------------------------------------------------


def _rref_bases(n: int, k: int, q: int) -> Iterable[tuple[tuple[int, ...], ...]]:
    """All k-dimensional subspaces of F_q^n as canonical RREF bases."""
    for pivots in combinations(range(n), k):
        free_pos = []
        for r in range(k):
            for c in range(pivots[r] + 1, n):
                if c not in pivots:
                    free_pos.append((r, c))
        for values in iproduct(range(q), repeat=len(free_pos)):
            rows = [[0] * n for _ in range(k)]
            for r in range(k):
                rows[r][pivots[r]] = 1
            for (r, c), val in zip(free_pos, values):
                rows[r][c] = val
            yield tuple(tuple(r) for r in rows)


def subspace_count(n: int, q: int) -> int:
    """Number of proper nonzero subspaces of F_q^n (Gaussian binomials)."""
    total = 0
    for k in range(1, n):
        num = den = 1
        for i in range(k):
            num *= q ** (n - i) - 1
            den *= q ** (k - i) - 1
        total += num // den
    return total


def neighbors(v: BuildingVertex) -> list[BuildingVertex]:
    """All adjacent vertices, each from one intermediate lattice."""
    n, q = v.n, v.q
    cols = v.laurent_columns()
    shifted = [[lp_shift(e, 1) for e in col] for col in cols]
    out = []
    for k in range(1, n):
        for basis in _rref_bases(n, k, q):
            gens = []
            for coeffs in basis:
                col = [LZERO] * n
                for j, c in enumerate(coeffs):
                    if c:
                        for r in range(n):
                            col[r] = lp_add(col[r], lp_scale(cols[j][r], c, q), q)
                gens.append(col)
            gens.extend(shifted)
            out.append(vertex_from_columns(gens, n, q))
    assert len(out) == len(set(out)) == subspace_count(n, q)
    return sorted(out, key=BuildingVertex.sort_key)


@dataclass
class BallComplex:
    """Finite window onto the building: a ball in the 1-skeleton metric."""

    n: int
    q: int
    radius: int
    vertices: tuple[BuildingVertex, ...]
    distance: tuple[int, ...]
    adjacency: tuple[tuple[int, ...], ...]
    simplices: dict[int, tuple[tuple[int, ...], ...]]

    @property
    def num_edges(self) -> int:
        return len(self.simplices.get(1, ()))

    def index_of(self, v: BuildingVertex) -> int | None:
        return self._index.get(v)

    def __post_init__(self):
        self._index = {v: i for i, v in enumerate(self.vertices)}

    def simplex_counts(self) -> dict[int, int]:
        return {d: len(s) for d, s in sorted(self.simplices.items())}


def ball(
    center: BuildingVertex, radius: int, max_vertices: int = 50000
) -> BallComplex:
    """All vertices within graph distance radius and the cliques they span."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    n, q = center.n, center.q
    dist = {center: 0}
    frontier = [center]
    nbr_cache: dict[BuildingVertex, list[BuildingVertex]] = {}
    for d in range(1, radius + 1):
        fresh = []
        for v in sorted(frontier, key=BuildingVertex.sort_key):
            for w in neighbors(v):
                nbr_cache.setdefault(v, []).append(w)
                if w not in dist:
                    dist[w] = d
                    fresh.append(w)
                    if len(dist) > max_vertices:
                        raise BudgetExceededError(
                            f"ball exceeded the vertex budget {max_vertices}"
                        )
        frontier = fresh
    for v in frontier:
        nbr_cache[v] = neighbors(v)
    verts = tuple(sorted(dist, key=BuildingVertex.sort_key))
    index = {v: i for i, v in enumerate(verts)}
    adjacency = []
    for v in verts:
        adj = sorted(
            index[w] for w in nbr_cache.get(v, neighbors(v)) if w in index
        )
        adjacency.append(tuple(adj))
    adj_sets = [set(a) for a in adjacency]

    simplices: dict[int, tuple[tuple[int, ...], ...]] = {
        0: tuple((i,) for i in range(len(verts)))
    }
    current = [(i,) for i in range(len(verts))]
    dim = 0
    while current and dim + 1 <= n - 1:
        nxt = []
        for simplex in current:
            common = adj_sets[simplex[0]]
            for i in simplex[1:]:
                common = common & adj_sets[i]
            for j in sorted(common):
                if j > simplex[-1]:
                    nxt.append(simplex + (j,))
        dim += 1
        if nxt:
            simplices[dim] = tuple(nxt)
        current = nxt

    return BallComplex(
        n=n,
        q=q,
        radius=radius,
        vertices=verts,
        distance=tuple(dist[v] for v in verts),
        adjacency=tuple(adjacency),
        simplices=simplices,
    )


def are_adjacent(u: BuildingVertex, v: BuildingVertex) -> bool:
    if u == v:
        return False
    return v in neighbors(u)


def export_dot(ball_complex: BallComplex) -> str:
    """1-skeleton of a ball in DOT format."""
    lines = ["graph ball {"]
    for i, v in enumerate(ball_complex.vertices):
        label = str(v).replace('"', "'")
        lines.append(f'  v{i} [label="{label}"];')
    for i, j in ball_complex.simplices.get(1, ()):
        lines.append(f"  v{i} -- v{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
