"""Group elements of SL_n over F_q(t) as exact matrices, elementary
generator sets, coweight torus elements, and a checker for the two
defining axioms of finite Tits systems.

Group elements are concrete matrices with determinant exactly 1;
equality is entry-wise equality of reduced rational functions, which
avoids any word problem.  The axiom checker materializes double cosets
by exhaustive multiplication and therefore only accepts finite ambient
groups.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from itertools import product as iproduct
from typing import Callable, Iterable, Sequence

from .polyring import (
    FieldElement,
    Polynomial,
    RationalFunction,
    check_modulus,
)


class GroupElement:
    """An n x n matrix over F_q(t) with determinant 1."""

    __slots__ = ("n", "q", "rows", "_key", "_hash")

    def __init__(self, rows: Sequence[Sequence[RationalFunction]], check: bool = True):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix is not square")
        self.n = n
        self.q = rows[0][0].q
        self.rows = rows
        self._key = None
        self._hash = None
        if check and matrix_det(rows) != RationalFunction.one(self.q):
            raise ValueError("determinant is not 1")

    @classmethod
    def identity(cls, n: int, q: int) -> "GroupElement":
        one, zero = RationalFunction.one(q), RationalFunction.zero(q)
        return cls(
            [[one if i == j else zero for j in range(n)] for i in range(n)],
            check=False,
        )

    def key(self):
        if self._key is None:
            self._key = tuple(tuple(e.key() for e in row) for row in self.rows)
        return self._key

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __eq__(self, other):
        return (
            isinstance(other, GroupElement)
            and self.n == other.n
            and self.q == other.q
            and self.key() == other.key()
        )

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement):
            return NotImplemented
        if self.n != other.n or self.q != other.q:
            raise ValueError("incompatible matrices")
        n = self.n
        zero = RationalFunction.zero(self.q)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    a = self.rows[i][k]
                    b = other.rows[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            rows.append(row)
        return GroupElement(rows, check=False)

    def inverse(self) -> "GroupElement":
        # adjugate works since det = 1
        n = self.n
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                minor = [
                    [self.rows[r][c] for c in range(n) if c != i]
                    for r in range(n)
                    if r != j
                ]
                cof = matrix_det(minor)
                row.append(cof if (i + j) % 2 == 0 else -cof)
            rows.append(row)
        return GroupElement(rows, check=False)

    def det(self) -> RationalFunction:
        return matrix_det(self.rows)

    def is_polynomial(self) -> bool:
        return all(e.is_polynomial() for row in self.rows for e in row)

    def entry_degrees(self) -> tuple[tuple[float, ...], ...]:
        return tuple(tuple(e.num.degree - e.den.degree for e in row) for row in self.rows)

    def constant_part(self) -> "GroupElement":
        """Evaluation at t = 0; requires every entry to be regular there."""
        q = self.q
        rows = [
            [RationalFunction.constant(e.evaluate(0), q) for e in row]
            for row in self.rows
        ]
        return GroupElement(rows, check=False)

    def is_constant(self) -> bool:
        return all(
            e.den.is_one() and e.num.degree <= 0 for row in self.rows for e in row
        )

    def __str__(self):
        body = "; ".join(
            ", ".join(str(e) for e in row) for row in self.rows
        )
        return f"[{body}]"

    __repr__ = __str__


def matrix_det(rows) -> RationalFunction:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = None
    for j in range(n):
        e = rows[0][j]
        if not e:
            continue
        minor = [[rows[r][c] for c in range(n) if c != j] for r in range(1, n)]
        term = e * matrix_det(minor)
        if j % 2 == 1:
            term = -term
        acc = term if acc is None else acc + term
    if acc is None:
        q = rows[0][0].q
        return RationalFunction.zero(q)
    return acc


def _coerce_scalar(u, q: int) -> RationalFunction:
    if isinstance(u, RationalFunction):
        return u
    if isinstance(u, Polynomial):
        return RationalFunction.from_polynomial(u)
    if isinstance(u, int):
        return RationalFunction.constant(u, q)
    if isinstance(u, FieldElement):
        return RationalFunction.constant(u.residue, q)
    raise TypeError(f"cannot use {u!r} as a matrix entry")


def root_element(i: int, j: int, u, n: int, q: int | None = None) -> GroupElement:
    """The elementary matrix with u in entry (i, j), 1-based, i != j."""
    if i == j:
        raise ValueError("root element needs i != j")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"indices ({i}, {j}) out of range for size {n}")
    if q is None:
        if isinstance(u, (Polynomial, RationalFunction)):
            q = u.q
        else:
            raise ValueError("q is required for integer entries")
    g = GroupElement.identity(n, q)
    rows = [list(r) for r in g.rows]
    rows[i - 1][j - 1] = _coerce_scalar(u, q)
    return GroupElement(rows, check=False)


def coweight_torus(a, lam: Sequence[int], n: int, q: int | None = None) -> GroupElement:
    """diag(a**lam_1, ..., a**lam_n) for a nonzero scalar and sum(lam) = 0."""
    if isinstance(a, FieldElement):
        q = a.modulus
        a = a.residue
    if q is None:
        raise ValueError("q is required for integer scalars")
    check_modulus(q)
    a %= q
    if a == 0:
        raise ValueError("torus parameter must be nonzero")
    lam = tuple(lam)
    if len(lam) != n or sum(lam) != 0:
        raise ValueError("exponents must be a length-n cocharacter summing to 0")
    zero = RationalFunction.zero(q)
    rows = []
    for i in range(n):
        row = [zero] * n
        e = lam[i]
        row[i] = RationalFunction.constant(pow(a, e, q) if e >= 0 else pow(pow(a, -1, q), -e, q), q)
        rows.append(row)
    return GroupElement(rows, check=False)


def _nonzero_polys_up_to(q: int, d: int) -> list[Polynomial]:
    out = []
    for coeffs in iproduct(range(q), repeat=d + 1):
        if any(coeffs):
            out.append(Polynomial(coeffs, q))
    return out


def elementary_generators(n: int, q: int, max_degree: int) -> list[GroupElement]:
    """All elementary matrices e_{ij}(u) with u != 0 of degree <= max_degree.

    The set is closed under inverses since e_{ij}(u)^-1 = e_{ij}(-u); the
    count is n(n-1)(q^(max_degree+1) - 1).
    """
    if n < 2 or max_degree < 0:
        raise ValueError("need n >= 2 and max_degree >= 0")
    check_modulus(q)
    gens = []
    polys = _nonzero_polys_up_to(q, max_degree)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            for u in polys:
                gens.append(root_element(i, j, u, n, q))
    return gens


def monomial_elementary_generators(n: int, q: int, max_degree: int) -> list[GroupElement]:
    """Elementary matrices with monomial parameter c*t^d; generates the same
    group as the full bounded-degree set, with far fewer generators."""
    gens = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            for d in range(max_degree + 1):
                for c in range(1, q):
                    gens.append(root_element(i, j, Polynomial.monomial(c, d, q), n, q))
    return gens


def generate_group(
    generators: Iterable[GroupElement], cap: int | None = None
) -> list[GroupElement]:
    """Closure of a generator set under multiplication.

    Returns the full group when it is finite; raises RuntimeError if the
    closure exceeds the cap.  Generators must be invertible with finite
    order (always true in a finite matrix group).
    """
    gens = list(generators)
    if not gens:
        raise ValueError("no generators")
    ident = GroupElement.identity(gens[0].n, gens[0].q)
    seen = {ident.key(): ident}
    frontier = [ident]
    while frontier:
        fresh = []
        for x in frontier:
            for g in gens:
                y = x * g
                k = y.key()
                if k not in seen:
                    if cap is not None and len(seen) >= cap:
                        raise RuntimeError(f"group closure exceeded cap {cap}")
                    seen[k] = y
                    fresh.append(y)
        frontier = fresh
    return sorted(seen.values(), key=lambda g: g.key())


def special_linear_group(n: int, q: int) -> list[GroupElement]:
    """All of SL_n(F_q) by closure from constant elementary matrices."""
    gens = [
        root_element(i, j, c, n, q)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j
        for c in range(1, q)
    ]
    return generate_group(gens)


def upper_triangular_subgroup(group: Sequence[GroupElement]) -> list[GroupElement]:
    out = []
    for g in group:
        if all(
            g.rows[i][j].is_zero()
            for i in range(g.n)
            for j in range(g.n)
            if i > j
        ):
            out.append(g)
    return out


def monomial_subgroup(group: Sequence[GroupElement]) -> list[GroupElement]:
    out = []
    for g in group:
        ok = all(sum(1 for e in row if e) == 1 for row in g.rows) and all(
            sum(1 for i in range(g.n) if g.rows[i][j]) == 1 for j in range(g.n)
        )
        if ok:
            out.append(g)
    return out


def standard_reflection_reps(n: int, q: int) -> list[GroupElement]:
    """Monomial representatives of the simple reflections in SL_n."""
    reps = []
    for i in range(1, n):
        g = [list(r) for r in GroupElement.identity(n, q).rows]
        zero = RationalFunction.zero(q)
        g[i - 1][i - 1] = zero
        g[i][i] = zero
        g[i - 1][i] = RationalFunction.constant(1, q)
        g[i][i - 1] = RationalFunction.constant(-1, q)
        reps.append(GroupElement(g))
    return reps


class FiniteTitsData:
    """Explicit finite group with candidate (B, N) subgroups and chosen
    reflection representatives inside N."""

    def __init__(
        self,
        elements: Sequence[GroupElement],
        b_elements: Sequence[GroupElement],
        n_elements: Sequence[GroupElement],
        s_reps: Sequence[GroupElement],
        name: str = "",
    ):
        self.elements = list(elements)
        self.b_elements = list(b_elements)
        self.n_elements = list(n_elements)
        self.s_reps = list(s_reps)
        self.name = name


def standard_tits_system(n: int, q: int) -> FiniteTitsData:
    g = special_linear_group(n, q)
    return FiniteTitsData(
        g,
        upper_triangular_subgroup(g),
        monomial_subgroup(g),
        standard_reflection_reps(n, q),
        name=f"SL_{n}(F_{q})",
    )


def degenerate_tits_system(n: int, q: int) -> FiniteTitsData:
    """B equal to the whole group; the second axiom must fail."""
    g = special_linear_group(n, q)
    return FiniteTitsData(
        g,
        g,
        monomial_subgroup(g),
        standard_reflection_reps(n, q),
        name=f"SL_{n}(F_{q}) with B = G",
    )


def _is_subgroup(elems: Sequence[GroupElement], keys: set) -> bool:
    for a in elems:
        if a.inverse().key() not in keys:
            return False
        for b in elems:
            if (a * b).key() not in keys:
                return False
    return True


def check_bn_axioms(data: FiniteTitsData, workers: int = 1) -> dict:
    """Exhaustively test the two Tits-system axioms on a finite group.

    Axiom one asks sBw to lie inside BswB united with BwB for every
    reflection representative s and Weyl element w; axiom two asks that
    no sBs^-1 is contained in B.  Structural defects (B or N not a
    subgroup, B and N not generating, T not normal in N) are reported as
    findings, not raised.
    """
    b_keys = {g.key() for g in data.b_elements}
    n_keys = {g.key() for g in data.n_elements}
    all_keys = {g.key() for g in data.elements}

    structural = {
        "b_subgroup": _is_subgroup(data.b_elements, b_keys),
        "n_subgroup": _is_subgroup(data.n_elements, n_keys),
    }
    gen_keys = {
        g.key() for g in generate_group(data.b_elements + data.n_elements)
    }
    structural["bn_generate"] = gen_keys == all_keys

    t_elems = [g for g in data.n_elements if g.key() in b_keys]
    t_keys = {g.key() for g in t_elems}
    t_normal = all(
        (w * t * w.inverse()).key() in t_keys
        for w in data.n_elements
        for t in t_elems
    )
    structural["t_normal_in_n"] = t_normal

    report = {
        "name": data.name,
        "structural": structural,
        "bn1": [],
        "bn2": [],
        "ok": False,
    }
    if not all(structural.values()):
        return report

    # Weyl group: label cosets of T in N by their minimal element key.
    coset_of: dict = {}
    cosets: dict = {}
    for w in data.n_elements:
        if w.key() in coset_of:
            continue
        members = [w * t for t in t_elems]
        label = min(m.key() for m in members)
        for m in members:
            coset_of[m.key()] = label
        cosets[label] = members[0]
    w_labels = sorted(cosets)
    w_names = {label: f"w{idx}" for idx, label in enumerate(w_labels)}

    s_items = []
    for s in data.s_reps:
        label = coset_of.get(s.key())
        if label is None:
            raise ValueError("reflection representative not in N")
        s_items.append((w_names[label], s))

    def bn1_case(item):
        (s_name, s), w_label = item
        w = cosets[w_label]
        sw = s * w
        target = set()
        for b1 in data.b_elements:
            left_sw = b1 * sw
            left_w = b1 * w
            for b2 in data.b_elements:
                target.add((left_sw * b2).key())
                target.add((left_w * b2).key())
        ok = all((s * b * w).key() in target for b in data.b_elements)
        return {"s": s_name, "w": w_names[w_label], "ok": ok}

    cases = [(si, wl) for si in s_items for wl in w_labels]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            report["bn1"] = list(pool.map(bn1_case, cases))
    else:
        report["bn1"] = [bn1_case(c) for c in cases]

    for s_name, s in s_items:
        sinv = s.inverse()
        escapes = any((s * b * sinv).key() not in b_keys for b in data.b_elements)
        report["bn2"].append({"s": s_name, "ok": escapes})

    report["ok"] = all(c["ok"] for c in report["bn1"]) and all(
        c["ok"] for c in report["bn2"]
    )
    return report
