"""Finite realizations of sector-simplex stabilizers over F_q.

Two independent constructions of the same group are compared:

* realize_stabilizer enumerates the group cut out by the degree-bound
  pattern of a StabilizerDescription, by closing torus and root-subgroup
  generators under multiplication while checking that every product
  still satisfies the bounds (an escape would falsify the pattern and is
  raised as PatternEscapeError).

* brute_stabilizer knows nothing about the bounds.  It runs an
  orbit/stabilizer search through the action on the building: a
  breadth-first walk of the simplex orbit under bounded elementary
  generators records a transversal, and every rediscovered state yields
  a loop element fixing the simplex.  The group generated by the loop
  elements, capped by the search budgets, is returned; exhausted budgets
  flag the result as a lower bound.

The extension structure splits a stabilizer along its block-diagonal
part: the blocks are the index classes on which the simplex exponents
agree, the image L consists of constant matrices, and the kernel U is
the bounded-degree unipotent part.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .building import BuildingVertex, act_laurent, group_element_laurent
from .chevalley import (
    GroupElement,
    coweight_torus,
    monomial_elementary_generators,
    root_element,
)
from .polyring import Polynomial, RationalFunction, check_modulus
from .sector import (
    SectorSimplex,
    StabilizerDescription,
    predict_stabilizer,
    realize_simplex,
)


class PatternEscapeError(RuntimeError):
    """A product of pattern generators left the degree pattern."""


@dataclass(frozen=True)
class FiniteMatrixGroup:
    """A finite group of matrices over F_q[t], closed under product."""

    elements: tuple[GroupElement, ...]
    generated_from: tuple[GroupElement, ...]
    complete: bool = True
    note: str = ""

    @property
    def order(self) -> int:
        return len(self.elements)

    def key_set(self) -> frozenset:
        return frozenset(g.key() for g in self.elements)

    def __contains__(self, g: GroupElement) -> bool:
        return g.key() in self.key_set()

    def __iter__(self):
        return iter(self.elements)


def _sorted_elements(seen: dict) -> tuple[GroupElement, ...]:
    return tuple(sorted(seen.values(), key=lambda g: g.key()))


def element_in_pattern(g: GroupElement, desc: StabilizerDescription) -> bool:
    """Entry degrees of g against the bounds; diagonal must be constant."""
    if not g.is_polynomial():
        return False
    bm = desc.bound_map
    for i in range(g.n):
        for j in range(g.n):
            e = g.rows[i][j]
            if i == j:
                if e.num.degree > 0:
                    return False
                continue
            b = bm[(i + 1, j + 1)]
            if b < 0:
                if not e.is_zero():
                    return False
            elif e.num.degree > b:
                return False
    return True


def pattern_generators(desc: StabilizerDescription, q: int) -> list[GroupElement]:
    n = desc.n
    gens: list[GroupElement] = []
    for i in range(1, n):
        lam = [0] * n
        lam[i - 1], lam[i] = 1, -1
        for a in range(2, q):
            gens.append(coweight_torus(a, lam, n, q))
    for (i, j), b in desc.bounds:
        if b < 0:
            continue
        for d in range(b + 1):
            for c in range(1, q):
                gens.append(root_element(i, j, Polynomial.monomial(c, d, q), n, q))
    return gens


def realize_stabilizer(
    desc: StabilizerDescription, q: int, cap: int = 200_000
) -> FiniteMatrixGroup:
    """The full finite group satisfying a degree-bound pattern.

    Closure from Levi and root-subgroup generators; every product is
    required to stay inside the pattern.
    """
    check_modulus(q)
    gens = pattern_generators(desc, q)
    ident = GroupElement.identity(desc.n, q)
    seen = {ident.key(): ident}
    frontier = [ident]
    while frontier:
        fresh = []
        for x in frontier:
            for g in gens:
                y = x * g
                k = y.key()
                if k in seen:
                    continue
                if not element_in_pattern(y, desc):
                    raise PatternEscapeError(
                        f"closure escaped the degree pattern at {y}"
                    )
                if len(seen) >= cap:
                    raise RuntimeError(f"stabilizer closure exceeded cap {cap}")
                seen[k] = y
                fresh.append(y)
        frontier = fresh
    return FiniteMatrixGroup(_sorted_elements(seen), tuple(gens))


def _entry_degree_ok(g: GroupElement, cap: int) -> bool:
    return all(e.num.degree <= cap for row in g.rows for e in row)


def brute_stabilizer(
    sigma: SectorSimplex,
    q: int,
    search_degree: int,
    search_length: int,
    window_radius: int | None = None,
    state_cap: int = 4000,
    closure_cap: int = 200_000,
) -> FiniteMatrixGroup:
    """Stabilizer elements found by an orbit walk, independent of any
    degree-bound prediction.

    search_degree caps both the generator parameters and the entries of
    retained elements; search_length caps the word length of the walk.
    """
    check_modulus(q)
    n = sigma.n
    base = realize_simplex(sigma, q)
    height = max(v[0] for v in sigma.vertices)
    if window_radius is None:
        window_radius = height + 2

    gens = monomial_elementary_generators(n, q, search_degree)
    gens_l = [group_element_laurent(g) for g in gens]

    act_memo: dict[tuple[int, BuildingVertex], BuildingVertex] = {}

    def act_v(gi: int, v: BuildingVertex) -> BuildingVertex:
        key = (gi, v)
        out = act_memo.get(key)
        if out is None:
            out = act_laurent(gens_l[gi], v)
            act_memo[key] = out
        return out

    def in_window(v: BuildingVertex) -> bool:
        return max(v.exponents) <= window_radius

    start = tuple(base)
    transversal: dict[tuple, GroupElement] = {
        start: GroupElement.identity(n, q)
    }
    depth = {start: 0}
    queue = deque([start])
    loops: dict = {}
    truncated = False
    while queue:
        state = queue.popleft()
        if depth[state] >= search_length:
            truncated = True
            continue
        tx = transversal[state]
        for gi, g in enumerate(gens):
            image = tuple(sorted((act_v(gi, v) for v in state), key=BuildingVertex.sort_key))
            known = transversal.get(image)
            if known is None:
                if any(not in_window(v) for v in image):
                    continue
                if len(transversal) >= state_cap:
                    truncated = True
                    continue
                transversal[image] = g * tx
                depth[image] = depth[state] + 1
                queue.append(image)
            else:
                loop = known.inverse() * (g * tx)
                k = loop.key()
                if k not in loops:
                    loops[k] = loop

    ident = GroupElement.identity(n, q)
    loops.pop(ident.key(), None)
    dropped = sum(1 for g in loops.values() if not _entry_degree_ok(g, search_degree))
    kept = [g for g in loops.values() if _entry_degree_ok(g, search_degree)]
    kept.sort(key=lambda g: g.key())

    seen = {ident.key(): ident}
    frontier = [ident]
    escaped = False
    while frontier:
        fresh = []
        for x in frontier:
            for g in kept:
                y = x * g
                k = y.key()
                if k in seen:
                    continue
                if not _entry_degree_ok(y, search_degree):
                    escaped = True
                    continue
                if len(seen) >= closure_cap:
                    escaped = True
                    continue
                seen[k] = y
                fresh.append(y)
        frontier = fresh

    notes = []
    if truncated:
        notes.append("orbit walk budget exhausted")
    if dropped:
        notes.append(f"{dropped} loop elements above the degree cap dropped")
    if escaped:
        notes.append("closure hit a budget; element list is a lower bound")
    return FiniteMatrixGroup(
        _sorted_elements(seen),
        tuple(kept),
        complete=not (truncated or escaped or dropped),
        note="; ".join(notes),
    )


def stabilizer_agreement(
    sigma: SectorSimplex,
    q: int,
    search_degree: int | None = None,
    search_length: int = 12,
) -> dict:
    """Two-sided containment of the predicted and searched stabilizers."""
    desc = predict_stabilizer(sigma)
    if search_degree is None:
        search_degree = max(0, max(b for _, b in desc.bounds))
    realized = realize_stabilizer(desc, q)
    brute = brute_stabilizer(sigma, q, search_degree, search_length)
    rk, bk = realized.key_set(), brute.key_set()
    return {
        "simplex": sigma.to_json(),
        "predicted_order": realized.order,
        "brute_order": brute.order,
        "realized_subset_of_brute": rk <= bk,
        "brute_subset_of_realized": bk <= rk,
        "agree": rk == bk,
        "brute_complete": brute.complete,
        "brute_note": brute.note,
    }


# ---------------------------------------------------------------------------
# Extension structure 1 -> U -> Gamma -> L -> 1 along the Levi blocks.
# ---------------------------------------------------------------------------


def levi_projection(g: GroupElement, blocks: Sequence[Sequence[int]]) -> GroupElement:
    """Block-diagonal part of g along the given index blocks (1-based)."""
    zero = RationalFunction.zero(g.q)
    rows = [[zero] * g.n for _ in range(g.n)]
    for block in blocks:
        for i in block:
            for j in block:
                rows[i - 1][j - 1] = g.rows[i - 1][j - 1]
    return GroupElement(rows, check=False)


def extension_check(gamma: FiniteMatrixGroup, desc: StabilizerDescription) -> dict:
    """Verify the Levi extension structure of a realized stabilizer."""
    blocks = desc.levi_blocks()
    ident = GroupElement.identity(desc.n, gamma.elements[0].q)
    gamma_keys = gamma.key_set()

    image: dict = {}
    kernel = []
    for g in gamma:
        pg = levi_projection(g, blocks)
        image.setdefault(pg.key(), pg)
        if pg.key() == ident.key():
            kernel.append(g)

    l_elems = _sorted_elements(image)
    l_keys = set(image)
    u_keys = {g.key() for g in kernel}

    l_subgroup = all((a * b).key() in l_keys for a in l_elems for b in l_elems)
    u_subgroup = all((a * b).key() in u_keys for a in kernel for b in kernel)
    conj_gens = gamma.generated_from or gamma.elements
    u_normal = u_subgroup and all(
        (g * u * g.inverse()).key() in u_keys for g in conj_gens for u in kernel
    )
    splits = all(k in gamma_keys for k in l_keys) and all(
        levi_projection(l, blocks).key() == l.key() for l in l_elems
    )
    l_constant = all(l.is_constant() for l in l_elems)
    order_ok = gamma.order == len(kernel) * len(l_elems)

    return {
        "blocks": [list(b) for b in blocks],
        "gamma_order": gamma.order,
        "kernel_order": len(kernel),
        "image_order": len(l_elems),
        "u_subgroup": u_subgroup,
        "u_normal": u_normal,
        "l_subgroup": l_subgroup,
        "l_constant": l_constant,
        "order_product_ok": order_ok,
        "splits": splits,
        "ok": all(
            [u_subgroup, u_normal, l_subgroup, l_constant, order_ok, splits]
        ),
    }


def unipotent_part(gamma: FiniteMatrixGroup, desc: StabilizerDescription) -> FiniteMatrixGroup:
    """Kernel of the Levi projection as a group in its own right."""
    blocks = desc.levi_blocks()
    ident = GroupElement.identity(desc.n, gamma.elements[0].q)
    kernel = [
        g for g in gamma if levi_projection(g, blocks).key() == ident.key()
    ]
    gens = [g for g in gamma.generated_from if g.key() in {k.key() for k in kernel}]
    return FiniteMatrixGroup(
        tuple(sorted(kernel, key=lambda g: g.key())), tuple(gens) or tuple(kernel)
    )


def levi_part(gamma: FiniteMatrixGroup, desc: StabilizerDescription) -> FiniteMatrixGroup:
    blocks = desc.levi_blocks()
    image = {}
    for g in gamma:
        pg = levi_projection(g, blocks)
        image.setdefault(pg.key(), pg)
    elems = _sorted_elements(image)
    return FiniteMatrixGroup(elems, elems)


# ---------------------------------------------------------------------------
# Lower central series and abelian invariants.
# ---------------------------------------------------------------------------


def _commutator(a: GroupElement, b: GroupElement, inv_cache: dict) -> GroupElement:
    ia = inv_cache.get(a.key())
    if ia is None:
        ia = a.inverse()
        inv_cache[a.key()] = ia
    ib = inv_cache.get(b.key())
    if ib is None:
        ib = b.inverse()
        inv_cache[b.key()] = ib
    return a * b * ia * ib


def _closure(elems: Iterable[GroupElement], ident: GroupElement) -> dict:
    seen = {ident.key(): ident}
    gens = []
    for g in elems:
        if g.key() not in seen:
            seen[g.key()] = g
            gens.append(g)
    frontier = list(gens)
    while frontier:
        fresh = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y.key() not in seen:
                    seen[y.key()] = y
                    fresh.append(y)
        frontier = fresh
    return seen


def lower_central_series(u: FiniteMatrixGroup) -> dict:
    """Lengths and orders of U >= [U,U] >= [U,[U,U]] >= ...

    The length is the number of nontrivial terms; a series that stops
    shrinking before reaching the trivial group means the input was not
    nilpotent and raises ValueError.
    """
    if u.order == 0:
        raise ValueError("empty group")
    ident = GroupElement.identity(u.elements[0].n, u.elements[0].q)
    inv_cache: dict = {}
    orders = []
    current = list(u.elements)
    current_keys = {g.key() for g in current}
    while len(current) > 1:
        orders.append(len(current))
        comms = {}
        for a in u.elements:
            for b in current:
                c = _commutator(a, b, inv_cache)
                comms.setdefault(c.key(), c)
        nxt = _closure(comms.values(), ident)
        if set(nxt) == current_keys:
            raise ValueError("group is not nilpotent: series stabilized")
        current = sorted(nxt.values(), key=lambda g: g.key())
        current_keys = set(nxt)
    return {"length": len(orders), "orders": orders}


def commutator_subgroup(g: FiniteMatrixGroup) -> FiniteMatrixGroup:
    """Normal closure of the commutators of the generators."""
    ident = GroupElement.identity(g.elements[0].n, g.elements[0].q)
    gens = list(g.generated_from or g.elements)
    inv_cache: dict = {}
    seed = {}
    for a in gens:
        for b in gens:
            c = _commutator(a, b, inv_cache)
            seed.setdefault(c.key(), c)
    seen = _closure(seed.values(), ident)
    # close under conjugation by the generators, then regroup
    changed = True
    while changed:
        changed = False
        for h in list(seen.values()):
            for a in gens:
                ia = inv_cache.get(a.key())
                if ia is None:
                    ia = a.inverse()
                    inv_cache[a.key()] = ia
                c = a * h * ia
                if c.key() not in seen:
                    seen = _closure(list(seen.values()) + [c], ident)
                    changed = True
    elems = _sorted_elements(seen)
    return FiniteMatrixGroup(elems, elems)


@dataclass(frozen=True)
class AbelianInvariants:
    """Invariant factors d_1 | d_2 | ... of a finite abelian group."""

    invariant_factors: tuple[int, ...]

    def to_json(self) -> list[int]:
        return list(self.invariant_factors)


def _prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def abelian_invariants(g: FiniteMatrixGroup, cap: int = 100_000) -> AbelianInvariants:
    """Invariant factors of g made abelian.

    The quotient by the commutator subgroup is analyzed through element
    orders: for each prime p, the count of solutions of x^(p^k) = 1 is
    p^(sum of min(part, k)) over the p-partition, so the counts determine
    the partition, and the per-prime partitions merge into the
    divisibility chain.
    """
    if g.order > cap:
        raise RuntimeError(f"group order {g.order} exceeds the budget {cap}")
    derived = commutator_subgroup(g)

    coset_of: dict = {}
    reps: list[GroupElement] = []
    for x in g.elements:
        if x.key() in coset_of:
            continue
        cid = len(reps)
        reps.append(x)
        for d in derived.elements:
            coset_of[(x * d).key()] = cid
    n_q = len(reps)
    if n_q == 1:
        return AbelianInvariants(())

    ident_cid = coset_of[
        GroupElement.identity(g.elements[0].n, g.elements[0].q).key()
    ]
    orders = []
    for x in reps:
        acc = x
        o = 1
        while coset_of[acc.key()] != ident_cid:
            acc = acc * x
            o += 1
        orders.append(o)

    def int_log(value: int, p: int) -> int:
        m = 0
        while value > 1:
            assert value % p == 0, "solution count is not a prime power"
            value //= p
            m += 1
        return m

    partitions: dict[int, list[int]] = {}
    for p in _prime_factors(n_q):
        ms = [0]
        k = 1
        while True:
            count = sum(1 for o in orders if pow(p, k) % o == 0)
            ms.append(int_log(count, p))
            if ms[-1] == ms[-2]:
                ms.pop()
                break
            k += 1
        conj = [ms[i + 1] - ms[i] for i in range(len(ms) - 1)]
        lam = []
        i = 1
        while True:
            cnt = sum(1 for c in conj if c >= i)
            if cnt == 0:
                break
            lam.append(cnt)
            i += 1
        partitions[p] = sorted(lam, reverse=True)

    width = max(len(v) for v in partitions.values())
    factors = []
    for slot in range(width):
        d = 1
        for p, parts in partitions.items():
            padded = parts + [0] * width
            d *= p ** padded[slot]
        factors.append(d)
    factors = [f for f in factors if f > 1]
    factors.sort()
    return AbelianInvariants(tuple(factors))


# ---------------------------------------------------------------------------
# S(n) witnesses.
# ---------------------------------------------------------------------------


def sn_witness(q: int, n: int):
    """A tuple of units of F_q whose nonempty subfamily sums are all units,
    or None if exhaustive search proves there is none."""
    check_modulus(q)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return ()
    from itertools import combinations as _comb, product as _prod

    for tup in _prod(range(1, q), repeat=n):
        ok = True
        for size in range(1, n + 1):
            for idxs in _comb(range(n), size):
                if sum(tup[i] for i in idxs) % q == 0:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return tup
    return None


def verify_sn_witness(q: int, witness) -> bool:
    from itertools import combinations as _comb

    n = len(witness)
    if any(w % q == 0 for w in witness):
        return False
    for size in range(1, n + 1):
        for idxs in _comb(range(n), size):
            if sum(witness[i] for i in idxs) % q == 0:
                return False
    return True
