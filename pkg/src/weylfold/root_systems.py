"""
Finite-type Cartan matrices, Dynkin diagrams and root systems.

Conventions
-----------
Nodes follow Bourbaki numbering and are 1-based at every public surface;
matrices are 0-indexed tuples internally, so node ``k`` is row ``k - 1``.

``c[j][k] = 2 <a_j, a_k> / <a_j, a_j>``, hence ``c[j][k] = -2`` or ``-3`` when
``a_j`` is the short root of the bond. Per family:

* ``A_n``: chain 1 - 2 - ... - n.
* ``B_n``: chain, node n short (double bond n-1 => n).
* ``C_n``: chain, nodes 1..n-1 short, node n long.
* ``D_n``: chain 1 - ... - (n-2), with n-1 and n both attached to n-2.
* ``E_n``: chain 1 - 3 - 4 - ... - n, node 2 attached to 4.
* ``F_4``: 1 - 2 => 3 - 4, nodes 1, 2 long.
* ``G_2``: node 1 short, node 2 long.

Simply-laced roots are normalized to ``<a, a> = 2``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .errors import InvalidInput
from .linalg import Matrix, Vector, dot, mat_vec

FAMILIES = "ABCDEFG"


@dataclass(frozen=True, order=True)
class DynkinType:
    family: str
    rank: int

    def __post_init__(self):
        if not _valid(self.family, self.rank):
            raise InvalidInput(f"invalid Dynkin type: {self.family}{self.rank}")

    def __str__(self):
        return f"{self.family}{self.rank}"

    @classmethod
    def parse(cls, s: str | DynkinType) -> DynkinType:
        if isinstance(s, DynkinType):
            return s
        m = re.fullmatch(r"\s*([A-Ga-g])\s*_?\s*(\d+)\s*", str(s))
        if not m:
            raise InvalidInput(f"invalid Dynkin type: {s!r}")
        return cls(m.group(1).upper(), int(m.group(2)))

    @property
    def simply_laced(self) -> bool:
        return self.family in "ADE"


def _valid(family: str, n: int) -> bool:
    if not isinstance(n, int) or isinstance(n, bool):
        return False
    return {
        "A": n >= 1,
        "B": n >= 2,
        "C": n >= 2,
        "D": n >= 3,
        "E": n in (6, 7, 8),
        "F": n == 4,
        "G": n == 2,
    }.get(family, False)


def all_types(max_rank: int) -> list[DynkinType]:
    out = []
    for fam in FAMILIES:
        for n in range(1, max_rank + 1):
            if _valid(fam, n):
                out.append(DynkinType(fam, n))
    return out


def _chain(n: int) -> list[list[int]]:
    c = [[0] * n for _ in range(n)]
    for i in range(n):
        c[i][i] = 2
        if i + 1 < n:
            c[i][i + 1] = c[i + 1][i] = -1
    return c


def cartan_matrix(t: DynkinType | str) -> Matrix:
    """Standard Cartan matrix in Bourbaki node order.

    >>> cartan_matrix("C2")
    ((2, -2), (-1, 2))
    """
    t = DynkinType.parse(t)
    n = t.rank
    f = t.family
    if f == "A":
        c = _chain(n)
    elif f == "B":
        c = _chain(n)
        c[n - 1][n - 2] = -2
    elif f == "C":
        c = _chain(n)
        c[n - 2][n - 1] = -2
    elif f in "DE":
        if f == "D":
            bonds = [(k, k + 1) for k in range(1, n - 1)] + [(n - 2, n)]
        else:
            bonds = [(1, 3), (2, 4)] + [(k, k + 1) for k in range(3, n)]
        c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for a, b in bonds:
            c[a - 1][b - 1] = c[b - 1][a - 1] = -1
    elif f == "F":
        c = _chain(4)
        c[2][1] = -2
    else:  # G2
        c = [[2, -3], [-1, 2]]
    return tuple(tuple(row) for row in c)


@dataclass(frozen=True)
class DynkinDiagram:
    """Nodes ``1..n``; edges ``(i, j, m, short)`` with ``i < j``, bond multiplicity
    ``m`` and, for ``m > 1``, the node carrying the short root (arrow head)."""

    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int, int, int | None], ...]

    @classmethod
    def from_cartan(cls, c: Matrix) -> DynkinDiagram:
        validate_cartan(c)
        n = len(c)
        edges = []
        for i in range(n):
            for j in range(i + 1, n):
                if c[i][j] == 0:
                    continue
                m = c[i][j] * c[j][i]
                short = None
                if m > 1:
                    short = i + 1 if abs(c[i][j]) > 1 else j + 1
                edges.append((i + 1, j + 1, m, short))
        return cls(tuple(range(1, n + 1)), tuple(edges))

    def cartan(self) -> Matrix:
        n = len(self.nodes)
        c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for i, j, m, short in self.edges:
            a, b = i - 1, j - 1
            if m == 1:
                c[a][b] = c[b][a] = -1
            elif short == i:
                c[a][b], c[b][a] = -m, -1
            else:
                c[a][b], c[b][a] = -1, -m
        return tuple(tuple(row) for row in c)

    @property
    def simply_laced(self) -> bool:
        return all(m == 1 for _, _, m, _ in self.edges)

    def neighbours(self, node: int) -> set[int]:
        out = set()
        for i, j, _, _ in self.edges:
            if i == node:
                out.add(j)
            elif j == node:
                out.add(i)
        return out


def dynkin_diagram(t: DynkinType | str) -> DynkinDiagram:
    return DynkinDiagram.from_cartan(cartan_matrix(t))


def validate_cartan(c: Matrix) -> None:
    n = len(c)
    if any(len(row) != n for row in c):
        raise InvalidInput("Cartan matrix must be square")
    for i in range(n):
        if c[i][i] != 2:
            raise InvalidInput("not a finite-type Cartan matrix: diagonal entry != 2")
        for j in range(n):
            if i != j:
                if c[i][j] > 0 or (c[i][j] == 0) != (c[j][i] == 0):
                    raise InvalidInput("not a finite-type Cartan matrix: bad off-diagonal pattern")


def components(c: Matrix) -> list[list[int]]:
    """Connected components (0-based indices, each sorted) of the Cartan graph."""
    n = len(c)
    seen: set[int] = set()
    out = []
    for s in range(n):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if j != i and c[i][j] != 0 and j not in seen:
                    seen.add(j)
                    stack.append(j)
        out.append(sorted(comp))
    return out


def submatrix(c: Matrix, idx: Sequence[int]) -> Matrix:
    return tuple(tuple(c[i][j] for j in idx) for i in idx)


def _match(c: Matrix, target: Matrix) -> tuple[int, ...] | None:
    """Find ``p`` with ``c[p[a]][p[b]] == target[a][b]`` by backtracking."""
    n = len(target)
    if len(c) != n:
        return None
    # order target nodes so each one after the first has an earlier neighbour
    order = [0]
    while len(order) < n:
        nxt = next(
            (b for b in range(n) if b not in order and any(target[a][b] for a in order)),
            next(b for b in range(n) if b not in order),
        )
        order.append(nxt)
    assign: dict[int, int] = {}
    used: set[int] = set()

    def extend(k: int) -> bool:
        if k == n:
            return True
        a = order[k]
        for cand in range(n):
            if cand in used:
                continue
            if all(c[cand][assign[b]] == target[a][b] and c[assign[b]][cand] == target[b][a] for b in order[:k]):
                assign[a] = cand
                used.add(cand)
                if extend(k + 1):
                    return True
                del assign[a]
                used.discard(cand)
        return False

    if extend(0):
        return tuple(assign[a] for a in range(n))
    return None


def classify(c: Matrix) -> list[tuple[DynkinType, tuple[int, ...]]]:
    """Recognize every simple factor of a (possibly decomposable) Cartan matrix.

    Returns ``(type, nodes)`` per connected component, ordered by smallest node;
    ``nodes[k]`` is the (1-based) input node that plays Bourbaki node ``k + 1``.
    A component that matches its candidate type without reordering is reported
    as that type, which decides between coincident labels such as B2 and C2.

    >>> classify(((2, -2), (-1, 2)))
    [(DynkinType(family='C', rank=2), (1, 2))]
    """
    validate_cartan(c)
    out = []
    for comp in components(c):
        sub = submatrix(c, comp)
        cands = [t for t in all_types(len(comp)) if t.rank == len(comp)]
        found = None
        for t in cands:
            if sub == cartan_matrix(t):
                found = (t, tuple(range(len(comp))))
                break
        if found is None:
            for t in cands:
                p = _match(sub, cartan_matrix(t))
                if p is not None:
                    found = (t, p)
                    break
        if found is None:
            raise InvalidInput("not a finite-type Cartan matrix")
        t, p = found
        out.append((t, tuple(comp[k] + 1 for k in p)))
    return out


def root_lengths(c: Matrix) -> tuple[Fraction, ...]:
    """Squared lengths ``<a_i, a_i>``, longest root of each component set to 2."""
    n = len(c)
    lengths: list[Fraction | None] = [None] * n
    for comp in components(c):
        lengths[comp[0]] = Fraction(1)
        stack = [comp[0]]
        while stack:
            i = stack.pop()
            for j in comp:
                if j != i and c[i][j] != 0 and lengths[j] is None:
                    # c_ij <a_i,a_i> = c_ji <a_j,a_j>
                    lengths[j] = lengths[i] * Fraction(c[i][j], c[j][i])
                    stack.append(j)
        top = max(lengths[i] for i in comp)
        for i in comp:
            lengths[i] = lengths[i] * 2 / top
    return tuple(lengths)


def symmetric_form(c: Matrix) -> Matrix:
    """Gram matrix ``<a_i, a_j>`` of the simple roots (``B = D C`` with ``D = diag(len/2)``)."""
    ls = root_lengths(c)
    return tuple(tuple(c[i][j] * ls[i] / 2 for j in range(len(c))) for i in range(len(c)))


def simply_laced_gram(diagram: DynkinDiagram | DynkinType | str) -> Matrix:
    """``<a_i,a_i> = 2``, ``<a_i,a_j> = -1`` per edge, else 0."""
    if not isinstance(diagram, DynkinDiagram):
        diagram = dynkin_diagram(diagram)
    if not diagram.simply_laced:
        raise InvalidInput("diagram is not simply laced")
    return diagram.cartan()


def inner_product(v: Sequence, w: Sequence, gram: Matrix):
    """Exact ``v^T gram w`` for vectors in simple-root coordinates.

    >>> g = simply_laced_gram("A4")
    >>> b1 = (Fraction(1, 2), 0, 0, Fraction(1, 2))
    >>> inner_product(b1, b1, g), inner_product(b1, (0, 1, 1, 0), g)
    (Fraction(1, 1), Fraction(-1, 1))
    """
    n = len(gram)
    if len(v) != n or len(w) != n:
        raise InvalidInput(f"dimension mismatch: vectors of length {len(v)}, {len(w)} vs Gram of size {n}")
    return Fraction(dot(v, mat_vec(gram, w)))


def reflect(c: Matrix, i: int, v: Vector) -> Vector:
    """Simple reflection ``s_i`` (0-based ``i``) in simple-root coordinates."""
    pairing = sum(c[i][j] * v[j] for j in range(len(v)))
    return tuple(x - pairing if k == i else x for k, x in enumerate(v))


def roots_from_cartan(c: Matrix) -> list[Vector]:
    n = len(c)
    simple = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    seen = set(simple)
    stack = list(simple)
    while stack:
        v = stack.pop()
        for i in range(n):
            w = reflect(c, i, v)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return sorted(seen, key=lambda r: (sum(r) < 0, abs(sum(r)), r))


def roots(t: DynkinType | str) -> list[Vector]:
    """Full root system of ``t`` in simple-root coordinates.

    >>> len(roots("G2"))
    12
    """
    return roots_from_cartan(cartan_matrix(t))


def positive_roots_from_cartan(c: Matrix) -> list[Vector]:
    return [r for r in roots_from_cartan(c) if all(x >= 0 for x in r)]


COXETER_NUMBER = {"A": lambda n: n + 1, "B": lambda n: 2 * n, "C": lambda n: 2 * n, "D": lambda n: 2 * n - 2,
                  "E": lambda n: {6: 12, 7: 18, 8: 30}[n], "F": lambda n: 12, "G": lambda n: 6}


def coxeter_number(t: DynkinType | str) -> int:
    t = DynkinType.parse(t)
    return COXETER_NUMBER[t.family](t.rank)


def weyl_order(t: DynkinType | str) -> int:
    """Tabulated ``|W|``; used only as a reference value, never to build groups."""
    t = DynkinType.parse(t)
    n = t.rank
    if t.family == "A":
        return factorial(n + 1)
    if t.family in "BC":
        return 2**n * factorial(n)
    if t.family == "D":
        return 2 ** (n - 1) * factorial(n)
    return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600, ("F", 4): 1152, ("G", 2): 12}[(t.family, n)]
