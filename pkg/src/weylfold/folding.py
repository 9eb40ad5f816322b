"""
Folding simply-laced Dynkin diagrams by a group of diagram automorphisms.

For an orbit ``j`` of the node set, ``beta_j = (1/N) * sum(alpha_i, i in j)``
where ``N`` counts the connected components of the subgraph on ``j``. The
folded Cartan matrix is ``c_jk = 2 <beta_j, beta_k> / <beta_j, beta_j>``.
Folded nodes are the orbits sorted by their smallest member.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ConsistencyError, InvalidInput
from .linalg import Matrix, Vector, coordinates, identity, in_span, mat_mul, mat_sub, mat_vec, normalize, nullspace
from .root_systems import (
    DynkinDiagram,
    DynkinType,
    classify,
    dynkin_diagram,
    inner_product,
    simply_laced_gram,
)
from .weyl import GroupElement, WeylGroup, longest_element, parabolic

Permutation = tuple[int, ...]  # 1-based images: p[i-1] = image of node i


def parse_cycles(s: str, n: int) -> Permutation:
    """Cycle notation to an image list.

    >>> parse_cycles("(1 4)(2 3)", 4)
    (4, 3, 2, 1)
    >>> parse_cycles("", 3)
    (1, 2, 3)
    """
    img = list(range(1, n + 1))
    s = s.strip()
    if not s:
        return tuple(img)
    if not re.fullmatch(r"(\(\s*\d+(?:[\s,]+\d+)*\s*\)\s*)+", s):
        raise InvalidInput(f"cannot parse permutation {s!r}")
    seen: set[int] = set()
    for cyc in re.findall(r"\(([^)]*)\)", s):
        pts = [int(x) for x in re.split(r"[\s,]+", cyc.strip())]
        for x in pts:
            if not 1 <= x <= n or x in seen:
                raise InvalidInput(f"bad node {x} in permutation {s!r}")
            seen.add(x)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a - 1] = b
    return tuple(img)


def _compose(p: Permutation, q: Permutation) -> Permutation:
    """``p o q``."""
    return tuple(p[x - 1] for x in q)


def _inverse(p: Permutation) -> Permutation:
    out = [0] * len(p)
    for i, x in enumerate(p, start=1):
        out[x - 1] = i
    return tuple(out)


def permutation_matrix(p: Permutation) -> Matrix:
    """Matrix sending ``alpha_i`` to ``alpha_p(i)``."""
    n = len(p)
    return tuple(tuple(1 if p[col] == row + 1 else 0 for col in range(n)) for row in range(n))


@dataclass(frozen=True)
class FoldingAction:
    """A finite group of automorphisms of a simply-laced diagram, given extensionally."""

    slice_type: DynkinType
    diagram: DynkinDiagram
    elements: tuple[Permutation, ...]

    @classmethod
    def from_generators(cls, t: DynkinType | str, generators: Iterable[Sequence[int] | str] = ()) -> FoldingAction:
        t = DynkinType.parse(t)
        diagram = dynkin_diagram(t)
        if not diagram.simply_laced:
            raise InvalidInput(f"{t} is not simply laced; only simply-laced diagrams can be folded")
        n = t.rank
        gens = []
        for g in generators:
            p = parse_cycles(g, n) if isinstance(g, str) else tuple(int(x) for x in g)
            if sorted(p) != list(range(1, n + 1)):
                raise InvalidInput(f"{list(p)} is not a permutation of the nodes 1..{n}")
            gens.append(p)
        c = diagram.cartan()
        for p in gens:
            if any(c[p[i] - 1][p[j] - 1] != c[i][j] for i in range(n) for j in range(n)):
                raise InvalidInput(f"{list(p)} does not preserve the edges of {t}")
        e = tuple(range(1, n + 1))
        seen = {e}
        stack = [e]
        while stack:
            q = stack.pop()
            for p in gens:
                r = _compose(p, q)
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        # closure of a finite set of permutations is automatically a group
        assert all(_inverse(q) in seen for q in seen)
        return cls(t, diagram, tuple(sorted(seen)))

    @property
    def rank(self) -> int:
        return self.slice_type.rank

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_trivial(self) -> bool:
        return self.order == 1


@dataclass(frozen=True)
class Orbit:
    nodes: tuple[int, ...]
    components: int  # N
    ambient: int

    @property
    def N(self) -> int:
        return self.components


def orbits(action: FoldingAction) -> list[Orbit]:
    """Node orbits, sorted by smallest member, with their component counts.

    >>> [(o.nodes, o.N) for o in orbits(FoldingAction.from_generators("A4", ["(1 4)(2 3)"]))]
    [((1, 4), 2), ((2, 3), 1)]
    """
    n = action.rank
    left = set(range(1, n + 1))
    out = []
    while left:
        i = min(left)
        orb = tuple(sorted({p[i - 1] for p in action.elements}))
        left -= set(orb)
        out.append(Orbit(orb, _count_components(action.diagram, orb), n))
    for o in out:
        if len(o.nodes) % o.N:
            raise ConsistencyError(f"component count {o.N} does not divide orbit size {len(o.nodes)}")
    return out


def _count_components(diagram: DynkinDiagram, nodes: Sequence[int]) -> int:
    rest = set(nodes)
    count = 0
    while rest:
        count += 1
        stack = [rest.pop()]
        while stack:
            x = stack.pop()
            for y in diagram.neighbours(x) & rest:
                rest.discard(y)
                stack.append(y)
    return count


def beta(orbit: Orbit) -> tuple[Fraction, ...]:
    """``(1/N) sum alpha_i`` over the orbit, in simple-root coordinates."""
    return tuple(Fraction(1, orbit.N) if k + 1 in orbit.nodes else Fraction(0) for k in range(orbit.ambient))


@dataclass(frozen=True)
class FoldedDatum:
    action: FoldingAction
    orbits: tuple[Orbit, ...]
    betas: tuple[tuple[Fraction, ...], ...]
    folded_cartan: Matrix
    folded_type: tuple[tuple[DynkinType, tuple[int, ...]], ...]

    @property
    def type_label(self) -> str:
        return "x".join(str(t) for t, _ in self.folded_type)


def fold(action: FoldingAction) -> FoldedDatum:
    """Orbits, ``beta_j``, the folded Cartan matrix and its type.

    >>> d = fold(FoldingAction.from_generators("A4", ["(1 4)(2 3)"]))
    >>> d.folded_cartan, d.type_label
    (((2, -2), (-1, 2)), 'C2')
    """
    gram = simply_laced_gram(action.diagram)
    orbs = orbits(action)
    betas = [beta(o) for o in orbs]
    k = len(orbs)
    c = []
    for j in range(k):
        bjj = inner_product(betas[j], betas[j], gram)
        row = []
        for l in range(k):
            val = 2 * inner_product(betas[j], betas[l], gram) / bjj
            if val.denominator != 1:
                raise ConsistencyError(f"folded Cartan entry c[{j + 1}][{l + 1}] = {val} is not an integer")
            row.append(int(val))
        c.append(tuple(row))
    folded = tuple(c)
    _check_fixed_space(action, betas)
    try:
        types = classify(folded)
    except InvalidInput as exc:
        raise ConsistencyError(f"folded matrix is not of finite type: {exc}") from None
    return FoldedDatum(action, tuple(orbs), tuple(betas), folded, tuple(types))


def _check_fixed_space(action: FoldingAction, betas: Sequence[Vector]) -> None:
    n = action.rank
    e = identity(n)
    mats = [permutation_matrix(p) for p in action.elements]
    rows = [row for m in mats for row in mat_sub(m, e)]
    fixed = nullspace(rows, n)
    if len(fixed) != len(betas) or any(mat_vec(m, b) != b for m in mats for b in betas):
        raise ConsistencyError("the beta vectors do not form a basis of the fixed space")
    if any(not in_span(betas, f) for f in fixed):
        raise ConsistencyError("the beta vectors do not span the fixed space")


def unfolded_weyl(action: FoldingAction, budget: int | None = None) -> WeylGroup:
    return WeylGroup.from_cartan(action.diagram.cartan(), budget=budget)


def restrict(m: Matrix, betas: Sequence[Vector]) -> Matrix:
    """Matrix of ``m`` on ``span(betas)`` in the beta basis; raises if the span is not preserved."""
    cols = []
    for b in betas:
        try:
            cols.append(coordinates(betas, mat_vec(m, b)))
        except ValueError:
            raise ConsistencyError("element does not preserve the fixed space") from None
    k = len(betas)
    return tuple(tuple(normalize(cols[c][r]) for c in range(k)) for r in range(k))


def w0_of_orbit(orbit: Orbit, weyl: WeylGroup, datum: FoldedDatum | None = None) -> GroupElement:
    """Longest element of the parabolic on the orbit's nodes.

    With ``datum`` given, also verifies that it preserves the fixed space and
    acts there as the reflection in the orbit's beta.
    """
    if weyl is None or not getattr(weyl, "elements", None):
        raise InvalidInput("an enumerated Weyl group of the unfolded diagram is required")
    w0 = weyl.element(longest_element(parabolic(weyl, orbit.nodes)).matrix)
    if datum is not None:
        j = datum.orbits.index(orbit)
        r = restrict(w0.matrix, datum.betas)
        c = datum.folded_cartan
        # reflection in beta_j sends beta_l to beta_l - c_jl beta_j
        expected = tuple(
            tuple((1 if row == col else 0) - (c[j][col] if row == j else 0) for col in range(len(c)))
            for row in range(len(c))
        )
        if r != expected:
            raise ConsistencyError(f"w0 of orbit {orbit.nodes} is not the reflection in beta_{j + 1}")
    return w0


def fixed_subgroup(action: FoldingAction, weyl: WeylGroup) -> frozenset:
    """``W^G`` by brute force: elements commuting with every diagram automorphism."""
    mats = [permutation_matrix(p) for p in action.elements]
    return frozenset(
        el.matrix for el in weyl.elements if all(mat_mul(p, el.matrix) == mat_mul(el.matrix, p) for p in mats)
    )


@dataclass
class FoldedWeyl:
    datum: FoldedDatum
    unfolded: WeylGroup
    w0: tuple[GroupElement, ...]
    ambient: WeylGroup  # generated by the w0_j inside the unfolded reflection representation
    restricted: WeylGroup  # the same group acting on the fixed space, beta coordinates


def folded_weyl(action: FoldingAction, budget: int | None = None, weyl: WeylGroup | None = None) -> FoldedWeyl:
    datum = fold(action)
    weyl = weyl or unfolded_weyl(action, budget)
    w0 = tuple(w0_of_orbit(o, weyl, datum) for o in datum.orbits)
    ambient = WeylGroup([g.matrix for g in w0], budget=budget)
    restricted = WeylGroup([restrict(g.matrix, datum.betas) for g in w0], budget=budget)
    if restricted.order != ambient.order:
        raise ConsistencyError("restriction to the fixed space is not faithful")
    return FoldedWeyl(datum, weyl, w0, ambient, restricted)


def steinberg_check(action: FoldingAction, budget: int | None = None) -> dict:
    """Each ``w0_j`` lies in ``W^G`` and restricts to the reflection in ``beta_j``;
    the ``w0_j`` generate ``W^G`` element for element."""
    fw = folded_weyl(action, budget)
    fixed = fixed_subgroup(action, fw.unfolded)
    in_fixed = all(g.matrix in fixed for g in fw.w0)
    generated = frozenset(fw.ambient.index) == fixed
    return {
        "w0_in_fixed_subgroup": in_fixed,
        "w0_restrict_to_reflections": True,  # enforced by w0_of_orbit, which raises otherwise
        "w0_generate_fixed_subgroup": generated,
        "fixed_subgroup_order": len(fixed),
        "w0_words": [list(g.word) for g in fw.w0],
    }


def check_parabolic_intersection(
    action: FoldingAction,
    folded_subset: Iterable[int],
    budget: int | None = None,
    weyl: WeylGroup | None = None,
    fixed: frozenset | None = None,
) -> bool:
    """Brute-force comparison of ``W'_hat`` intersect ``W^G`` with ``<w0_j : j in J'>``.

    ``folded_subset`` holds 1-based folded node labels.
    """
    datum = fold(action)
    sub = sorted(set(folded_subset))
    if any(not 1 <= j <= len(datum.orbits) for j in sub):
        raise InvalidInput(f"folded nodes must lie in 1..{len(datum.orbits)}")
    weyl = weyl or unfolded_weyl(action, budget)
    if fixed is None:
        fixed = fixed_subgroup(action, weyl)
    nodes = sorted({i for j in sub for i in datum.orbits[j - 1].nodes})
    hat_sub = parabolic(weyl, nodes)
    lhs = frozenset(m for m in hat_sub.group.index if m in fixed)
    gens = [w0_of_orbit(datum.orbits[j - 1], weyl).matrix for j in sub]
    if gens:
        rhs = frozenset(WeylGroup(gens, labels=sub, budget=weyl.budget).index)
    else:
        rhs = frozenset([identity(action.rank)])
    return lhs == rhs


# Free actions tabulated for folding: A_n/Z2, D_n/Z2, D4/Z3, E6/Z2.
def standard_action(t: DynkinType | str, order: int = 2) -> FoldingAction:
    t = DynkinType.parse(t)
    n = t.rank
    if t.family == "A" and order == 2 and n >= 2:
        return FoldingAction.from_generators(t, [tuple(n + 1 - i for i in range(1, n + 1))])
    if t.family == "D" and order == 2:
        p = list(range(1, n + 1))
        p[n - 2], p[n - 1] = n, n - 1
        return FoldingAction.from_generators(t, [p])
    if (t.family, n, order) == ("D", 4, 3):
        return FoldingAction.from_generators(t, ["(1 3 4)"])
    if (t.family, n, order) == ("E", 6, 2):
        return FoldingAction.from_generators(t, ["(1 6)(3 5)"])
    raise InvalidInput(f"no standard Z/{order} action on {t}")


def expected_folded_type(t: DynkinType | str, order: int = 2) -> DynkinType:
    """The tabulated quotient ``A_n -> C_ceil(n/2)``, ``D_n -> B_(n-1)``, ``D4/Z3 -> G2``, ``E6 -> F4``."""
    t = DynkinType.parse(t)
    if t.family == "A":
        k = (t.rank + 1) // 2
        return DynkinType("C", k) if k >= 2 else DynkinType("A", 1)  # C1 is A1
    if t.family == "D" and order == 2:
        return DynkinType("B", t.rank - 1)
    if (t.family, t.rank, order) == ("D", 4, 3):
        return DynkinType("G", 2)
    if (t.family, t.rank) == ("E", 6):
        return DynkinType("F", 4)
    raise InvalidInput(f"no tabulated quotient for {t} by Z/{order}")
