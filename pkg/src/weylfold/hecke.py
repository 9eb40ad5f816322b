"""
The double-coset algebra of a finite Weyl group and a parabolic subgroup.

Bi-invariant functions on ``W`` multiply by convolution
``(f * g)(x) = sum_y f(y) g(y^-1 x)``. Under this product ``1_{D_e} / |W'|``
is the unit, so the basis is taken to be ``T_a = 1_{D_a} / |W'|`` and the
structure constants are ``c_ab^c = #{y in D_a : y^-1 x_c in D_b} / |W'|``
with ``x_c`` any element of ``D_c``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceeded, ConsistencyError
from .linalg import fmt, mat_mul
from .weyl import DoubleCosetDecomposition, ParabolicSubgroup, WeylGroup, double_cosets, left_cosets_count

HECKE_BUDGET = 1152

Constants = dict[tuple[int, int], dict[int, Fraction]]


@dataclass
class HeckeAlgebra:
    group: WeylGroup
    subgroup: ParabolicSubgroup
    decomposition: DoubleCosetDecomposition
    constants: Constants  # (a, b) -> {c: c_ab^c}, zero entries omitted
    unit: int  # index of the double coset containing the identity

    @property
    def dim(self) -> int:
        return len(self.decomposition)

    def coset_sizes(self) -> list[int]:
        return [len(c) for c in self.decomposition.cosets]

    def multiply(self, f: dict[int, Fraction], g: dict[int, Fraction]) -> dict[int, Fraction]:
        """Product of two sparse vectors in the ``T`` basis."""
        out: dict[int, Fraction] = {}
        for a, x in f.items():
            for b, y in g.items():
                for c, k in self.constants[(a, b)].items():
                    out[c] = out.get(c, 0) + x * y * k
        return {c: v for c, v in out.items() if v}

    def basis(self, a: int) -> dict[int, Fraction]:
        return {a: Fraction(1)}

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "representatives": [list(r.word) for r in self.decomposition.representatives],
            "sizes": self.coset_sizes(),
            "constants": [
                [a, b, c, fmt(v)]
                for (a, b), row in sorted(self.constants.items())
                for c, v in sorted(row.items())
            ],
        }


def _inverses(w: WeylGroup) -> list[int]:
    # the inverse of a shortlex word is its reverse
    return [w.index[w.from_word(reversed(el.word)).matrix] for el in w.elements]


def build(w: WeylGroup, sub: ParabolicSubgroup, budget: int = HECKE_BUDGET) -> HeckeAlgebra:
    """Double cosets and exact structure constants, with the unit verified.

    >>> from weylfold.root_systems import cartan_matrix
    >>> w = WeylGroup.from_cartan(cartan_matrix("A2"))
    >>> h = build(w, w.parabolic([1]))
    >>> h.dim, h.coset_sizes()
    (2, [2, 4])
    """
    if w.order > budget:
        raise BudgetExceeded(f"Hecke algebra needs |W| <= {budget}, got {w.order}")
    dc = double_cosets(w, sub)
    where = dc.coset_of()
    inv = _inverses(w)
    k = sub.order
    counts: dict[tuple[int, int], dict[int, int]] = {}
    for c, coset in enumerate(dc.cosets):
        xc = w.elements[coset[0]].matrix
        for y in range(w.order):
            z = w.index[mat_mul(w.elements[inv[y]].matrix, xc)]
            row = counts.setdefault((where[y], where[z]), {})
            row[c] = row.get(c, 0) + 1
    unit = where[0]
    # raw convolution: 1_{D_e} * 1_{D_b} = |W'| 1_{D_b}
    for b in range(len(dc)):
        if counts.get((unit, b)) != {b: k}:
            raise ConsistencyError("identity double coset does not act as |W'| times the unit")
    constants: Constants = {
        (a, b): {c: Fraction(n, k) for c, n in counts.get((a, b), {}).items()}
        for a in range(len(dc))
        for b in range(len(dc))
    }
    return HeckeAlgebra(w, sub, dc, constants, unit)


def unit_check(h: HeckeAlgebra) -> bool:
    e = h.basis(h.unit)
    return all(h.multiply(e, h.basis(a)) == h.basis(a) == h.multiply(h.basis(a), e) for a in range(h.dim))


def associativity_check(h: HeckeAlgebra) -> bool:
    """``(T_a T_b) T_c == T_a (T_b T_c)`` for every basis triple."""
    n = h.dim
    for a in range(n):
        ta = h.basis(a)
        for b in range(n):
            ab = h.multiply(ta, h.basis(b))
            for c in range(n):
                tc = h.basis(c)
                if h.multiply(ab, tc) != h.multiply(ta, h.multiply(h.basis(b), tc)):
                    return False
    return True


def invariant_module_dim(w: WeylGroup, sub: ParabolicSubgroup) -> tuple[int, int]:
    """``(dim C[W]^{W'}, dim End)``: left cosets and double cosets.

    >>> from weylfold.root_systems import cartan_matrix
    >>> w = WeylGroup.from_cartan(cartan_matrix("C2"))
    >>> invariant_module_dim(w, w.parabolic([1]))
    (4, 3)
    """
    left = left_cosets_count(w, sub)
    if left * sub.order != w.order:
        raise ConsistencyError("left cosets do not partition the group evenly")
    h = build(w, sub)
    if h.dim != len(h.decomposition.cosets) or sum(h.coset_sizes()) != w.order:
        raise ConsistencyError("double cosets do not partition the group")
    return left, h.dim
