"""
Partial resolutions of a Kleinian singularity of ADE type.

A partial resolution ``S'`` is recorded by the set of nodes whose curves the
map from the minimal resolution contracts. The fiber over the singular point
is a tree of projective lines shaped like the Dynkin diagram; the curve class
``[C_i]`` is identified with the simple root ``alpha_i``, so the Weyl group
acts on ``H^2`` of the central fiber through the reflection representation.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .errors import ConsistencyError, InvalidInput
from .linalg import Vector, mat_vec, rank
from .root_systems import DynkinType, cartan_matrix, classify, positive_roots_from_cartan, submatrix
from .weyl import ParabolicSubgroup, WeylGroup, canonical_orbit_rep, fixed_space, orbit, parabolic


@lru_cache(maxsize=None)
def weyl_group(t: DynkinType) -> WeylGroup:
    return WeylGroup.from_cartan(cartan_matrix(t))


@dataclass(frozen=True)
class KleinianPartial:
    type: DynkinType
    contracted: frozenset[int]

    @classmethod
    def make(cls, t: DynkinType | str, contracted: Iterable[int] = ()) -> KleinianPartial:
        t = DynkinType.parse(t)
        if not t.simply_laced:
            raise InvalidInput(f"Kleinian singularities are of ADE type, got {t}")
        nodes = frozenset(int(x) for x in contracted)
        bad = sorted(x for x in nodes if not 1 <= x <= t.rank)
        if bad:
            raise InvalidInput(f"nodes {bad} are not nodes of {t}")
        return cls(t, nodes)

    @property
    def rank(self) -> int:
        return self.type.rank

    @property
    def kept(self) -> list[int]:
        return [i for i in range(1, self.rank + 1) if i not in self.contracted]

    def weyl(self) -> WeylGroup:
        return weyl_group(self.type)

    def parabolic(self) -> ParabolicSubgroup:
        return parabolic(self.weyl(), self.contracted)


@dataclass(frozen=True)
class SingularPointDatum:
    nodes: tuple[int, ...]
    type: DynkinType

    @property
    def rank(self) -> int:
        return self.type.rank


def singular_points(kp: KleinianPartial) -> list[SingularPointDatum]:
    """One singular point per connected component of the contracted nodes."""
    if not kp.contracted:
        return []
    c = cartan_matrix(kp.type)
    idx = sorted(kp.contracted)
    out = []
    for t, nodes in classify(submatrix(c, [i - 1 for i in idx])):
        out.append(SingularPointDatum(tuple(sorted(idx[k - 1] for k in nodes)), t))
    return out


@dataclass(frozen=True)
class FiberCohomology:
    b0: int
    b1: int
    b2: int


def _edges(t: DynkinType) -> list[tuple[int, int]]:
    c = cartan_matrix(t)
    n = len(c)
    return [(i + 1, j + 1) for i in range(n) for j in range(i + 1, n) if c[i][j]]


def fiber_cohomology(kp: KleinianPartial, level: str = "partial") -> FiberCohomology:
    """Betti numbers of a union of projective lines glued at points.

    The space is modelled by the bipartite incidence graph between curves and
    gluing points; Mayer-Vietoris gives ``b0 = #components``, ``b1 = E - V + b0``
    and ``b2 = #curves``. At ``level="partial"`` each contracted component is
    collapsed to one point lying on every surviving curve that touched it.
    """
    if level not in ("full", "partial"):
        raise InvalidInput("level must be 'full' or 'partial'")
    contracted = kp.contracted if level == "partial" else frozenset()
    curves = [i for i in range(1, kp.rank + 1) if i not in contracted]
    points: list[set[int]] = []
    for i, j in _edges(kp.type):
        if i not in contracted and j not in contracted:
            points.append({i, j})
    for sp in singular_points(KleinianPartial(kp.type, contracted)):
        touching = {k for i, j in _edges(kp.type) for k, o in ((i, j), (j, i)) if o in sp.nodes and k not in contracted}
        points.append(touching)
    # vertices: curves then points
    parent = list(range(len(curves) + len(points)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pos = {c: k for k, c in enumerate(curves)}
    edges = 0
    for p, pt in enumerate(points):
        for c in pt:
            edges += 1
            parent[find(len(curves) + p)] = find(pos[c])
    v = len(parent)
    b0 = len({find(x) for x in range(v)})
    return FiberCohomology(b0, edges - v + b0, len(curves))


def invariant_fiber_check(kp: KleinianPartial) -> bool:
    """``H^*`` of the partial fiber equals the ``W_{S'}``-invariants of ``H^*`` of the full fiber."""
    partial = fiber_cohomology(kp, "partial")
    invariants_h2 = len(fixed_space(kp.parabolic()))
    # W acts trivially on H^0 of the (connected) full fiber
    return partial.b0 == 1 and partial.b1 == 0 and partial.b2 == invariants_h2


@dataclass(frozen=True)
class DeformationDims:
    dim_pd_total: int
    dim_pd_lt: int
    local_dims: tuple[int, ...]


def deformation_dims(kp: KleinianPartial) -> DeformationDims:
    """Tangent dimensions: all Poisson deformations, locally trivial ones, and each singular germ."""
    total = fiber_cohomology(kp, "full").b2
    lt = fiber_cohomology(kp, "partial").b2
    local = tuple(sp.rank for sp in singular_points(kp))
    if total != lt + sum(local):
        raise ConsistencyError(f"deformation dimensions do not add up: {total} != {lt} + {sum(local)}")
    return DeformationDims(total, lt, local)


def pushforward_kernel(kp: KleinianPartial) -> list[Vector]:
    """Basis of the kernel of the pushforward: the classes of contracted curves.

    Checks that it is complementary to the ``W_{S'}``-invariant subspace.
    """
    n = kp.rank
    kernel = [tuple(1 if k + 1 == i else 0 for k in range(n)) for i in sorted(kp.contracted)]
    fixed = fixed_space(kp.parabolic())
    if len(kernel) + len(fixed) != n or rank(kernel + fixed, n) != n:
        raise ConsistencyError("kernel and invariant subspace are not complementary")
    return kernel


@dataclass(frozen=True)
class TowerReport:
    degrees: tuple[int, int]
    first_fibers: tuple[int, ...]
    composite_fibers: tuple[int, ...]
    commutes: bool

    @property
    def consistent(self) -> bool:
        a, b = self.degrees
        return self.commutes and all(x == a for x in self.first_fibers) and all(x == b for x in self.composite_fibers)


def generic_point(t: DynkinType, rng: random.Random, bound: int = 10**4) -> Vector:
    """Seeded integer point off every root hyperplane (trivial stabilizer)."""
    c = cartan_matrix(t)
    pos = positive_roots_from_cartan(c)
    while True:
        v = tuple(rng.randint(-bound, bound) for _ in range(len(c)))
        # simply laced: the Gram matrix of the simple roots is the Cartan matrix
        if all(sum(r[i] * c[i][j] * v[j] for i in range(len(c)) for j in range(len(c))) != 0 for r in pos):
            return v


def quotient_tower(kp: KleinianPartial, samples: int = 20, seed: int = 0) -> TowerReport:
    """Model ``h -> h/W_{S'} -> h/W`` with orbit normal forms.

    For each generic sample ``v``: the fiber of the first map over the class of
    ``v`` (points of ``W v`` with the same ``W_{S'}`` normal form) and of the
    composite; and that refining by ``W_{S'}`` first does not change the
    ``W`` normal form.
    """
    w = kp.weyl()
    sub = kp.parabolic()
    rng = random.Random(seed)
    first, comp = [], []
    commutes = True
    for _ in range(samples):
        v = generic_point(kp.type, rng)
        full = orbit(w, v)
        if len(full) != w.order:
            raise ConsistencyError("generic point has a nontrivial stabilizer")
        # partition W v into W'-orbits; each class is a point of h/W'
        label: dict[Vector, Vector] = {}
        classes: dict[Vector, int] = {}
        for u in sorted(full):
            if u in label:
                continue
            cls = orbit(sub, u)
            rep = min(cls)
            classes[rep] = len(cls)
            for x in cls:
                label[x] = rep
        rep_v = canonical_orbit_rep(sub, v)
        if rep_v != label[v]:
            raise ConsistencyError("orbit normal form disagrees with the orbit partition")
        first.append(classes[rep_v])
        # second map h/W' -> h/W applied to each class representative
        second = {r: canonical_orbit_rep(w, r) for r in classes}
        target = canonical_orbit_rep(w, v)
        comp.append(sum(size for r, size in classes.items() if second[r] == target))
        for u in rng.sample(sorted(full), min(5, len(full))):
            commutes = commutes and canonical_orbit_rep(w, u) == second[label[u]]
    return TowerReport((sub.order, w.order), tuple(first), tuple(comp), commutes)


def z_prime_components(kp: KleinianPartial) -> list[tuple]:
    """Top-dimensional components of the fiber product of the resolution with itself over ``S'``."""
    comps: list[tuple] = [("diagonal",)]
    for sp in singular_points(kp):
        for j in sp.nodes:
            for k in sp.nodes:
                comps.append(("curves", j, k))
    return comps


def end_spr_dim(kp: KleinianPartial) -> int:
    """``dim End(Spr')``, the number of top-dimensional components of ``Z'``.

    >>> end_spr_dim(KleinianPartial.make("A3", [1, 2, 3]))
    10
    """
    count = len(z_prime_components(kp))
    if count != 1 + sum(sp.rank**2 for sp in singular_points(kp)):
        raise ConsistencyError("component count disagrees with 1 + sum n_i^2")
    return count


def report(kp: KleinianPartial, samples: int = 20, seed: int = 0) -> dict:
    full = fiber_cohomology(kp, "full")
    part = fiber_cohomology(kp, "partial")
    dims = deformation_dims(kp)
    tower = quotient_tower(kp, samples, seed)
    sps = singular_points(kp)
    return {
        "type": str(kp.type),
        "contracted": sorted(kp.contracted),
        "smooth": not sps,
        "singular_points": [{"nodes": list(sp.nodes), "type": str(sp.type), "rank": sp.rank} for sp in sps],
        "b0_full": full.b0,
        "b2_full": full.b2,
        "b0_partial": part.b0,
        "b2_partial": part.b2,
        "fixed_space_dim": len(fixed_space(kp.parabolic())),
        "invariant_check": invariant_fiber_check(kp),
        "deformation": {"total": dims.dim_pd_total, "locally_trivial": dims.dim_pd_lt, "local": list(dims.local_dims)},
        "kernel_dim": len(pushforward_kernel(kp)),
        "tower_degrees": list(tower.degrees),
        "tower_consistent": tower.consistent,
        "partial_weyl_order": kp.parabolic().order,
        "end_spr_dim": end_spr_dim(kp),
    }
