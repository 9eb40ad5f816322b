"""
Namikawa Weyl groups assembled from codimension-2 leaf data.

Each leaf contributes the folded Weyl group of its Kleinian slice diagram
under the monodromy action; ``W_X`` is their direct product, realized on the
direct sum of the fixed spaces. Simple generators carry ids ``"<leaf>:<node>"``
(folded node, 1-based) and double as the generators of the essential curve
cone.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InvalidInput
from .folding import FoldingAction, folded_weyl
from .linalg import Matrix
from .root_systems import DynkinType, cartan_matrix
from .weyl import ParabolicSubgroup, WeylGroup, parabolic

MAX_PSI_GENERATORS = 16


@dataclass(frozen=True)
class LeafDatum:
    id: str
    slice_type: DynkinType
    monodromy: FoldingAction | None = None  # None means trivial

    @classmethod
    def make(cls, id: str, slice_type: str | DynkinType, monodromy_generators: Iterable = ()) -> LeafDatum:
        t = DynkinType.parse(slice_type)
        gens = list(monodromy_generators)
        if ":" in id or not id:
            raise InvalidInput(f"leaf id {id!r} must be non-empty and must not contain ':'")
        if not t.simply_laced:
            # an already-folded factor is accepted only without further monodromy
            if gens:
                raise InvalidInput(f"monodromy on non-simply-laced slice {t} is not supported")
            return cls(id, t, None)
        return cls(id, t, FoldingAction.from_generators(t, gens))


@dataclass(frozen=True)
class SingularityData:
    leaves: tuple[LeafDatum, ...]

    def __post_init__(self):
        ids = [leaf.id for leaf in self.leaves]
        if len(set(ids)) != len(ids):
            raise InvalidInput("leaf ids must be unique")

    @classmethod
    def from_json(cls, obj: dict) -> SingularityData:
        if not isinstance(obj, dict) or not isinstance(obj.get("leaves"), list):
            raise InvalidInput('singularity JSON needs a "leaves" list')
        leaves = []
        for item in obj["leaves"]:
            if not isinstance(item, dict) or "id" not in item or "slice" not in item:
                raise InvalidInput('each leaf needs "id" and "slice"')
            gens = item.get("monodromy_generators", [])
            if not isinstance(gens, list):
                raise InvalidInput("monodromy_generators must be a list")
            leaves.append(LeafDatum.make(str(item["id"]), item["slice"], gens))
        return cls(tuple(leaves))


@dataclass
class Factor:
    leaf: LeafDatum
    folded_type: str
    cartan: Matrix  # folded Cartan matrix, folded node order
    group: WeylGroup  # acting on the fixed space in beta coordinates


@dataclass
class NamikawaWeylGroup:
    factors: list[Factor]
    simple_generators: list[str]
    group: WeylGroup = field(repr=False)

    @property
    def order(self) -> int:
        return self.group.order

    def label_of(self, gen_id: str) -> int:
        try:
            return self.simple_generators.index(gen_id) + 1
        except ValueError:
            raise InvalidInput(f"unknown generator {gen_id!r}") from None

    def ids_of(self, labels: Iterable[int]) -> list[str]:
        return [self.simple_generators[k - 1] for k in labels]


@dataclass(frozen=True)
class PartialResolutionSpec:
    """A partial resolution, recorded by the essential generators it contracts."""

    contracted: frozenset[str]

    @classmethod
    def of(cls, ids: Iterable[str]) -> PartialResolutionSpec:
        return cls(frozenset(ids))


def _block_diagonal(blocks: Sequence[Matrix], which: int, m: Matrix) -> Matrix:
    """Embed ``m`` as block ``which``, identity elsewhere."""
    sizes = [len(b) for b in blocks]
    n = sum(sizes)
    off = sum(sizes[:which])
    rows = []
    for r in range(n):
        row = []
        for c in range(n):
            if off <= r < off + len(m) and off <= c < off + len(m):
                row.append(m[r - off][c - off])
            else:
                row.append(1 if r == c else 0)
        rows.append(tuple(row))
    return tuple(rows)


def _factor(leaf: LeafDatum, budget: int | None) -> Factor:
    if leaf.monodromy is None or leaf.monodromy.is_trivial():
        c = cartan_matrix(leaf.slice_type)
        return Factor(leaf, str(leaf.slice_type), c, WeylGroup.from_cartan(c, budget=budget))
    fw = folded_weyl(leaf.monodromy, budget)
    return Factor(leaf, fw.datum.type_label, fw.datum.folded_cartan, fw.restricted)


def namikawa_weyl(data: SingularityData, budget: int | None = None) -> NamikawaWeylGroup:
    """``W_X`` as the product of folded leaf groups, with indexed generators.

    >>> d = SingularityData((LeafDatum.make("L1", "A4", ["(1 4)(2 3)"]),))
    >>> wx = namikawa_weyl(d)
    >>> wx.order, wx.simple_generators
    (8, ['L1:1', 'L1:2'])
    """
    factors = [_factor(leaf, budget) for leaf in data.leaves]
    gens: list[Matrix] = []
    ids: list[str] = []
    blocks = [f.cartan for f in factors]
    for k, f in enumerate(factors):
        for node, g in enumerate(f.group.generators, start=1):
            gens.append(_block_diagonal(blocks, k, g))
            ids.append(f"{f.leaf.id}:{node}")
    if gens:
        group = WeylGroup(gens, budget=budget)
    else:
        group = WeylGroup([], cartan=(), budget=budget)
    return NamikawaWeylGroup(factors, ids, group)


def weyl_of_type(t: DynkinType | str, prefix: str | None = None, budget: int | None = None) -> NamikawaWeylGroup:
    """``W(t)`` presented as a Namikawa group with a single unfolded factor."""
    t = DynkinType.parse(t)
    leaf = LeafDatum(prefix or str(t), t, None)
    return namikawa_weyl(SingularityData((leaf,)), budget)


def partial_weyl(wx: NamikawaWeylGroup, spec: PartialResolutionSpec) -> ParabolicSubgroup:
    """Parabolic subgroup generated by the contracted generators."""
    return parabolic(wx.group, [wx.label_of(s) for s in sorted(spec.contracted)])


def psi_image(wx: NamikawaWeylGroup) -> list[tuple[PartialResolutionSpec, ParabolicSubgroup]]:
    """All standard parabolics, one per generator subset (subsets in size-then-lex order)."""
    k = len(wx.simple_generators)
    if k > MAX_PSI_GENERATORS:
        raise InvalidInput(f"too many generators ({k} > {MAX_PSI_GENERATORS})")
    out = []
    for size in range(k + 1):
        for combo in itertools.combinations(wx.simple_generators, size):
            spec = PartialResolutionSpec.of(combo)
            out.append((spec, partial_weyl(wx, spec)))
    return out


def nilpotent_cone_partials(t: DynkinType | str) -> list[tuple[PartialResolutionSpec, ParabolicSubgroup]]:
    """Partial resolutions of the nilpotent cone: one per subset of simple roots.

    ``W_X`` is the Weyl group of the Lie algebra itself; the subset labels the
    parabolic ``W_P`` (empty: Springer resolution; everything: the cone).
    """
    return psi_image(weyl_of_type(t))


def folded_generator_count(data: SingularityData) -> int:
    """Sum of folded ranks, read off the folded Cartan matrices without enumerating groups."""
    from .folding import fold

    total = 0
    for leaf in data.leaves:
        if leaf.monodromy is None or leaf.monodromy.is_trivial():
            total += leaf.slice_type.rank
        else:
            total += sum(t.rank for t, _ in fold(leaf.monodromy).folded_type)
    return total


def refold_trivially(data: SingularityData) -> SingularityData:
    """Replace every leaf by its folded type with trivial monodromy.

    Only valid for leaves whose folding is a single simple type.
    """
    from .folding import fold

    leaves = []
    for leaf in data.leaves:
        if leaf.monodromy is None or leaf.monodromy.is_trivial():
            leaves.append(leaf)
            continue
        types = fold(leaf.monodromy).folded_type
        if len(types) != 1:
            raise InvalidInput("leaf folds to a decomposable type")
        leaves.append(LeafDatum(leaf.id, types[0][0], None))
    return SingularityData(tuple(leaves))
