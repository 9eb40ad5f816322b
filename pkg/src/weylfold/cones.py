"""
Rational polyhedral fans in H^2: face lattices, the face -> parabolic map,
fundamental-domain sampling and cone duality.

The fan is input data. Every computation is brute force over ray and facet
subsets, which is fine at the intended scale (``d <= 4``, a dozen hyperplanes).
Rays are stored as primitive integer vectors, so two rays are the same iff
they agree up to positive scaling.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ConsistencyError, InvalidInput
from .linalg import Matrix, dot, mat_vec, nullspace, primitive, rank, to_fraction
from .namikawa import NamikawaWeylGroup, PartialResolutionSpec, partial_weyl, psi_image
from .weyl import ParabolicSubgroup, WeylGroup

MAX_DIM = 4

Ray = tuple[int, ...]


@dataclass(frozen=True)
class HyperplaneSpec:
    normal: tuple[Fraction, ...]
    generator: str | None = None

    def __post_init__(self):
        if all(x == 0 for x in self.normal):
            raise InvalidInput("hyperplane normal must be nonzero")

    def contains(self, v: Sequence) -> bool:
        return dot(self.normal, v) == 0


@dataclass(frozen=True)
class Chamber:
    rays: tuple[Ray, ...]


@dataclass
class MoriFanData:
    dim: int
    hyperplanes: list[HyperplaneSpec]
    chambers: list[Chamber]
    weyl_action: list[Matrix] | None = None
    _analysis: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_json(cls, obj: dict) -> MoriFanData:
        try:
            d = int(obj["dim"])
            hyps = [
                HyperplaneSpec(tuple(to_fraction(x) for x in h["normal"]), h.get("generator"))
                for h in obj.get("hyperplanes", [])
            ]
            chambers = [Chamber(tuple(primitive([to_fraction(x) for x in r]) for r in c["rays"])) for c in obj["chambers"]]
            action = None
            if "weyl_action" in obj and obj["weyl_action"] is not None:
                action = [tuple(tuple(to_fraction(x) for x in row) for row in m) for m in obj["weyl_action"]]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, InvalidInput):
                raise
            raise InvalidInput(f"malformed fan JSON: {exc}") from None
        fan = cls(d, hyps, chambers, action)
        fan.validate()
        return fan

    def to_json(self) -> dict:
        out = {
            "dim": self.dim,
            "hyperplanes": [
                {"normal": [str(x) for x in h.normal], **({"generator": h.generator} if h.generator else {})}
                for h in self.hyperplanes
            ],
            "chambers": [{"rays": [[str(x) for x in r] for r in c.rays]} for c in self.chambers],
        }
        if self.weyl_action is not None:
            out["weyl_action"] = [[[str(x) for x in row] for row in m] for m in self.weyl_action]
        return out

    def validate(self) -> None:
        d = self.dim
        if not 1 <= d <= MAX_DIM:
            raise InvalidInput(f"fan dimension must lie in 1..{MAX_DIM}")
        for h in self.hyperplanes:
            if len(h.normal) != d:
                raise InvalidInput("hyperplane normal has wrong dimension")
        if not self.chambers:
            raise InvalidInput("fan has no chambers")
        for c in self.chambers:
            if any(len(r) != d for r in c.rays):
                raise InvalidInput("chamber ray has wrong dimension")
        if self.weyl_action is not None:
            for m in self.weyl_action:
                if len(m) != d or any(len(row) != d for row in m):
                    raise InvalidInput("weyl_action matrices must be dim x dim")
        analyse(self)


@dataclass(frozen=True)
class Face:
    dim: int
    rays: tuple[Ray, ...]
    hyperplanes: tuple[int, ...]  # 0-based indices of fan hyperplanes containing the face
    chambers: tuple[int, ...]  # 0-based indices of chambers having this face
    point: tuple[Fraction, ...]  # relative-interior sample

    def is_subface_of(self, other: Face) -> bool:
        return set(self.rays) <= set(other.rays)


def cone_facets(rays: Sequence[Ray], d: int) -> list[Ray]:
    """Inward primitive facet normals of a full-dimensional cone given by rays."""
    rays = [tuple(r) for r in rays]
    if rank(rays, d) != d:
        raise InvalidInput("degenerate chamber: rays do not span the ambient space")
    normals = []
    for sub in itertools.combinations(rays, d - 1):
        ker = nullspace(list(sub), d)
        if len(ker) != 1:
            continue
        n = primitive(ker[0])
        vals = [dot(n, r) for r in rays]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            n = tuple(-x for x in n)
        else:
            continue
        if n not in normals:
            normals.append(n)
    return normals


def _extremal(rays: Sequence[Ray], facets: Sequence[Ray], d: int) -> list[Ray]:
    out = []
    for r in rays:
        tight = [n for n in facets if dot(n, r) == 0]
        if rank(tight, d) == d - 1 and r not in out:
            out.append(r)
    return out


def cone_faces(rays: Sequence[Ray], d: int) -> list[frozenset]:
    """Faces of a cone as sets of extremal rays (the apex of a pointed cone is the empty set)."""
    facets = cone_facets(rays, d)
    ext = frozenset(_extremal(rays, facets, d))
    faces = {ext}
    frontier = [ext]
    while frontier:
        nxt = []
        for f in frontier:
            for n in facets:
                g = frozenset(r for r in f if dot(n, r) == 0)
                if g not in faces:
                    faces.add(g)
                    nxt.append(g)
        frontier = nxt
    return sorted(faces, key=lambda f: (len(f), sorted(f)))


def _in_cone(facets: Sequence[Ray], v: Sequence) -> bool:
    return all(dot(n, v) >= 0 for n in facets)


def analyse(fan: MoriFanData) -> dict:
    """Facets, faces and boundary walls of the fan (cached on the fan)."""
    if fan._analysis:
        return fan._analysis
    d = fan.dim
    facets = [cone_facets(c.rays, d) for c in fan.chambers]
    for ci, fs in enumerate(facets):
        for n in fs:
            if not any(rank([n, h.normal], d) == 1 for h in fan.hyperplanes):
                raise InvalidInput(f"chamber {ci} has a facet with normal {list(n)} not on any listed hyperplane")
    interior = [tuple(sum(r[k] for r in c.rays) for k in range(d)) for c in fan.chambers]
    for a, b in itertools.permutations(range(len(fan.chambers)), 2):
        if all(dot(n, interior[a]) > 0 for n in facets[b]):
            raise InvalidInput(f"chambers {a} and {b} overlap in their interiors")
    by_key: dict[frozenset, list[int]] = {}
    for ci, c in enumerate(fan.chambers):
        for f in cone_faces(c.rays, d):
            by_key.setdefault(f, []).append(ci)
    boundary_walls: set[int] = set()
    for key, chs in by_key.items():
        if len(chs) == 1 and rank(list(key), d) == d - 1:
            for hi, h in enumerate(fan.hyperplanes):
                if all(h.contains(r) for r in key):
                    boundary_walls.add(hi)
    fan._analysis.update(facets=facets, faces=by_key, boundary=boundary_walls)
    return fan._analysis


def face_lattice(fan: MoriFanData) -> list[Face]:
    """All faces of all chambers, shared faces listed once, sorted by dimension."""
    info = analyse(fan)
    d = fan.dim
    out = []
    for key, chs in info["faces"].items():
        rays = tuple(sorted(key))
        dim = rank(list(rays), d) if rays else 0
        hyps = tuple(hi for hi, h in enumerate(fan.hyperplanes) if all(h.contains(r) for r in rays))
        point = tuple(Fraction(sum(r[k] for r in rays)) for k in range(d))
        out.append(Face(dim, rays, hyps, tuple(chs), point))
    out.sort(key=lambda f: (f.dim, f.rays))
    return out


def face_generators(face: Face, fan: MoriFanData) -> list[str]:
    """Generator tags of the hyperplanes containing ``face``."""
    boundary = analyse(fan)["boundary"]
    tags = []
    for hi in face.hyperplanes:
        h = fan.hyperplanes[hi]
        if h.generator is None:
            if hi in boundary:
                raise InvalidInput(f"generator tag missing on boundary hyperplane {hi}")
            continue
        if h.generator not in tags:
            tags.append(h.generator)
    return sorted(tags)


def face_weyl(face: Face, fan: MoriFanData, wx: NamikawaWeylGroup) -> ParabolicSubgroup:
    """Parabolic generated by the ``s`` whose hyperplane ``H_s`` contains the face."""
    return partial_weyl(wx, PartialResolutionSpec.of(face_generators(face, fan)))


@dataclass
class PsiReport:
    faces: list[Face]
    images: list[ParabolicSubgroup]
    chambers: int
    surjective: bool
    injective: bool

    @property
    def bijective(self) -> bool:
        return self.surjective and self.injective


def psi_face_map(fan: MoriFanData, wx: NamikawaWeylGroup) -> PsiReport:
    """Classify every face by its parabolic; check bijective iff one chamber."""
    faces = face_lattice(fan)
    images = [face_weyl(f, fan, wx) for f in faces]
    keys = [p.matrices for p in images]
    all_parabolics = {p.matrices for _, p in psi_image(wx)}
    surjective = all_parabolics <= set(keys)
    injective = len(set(keys)) == len(keys)
    report = PsiReport(faces, images, len(fan.chambers), surjective, injective)
    if report.bijective != (report.chambers == 1):
        raise ConsistencyError(
            f"face map bijective={report.bijective} but the fan has {report.chambers} chamber(s)"
        )
    return report


def _closure(fan: MoriFanData) -> list[Matrix]:
    gens = fan.weyl_action or []
    if not gens:
        return [tuple(tuple(Fraction(int(i == j)) for j in range(fan.dim)) for i in range(fan.dim))]
    return [el.matrix for el in WeylGroup(gens)]


def fundamental_domain_counts(fan: MoriFanData, samples: int = 100, seed: int = 0) -> list[int]:
    """For seeded generic rational points, the number of orbit points inside the union of chambers."""
    if fan.weyl_action is None:
        raise InvalidInput("fan has no weyl_action")
    if fan.dim > 3:
        raise InvalidInput("fundamental-domain sampling is limited to d <= 3")
    info = analyse(fan)
    group = _closure(fan)
    walls = [h.normal for h in fan.hyperplanes] + [n for fs in info["facets"] for n in fs]
    rng = random.Random(seed)
    counts = []
    while len(counts) < samples:
        v = tuple(Fraction(rng.randint(-1000, 1000), rng.randint(1, 1000)) for _ in range(fan.dim))
        orbit = {mat_vec(g, v) for g in group}
        if any(dot(n, u) == 0 for n in walls for u in orbit):
            continue
        counts.append(sum(1 for u in orbit if any(_in_cone(fs, u) for fs in info["facets"])))
    return counts


def fundamental_domain_check(fan: MoriFanData, samples: int = 100, seed: int = 0) -> bool:
    """Each sampled orbit meets the closed union of chambers exactly once."""
    return all(c == 1 for c in fundamental_domain_counts(fan, samples, seed))


def dual_cone(rays: Iterable[Sequence] | None = None, d: int | None = None,
              halfspaces: Iterable[Sequence] | None = None) -> list[Ray]:
    """Generators of the dual cone ``{u : <u, x> >= 0 for x in C}`` as primitive rays.

    ``C`` is given either by generating ``rays`` (must span the space) or by
    inward ``halfspaces`` normals, in which case the dual is generated by them.

    >>> dual_cone([(1, 0), (2, 3), (-2, 3), (-1, 0)], 2)
    [(0, 1)]
    """
    if (rays is None) == (halfspaces is None):
        raise InvalidInput("give exactly one of rays or halfspaces")
    if rays is not None:
        rs = [primitive(r) for r in rays]
        d = d or len(rs[0])
        if rank(rs, d) != d:
            raise InvalidInput("cone is not full-dimensional")
        return sorted(cone_facets(rs, d))
    ns = []
    for n in halfspaces:
        p = primitive(n)
        if p not in ns:
            ns.append(p)
    d = d or len(ns[0])
    if rank(ns, d) == d:
        ns = _extremal(ns, cone_facets(ns, d), d)
    return sorted(ns)


def movable_cone_rays(fan: MoriFanData) -> list[Ray]:
    return sorted({r for c in fan.chambers for r in c.rays})


def check_duality(ess_rays: Iterable[Sequence], mov_rays: Iterable[Sequence], d: int) -> bool:
    """``Ess`` equals the dual of ``Mov`` as sets of primitive rays."""
    return sorted({primitive(r) for r in ess_rays}) == dual_cone(list(mov_rays), d)
