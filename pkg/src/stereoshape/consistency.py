"""Representational consistency on finite relational structures.

A representation is an injective map that sends every relation tuple to a
tuple of the same-named relation in the target. Two representations
``R1, R2`` are consistent when ``s -> {R1(s), R2(s)}`` is injective; a family
is pairwise consistent when every pair is.

For a structure whose automorphism group acts freely, a pairwise
inconsistent family of automorphisms forces an involution in the group.
:func:`theorem_report` checks that implication on a concrete structure.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

from .exceptions import InvalidInputError, SizeLimitError

MAX_EXHAUSTIVE_SIZE = 8


@dataclass(frozen=True)
class FiniteStructure:
    """A finite set of elements together with named relations.

    ``relations`` maps a relation name to a frozenset of equal-length tuples.
    Arities are stored separately so that empty relations still carry one.
    """

    elements: tuple
    relations: Mapping[str, frozenset] = field(default_factory=dict)
    arities: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        elements = tuple(self.elements)
        if len(set(elements)) != len(elements):
            raise InvalidInputError("structure elements must be distinct")
        members = set(elements)
        rels, arities = {}, dict(self.arities)
        for name, tuples in dict(self.relations).items():
            tuples = frozenset(tuple(tp) for tp in tuples)
            lengths = {len(tp) for tp in tuples}
            if name in arities:
                lengths.add(arities[name])
            if len(lengths) > 1:
                raise InvalidInputError(f"relation {name!r} has inconsistent arities {sorted(lengths)}")
            if lengths:
                arities[name] = lengths.pop()
            elif name not in arities:
                raise InvalidInputError(f"empty relation {name!r} needs an explicit arity")
            for tp in tuples:
                if not set(tp) <= members:
                    raise InvalidInputError(f"relation {name!r} tuple {tp} uses unknown elements")
            rels[name] = tuples
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "arities", arities)

    def __hash__(self):
        return hash((self.elements, tuple(sorted((k, tuple(sorted(v, key=repr))) for k, v in self.relations.items()))))

    def __len__(self):
        return len(self.elements)

    @classmethod
    def from_json_obj(cls, obj) -> "FiniteStructure":
        if not isinstance(obj, dict) or not isinstance(obj.get("elements"), list):
            raise InvalidInputError('structure JSON needs an "elements" list')
        rels, arities = {}, {}
        raw = obj.get("relations", {})
        if not isinstance(raw, dict):
            raise InvalidInputError('"relations" must be an object')
        for name, spec in raw.items():
            if not isinstance(spec, dict) or "tuples" not in spec:
                raise InvalidInputError(f'relation {name!r} must be an object with "tuples"')
            arity = spec.get("arity")
            tuples = [tuple(_hashable(v) for v in tp) for tp in spec["tuples"]]
            if arity is not None:
                arities[name] = arity
            rels[name] = tuples
        return cls(tuple(_hashable(e) for e in obj["elements"]), rels, arities)

    def to_json_obj(self) -> dict:
        return {
            "elements": list(self.elements),
            "relations": {
                name: {"arity": self.arities[name], "tuples": sorted(([*tp] for tp in tuples), key=repr)}
                for name, tuples in self.relations.items()
            },
        }


def _hashable(value):
    if isinstance(value, list):
        raise InvalidInputError(f"structure elements must be scalars, got {value!r}")
    return value


@dataclass(frozen=True)
class RepresentationMap:
    """A map from ``source`` elements to ``target`` elements, stored as a tuple
    of images listed in ``source.elements`` order."""

    source: FiniteStructure
    target: FiniteStructure
    images: tuple

    @classmethod
    def from_mapping(cls, mapping: Mapping, source: FiniteStructure,
                     target: FiniteStructure | None = None) -> "RepresentationMap":
        target = source if target is None else target
        missing = [s for s in source.elements if s not in mapping]
        if missing:
            raise InvalidInputError(f"mapping is not total; missing {missing}")
        images = tuple(mapping[s] for s in source.elements)
        allowed = set(target.elements)
        outside = [v for v in images if v not in allowed]
        if outside:
            raise InvalidInputError(f"mapping sends elements outside the target: {outside}")
        return cls(source, target, images)

    @property
    def mapping(self) -> dict:
        return dict(zip(self.source.elements, self.images))

    def __call__(self, s):
        return self.images[self.source.elements.index(s)]

    def is_identity(self) -> bool:
        return self.images == self.source.elements

    def compose(self, other: "RepresentationMap") -> "RepresentationMap":
        """``self o other`` (apply ``other`` first)."""
        m = self.mapping
        return RepresentationMap(other.source, self.target, tuple(m[v] for v in other.images))

    def inverse(self) -> "RepresentationMap":
        inv = {v: s for s, v in zip(self.source.elements, self.images)}
        return RepresentationMap(self.target, self.source, tuple(inv[t] for t in self.target.elements))

    def to_json_obj(self) -> dict:
        return {"mapping": {str(k): v for k, v in self.mapping.items()}}

    @classmethod
    def from_json_obj(cls, obj, source: FiniteStructure,
                      target: FiniteStructure | None = None) -> "RepresentationMap":
        """Parse ``{"mapping": {...}}``; JSON keys are matched to elements by ``str``."""
        target = source if target is None else target
        if not isinstance(obj, dict) or not isinstance(obj.get("mapping"), dict):
            raise InvalidInputError('representation JSON needs a "mapping" object')
        src = {str(e): e for e in source.elements}
        tgt = {str(e): e for e in target.elements}
        mapping = {}
        for key, value in obj["mapping"].items():
            if key not in src:
                raise InvalidInputError(f"mapping key {key!r} is not a source element")
            if value in target.elements and not isinstance(value, bool):
                mapping[src[key]] = value
            elif str(value) in tgt:
                mapping[src[key]] = tgt[str(value)]
            else:
                raise InvalidInputError(f"mapping value {value!r} is not a target element")
        return cls.from_mapping(mapping, source, target)


def _preserves(mapping: Mapping, S: FiniteStructure, I: FiniteStructure) -> bool:
    for name, tuples in S.relations.items():
        target = I.relations.get(name)
        if target is None:
            if tuples:
                return False
            continue
        for tp in tuples:
            if tuple(mapping[s] for s in tp) not in target:
                return False
    return True


def is_representation(f, S: FiniteStructure, I: FiniteStructure) -> bool:
    """True iff ``f`` (a mapping or :class:`RepresentationMap`) is injective and
    carries every relation tuple of ``S`` into the same-named relation of ``I``."""
    mapping = f.mapping if isinstance(f, RepresentationMap) else dict(f)
    rep = RepresentationMap.from_mapping(mapping, S, I)
    if len(set(rep.images)) != len(rep.images):
        return False
    return _preserves(mapping, S, I)


def union_pair(R1: RepresentationMap, R2: RepresentationMap) -> dict:
    """The set-valued map ``s -> {R1(s)} | {R2(s)}``."""
    if R1.source != R2.source or R1.target != R2.target:
        raise InvalidInputError("representations must share source and target")
    return {s: frozenset((a, b)) for s, a, b in zip(R1.source.elements, R1.images, R2.images)}


def _union_collision(R1: RepresentationMap, R2: RepresentationMap):
    seen = {}
    for s, value in union_pair(R1, R2).items():
        if value in seen:
            return seen[value], s
        seen[value] = s
    return None


def pairwise_consistent(reps: Sequence[RepresentationMap]) -> dict:
    """Check that every pairwise union map is injective.

    The witness, when present, is ``(i, j, s, t)``: representation indices and
    two distinct elements sharing the same union value.
    """
    reps = list(reps)
    if not reps:
        raise InvalidInputError("need at least one representation")
    for i, j in itertools.combinations(range(len(reps)), 2):
        hit = _union_collision(reps[i], reps[j])
        if hit is not None:
            return {"consistent": False, "witness": (i, j, hit[0], hit[1])}
    # Triggers the shared source/target check for a lone representation too.
    union_pair(reps[0], reps[0])
    return {"consistent": True, "witness": None}


@dataclass(frozen=True)
class AutomorphismGroup:
    structure: FiniteStructure
    elements: tuple

    def __len__(self):
        return len(self.elements)

    def identity(self) -> RepresentationMap:
        S = self.structure
        return RepresentationMap(S, S, S.elements)

    def is_closed(self) -> bool:
        keys = {phi.images for phi in self.elements}
        if self.structure.elements not in keys:
            return False
        for a in self.elements:
            if a.inverse().images not in keys:
                return False
            for b in self.elements:
                if a.compose(b).images not in keys:
                    return False
        return True


def automorphisms(S: FiniteStructure) -> AutomorphismGroup:
    """All relation-preserving permutations of ``S`` (exhaustive, ``|S| <= 8``)."""
    if len(S) > MAX_EXHAUSTIVE_SIZE:
        raise SizeLimitError(f"automorphism enumeration is limited to {MAX_EXHAUSTIVE_SIZE} elements, got {len(S)}")
    found = []
    for perm in itertools.permutations(S.elements):
        mapping = dict(zip(S.elements, perm))
        # A bijection mapping a finite tuple set into itself maps it onto itself,
        # so forward preservation already gives preservation in both directions.
        if _preserves(mapping, S, S):
            found.append(RepresentationMap(S, S, perm))
    group = AutomorphismGroup(S, tuple(found))
    assert group.is_closed(), "automorphisms failed to close under composition"
    assert math.factorial(len(S)) % len(group) == 0
    return group


def acts_freely(G: AutomorphismGroup) -> bool:
    """No non-identity element fixes any point."""
    for phi in G.elements:
        if phi.is_identity():
            continue
        if any(a == b for a, b in zip(phi.source.elements, phi.images)):
            return False
    return True


def involutions(G: AutomorphismGroup) -> list[RepresentationMap]:
    return [phi for phi in G.elements if not phi.is_identity() and phi.compose(phi).is_identity()]


def theorem_report(S: FiniteStructure) -> dict:
    """Check "free action and pairwise inconsistency imply an involution" on ``S``.

    The representations used are the automorphisms of ``S`` acting on ``S``.
    When the group does not act freely the implication is vacuous:
    ``applicable`` is false and ``theorem_respected`` is true.
    """
    G = automorphisms(S)
    free = acts_freely(G)
    invs = involutions(G)
    consistency = pairwise_consistent(G.elements)
    respected = (not free) or consistency["consistent"] or bool(invs)
    witness = consistency["witness"]
    return {
        "group_order": len(G),
        "free": free,
        "applicable": free,
        "has_involution": bool(invs),
        "all_pairs_consistent": consistency["consistent"],
        "theorem_respected": respected,
        "witness": None if witness is None else {
            "representations": [G.elements[witness[0]].mapping, G.elements[witness[1]].mapping],
            "elements": [witness[2], witness[3]],
        },
    }


def fingers_instance(size: int = 5) -> tuple[FiniteStructure, list[RepresentationMap]]:
    """The counting-on-fingers example: the identity and the swap of 1 and 2 on ``{1..size}``."""
    S = FiniteStructure(tuple(range(1, size + 1)))
    ident = RepresentationMap(S, S, S.elements)
    swap = RepresentationMap.from_mapping({**ident.mapping, 1: 2, 2: 1}, S)
    return S, [ident, swap]


def enumerate_small_structures(max_size: int = 5, max_tuples: int = 3):
    """Yield every structure on ``{0..k-1}``, ``k <= max_size``, whose relations
    are one unary relation ``U`` and one binary relation ``E`` holding at most
    ``max_tuples`` tuples in total."""
    for k in range(1, max_size + 1):
        elements = tuple(range(k))
        candidates = [("U", (a,)) for a in elements] + [("E", p) for p in itertools.product(elements, repeat=2)]
        for count in range(max_tuples + 1):
            for chosen in itertools.combinations(candidates, count):
                rels = {"U": [tp for name, tp in chosen if name == "U"],
                        "E": [tp for name, tp in chosen if name == "E"]}
                yield FiniteStructure(elements, rels, {"U": 1, "E": 2})


def exhaustive_theorem_check(max_size: int = 5, max_tuples: int = 3) -> dict:
    """Run :func:`theorem_report` over :func:`enumerate_small_structures`."""
    checked = applicable = counterexamples = 0
    for S in enumerate_small_structures(max_size, max_tuples):
        report = theorem_report(S)
        checked += 1
        applicable += report["free"]
        if not report["theorem_respected"]:
            counterexamples += 1
    return {"structures": checked, "applicable": applicable, "counterexamples": counterexamples}
