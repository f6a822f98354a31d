"""Finite posets of strata: construction, intervals, covers, chains, levels.

Elements are opaque string identifiers.  A poset is stored by its Hasse
diagram (the irredundant cover relation) with a cached reachability relation;
all deterministic orderings are lexicographic on identifiers.  Posets are
immutable after construction and safe to share across workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random


class PosetError(ValueError):
    """Raised for malformed poset input (cycles, unknown or redundant covers)."""


class Poset:
    """A finite poset given by elements and covers (``x`` covered by ``y``)."""

    def __init__(self, elements, covers, *, _trusted: bool = False):
        self.elements: tuple[str, ...] = tuple(sorted(str(e) for e in elements))
        if len(set(self.elements)) != len(self.elements):
            raise PosetError("duplicate elements")
        self._index = {e: i for i, e in enumerate(self.elements)}
        covers = sorted((str(a), str(b)) for a, b in covers)
        for a, b in covers:
            if a not in self._index or b not in self._index:
                raise PosetError(f"unknown element in cover ({a}, {b})")
            if a == b:
                raise PosetError(f"reflexive cover ({a}, {b})")
        if len(set(covers)) != len(covers):
            raise PosetError("duplicate cover pair")
        self.covers: tuple[tuple[str, str], ...] = tuple(covers)
        self._up = {e: tuple(sorted(b for a, b in covers if a == e)) for e in self.elements}
        self._down = {e: tuple(sorted(a for a, b in covers if b == e)) for e in self.elements}
        self._lt = self._reachability()
        if not _trusted:
            self._check_irredundant()
        self._chain_cache: dict[str, dict[int, tuple[tuple[str, ...], ...]]] = {}
        self._all_chain_cache: dict[int, tuple[tuple[str, ...], ...]] | None = None

    # -- construction ---------------------------------------------------------

    def _reachability(self) -> dict[str, frozenset[str]]:
        # strict reachability along covers; detects cycles
        order: list[str] = []
        state = {e: 0 for e in self.elements}

        def visit(e: str):
            stack = [(e, iter(self._up[e]))]
            state[e] = 1
            while stack:
                node, it = stack[-1]
                advanced = False
                for nxt in it:
                    if state[nxt] == 1:
                        raise PosetError(f"cycle detected through {nxt!r}")
                    if state[nxt] == 0:
                        state[nxt] = 1
                        stack.append((nxt, iter(self._up[nxt])))
                        advanced = True
                        break
                if not advanced:
                    stack.pop()
                    state[node] = 2
                    order.append(node)

        for e in self.elements:
            if state[e] == 0:
                visit(e)
        above: dict[str, set[str]] = {e: set() for e in self.elements}
        for e in order:  # reverse-topological: successors already done
            acc = above[e]
            for u in self._up[e]:
                acc.add(u)
                acc |= above[u]
        return {e: frozenset(s) for e, s in above.items()}

    def _check_irredundant(self):
        for a, b in self.covers:
            for z in self._up[a]:
                if z != b and b in self._lt[z]:
                    raise PosetError(f"redundant cover ({a}, {b}): {a} < {z} < {b} already implied")

    # -- order ------------------------------------------------------------------

    def __contains__(self, e: str) -> bool:
        return e in self._index

    def __len__(self) -> int:
        return len(self.elements)

    def lt(self, a: str, b: str) -> bool:
        return b in self._lt[a]

    def leq(self, a: str, b: str) -> bool:
        return a == b or b in self._lt[a]

    def above(self, a: str) -> tuple[str, ...]:
        """All elements strictly greater than ``a``, sorted."""
        return tuple(sorted(self._lt[a]))

    def below(self, a: str) -> tuple[str, ...]:
        return tuple(sorted(e for e in self.elements if self.lt(e, a)))

    def upper_covers(self, a: str) -> tuple[str, ...]:
        return self._up[a]

    def lower_covers(self, a: str) -> tuple[str, ...]:
        return self._down[a]

    def minimal_elements(self) -> tuple[str, ...]:
        return tuple(e for e in self.elements if not self._down[e])

    def least_element(self) -> str | None:
        mins = self.minimal_elements()
        if len(mins) == 1 and all(self.leq(mins[0], e) for e in self.elements):
            return mins[0]
        return None

    def comparable_pairs(self):
        """All strict pairs ``(a, b)`` with ``a < b``, lexicographically."""
        for a in self.elements:
            for b in self.above(a):
                yield (a, b)

    def open_interval_elements(self, a: str, b: str) -> tuple[str, ...]:
        return tuple(sorted(z for z in self._lt[a] if self.lt(z, b)))

    # -- derived posets ----------------------------------------------------------

    def induced(self, subset) -> "Poset":
        subset = sorted(set(subset))
        for e in subset:
            self._require(e)
        sset = set(subset)
        covers = []
        for a in subset:
            for b in subset:
                if self.lt(a, b) and not any(self.lt(a, z) and self.lt(z, b) for z in sset):
                    covers.append((a, b))
        return Poset(subset, covers, _trusted=True)

    def _require(self, e: str):
        if e not in self._index:
            raise PosetError(f"unknown element {e!r}")

    # -- chains ------------------------------------------------------------------

    def chains_ending_at(self, x: str) -> dict[int, tuple[tuple[str, ...], ...]]:
        """Strict chains ``[x1 < ... < xn = x]`` grouped by length, lex-sorted."""
        self._require(x)
        cached = self._chain_cache.get(x)
        if cached is not None:
            return cached
        by_len: dict[int, list[tuple[str, ...]]] = {1: [(x,)]}
        frontier: list[tuple[str, ...]] = [(x,)]
        n = 1
        while frontier:
            nxt: list[tuple[str, ...]] = []
            for chain in frontier:
                bottom = chain[0]
                for y in self.below(bottom):
                    nxt.append((y,) + chain)
            if nxt:
                n += 1
                by_len[n] = nxt
            frontier = nxt
        out = {n: tuple(sorted(cs)) for n, cs in by_len.items()}
        self._chain_cache[x] = out
        return out

    def all_chains(self) -> dict[int, tuple[tuple[str, ...], ...]]:
        """All nonempty strict chains, grouped by length, lex-sorted."""
        if self._all_chain_cache is not None:
            return self._all_chain_cache
        merged: dict[int, list[tuple[str, ...]]] = {}
        for x in self.elements:
            for n, cs in self.chains_ending_at(x).items():
                merged.setdefault(n, []).extend(cs)
        out = {n: tuple(sorted(cs)) for n, cs in merged.items()}
        self._all_chain_cache = out
        return out

    def linear_extension(self) -> tuple[str, ...]:
        """Kahn's algorithm with lexicographic tie-breaking."""
        indeg = {e: len(self._down[e]) for e in self.elements}
        ready = sorted(e for e in self.elements if indeg[e] == 0)
        out: list[str] = []
        while ready:
            e = ready.pop(0)
            out.append(e)
            changed = False
            for u in self._up[e]:
                indeg[u] -= 1
                if indeg[u] == 0:
                    ready.append(u)
                    changed = True
            if changed:
                ready.sort()
        return tuple(out)

    def isomorphism_image(self, mapping: dict[str, str]) -> "Poset":
        """Relabel along a bijection; raises unless it is an order isomorphism."""
        if sorted(mapping) != list(self.elements):
            raise PosetError("mapping domain mismatch")
        covers = [(mapping[a], mapping[b]) for a, b in self.covers]
        return Poset(mapping.values(), covers, _trusted=True)

    def __repr__(self):
        return f"Poset({list(self.elements)}, covers={list(self.covers)})"


# ---------------------------------------------------------------------------
# Spec-level operations
# ---------------------------------------------------------------------------


def build_poset(elements, covers) -> Poset:
    """Validated construction; cycles and redundant covers are errors."""
    return Poset(elements, covers)


def open_interval(p: Poset, x: str, y: str) -> Poset:
    """The induced subposet ``{z : x < z < y}``."""
    p._require(x)
    p._require(y)
    if not p.lt(x, y):
        raise PosetError(f"{x!r} is not below {y!r}")
    return p.induced(p.open_interval_elements(x, y))


def strict_down_set(p: Poset, x: str) -> Poset:
    """The induced subposet of elements strictly below ``x``."""
    p._require(x)
    return p.induced(p.below(x))


class HatPoset:
    """A poset with a distinguished least element (the open stratum).

    Immutable after construction; the induced subposet of proper strata is
    cached eagerly since every (co)chain computation uses it.
    """

    def __init__(self, poset: Poset, bottom: str):
        if bottom not in poset:
            raise PosetError(f"bottom {bottom!r} is not an element")
        if poset.least_element() != bottom:
            raise PosetError(f"{bottom!r} is not the unique least element")
        self.poset = poset
        self.bottom = bottom
        self._open = poset.induced(self.strata())

    def strata(self) -> tuple[str, ...]:
        return tuple(e for e in self.poset.elements if e != self.bottom)

    def open_part(self) -> Poset:
        """The subposet of proper strata (everything above the bottom)."""
        return self._open

    def __eq__(self, other):
        return (
            isinstance(other, HatPoset)
            and self.bottom == other.bottom
            and self.poset.elements == other.poset.elements
            and self.poset.covers == other.poset.covers
        )

    def __repr__(self):
        return f"HatPoset(bottom={self.bottom!r}, {self.poset!r})"


def with_bottom(p: Poset, bottom: str = "0") -> HatPoset:
    """Adjoin a new least element under all minimal elements of ``p``."""
    if bottom in p:
        raise PosetError(f"element {bottom!r} already present")
    covers = list(p.covers) + [(bottom, m) for m in p.minimal_elements()]
    elements = (bottom,) + p.elements
    if not p.elements:
        return HatPoset(Poset([bottom], []), bottom)
    return HatPoset(Poset(elements, covers, _trusted=True), bottom)


def hat_from_least(p: Poset) -> HatPoset:
    """View a poset that already has a unique least element as a HatPoset."""
    least = p.least_element()
    if least is None:
        raise PosetError("poset has no least element")
    return HatPoset(p, least)


@dataclass(frozen=True)
class RankFunction:
    rk: dict[str, int]

    def __call__(self, e: str) -> int:
        return self.rk[e]


@dataclass(frozen=True)
class LevelMap:
    """A strictly increasing integer level per element (sigma)."""

    sigma: dict[str, int]

    def __call__(self, e: str) -> int:
        return self.sigma[e]

    def check_strict(self, p: Poset):
        for a, b in p.comparable_pairs():
            if not self.sigma[a] < self.sigma[b]:
                raise PosetError(f"level map is not strictly increasing on {a!r} < {b!r}")
        return self


def rank_function(hat: HatPoset) -> RankFunction | None:
    """Rank by cover-distance from the bottom; ``None`` when not graded.

    The poset is graded exactly when ``rk(y) = rk(x) + 1`` is consistent over
    every cover, which is checked exhaustively.
    """
    p = hat.poset
    rk: dict[str, int] = {hat.bottom: 0}
    for e in p.linear_extension():
        if e == hat.bottom:
            continue
        values = {rk[d] + 1 for d in p.lower_covers(e)}
        if len(values) != 1:
            return None
        rk[e] = values.pop()
    for a, b in p.covers:
        if rk[b] != rk[a] + 1:
            return None
    return RankFunction(rk)


def default_sigma(hat: HatPoset) -> LevelMap:
    """Rank when graded, else positions along a fixed linear extension."""
    rk = rank_function(hat)
    if rk is not None:
        return LevelMap(dict(rk.rk)).check_strict(hat.poset)
    sigma = {e: i for i, e in enumerate(hat.poset.linear_extension())}
    assert sigma[hat.bottom] == 0
    return LevelMap(sigma).check_strict(hat.poset)


# ---------------------------------------------------------------------------
# Seeded random posets (verification suites)
# ---------------------------------------------------------------------------


def random_poset(rng: Random, max_elements: int = 7, edge_prob: float = 0.4) -> Poset:
    """A random poset on at most ``max_elements`` elements.

    Random strict relations on a shuffled ordering are transitively closed
    and reduced to covers, so any finite poset of the given size can occur.
    """
    n = rng.randint(1, max_elements)
    names = [f"p{i}" for i in range(n)]
    order = names[:]
    rng.shuffle(order)
    rel = {e: set() for e in names}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_prob:
                rel[order[i]].add(order[j])
    # transitive closure
    for k in order:
        for a in names:
            if k in rel[a]:
                rel[a] |= rel[k]
    covers = []
    for a in names:
        for b in rel[a]:
            if not any(b in rel[z] for z in rel[a]):
                covers.append((a, b))
    return Poset(names, covers, _trusted=True)


def random_pointed_poset(rng: Random, max_elements: int = 7) -> HatPoset:
    """A random poset with a least element (at most ``max_elements`` total)."""
    base = random_poset(rng, max_elements - 1)
    return with_bottom(base, "a0")
