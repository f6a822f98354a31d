"""Order-complex (co)chain complexes of a poset and their connecting maps.

For an element ``x`` of a finite poset ``P``, the chain complex has one free
generator per strict chain ``[x1 < ... < xn = x]``; the boundary deletes
interior entries with alternating signs, and the cochain differential is its
transpose (insertion with alternating signs, insertions below the bottom of
the chain allowed everywhere).  Connecting maps drop/append the top element
with sign ``(-1)^n``; on covers they are chain maps, and in general they obey
the degreewise identity

    d b_x^z + b_x^z d + sum_{x < y < z} (b composed through y) = 0

which is what makes every total complex built from them square to zero.

Homological complexes are stored with negated degrees (``C_n`` in degree
``-n``).  A :class:`~stratify.poset.HatPoset` input switches on the bottom
conventions: the bottom's complex is the ring in degree 0, and chains for
proper strata live in the open part.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import (
    ChainMap,
    FreeComplex,
    GradedModule,
    GradedPiece,
    HomologyData,
    homology,
    homology_with_generators,
    induced_map,
    unit_complex,
)
from .matrix import Matrix
from .poset import HatPoset, Poset, PosetError, RankFunction, rank_function
from .rings import Ring


def _context(pp, x: str):
    """Resolve hat conventions: returns (chain poset, x, is_bottom)."""
    if isinstance(pp, HatPoset):
        if x == pp.bottom:
            return pp.open_part(), x, True
        return pp.open_part(), x, False
    if x not in pp:
        raise PosetError(f"unknown element {x!r}")
    return pp, x, False


def chain_basis(p: Poset, x: str, n: int) -> tuple[tuple[str, ...], ...]:
    """Lexicographically ordered strict ``n``-chains ending at ``x``."""
    return p.chains_ending_at(x).get(n, ())


# ---------------------------------------------------------------------------
# The complexes
# ---------------------------------------------------------------------------


def chain_complex(pp, x: str, ring: Ring) -> FreeComplex:
    """Homological ``C_.(x)`` stored in negated degrees (``C_n`` at ``-n``).

    The boundary deletes interior chain entries with sign ``(-1)^(i-1)``; the
    top entry ``x`` is never deleted.  For the bottom of a hat poset this is
    the ring concentrated in degree 0.
    """
    p, x, is_bottom = _context(pp, x)
    if is_bottom:
        return unit_complex(ring)
    chains = p.chains_ending_at(x)
    ranks = {-n: len(cs) for n, cs in chains.items()}
    diffs = {}
    for n in sorted(chains):
        if n - 1 not in chains:
            continue
        src = chains[n]
        tgt = {c: i for i, c in enumerate(chains[n - 1])}
        m = [[0] * len(src) for _ in tgt]
        for j, c in enumerate(src):
            for i in range(n - 1):
                shorter = c[:i] + c[i + 1 :]
                sign = 1 if i % 2 == 0 else -1
                row = tgt[shorter]
                m[row][j] += sign
        diffs[-n] = Matrix(ring, m)
    return FreeComplex(ring, ranks, diffs)


def cochain_complex(pp, x: str, ring: Ring) -> FreeComplex:
    """Cohomological ``C^.(x)``: the dual complex, built by insertions.

    ``d`` inserts ``y`` at position ``i`` with sign ``(-1)^(i-1)``; the
    position-1 insertion ranges over every ``y`` below the chain's bottom.
    Its matrix in degree ``n`` is the transpose of the boundary in degree
    ``n+1``.
    """
    p, x, is_bottom = _context(pp, x)
    if is_bottom:
        return unit_complex(ring)
    chains = p.chains_ending_at(x)
    ranks = {n: len(cs) for n, cs in chains.items()}
    diffs = {}
    for n in sorted(chains):
        if n + 1 not in chains:
            continue
        src = chains[n]
        tgt = {c: i for i, c in enumerate(chains[n + 1])}
        m = [[0] * len(src) for _ in tgt]
        for j, c in enumerate(src):
            for i in range(1, n + 1):
                # insert y strictly between c[i-2] and c[i-1] (1-indexed slots)
                below = c[i - 2] if i >= 2 else None
                above = c[i - 1]
                sign = 1 if (i - 1) % 2 == 0 else -1
                for y in p.below(above):
                    if below is not None and not p.lt(below, y):
                        continue
                    longer = c[: i - 1] + (y,) + c[i - 1 :]
                    m[tgt[longer]][j] += sign
        diffs[n] = Matrix(ring, m)
    return FreeComplex(ring, ranks, diffs)


def poset_cohomology(pp, x: str, ring: Ring, variant: str = "cohomological") -> GradedModule:
    """``h^.(x)`` (or ``h_.(x)``), reported with positive degree keys."""
    if variant == "cohomological":
        return homology(cochain_complex(pp, x, ring))
    if variant == "homological":
        h = homology(chain_complex(pp, x, ring))
        return GradedModule({-n: p for n, p in h.pieces.items()})
    raise ValueError(f"unknown variant {variant!r}")


def contracting_homotopy(p: Poset, x: str, ring: Ring) -> ChainMap:
    """The explicit contraction of ``C_.(x)`` when ``p`` has a least element.

    Prepends the least element ``a`` to chains not already starting at it.
    The identity ``boundary o c + c o boundary = id`` is checked degreewise
    and failure raises.
    """
    a = p.least_element()
    if a is None:
        raise PosetError("contracting homotopy requires a least element")
    if x == a:
        raise PosetError("x must be strictly above the least element")
    if not p.lt(a, x):
        raise PosetError(f"{x!r} is not above the least element")
    cc = chain_complex(p, x, ring)
    chains = p.chains_ending_at(x)
    comps = {}
    for n in sorted(chains):
        if n + 1 not in chains:
            continue
        src = chains[n]
        tgt = {c: i for i, c in enumerate(chains[n + 1])}
        m = [[0] * len(src) for _ in tgt]
        for j, c in enumerate(src):
            if c[0] != a:
                m[tgt[(a,) + c]][j] = 1
        comps[-n] = Matrix(ring, m)
    h = ChainMap(cc, cc, comps, -1, validate=False)
    for n in cc.degrees():
        ident = Matrix.identity(ring, cc.rank(n))
        got = (cc.diff(n - 1) @ h.component(n)) + (h.component(n + 1) @ cc.diff(n))
        if got != ident:
            raise PosetError(f"contraction identity fails at chain length {-n}")
    return h


# ---------------------------------------------------------------------------
# Connecting maps
# ---------------------------------------------------------------------------


def connecting_map(pp, x: str, y: str, ring: Ring, variant: str = "cohomological") -> ChainMap:
    """The connecting map between the complexes at ``x < y``.

    Cohomological: ``C^.(x) -> C^(.+1)(y)`` appends ``y`` to an ``n``-chain
    with sign ``(-1)^n``.  Homological: ``C_(.+1)(y) -> C_.(x)`` drops the top
    of a chain whose next-to-top is ``x``, with the same sign.  Both are
    stored as shift ``+1`` maps.

    On covers the result is a validated chain map (it anticommutes with the
    differentials); below a non-cover the raw map is returned with
    ``validated=False`` — it is exactly what total complexes need, but it is
    not a chain map on its own.
    """
    if isinstance(pp, HatPoset):
        is_cover = (x, y) in pp.poset.covers
        if not pp.poset.lt(x, y):
            raise PosetError(f"{x!r} is not below {y!r}")
        bottom = pp.bottom
    else:
        is_cover = (x, y) in pp.covers
        if not pp.lt(x, y):
            raise PosetError(f"{x!r} is not below {y!r}")
        bottom = None
    cx = chain_complex(pp, x, ring) if variant == "homological" else cochain_complex(pp, x, ring)
    cy = chain_complex(pp, y, ring) if variant == "homological" else cochain_complex(pp, y, ring)
    p = pp.open_part() if isinstance(pp, HatPoset) else pp

    comps = {}
    if variant == "cohomological":
        if x == bottom:
            # unit of the bottom complex lands on the length-one chain (y,)
            tgt = {c: i for i, c in enumerate(chain_basis(p, y, 1))}
            col = [[0] for _ in tgt]
            col[tgt[(y,)]][0] = 1
            comps[0] = Matrix(ring, col)
        else:
            for n, src in p.chains_ending_at(x).items():
                tgt = {c: i for i, c in enumerate(chain_basis(p, y, n + 1))}
                m = [[0] * len(src) for _ in tgt]
                sign = 1 if n % 2 == 0 else -1
                for j, c in enumerate(src):
                    longer = c + (y,)
                    if longer in tgt:
                        m[tgt[longer]][j] = sign
                comps[n] = Matrix(ring, m)
        source, target = cx, cy
    elif variant == "homological":
        if x == bottom:
            src = chain_basis(p, y, 1)
            comps[-1] = Matrix(ring, [[1] * len(src)] if src else [])
        else:
            for n, src in p.chains_ending_at(y).items():
                if n < 2:
                    continue
                tgt = {c: i for i, c in enumerate(chain_basis(p, x, n - 1))}
                m = [[0] * len(src) for _ in tgt]
                sign = 1 if (n - 1) % 2 == 0 else -1  # (-1)^n for (n+1)-chains
                for j, c in enumerate(src):
                    if c[-2] == x:
                        m[tgt[c[:-1]]][j] = sign
                comps[-n] = Matrix(ring, m)
        source, target = cy, cx
    else:
        raise ValueError(f"unknown variant {variant!r}")

    cm = ChainMap(source, target, comps, 1, validate=False)
    if is_cover:
        cm.validate()
    return cm


@dataclass
class ConnectingIdentityReport:
    """Outcome of the exact degreewise checks around one pair ``x < z``."""

    x: str
    z: str
    commutator_ok: bool
    generalized_homological_ok: bool
    generalized_cohomological_ok: bool

    @property
    def holds(self) -> bool:
        return (
            self.commutator_ok
            and self.generalized_homological_ok
            and self.generalized_cohomological_ok
        )


def _anticommutator(b: ChainMap) -> dict[int, Matrix]:
    """Degreewise ``d b + b d`` for a shift-1 map (a shift-2 collection)."""
    out = {}
    degrees = set(b.source.degrees()) | {n - 1 for n in b.source.degrees()}
    for n in sorted(degrees):
        out[n] = (b.target.diff(n + 1) @ b.component(n)) + (b.component(n + 1) @ b.source.diff(n))
    return out


def commutator_identity(pp, x: str, z: str, ring: Ring) -> ConnectingIdentityReport:
    """Verify both connecting-map identities for ``x < z``, exactly.

    * The anticommutator of the boundary with the homological connecting map
      equals the projection onto chains whose next-to-top entry is ``x``.
    * The generalized identity: the anticommutator plus the sum of two-step
      connecting maps through every ``y`` in the open interval vanishes, in
      both the homological and cohomological pictures.
    """
    p = pp.open_part() if isinstance(pp, HatPoset) else pp
    bottom = pp.bottom if isinstance(pp, HatPoset) else None
    between = (
        [y for y in p.elements if p.lt(y, z)]
        if x == bottom
        else list(p.open_interval_elements(x, z))
    )

    b_hom = connecting_map(pp, x, z, ring, "homological")
    anti = _anticommutator(b_hom)

    # projection onto chains with next-to-top equal to x (bottom: length-2 chains)
    commutator_ok = True
    src_chains = p.chains_ending_at(z)
    cx = b_hom.target
    for n, cs in src_chains.items():
        got = anti.get(-n)
        if got is None:
            got = Matrix.zeros(ring, cx.rank(-(n - 2)), len(cs))
        want = [[0] * len(cs) for _ in range(cx.rank(-(n - 2)))]
        if x == bottom:
            if n == 2:
                for j in range(len(cs)):
                    want[0][j] = 1
        else:
            tchains = {c: i for i, c in enumerate(chain_basis(p, x, n - 2))}
            for j, c in enumerate(cs):
                if len(c) >= 3 and c[-3] == x:
                    want[tchains[c[:-2]]][j] = 1
        if got != Matrix(ring, want, ncols=len(cs)):
            commutator_ok = False

    gen_hom_ok = _generalized_identity(pp, x, z, ring, "homological", between)
    gen_coh_ok = _generalized_identity(pp, x, z, ring, "cohomological", between)
    return ConnectingIdentityReport(x, z, commutator_ok, gen_hom_ok, gen_coh_ok)


def _generalized_identity(pp, x, z, ring, variant, between) -> bool:
    b_xz = connecting_map(pp, x, z, ring, variant)
    total = dict(_anticommutator(b_xz))
    for y in between:
        b_xy = connecting_map(pp, x, y, ring, variant)
        b_yz = connecting_map(pp, y, z, ring, variant)
        comp = b_xy.compose(b_yz) if variant == "homological" else b_yz.compose(b_xy)
        for n in list(total):
            total[n] = total[n] + comp.component(n)
    return all(m.is_zero() for m in total.values())


# ---------------------------------------------------------------------------
# Rank concentration, the Whitney complex, acyclicity complexes
# ---------------------------------------------------------------------------


def is_concentrated(hat: HatPoset, ring: Ring) -> bool:
    """Whether every ``h_.(x)`` sits in the single degree ``rk(x)``."""
    rk = rank_function(hat)
    if rk is None:
        raise PosetError("poset is not graded")
    for x in hat.strata():
        h = homology(chain_complex(hat, x, ring))
        for n in h.degrees():
            if -n != rk(x):
                return False
    return True


def _homology_data(hat: HatPoset, x: str, ring: Ring) -> HomologyData:
    return homology_with_generators(chain_complex(hat, x, ring))


def whitney_complex(hat: HatPoset, ring: Ring) -> FreeComplex:
    """The complex with one summand ``h(x)`` per element, glued by connecting maps.

    Requires a graded poset with rank-concentrated homology, torsion-free
    over Z.  Stored with ``h_n`` (rank-``n`` elements) in degree ``-n``; bases
    of each ``h(x)`` come from the deterministic kernel/SNF generators.
    The square-zero check of the result is a real theorem-level assertion.
    """
    rk = rank_function(hat)
    if rk is None:
        raise PosetError("poset is not graded")
    if not is_concentrated(hat, ring):
        raise PosetError("homology is not concentrated in the rank degree")
    hdata: dict[str, HomologyData] = {}
    hrank: dict[str, int] = {}
    for x in hat.poset.elements:
        hd = _homology_data(hat, x, ring)
        deg = 0 if x == hat.bottom else -rk(x)
        facs = hd.factors.get(deg, ())
        if any(f != 0 for f in facs):
            raise PosetError(f"torsion in h({x}) over {ring}")
        hdata[x] = hd
        hrank[x] = len(facs)
    by_rank: dict[int, list[str]] = {}
    for x in hat.poset.elements:
        by_rank.setdefault(rk(x), []).append(x)
    for xs in by_rank.values():
        xs.sort()
    max_rank = max(by_rank)
    ranks = {-n: sum(hrank[x] for x in by_rank.get(n, ())) for n in range(max_rank + 1)}
    diffs = {}
    for n in range(max_rank, 0, -1):
        uppers = by_rank.get(n, [])
        lowers = by_rank.get(n - 1, [])
        rows = sum(hrank[x] for x in lowers)
        cols = sum(hrank[y] for y in uppers)
        if rows == 0 or cols == 0:
            continue
        m = [[ring.zero] * cols for _ in range(rows)]
        col0 = 0
        for y in uppers:
            row0 = 0
            for x in lowers:
                if hat.poset.lt(x, y):
                    b = connecting_map(hat, x, y, ring, "homological")
                    block = induced_map(b, hdata[y], hdata[x]).get(-n)
                    if block is not None:
                        for i in range(block.nrows):
                            for j in range(block.ncols):
                                m[row0 + i][col0 + j] = block[i, j]
                row0 += hrank[x]
            col0 += hrank[y]
        diffs[-n] = Matrix(ring, m, ncols=cols)
    return FreeComplex(ring, ranks, diffs)


def acyclicity_complex(hat: HatPoset, x: str, ring: Ring):
    """The induced complex ``0 -> h(x) -> ... -> h(bottom) -> 0`` below ``x``.

    Returns ``(complex, exact)`` where the complex has ``h``-of-rank-``r``
    summands in degree ``rk(x) - r`` and ``exact`` records whether its
    homology vanishes everywhere.
    """
    rk = rank_function(hat)
    if rk is None:
        raise PosetError("poset is not graded")
    if not is_concentrated(hat, ring):
        raise PosetError("homology is not concentrated in the rank degree")
    if x not in hat.poset:
        raise PosetError(f"unknown element {x!r}")
    below = [z for z in hat.poset.elements if hat.poset.leq(z, x)]
    hdata: dict[str, HomologyData] = {}
    hrank: dict[str, int] = {}
    for z in below:
        hd = _homology_data(hat, z, ring)
        deg = 0 if z == hat.bottom else -rk(z)
        facs = hd.factors.get(deg, ())
        if any(f != 0 for f in facs):
            raise PosetError(f"torsion in h({z}) over {ring}")
        hdata[z] = hd
        hrank[z] = len(facs)
    top_rank = rk(x)
    by_level: dict[int, list[str]] = {}
    for z in below:
        by_level.setdefault(top_rank - rk(z), []).append(z)
    for zs in by_level.values():
        zs.sort()
    ranks = {i: sum(hrank[z] for z in by_level.get(i, ())) for i in range(top_rank + 1)}
    diffs = {}
    for i in range(top_rank):
        uppers = by_level.get(i, [])
        lowers = by_level.get(i + 1, [])
        rows = sum(hrank[z] for z in lowers)
        cols = sum(hrank[y] for y in uppers)
        if rows == 0 or cols == 0:
            continue
        m = [[ring.zero] * cols for _ in range(rows)]
        col0 = 0
        for y in uppers:
            row0 = 0
            for z in lowers:
                if hat.poset.lt(z, y):
                    b = connecting_map(hat, z, y, ring, "homological")
                    block = induced_map(b, hdata[y], hdata[z]).get(-rk(y))
                    if block is not None:
                        for r in range(block.nrows):
                            for c in range(block.ncols):
                                m[row0 + r][col0 + c] = block[r, c]
                row0 += hrank[z]
            col0 += hrank[y]
        diffs[i] = Matrix(ring, m, ncols=cols)
    cx = FreeComplex(ring, ranks, diffs)
    exact = homology(cx).is_trivial()
    return cx, exact


# ---------------------------------------------------------------------------
# Functorial transport along poset isomorphisms
# ---------------------------------------------------------------------------


def check_isomorphism(p: Poset, q: Poset, alpha: dict[str, str]):
    """Raise unless ``alpha`` is an order isomorphism ``p -> q``."""
    if sorted(alpha) != list(p.elements) or sorted(alpha.values()) != list(q.elements):
        raise PosetError("mapping is not a bijection between the element sets")
    for a, b in p.covers:
        if (alpha[a], alpha[b]) not in q.covers:
            raise PosetError(f"cover ({a}, {b}) is not preserved")
    if len(p.covers) != len(q.covers):
        raise PosetError("cover counts differ; not an isomorphism")


def transport(p: Poset, q: Poset, alpha: dict[str, str], x: str, ring: Ring) -> ChainMap:
    """The relabeling isomorphism ``C^.(alpha(x)) -> C^.(x)`` of cochain complexes.

    Contravariant: ``transport(id) = id`` and transport of a composite is the
    composite of transports in the opposite order.
    """
    check_isomorphism(p, q, alpha)
    inv = {v: k for k, v in alpha.items()}
    source = cochain_complex(q, alpha[x], ring)
    target = cochain_complex(p, x, ring)
    comps = {}
    for n, src in q.chains_ending_at(alpha[x]).items():
        tgt = {c: i for i, c in enumerate(chain_basis(p, x, n))}
        m = [[0] * len(src) for _ in tgt]
        for j, c in enumerate(src):
            m[tgt[tuple(inv[e] for e in c)]][j] = 1
        comps[n] = Matrix(ring, m)
    return ChainMap(source, target, comps, 0)
