"""Bounded complexes of finite free modules with exact homology.

Cohomological indexing is canonical: the differential of degree ``n`` maps
degree ``n`` to ``n+1`` and is stored as a matrix of shape
``ranks(n+1) x ranks(n)``.  Homological complexes are stored with negated
degrees, so one code path serves both.

Homology over Z is computed through Smith normal form (free rank plus
invariant factors); over Q and F_p through Gaussian elimination.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import kernel_basis, rank, smith_normal_form, snf_diagonal, solve_columns
from .matrix import Matrix, block_diagonal
from .rings import Ring, ZZ


class ComplexError(ValueError):
    """Raised when complex or chain-map data violates its invariants."""


class FreeComplex:
    """A bounded complex of finite free modules.

    ``ranks`` maps degree to a positive rank (finite support); ``diffs`` maps
    degree ``n`` to the matrix of ``d^n``.  ``d o d = 0`` is checked at
    construction and construction fails loudly otherwise.  ``weights`` is an
    optional integer grading of each basis element, which the differential
    must preserve.
    """

    __slots__ = ("ring", "ranks", "diffs", "weights")

    def __init__(self, ring: Ring, ranks, diffs, weights=None, *, check: bool = True):
        self.ring = ring
        self.ranks = {int(n): int(r) for n, r in ranks.items() if r}
        self.diffs = {}
        for n, m in diffs.items():
            n = int(n)
            if not isinstance(m, Matrix):
                m = Matrix(ring, m)
            if m.nrows == 0 or m.ncols == 0 or m.is_zero():
                continue
            self.diffs[n] = m
        if weights is not None:
            weights = {int(n): tuple(int(w) for w in ws) for n, ws in weights.items() if len(ws)}
        self.weights = weights
        if check:
            self._validate()

    # -- structure -----------------------------------------------------------

    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0)

    def degrees(self) -> list[int]:
        return sorted(self.ranks)

    def total_rank(self) -> int:
        return sum(self.ranks.values())

    def diff(self, n: int) -> Matrix:
        d = self.diffs.get(n)
        if d is None:
            return Matrix.zeros(self.ring, self.rank(n + 1), self.rank(n))
        return d

    def weight_row(self, n: int):
        if self.weights is None:
            return None
        ws = self.weights.get(n)
        if ws is None:
            ws = (0,) * self.rank(n)
        return ws

    def is_zero(self) -> bool:
        return not self.ranks

    def _validate(self):
        for n, m in self.diffs.items():
            want = (self.rank(n + 1), self.rank(n))
            if m.shape != want:
                raise ComplexError(f"differential at degree {n} has shape {m.shape}, expected {want}")
            if m.ring != self.ring:
                raise ComplexError("differential ring mismatch")
        for n in self.ranks:
            d1 = self.diffs.get(n)
            d2 = self.diffs.get(n + 1)
            if d1 is not None and d2 is not None and not (d2 @ d1).is_zero():
                raise ComplexError(f"d o d != 0 between degrees {n} and {n + 2}")
        if self.weights is not None:
            for n, ws in self.weights.items():
                if len(ws) != self.rank(n):
                    raise ComplexError(f"weight row at degree {n} has wrong length")
            for n, m in self.diffs.items():
                src = self.weight_row(n)
                tgt = self.weight_row(n + 1)
                for i in range(m.nrows):
                    for j in range(m.ncols):
                        if not self.ring.is_zero(m[i, j]) and tgt[i] != src[j]:
                            raise ComplexError(
                                f"differential at degree {n} does not preserve weight "
                                f"({src[j]} -> {tgt[i]})"
                            )

    def __eq__(self, other):
        return (
            isinstance(other, FreeComplex)
            and self.ring == other.ring
            and self.ranks == other.ranks
            and {n: self.diff(n) for n in self.ranks} == {n: other.diff(n) for n in other.ranks}
            and self.weights == other.weights
        )

    def __repr__(self):
        parts = ", ".join(f"{n}:{r}" for n, r in sorted(self.ranks.items()))
        return f"FreeComplex({self.ring}, {{{parts}}})"


def zero_complex(ring: Ring) -> FreeComplex:
    return FreeComplex(ring, {}, {})


def unit_complex(ring: Ring, degree: int = 0, weight=None) -> FreeComplex:
    """The ring itself, concentrated in one degree."""
    weights = {degree: (weight,)} if weight is not None else None
    return FreeComplex(ring, {degree: 1}, {}, weights)


class ChainMap:
    """A degree-``shift`` map of complexes.

    Components ``f^n : source^n -> target^(n+shift)``.  A validated chain map
    commutes with the differentials up to the Koszul sign of its shift:
    ``d f = (-1)^shift f d``.  Raw maps (``validated=False``) skip the check;
    they are used for homotopies and for connecting maps below non-covers,
    which are genuinely not chain maps.
    """

    __slots__ = ("source", "target", "shift", "components", "validated")

    def __init__(self, source, target, components, shift: int = 0, *, validate: bool = True):
        self.source = source
        self.target = target
        self.shift = shift
        comps = {}
        for n, m in components.items():
            n = int(n)
            if not isinstance(m, Matrix):
                m = Matrix(source.ring, m)
            if m.nrows == 0 or m.ncols == 0 or m.is_zero():
                continue
            comps[n] = m
        self.components = comps
        for n, m in comps.items():
            want = (target.rank(n + shift), source.rank(n))
            if m.shape != want:
                raise ComplexError(f"component at degree {n} has shape {m.shape}, expected {want}")
        self.validated = False
        if validate:
            self.validate()

    def component(self, n: int) -> Matrix:
        m = self.components.get(n)
        if m is None:
            return Matrix.zeros(self.source.ring, self.target.rank(n + self.shift), self.source.rank(n))
        return m

    def validate(self):
        sign = -1 if self.shift % 2 else 1
        for n in sorted(set(self.source.ranks) | {n - 1 for n in self.source.ranks}):
            lhs = self.target.diff(n + self.shift) @ self.component(n)
            rhs = self.component(n + 1) @ self.source.diff(n)
            if sign < 0:
                rhs = rhs.neg()
            if lhs != rhs:
                raise ComplexError(f"map fails Koszul commutation at degree {n}")
        self.validated = True
        return self

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self o other (apply ``other`` first)."""
        if other.target is not self.source and other.target != self.source:
            raise ComplexError("composition mismatch")
        comps = {}
        for n in other.source.degrees():
            m = self.component(n + other.shift) @ other.component(n)
            comps[n] = m
        return ChainMap(
            other.source,
            self.target,
            comps,
            self.shift + other.shift,
            validate=False,
        )

    def add(self, other: "ChainMap") -> "ChainMap":
        if self.shift != other.shift:
            raise ComplexError("cannot add maps of different shifts")
        degrees = set(self.components) | set(other.components)
        comps = {n: self.component(n) + other.component(n) for n in degrees}
        return ChainMap(self.source, self.target, comps, self.shift, validate=False)

    def neg(self) -> "ChainMap":
        return ChainMap(
            self.source,
            self.target,
            {n: m.neg() for n, m in self.components.items()},
            self.shift,
            validate=False,
        )

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other):
        return (
            isinstance(other, ChainMap)
            and self.shift == other.shift
            and self.source == other.source
            and self.target == other.target
            and {n: self.component(n) for n in self.components}
            == {n: other.component(n) for n in other.components}
        )

    def __repr__(self):
        return f"ChainMap(shift={self.shift}, degrees={sorted(self.components)})"


def identity_map(c: FreeComplex) -> ChainMap:
    return ChainMap(c, c, {n: Matrix.identity(c.ring, r) for n, r in c.ranks.items()}, 0, validate=False)


def zero_map(source: FreeComplex, target: FreeComplex, shift: int = 0) -> ChainMap:
    return ChainMap(source, target, {}, shift, validate=False)


# ---------------------------------------------------------------------------
# Graded modules (homology output)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedPiece:
    rank: int
    torsion: tuple[int, ...] = ()
    weights: tuple[int, ...] | None = None

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion


@dataclass
class GradedModule:
    """Per-degree free rank plus invariant factors (and optional weights)."""

    pieces: dict[int, GradedPiece] = field(default_factory=dict)

    def piece(self, n: int) -> GradedPiece:
        return self.pieces.get(n, GradedPiece(0))

    def rank(self, n: int) -> int:
        return self.piece(n).rank

    def torsion(self, n: int) -> tuple[int, ...]:
        return self.piece(n).torsion

    def degrees(self) -> list[int]:
        return sorted(n for n, p in self.pieces.items() if not p.is_trivial())

    def ranks_dict(self) -> dict[int, int]:
        return {n: self.pieces[n].rank for n in self.degrees() if self.pieces[n].rank}

    def is_trivial(self) -> bool:
        return not self.degrees()

    def same_ranks_and_torsion(self, other: "GradedModule") -> bool:
        degs = set(self.degrees()) | set(other.degrees())
        return all(
            self.rank(n) == other.rank(n) and self.torsion(n) == other.torsion(n) for n in degs
        )

    def __eq__(self, other):
        return isinstance(other, GradedModule) and self.same_ranks_and_torsion(other) and all(
            self.piece(n).weights == other.piece(n).weights
            for n in set(self.degrees()) | set(other.degrees())
        )

    def __repr__(self):
        parts = []
        for n in self.degrees():
            p = self.pieces[n]
            t = "" if not p.torsion else "+" + "+".join(f"Z/{d}" for d in p.torsion)
            parts.append(f"{n}: r{p.rank}{t}")
        return "GradedModule({" + ", ".join(parts) + "})"


def _invariant_factors(m: Matrix) -> tuple[list[int], int]:
    """(nontrivial invariant factors, rank) of the cokernel presentation ``m``."""
    if m.ring.is_field:
        return [], rank(m)
    diag = snf_diagonal(m)
    return [d for d in diag if d > 1], len(diag)


def homology(c: FreeComplex) -> GradedModule:
    """Homology of ``c``: kernel mod image in every degree, exactly."""
    out = GradedModule()
    for n in c.degrees():
        ker = kernel_basis(c.diff(n))
        if ker.ncols == 0:
            continue
        img = c.diff(n - 1)
        if img.ncols == 0 or img.is_zero():
            tors: tuple[int, ...] = ()
            free = ker.ncols
            coords = None
        else:
            coords = solve_columns(ker, img)
            if coords is None:
                raise ComplexError("image does not lie in kernel (d o d != 0?)")
            tors_list, r = _invariant_factors(coords)
            tors = tuple(tors_list)
            free = ker.ncols - r
        wrow = None
        if c.weights is not None:
            wrow = _homology_weights(c, n)
        if free or tors:
            out.pieces[n] = GradedPiece(free, tors, wrow)
    return out


def _homology_weights(c: FreeComplex, n: int) -> tuple[int, ...]:
    """Weight multiset of the free part of ``H^n`` (weights split the complex)."""
    ws = sorted(set(c.weight_row(n)))
    multiset: list[int] = []
    for w in ws:
        sub = _weight_slice(c, w)
        h = homology(sub)
        multiset.extend([w] * h.rank(n))
    return tuple(multiset)


def _weight_slice(c: FreeComplex, w: int) -> FreeComplex:
    ranks = {}
    idx = {}
    for n in c.degrees():
        sel = [i for i, wi in enumerate(c.weight_row(n)) if wi == w]
        if sel:
            ranks[n] = len(sel)
            idx[n] = sel
    diffs = {}
    for n in ranks:
        if n + 1 in ranks:
            diffs[n] = c.diff(n).submatrix(idx[n + 1], idx[n])
    return FreeComplex(c.ring, ranks, diffs, check=False)


@dataclass
class HomologyData:
    """Homology with explicit generating cycles and a reduction map.

    ``generators[n]`` is a matrix whose columns are cycles representing an
    ordered generating set of ``H^n``; ``factors[n]`` lists the corresponding
    invariant factors (0 marks a free generator).  ``reduce(n, z)`` rewrites a
    cycle as coordinates over the generators (mod the factors), which makes
    induced maps on homology computable.
    """

    complex: FreeComplex
    generators: dict[int, Matrix]
    factors: dict[int, tuple[int, ...]]
    _kernels: dict[int, Matrix]
    _transforms: dict[int, Matrix]

    def reduce(self, n: int, z) -> tuple:
        ring = self.complex.ring
        ker = self._kernels.get(n)
        facs = self.factors.get(n, ())
        if ker is None or not facs:
            return ()
        col = Matrix.from_columns(ring, ker.nrows, [tuple(z)])
        sol = solve_columns(ker, col)
        if sol is None:
            raise ComplexError("vector is not a cycle")
        coords = (self._transforms[n] @ sol).column_vec(0)
        out = []
        for c, f in zip(coords, facs):
            if f == 0:
                out.append(c)
            else:
                out.append(c % f if not ring.is_field else ring.el(0))
        return tuple(out)

    def rank(self, n: int) -> int:
        return sum(1 for f in self.factors.get(n, ()) if f == 0)


def homology_with_generators(c: FreeComplex) -> HomologyData:
    """Homology with chosen cycle generators (deterministic bases).

    Over Z: Smith normal form of the image expressed in the kernel basis;
    generators are ordered torsion-first, free generators after, matching
    ``factors``.  Over fields all factors are 0.
    """
    ring = c.ring
    gens: dict[int, Matrix] = {}
    facs: dict[int, tuple[int, ...]] = {}
    kers: dict[int, Matrix] = {}
    trans: dict[int, Matrix] = {}
    for n in c.degrees():
        ker = kernel_basis(c.diff(n))
        if ker.ncols == 0:
            continue
        img = c.diff(n - 1)
        k = ker.ncols
        if img.ncols == 0 or img.is_zero():
            gens[n] = ker
            facs[n] = (0,) * k
            kers[n] = ker
            trans[n] = Matrix.identity(ring, k)
            continue
        coords = solve_columns(ker, img)
        if coords is None:
            raise ComplexError("image does not lie in kernel")
        if ring.is_field:
            # complete a basis of the image to a basis of the kernel
            from .linalg import column_space_basis

            img_basis = column_space_basis(coords)
            chosen = []
            cur = img_basis
            r = rank(cur)
            for j in range(k):
                e = [ring.zero] * k
                e[j] = ring.one
                cand = cur.hstack(Matrix.from_columns(ring, k, [tuple(e)]))
                if rank(cand) > r:
                    chosen.append(j)
                    cur = cand
                    r += 1
            gen_coords = Matrix.from_columns(
                ring, k, [tuple(ring.one if i == j else ring.zero for i in range(k)) for j in chosen]
            )
            gens[n] = ker @ gen_coords
            facs[n] = (0,) * len(chosen)
            kers[n] = ker
            # transform: coordinates over generators = solve [gens | img] and keep gen part
            full = gen_coords.hstack(img_basis)
            inv = solve_columns(full, Matrix.identity(ring, k))
            if inv is None:
                raise ComplexError("basis completion failed")
            trans[n] = inv.submatrix(range(len(chosen)), range(k))
        else:
            u, d, _ = smith_normal_form(coords)
            diag = [d[t, t] for t in range(min(d.nrows, d.ncols))]
            uinv = solve_columns(u, Matrix.identity(ZZ, k))
            order: list[int] = []
            factors: list[int] = []
            for t in range(k):
                dt = diag[t] if t < len(diag) else 0
                if dt == 1:
                    continue
                order.append(t)
                factors.append(dt if dt != 0 else 0)
            # torsion generators first (factor >= 2), then free (factor 0)
            tor = [i for i, f in zip(order, factors) if f != 0]
            fre = [i for i, f in zip(order, factors) if f == 0]
            sel = tor + fre
            facs[n] = tuple([f for f in factors if f != 0] + [0] * len(fre))
            gens[n] = ker @ uinv.submatrix(range(k), sel)
            kers[n] = ker
            trans[n] = u.submatrix(sel, range(k))
        if not facs[n]:
            gens.pop(n, None)
            facs.pop(n, None)
    return HomologyData(c, gens, facs, kers, trans)


def induced_map(f: ChainMap, hsource: HomologyData | None = None, htarget: HomologyData | None = None):
    """Matrices of the map induced by ``f`` on homology, per source degree.

    Returns ``{n: matrix}`` sending generator coordinates of ``H^n(source)``
    to generator coordinates of ``H^(n+shift)(target)``.
    """
    hs = hsource or homology_with_generators(f.source)
    ht = htarget or homology_with_generators(f.target)
    out = {}
    for n, gens in hs.generators.items():
        m = n + f.shift
        tfacs = ht.factors.get(m, ())
        cols = []
        for j in range(gens.ncols):
            img = f.component(n).apply(gens.column_vec(j))
            cols.append(ht.reduce(m, img) if tfacs else ())
        out[n] = Matrix.from_columns(f.source.ring, len(tfacs), cols)
    return out


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------


def shift(c: FreeComplex, k: int) -> FreeComplex:
    """``c[k]`` with ``c[k]^n = c^(n+k)`` and differential scaled by (-1)^k."""
    ranks = {n - k: r for n, r in c.ranks.items()}
    sign = -1 if k % 2 else 1
    diffs = {n - k: (m if sign > 0 else m.neg()) for n, m in c.diffs.items()}
    weights = None
    if c.weights is not None:
        weights = {n - k: ws for n, ws in c.weights.items()}
    return FreeComplex(c.ring, ranks, diffs, weights, check=False)


def direct_sum(cs, ring: Ring | None = None) -> FreeComplex:
    cs = list(cs)
    if not cs:
        if ring is None:
            raise ComplexError("direct sum of nothing needs an explicit ring")
        return zero_complex(ring)
    ring = cs[0].ring
    if any(c.ring != ring for c in cs):
        raise ComplexError("ring mismatch in direct sum")
    degrees = sorted({n for c in cs for n in c.ranks})
    ranks = {n: sum(c.rank(n) for c in cs) for n in degrees}
    diffs = {n: block_diagonal(ring, [c.diff(n) for c in cs]) for n in degrees}
    weights = None
    if any(c.weights is not None for c in cs):
        weights = {
            n: tuple(w for c in cs for w in (c.weight_row(n) or (0,) * c.rank(n)))
            for n in degrees
        }
    return FreeComplex(ring, ranks, diffs, weights, check=False)


def tensor(c: FreeComplex, d: FreeComplex) -> FreeComplex:
    """Tensor product with the Koszul rule ``d(x ⊗ y) = dx ⊗ y + (-1)^|x| x ⊗ dy``.

    Basis of degree ``n``: pairs ``(i, a, b)`` with ``i + j = n``, ordered by
    ``i`` ascending, then the basis index of ``c^i``, then of ``d^j``.
    Weights add.
    """
    if c.ring != d.ring:
        raise ComplexError("ring mismatch in tensor product")
    ring = c.ring
    pairs: dict[int, list[tuple[int, int]]] = {}
    offsets: dict[tuple[int, int], int] = {}
    ranks: dict[int, int] = {}
    for i in c.degrees():
        for j in d.degrees():
            n = i + j
            pairs.setdefault(n, []).append((i, j))
    for n in pairs:
        pairs[n].sort()
        total = 0
        for (i, j) in pairs[n]:
            offsets[(i, j)] = total
            total += c.rank(i) * d.rank(j)
        ranks[n] = total
    diffs = {}
    for n in sorted(pairs):
        if n + 1 not in pairs:
            continue
        m = [[ring.zero] * ranks[n] for _ in range(ranks[n + 1])]
        for (i, j) in pairs[n]:
            base = offsets[(i, j)]
            rc, rd = c.rank(i), d.rank(j)
            dc = c.diff(i)
            if (i + 1, j) in offsets and not dc.is_zero():
                tbase = offsets[(i + 1, j)]
                for a2 in range(dc.nrows):
                    for a in range(rc):
                        v = dc[a2, a]
                        if not ring.is_zero(v):
                            for b in range(rd):
                                m[tbase + a2 * rd + b][base + a * rd + b] = v
            dd = d.diff(j)
            if (i, j + 1) in offsets and not dd.is_zero():
                tbase = offsets[(i, j + 1)]
                sgn = -1 if i % 2 else 1
                for b2 in range(dd.nrows):
                    for b in range(rd):
                        v = dd[b2, b]
                        if not ring.is_zero(v):
                            if sgn < 0:
                                v = ring.neg(v)
                            for a in range(rc):
                                m[tbase + a * dd.nrows + b2][base + a * rd + b] = v
        diffs[n] = Matrix(ring, tuple(tuple(r) for r in m), coerce=False)
    weights = None
    if c.weights is not None or d.weights is not None:
        weights = {}
        for n in pairs:
            row: list[int] = []
            for (i, j) in pairs[n]:
                wc = c.weight_row(i) or (0,) * c.rank(i)
                wd = d.weight_row(j) or (0,) * d.rank(j)
                for a in range(c.rank(i)):
                    for b in range(d.rank(j)):
                        row.append(wc[a] + wd[b])
            weights[n] = tuple(row)
    return FreeComplex(ring, ranks, diffs, weights)


def tensor_map(f: ChainMap, g: ChainMap) -> ChainMap:
    """``f ⊗ g`` for degree-0 maps, in the basis order used by :func:`tensor`."""
    if f.shift or g.shift:
        raise ComplexError("tensor_map handles degree-0 maps only")
    src = tensor(f.source, g.source)
    tgt = tensor(f.target, g.target)
    ring = src.ring
    comps = {}
    for n in src.degrees():
        rows = tgt.rank(n)
        cols = src.rank(n)
        m = [[ring.zero] * cols for _ in range(rows)]
        soff = _tensor_offsets(f.source, g.source, n)
        toff = _tensor_offsets(f.target, g.target, n)
        for (i, j), base in soff.items():
            if (i, j) not in toff:
                continue
            tbase = toff[(i, j)]
            fm, gm = f.component(i), g.component(j)
            for a2 in range(fm.nrows):
                for a in range(fm.ncols):
                    va = fm[a2, a]
                    if ring.is_zero(va):
                        continue
                    for b2 in range(gm.nrows):
                        for b in range(gm.ncols):
                            vb = gm[b2, b]
                            if not ring.is_zero(vb):
                                m[tbase + a2 * gm.nrows + b2][base + a * gm.ncols + b] = ring.mul(va, vb)
        comps[n] = Matrix(ring, tuple(tuple(r) for r in m), coerce=False)
    return ChainMap(src, tgt, comps, 0, validate=False)


def _tensor_offsets(c: FreeComplex, d: FreeComplex, n: int) -> dict[tuple[int, int], int]:
    out = {}
    total = 0
    for i in sorted(c.ranks):
        j = n - i
        if d.rank(j):
            out[(i, j)] = total
            total += c.rank(i) * d.rank(j)
    return out


def cone(f: ChainMap) -> FreeComplex:
    """Mapping cone of a degree-0 chain map: ``cone^n = target^n ⊕ source^(n+1)``."""
    if f.shift != 0:
        raise ComplexError("cone requires a degree-0 chain map")
    if not f.validated:
        f.validate()
    c, d = f.source, f.target
    ring = c.ring
    degrees = sorted(set(d.degrees()) | {n - 1 for n in c.degrees()})
    ranks = {n: d.rank(n) + c.rank(n + 1) for n in degrees}
    diffs = {}
    for n in degrees:
        rows = ranks.get(n + 1, 0)
        cols = ranks[n]
        if rows == 0 or cols == 0:
            continue
        m = [[ring.zero] * cols for _ in range(rows)]
        dd = d.diff(n)
        for i in range(dd.nrows):
            for j in range(dd.ncols):
                m[i][j] = dd[i, j]
        fm = f.component(n + 1)
        for i in range(fm.nrows):
            for j in range(fm.ncols):
                m[i][d.rank(n) + j] = fm[i, j]
        dc = c.diff(n + 1)
        for i in range(dc.nrows):
            for j in range(dc.ncols):
                m[d.rank(n + 1) + i][d.rank(n) + j] = ring.neg(dc[i, j])
        diffs[n] = Matrix(ring, tuple(tuple(r) for r in m), coerce=False)
    weights = None
    if c.weights is not None or d.weights is not None:
        weights = {
            n: tuple((d.weight_row(n) or (0,) * d.rank(n)) + (c.weight_row(n + 1) or (0,) * c.rank(n + 1)))
            for n in degrees
        }
    return FreeComplex(ring, ranks, diffs, weights)


def dualize(c: FreeComplex) -> FreeComplex:
    """Linear dual: degree ``n`` becomes ``-n``, matrices transpose, weights negate.

    An exact involution: ``dualize(dualize(c)) == c``.
    """
    ranks = {-n: r for n, r in c.ranks.items()}
    diffs = {}
    for n, m in c.diffs.items():
        # d^n : c^n -> c^(n+1) dualizes to a map in degree -(n+1)
        diffs[-(n + 1)] = m.transpose()
    weights = None
    if c.weights is not None:
        weights = {-n: tuple(-w for w in ws) for n, ws in c.weights.items()}
    return FreeComplex(c.ring, ranks, diffs, weights, check=False)


def dualize_map(f: ChainMap) -> ChainMap:
    """Dual of a degree-0 chain map (reverses direction)."""
    if f.shift != 0:
        raise ComplexError("dualize_map handles degree-0 maps only")
    src = dualize(f.target)
    tgt = dualize(f.source)
    comps = {-n: f.component(n).transpose() for n in f.components}
    return ChainMap(src, tgt, comps, 0, validate=False)


def null_homotopy(f: ChainMap):
    """Solve ``d h + h d = f`` for ``h`` of shift ``f.shift - 1``.

    Returns a raw :class:`ChainMap` witness, or ``None`` when the linear
    system has no solution over the ring (over Z this is decided exactly via
    Smith normal form).
    """
    c, d, k = f.source, f.target, f.shift
    ring = c.ring
    # unknowns: h^n : c^n -> d^(n+k-1), entry-ordered (n, row, col)
    blocks = []
    index: dict[tuple[int, int, int], int] = {}
    pos = 0
    for n in c.degrees():
        rows = d.rank(n + k - 1)
        cols = c.rank(n)
        if rows and cols:
            blocks.append((n, rows, cols))
            for i in range(rows):
                for j in range(cols):
                    index[(n, i, j)] = pos
                    pos += 1
    nvars = pos
    eq_rows = []
    rhs = []
    for n in sorted(set(c.degrees()) | {m - 1 for m in c.degrees()}):
        fn = f.component(n)
        rows, cols = fn.shape
        if rows == 0 or cols == 0:
            if not fn.is_zero():
                raise ComplexError("unreachable")
            continue
        dd = d.diff(n + k - 1)
        dc = c.diff(n)
        for i in range(rows):
            for j in range(cols):
                row = [ring.zero] * nvars
                # (d h)^n [i][j] = sum_t dd[i][t] h^n[t][j]
                for t in range(dd.ncols):
                    key = (n, t, j)
                    if key in index and not ring.is_zero(dd[i, t]):
                        row[index[key]] = ring.add(row[index[key]], dd[i, t])
                # (h d)^n [i][j] = sum_t h^{n+1}[i][t] dc[t][j]
                for t in range(dc.nrows):
                    key = (n + 1, i, t)
                    if key in index and not ring.is_zero(dc[t, j]):
                        row[index[key]] = ring.add(row[index[key]], dc[t, j])
                eq_rows.append(tuple(row))
                rhs.append(fn[i, j])
    if not eq_rows:
        return zero_map(c, d, k - 1)
    system = Matrix(ring, tuple(eq_rows), coerce=False)
    sol = solve_columns(system, Matrix.column(ring, rhs))
    if sol is None:
        return None
    comps: dict[int, list[list]] = {}
    for n, rows, cols in blocks:
        comps[n] = [[sol[index[(n, i, j)], 0] for j in range(cols)] for i in range(rows)]
    return ChainMap(c, d, {n: Matrix(ring, m) for n, m in comps.items()}, k - 1, validate=False)


def homotopy_defect(f: ChainMap, h: ChainMap) -> bool:
    """Check ``d h + h d == f`` exactly."""
    c, d = f.source, f.target
    for n in sorted(set(c.degrees()) | {m - 1 for m in c.degrees()}):
        lhs = (d.diff(n + h.shift) @ h.component(n)) + (h.component(n + 1) @ c.diff(n))
        if lhs != f.component(n):
            return False
    return True
