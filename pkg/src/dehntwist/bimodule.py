"""A-infinity bimodules, pre-morphisms, cones, and their mechanical checks.

A bimodule structure map mu^{r|1|s} takes (a_1, ..., a_r, m, b_1, ..., b_s)
with everything listed in path order: the a-chain ends at the pair's first
object, the b-chain starts at its second, and the output lives at the pair
(start of a-chain, end of b-chain).  Maps have degree 1 - r - s.

Pre-morphism components f^{r|1|s} have degree (deg f) - r - s.  The
hom-complex differential is the usual four-sum combination: compose with the
target's structure maps, feed the source's structure maps in, and insert a
category operation into either side chain.  Everything is over GF(2), so
there are no signs anywhere.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping, Sequence

from .category import AInftyCategory, AInftyFunctor, CategoryError, Chain
from .f2 import ChainComplex, GradedMap, GradedSpace, Label, XorBasis

ZERO: frozenset = frozenset()

Pair = tuple[str, str]


class BimoduleError(Exception):
    pass


class Bimodule:
    """Base class: graded spaces per object pair plus structure maps.

    Subclasses provide ``_space`` and ``_act``; evaluation is memoized on
    the instance, and all values are immutable, so instances are safe to
    share.
    """

    memoize_act = True

    def __init__(self, cat: AInftyCategory, name: str):
        self.cat = cat
        self.name = name
        self._spaces: dict[Pair, GradedSpace] = {}
        self._memo: dict[tuple, frozenset] = {}

    # subclass surface -------------------------------------------------------

    def _space(self, a: str, b: str) -> GradedSpace:
        raise NotImplementedError

    def _act(self, achain: Chain, a: str, b: str, m: Label, bchain: Chain) -> frozenset:
        raise NotImplementedError

    # public surface -----------------------------------------------------------

    def space(self, a: str, b: str) -> GradedSpace:
        sp = self._spaces.get((a, b))
        if sp is None:
            sp = self._space(a, b)
            self._spaces[(a, b)] = sp
        return sp

    def pairs(self) -> list[Pair]:
        return [(a, b) for a in self.cat.objects for b in self.cat.objects]

    def act(self, achain: Chain, a: str, b: str, m: Label, bchain: Chain) -> frozenset:
        if not self.memoize_act:
            return self._act(achain, a, b, m, bchain)
        key = (achain, a, b, m, bchain)
        out = self._memo.get(key)
        if out is None:
            out = self._act(achain, a, b, m, bchain)
            self._memo[key] = out
        return out

    def output_pair(self, achain: Chain, a: str, b: str, bchain: Chain) -> Pair:
        a2 = self.cat.gen(achain[0]).src if achain else a
        b2 = self.cat.gen(bchain[-1]).dst if bchain else b
        return a2, b2

    def internal_differential(self, a: str, b: str) -> GradedMap:
        sp = self.space(a, b)
        return GradedMap.from_function(sp, sp, 1, lambda m: self.act((), a, b, m, ()))

    def complex_at(self, a: str, b: str) -> ChainComplex:
        return ChainComplex(self.space(a, b), self.internal_differential(a, b))

    def dim(self, a: str, b: str) -> int:
        return self.space(a, b).dim

    def __repr__(self) -> str:
        return f"Bimodule({self.name})"


class _FunctionBimodule(Bimodule):
    def __init__(self, cat, name, space_fn, act_fn, memoize: bool = True):
        super().__init__(cat, name)
        self._space_fn = space_fn
        self._act_fn = act_fn
        self.memoize_act = memoize

    def _space(self, a, b):
        return self._space_fn(a, b)

    def _act(self, achain, a, b, m, bchain):
        return self._act_fn(achain, a, b, m, bchain)


def diagonal(cat: AInftyCategory) -> Bimodule:
    """The category acting on its own hom spaces: mu^{r|1|s} is mu_{r+s+1}."""

    def act(achain, a, b, m, bchain):
        return cat.mu_apply(achain + (m,) + bchain)

    # evaluation is a single table lookup, cheaper than caching it
    return _FunctionBimodule(cat, "Diag", lambda a, b: cat.hom(a, b), act, memoize=False)


def zero_bimodule(cat: AInftyCategory, name: str = "0") -> Bimodule:
    empty = GradedSpace(())
    return _FunctionBimodule(cat, name, lambda a, b: empty, lambda *args: ZERO)


def product_bimodule(m_left, n_right) -> Bimodule:
    """Tensor a left and a right module into a bimodule.

    Structure maps act on one factor at a time; both factors move only for
    r = s = 0, and mixed-side inputs give zero.
    """
    from .modules import LEFT, RIGHT

    if m_left.side != LEFT or n_right.side != RIGHT:
        raise BimoduleError("product_bimodule wants (left module, right module)")
    cat = m_left.cat

    def space(a, b):
        ms, ns = m_left.space(a), n_right.space(b)
        return GradedSpace(
            ((x, y), dx + dy)
            for x, dx in zip(ms.labels, ms.degrees)
            for y, dy in zip(ns.labels, ns.degrees)
        )

    def act(achain, a, b, m, bchain):
        x, y = m
        r, s = len(achain), len(bchain)
        out: set = set()
        if r and s:
            return ZERO
        if r:
            out ^= {(x2, y) for x2 in m_left.act(achain, a, x)}
        elif s:
            out ^= {(x, y2) for y2 in n_right.act(bchain, b, y)}
        else:
            out ^= {(x2, y) for x2 in m_left.act((), a, x)}
            out ^= {(x, y2) for y2 in n_right.act((), b, y)}
        return frozenset(out)

    return _FunctionBimodule(cat, f"{m_left.name}(x){n_right.name}", space, act)


def graph_bimodule(cat: AInftyCategory, phi: AInftyFunctor) -> Bimodule:
    """Bimodule of an endofunctor, stored as (A, B) |-> hom(A, phi(B)).

    The functor's components are applied to the right-side inputs, one
    consecutive block per component, before multiplying; with the identity
    functor this reproduces the diagonal bimodule on the nose.
    """

    def space(a, b):
        return cat.hom(a, phi.on_object(b))

    strict = phi.strict

    def act(achain, a, b, m, bchain):
        s = len(bchain)
        if strict:
            mapped: list[str] = []
            for g in bchain:
                (img,) = phi.component((g,))
                mapped.append(img)
            return cat.mu_apply(achain + (m,) + tuple(mapped))
        out: set = set()
        for blocks in _compositions(bchain):
            choices = [sorted(phi.component(blk)) for blk in blocks]
            if any(not c for c in choices):
                continue
            for picked in _product(choices):
                out ^= set(cat.mu_apply(achain + (m,) + picked))
        return frozenset(out)

    return _FunctionBimodule(cat, f"Graph({getattr(phi, 'name', 'phi')})", space, act)


def _compositions(chain: Chain):
    """Splittings of a chain into consecutive nonempty blocks (none for empty)."""
    if not chain:
        yield ()
        return
    n = len(chain)
    for cuts in range(1 << (n - 1)):
        blocks = []
        start = 0
        for i in range(n - 1):
            if cuts & (1 << i):
                blocks.append(chain[start : i + 1])
                start = i + 1
        blocks.append(chain[start:])
        yield tuple(blocks)


def _product(choices: Sequence[Sequence[str]]):
    if not choices:
        yield ()
        return
    head, *rest = choices
    for h in head:
        for tail in _product(rest):
            yield (h,) + tail


class ShiftedBimodule(Bimodule):
    """Same labels and structure maps, degrees lowered by the shift amount."""

    def __init__(self, inner: Bimodule, k: int):
        super().__init__(inner.cat, f"{inner.name}[{k}]")
        self.inner = inner
        self.k = k

    def _space(self, a, b):
        return self.inner.space(a, b).shifted(self.k)

    def _act(self, achain, a, b, m, bchain):
        return self.inner.act(achain, a, b, m, bchain)


def shift(m: Bimodule, k: int) -> Bimodule:
    if isinstance(m, ShiftedBimodule):
        total = m.k + k
        return m.inner if total == 0 else ShiftedBimodule(m.inner, total)
    return m if k == 0 else ShiftedBimodule(m, k)


class RelabeledBimodule(Bimodule):
    """A bimodule with its basis renamed through a per-pair bijection."""

    def __init__(self, inner: Bimodule, name: str, forward: Callable[[Pair, Label], Label]):
        super().__init__(inner.cat, name)
        self.inner = inner
        self._forward = forward
        self._back: dict[Pair, dict[Label, Label]] = {}

    def _maps(self, pair: Pair) -> dict[Label, Label]:
        back = self._back.get(pair)
        if back is None:
            inner_sp = self.inner.space(*pair)
            back = {}
            for lab in inner_sp.labels:
                new = self._forward(pair, lab)
                if new in back:
                    raise BimoduleError(f"relabeling is not injective at {pair}: {new!r}")
                back[new] = lab
            self._back[pair] = back
        return back

    def _space(self, a, b):
        inner_sp = self.inner.space(a, b)
        return GradedSpace(
            (self._forward((a, b), lab), d) for lab, d in zip(inner_sp.labels, inner_sp.degrees)
        )

    def _act(self, achain, a, b, m, bchain):
        old = self._maps((a, b))[m]
        out_pair = self.output_pair(achain, a, b, bchain)
        self._maps(out_pair)  # make sure the forward map is populated
        fwd = self._forward
        return frozenset(fwd(out_pair, y) for y in self.inner.act(achain, a, b, old, bchain))


# -- pre-morphisms -----------------------------------------------------------


class BimodulePreMorphism:
    """A family of components f^{r|1|s} between two bimodules.

    ``comp`` evaluates one component on a basis input; components of a
    normalized pre-morphism vanish when a side chain contains a unit.
    """

    def __init__(
        self,
        source: Bimodule,
        target: Bimodule,
        degree: int,
        name: str,
        comp_fn: Callable[[Chain, str, str, Label, Chain], frozenset],
        normalized: bool = True,
    ):
        self.source = source
        self.target = target
        self.degree = degree
        self.name = name
        self._comp_fn = comp_fn
        self.normalized = normalized
        self._memo: dict[tuple, frozenset] = {}

    def comp(self, achain: Chain, a: str, b: str, m: Label, bchain: Chain) -> frozenset:
        key = (achain, a, b, m, bchain)
        out = self._memo.get(key)
        if out is None:
            if self.normalized and any(
                self.source.cat.is_unit(g) for g in achain + bchain
            ):
                out = ZERO
            else:
                out = self._comp_fn(achain, a, b, m, bchain)
            self._memo[key] = out
        return out

    def __repr__(self) -> str:
        return f"PreMorphism({self.name}: {self.source.name} -> {self.target.name})"


def zero_premorphism(source: Bimodule, target: Bimodule, degree: int = 0) -> BimodulePreMorphism:
    return BimodulePreMorphism(source, target, degree, "0", lambda *a: ZERO)


def identity_premorphism(m: Bimodule) -> BimodulePreMorphism:
    def comp(achain, a, b, lab, bchain):
        if achain or bchain:
            return ZERO
        return frozenset({lab})

    return BimodulePreMorphism(m, m, 0, f"id({m.name})", comp)


def sum_premorphisms(f: BimodulePreMorphism, g: BimodulePreMorphism, name: str | None = None):
    if f.degree != g.degree:
        raise BimoduleError("cannot add pre-morphisms of different degrees")

    def comp(achain, a, b, m, bchain):
        return f.comp(achain, a, b, m, bchain) ^ g.comp(achain, a, b, m, bchain)

    return BimodulePreMorphism(
        f.source, f.target, f.degree, name or f"{f.name}+{g.name}", comp,
        normalized=f.normalized and g.normalized,
    )


def differential_terms(
    f: BimodulePreMorphism, achain: Chain, a: str, b: str, m: Label, bchain: Chain
) -> tuple[frozenset, frozenset, frozenset, frozenset]:
    """The four sums of the hom-complex differential, evaluated separately.

    Returned in the order: compose with the target's structure maps, feed
    the source's structure maps into f, insert a category operation in the
    a-chain, insert one in the b-chain.  Their total is (df) at this input.
    """
    cat = f.source.cat
    r, s = len(achain), len(bchain)

    t1: set = set()
    for i in range(r + 1):
        for j in range(s + 1):
            mid = f.comp(achain[i:], a, b, m, bchain[:j])
            if not mid:
                continue
            a_i, b_j = f.source.output_pair(achain[i:], a, b, bchain[:j])
            for y in mid:
                t1 ^= f.target.act(achain[:i], a_i, b_j, y, bchain[j:])

    t2: set = set()
    for p in range(r + 1):
        for q in range(s + 1):
            inner = f.source.act(achain[r - p :], a, b, m, bchain[:q])
            if not inner:
                continue
            a_p, b_q = f.source.output_pair(achain[r - p :], a, b, bchain[:q])
            for y in inner:
                t2 ^= f.comp(achain[: r - p], a_p, b_q, y, bchain[q:])

    t3: set = set()
    for w in range(1, r + 1):
        for t in range(0, r - w + 1):
            for u in cat.mu_apply(achain[t : t + w]):
                t3 ^= f.comp(achain[:t] + (u,) + achain[t + w :], a, b, m, bchain)

    t4: set = set()
    for w in range(1, s + 1):
        for t in range(0, s - w + 1):
            for u in cat.mu_apply(bchain[t : t + w]):
                t4 ^= f.comp(achain, a, b, m, bchain[:t] + (u,) + bchain[t + w :])

    return frozenset(t1), frozenset(t2), frozenset(t3), frozenset(t4)


def differential_of(f: BimodulePreMorphism) -> BimodulePreMorphism:
    """The hom-complex differential of f; f is a morphism iff this is zero."""

    def comp(achain, a, b, m, bchain):
        t1, t2, t3, t4 = differential_terms(f, achain, a, b, m, bchain)
        return t1 ^ t2 ^ t3 ^ t4

    return BimodulePreMorphism(
        f.source, f.target, f.degree + 1, f"d({f.name})", comp, normalized=f.normalized
    )


def premorphism_nonzero_witness(
    f: BimodulePreMorphism, bound: int, units: bool = False
) -> tuple | None:
    """First input with r + s <= bound on which f does not vanish, or None."""
    cat = f.source.cat
    for total in range(bound + 1):
        for r in range(total + 1):
            s = total - r
            for a, b in f.source.pairs():
                for achain in cat.chains(r, dst=a, units=units):
                    for bchain in cat.chains(s, src=b, units=units):
                        for m in f.source.space(a, b).labels:
                            out = f.comp(achain, a, b, m, bchain)
                            if out:
                                return (achain, a, b, m, bchain, out)
    return None


def is_closed(f: BimodulePreMorphism, bound: int) -> bool:
    return premorphism_nonzero_witness(differential_of(f), bound) is None


def component_degree_violations(
    f: BimodulePreMorphism, bound: int, units: bool = False
) -> list[tuple]:
    """Outputs breaking deg(out) = deg(in) + deg(f) - r - s, up to the bound."""
    cat = f.source.cat
    bad = []
    for total in range(bound + 1):
        for r in range(total + 1):
            s = total - r
            for a, b in f.source.pairs():
                src_sp = f.source.space(a, b)
                for achain in cat.chains(r, dst=a, units=units):
                    for bchain in cat.chains(s, src=b, units=units):
                        a2, b2 = f.source.output_pair(achain, a, b, bchain)
                        tgt_sp = f.target.space(a2, b2)
                        side = cat.chain_degree(achain) + cat.chain_degree(bchain)
                        for m in src_sp.labels:
                            want = src_sp.degree(m) + side + f.degree - r - s
                            for y in f.comp(achain, a, b, m, bchain):
                                if tgt_sp.degree(y) != want:
                                    bad.append((achain, a, b, m, bchain, y, tgt_sp.degree(y), want))
    return bad


# -- cones ---------------------------------------------------------------------


class ConeBimodule(Bimodule):
    """Mapping cone of a closed degree-0 pre-morphism.

    The source sits inside shifted by one, the structure maps are the
    block-triangular combination of both sides' maps with the morphism
    feeding the shifted part into the target part.  Labels are
    ('c0', x) for the shifted source and ('c1', y) for the target.
    """

    def __init__(self, f: BimodulePreMorphism, check_bound: int | None = 4):
        if f.degree != 0:
            raise BimoduleError(f"cone of {f.name}: morphism must have degree 0")
        if check_bound is not None:
            witness = premorphism_nonzero_witness(differential_of(f), check_bound)
            if witness is not None:
                raise BimoduleError(
                    f"cone of {f.name}: morphism is not closed, first nonzero "
                    f"differential component at {witness[:5]} -> {sorted(map(repr, witness[5]))}"
                )
        super().__init__(f.source.cat, f"Cone({f.name})")
        self.premorphism = f
        self.x = f.source
        self.y = f.target

    def _space(self, a, b):
        xs = self.x.space(a, b)
        ys = self.y.space(a, b)
        gens = [(("c0", lab), d - 1) for lab, d in zip(xs.labels, xs.degrees)]
        gens.extend((("c1", lab), d) for lab, d in zip(ys.labels, ys.degrees))
        return GradedSpace(gens)

    def _act(self, achain, a, b, m, bchain):
        part, lab = m
        out: set = set()
        if part == "c0":
            out ^= {("c0", z) for z in self.x.act(achain, a, b, lab, bchain)}
            out ^= {("c1", z) for z in self.premorphism.comp(achain, a, b, lab, bchain)}
        else:
            out ^= {("c1", z) for z in self.y.act(achain, a, b, lab, bchain)}
        return frozenset(out)


def cone(f: BimodulePreMorphism, check_bound: int | None = 4) -> ConeBimodule:
    return ConeBimodule(f, check_bound=check_bound)


def cone_inclusion_map(c: ConeBimodule, a: str, b: str) -> GradedMap:
    """Chain map Y(a,b) -> Cone(a,b) at one pair."""
    return GradedMap.from_function(
        c.y.space(a, b), c.space(a, b), 0, lambda y: frozenset({("c1", y)})
    )


def cone_projection_map(c: ConeBimodule, a: str, b: str) -> GradedMap:
    """Chain map Cone(a,b) -> X(a,b) of degree +1 (projection to the shifted part)."""
    def fn(lab):
        part, inner = lab
        return frozenset({inner}) if part == "c0" else ZERO

    return GradedMap.from_function(c.space(a, b), c.x.space(a, b), 1, fn)


# -- relation suite and table comparisons --------------------------------------


def bimodule_relation_residual(
    m: Bimodule, achain: Chain, a: str, b: str, lab: Label, bchain: Chain
) -> frozenset:
    cat = m.cat
    r, s = len(achain), len(bchain)
    out: set = set()
    for p in range(r + 1):
        for q in range(s + 1):
            inner = m.act(achain[r - p :], a, b, lab, bchain[:q])
            if not inner:
                continue
            a_p, b_q = m.output_pair(achain[r - p :], a, b, bchain[:q])
            for y in inner:
                out ^= m.act(achain[: r - p], a_p, b_q, y, bchain[q:])
    for w in range(1, r + 1):
        for t in range(0, r - w + 1):
            for u in cat.mu_apply(achain[t : t + w]):
                out ^= m.act(achain[:t] + (u,) + achain[t + w :], a, b, lab, bchain)
    for w in range(1, s + 1):
        for t in range(0, s - w + 1):
            for u in cat.mu_apply(bchain[t : t + w]):
                out ^= m.act(achain, a, b, lab, bchain[:t] + (u,) + bchain[t + w :])
    return frozenset(out)


def bimodule_relation_failures(
    m: Bimodule, bound: int, units: bool = False, max_failures: int = 10
) -> list[tuple]:
    """Sweep the bimodule relations over all inputs with r + s <= bound."""
    cat = m.cat
    failures: list[tuple] = []
    for total in range(bound + 1):
        for r in range(total + 1):
            s = total - r
            for a, b in m.pairs():
                space = m.space(a, b)
                if not space.dim:
                    continue
                for achain in cat.chains(r, dst=a, units=units):
                    for bchain in cat.chains(s, src=b, units=units):
                        for lab in space.labels:
                            res = bimodule_relation_residual(m, achain, a, b, lab, bchain)
                            if res:
                                failures.append((achain, a, b, lab, bchain, res))
                                if len(failures) >= max_failures:
                                    return failures
    return failures


def structure_tables_equal(
    m1: Bimodule, m2: Bimodule, bound: int, units: bool = True
) -> tuple[bool, tuple | None]:
    """Compare spaces and all structure constants with r + s <= bound.

    Equality is literal: same labels in the same order with the same
    degrees, and identical outputs on every input.
    """
    for pair in m1.pairs():
        if m1.space(*pair) != m2.space(*pair):
            return False, ("space", pair)
    cat = m1.cat
    for total in range(bound + 1):
        for r in range(total + 1):
            s = total - r
            for a, b in m1.pairs():
                space = m1.space(a, b)
                for achain in cat.chains(r, dst=a, units=units):
                    for bchain in cat.chains(s, src=b, units=units):
                        for lab in space.labels:
                            o1 = m1.act(achain, a, b, lab, bchain)
                            o2 = m2.act(achain, a, b, lab, bchain)
                            if o1 != o2:
                                return False, ("act", achain, a, b, lab, bchain, o1, o2)
    return True, None


def premorphisms_equal(
    f1: BimodulePreMorphism, f2: BimodulePreMorphism, bound: int, units: bool = False
) -> tuple[bool, tuple | None]:
    cat = f1.source.cat
    for total in range(bound + 1):
        for r in range(total + 1):
            s = total - r
            for a, b in f1.source.pairs():
                for achain in cat.chains(r, dst=a, units=units):
                    for bchain in cat.chains(s, src=b, units=units):
                        for m in f1.source.space(a, b).labels:
                            o1 = f1.comp(achain, a, b, m, bchain)
                            o2 = f2.comp(achain, a, b, m, bchain)
                            if o1 != o2:
                                return False, (achain, a, b, m, bchain, o1, o2)
    return True, None


# -- submodules and induced maps -----------------------------------------------


def check_subbimodule(
    m: Bimodule, sub: Mapping[Pair, Iterable[Label]], bound: int
) -> None:
    """Verify a basis-aligned subspace is closed under all structure maps."""
    cat = m.cat
    sub_sets = {pair: frozenset(labels) for pair, labels in sub.items()}
    for pair, labels in sub_sets.items():
        space = m.space(*pair)
        for lab in labels:
            if lab not in space:
                raise BimoduleError(f"label {lab!r} is not in {m.name}{pair}")
    for total in range(bound + 1):
        for r in range(total + 1):
            s = total - r
            for (a, b), labels in sub_sets.items():
                for achain in cat.chains(r, dst=a, units=True):
                    for bchain in cat.chains(s, src=b, units=True):
                        out_pair = m.output_pair(achain, a, b, bchain)
                        allowed = sub_sets.get(out_pair, frozenset())
                        for lab in labels:
                            out = m.act(achain, a, b, lab, bchain)
                            stray = out - allowed
                            if stray:
                                raise BimoduleError(
                                    f"subspace of {m.name} is not closed: "
                                    f"{(achain, a, b, lab, bchain)} leaks {sorted(map(repr, stray))}"
                                )


def induced_map_ranks(
    source_cx: ChainComplex, target_cx: ChainComplex, chain_map: GradedMap
) -> dict[int, int]:
    """Per-degree rank of the map induced on homology by a chain map."""
    ranks: dict[int, int] = {}
    shift_deg = chain_map.degree
    for q in source_cx.space.degrees_present():
        block = source_cx.differential.block(q)
        cycles = block.kernel_basis()
        if not cycles:
            continue
        tq = q + shift_deg
        boundaries = XorBasis()
        prev = target_cx.differential.block(tq - 1)
        for j in range(prev.cols):
            boundaries.add(prev.column_bits(j))
        base = boundaries.rank
        mapped = chain_map.block(q)
        for vec in cycles:
            bits = 0
            for pos, v in enumerate(vec):
                if v:
                    bits |= 1 << pos
            boundaries.add(mapped.apply(bits))
        extra = boundaries.rank - base
        if extra:
            ranks[q] = extra
    return ranks


def restriction_nontriviality(
    f: BimodulePreMorphism, sub: Mapping[Pair, Iterable[Label]], bound: int = 4
) -> dict:
    """Restrict f to a basis-aligned sub-bimodule and test homological triviality.

    The verdict is nontrivial iff the map induced on homology by the
    restricted 0|1|0 component has rank at least one at some pair.
    """
    check_subbimodule(f.source, sub, bound)
    verdict = {"nontrivial": False, "ranks": {}}
    for pair, labels in sub.items():
        labels = list(labels)
        if not labels:
            continue
        a, b = pair
        full = f.source.space(a, b)
        sub_space = GradedSpace((lab, full.degree(lab)) for lab in full.labels if lab in set(labels))
        sub_d = GradedMap.from_function(
            sub_space, sub_space, 1, lambda m: f.source.act((), a, b, m, ())
        )
        sub_cx = ChainComplex(sub_space, sub_d)
        tgt_cx = f.target.complex_at(a, b)
        cmap = GradedMap.from_function(
            sub_space, f.target.space(a, b), 0, lambda m: f.comp((), a, b, m, ())
        )
        ranks = induced_map_ranks(sub_cx, tgt_cx, cmap)
        if ranks:
            verdict["nontrivial"] = True
            verdict["ranks"][pair] = ranks
    return verdict
