"""Capped complexes of bimodule pre-morphisms.

The complex of pre-morphisms between two bimodules is graded by total
degree; its basis in this model consists of elementary components, one per
(input chain pair, source basis element, target basis element) with
r + s <= cap.  The differential never lowers r + s, so capping is honest:
the truncation is again a complex and d**2 = 0 is asserted exactly.

Normalized complexes (the default) only carry components on unit-free side
chains.  Ranks are computed per total degree with bitset elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .bimodule import Bimodule, BimodulePreMorphism
from .category import Chain
from .f2 import Label, XorBasis, _bit_positions

Pair = tuple[str, str]

# an elementary pre-morphism: (achain, pair of m, m, bchain, output label)
PE = tuple[Chain, Pair, Label, Chain, Label]


class HomComplexError(Exception):
    pass


def act_reverse_table(
    m: Bimodule, cap: int, units: bool = False
) -> dict[tuple[Pair, Label], list[tuple[Chain, Pair, Label, Chain]]]:
    """Index every structure-map evaluation of a bimodule by its outputs.

    Maps (output pair, output label) to the inputs (alpha, pair, m, beta)
    whose evaluation contains it, over all side chains of total length <= cap.
    """
    table: dict[tuple[Pair, Label], list[tuple[Chain, Pair, Label, Chain]]] = {}
    cat = m.cat
    for total in range(cap + 1):
        for p in range(total + 1):
            q = total - p
            for a, b in m.pairs():
                space = m.space(a, b)
                if not space.dim:
                    continue
                for alpha in cat.chains(p, dst=a, units=units):
                    for beta in cat.chains(q, src=b, units=units):
                        out_pair = m.output_pair(alpha, a, b, beta)
                        for lab in space.labels:
                            for y in m.act(alpha, a, b, lab, beta):
                                table.setdefault((out_pair, y), []).append(
                                    (alpha, (a, b), lab, beta)
                                )
    return table


class CappedHomComplex:
    """The pre-morphism complex Hom(source, target) with r + s <= cap."""

    def __init__(
        self,
        source: Bimodule,
        target: Bimodule,
        cap: int,
        normalized: bool = True,
        check_d_squared: bool = True,
    ):
        if cap < 0:
            raise HomComplexError("cap must be nonnegative")
        self.source = source
        self.target = target
        self.cap = cap
        self.normalized = normalized
        self.cat = source.cat
        self._basis: dict[int, list[PE]] = {}
        self._index: dict[int, dict[PE, int]] = {}
        self._columns: dict[int, list[tuple[int, ...]]] = {}
        self._rank: dict[int, int] = {}
        self._boundaries: dict[int, XorBasis] = {}
        self._source_reverse = act_reverse_table(source, cap, units=not normalized)
        self._build_basis()
        self._build_differential()
        if check_d_squared:
            self._check_d_squared()

    # -- basis -----------------------------------------------------------------

    def _chains(self, length: int, src=None, dst=None):
        return self.cat.chains(length, src=src, dst=dst, units=not self.normalized)

    def _build_basis(self) -> None:
        buckets: dict[int, list[tuple[tuple, PE]]] = {}
        cat = self.cat
        for total in range(self.cap + 1):
            for r in range(total + 1):
                s = total - r
                for a in cat.objects:
                    for b in cat.objects:
                        src_space = self.source.space(a, b)
                        if not src_space.dim:
                            continue
                        for achain in self._chains(r, dst=a):
                            for bchain in self._chains(s, src=b):
                                out_pair = self.source.output_pair(achain, a, b, bchain)
                                tgt_space = self.target.space(*out_pair)
                                if not tgt_space.dim:
                                    continue
                                side = cat.chain_degree(achain) + cat.chain_degree(bchain)
                                for mi, m in enumerate(src_space.labels):
                                    dm = src_space.degrees[mi]
                                    for yi, y in enumerate(tgt_space.labels):
                                        t = tgt_space.degrees[yi] - dm - side + r + s
                                        pe = (achain, (a, b), m, bchain, y)
                                        key = (r, s, achain, a, b, mi, bchain, yi)
                                        buckets.setdefault(t, []).append((key, pe))
        for t, entries in buckets.items():
            entries.sort(key=lambda kv: kv[0])
            self._basis[t] = [pe for _, pe in entries]
            self._index[t] = {pe: i for i, (_, pe) in enumerate(entries)}

    def degrees(self) -> list[int]:
        return sorted(self._basis)

    def dim(self, t: int) -> int:
        return len(self._basis.get(t, ()))

    def basis(self, t: int) -> list[PE]:
        return self._basis.get(t, [])

    def total_dim(self) -> int:
        return sum(len(v) for v in self._basis.values())

    # -- differential ------------------------------------------------------------

    def _differential_entries(self, pe: PE) -> Iterable[PE]:
        """Images of one elementary component under the four-sum differential."""
        achain, (a, b), m, bchain, y = pe
        cat = self.cat
        r, s = len(achain), len(bchain)
        room = self.cap - r - s
        start_a, end_b = self.source.output_pair(achain, a, b, bchain)
        counts: dict[PE, int] = {}

        def toggle(pe2: PE) -> None:
            counts[pe2] = counts.get(pe2, 0) ^ 1

        # compose with the target's structure maps
        for i in range(room + 1):
            for oa in self._chains(i, dst=start_a):
                for j in range(room - i + 1):
                    for ob in self._chains(j, src=end_b):
                        for y2 in self.target.act(oa, start_a, end_b, y, ob):
                            toggle((oa + achain, (a, b), m, bchain + ob, y2))

        # feed the source's structure maps into the component
        for alpha, pair2, m2, beta in self._source_reverse.get(((a, b), m), ()):
            if len(alpha) + len(beta) <= room:
                toggle((achain + alpha, pair2, m2, beta + bchain, y))

        # insert a category operation into either side chain
        for chain, is_a in ((achain, True), (bchain, False)):
            for pos, g in enumerate(chain):
                for run in cat.mu_preimages(g):
                    if len(run) - 1 > room:
                        continue
                    if self.normalized and any(cat.is_unit(u) for u in run):
                        continue
                    new = chain[:pos] + run + chain[pos + 1 :]
                    if is_a:
                        toggle((new, (a, b), m, bchain, y))
                    else:
                        toggle((achain, (a, b), m, new, y))

        return [p for p, c in counts.items() if c]

    def _build_differential(self) -> None:
        for t in self.degrees():
            idx_next = self._index.get(t + 1, {})
            cols = []
            for pe in self._basis[t]:
                entries = []
                for image in self._differential_entries(pe):
                    pos = idx_next.get(image)
                    if pos is None:
                        raise HomComplexError(
                            f"differential image {image!r} missing from degree {t + 1}"
                        )
                    entries.append(pos)
                entries.sort()
                cols.append(tuple(entries))
            self._columns[t] = cols

    def d_columns(self, t: int) -> list[tuple[int, ...]]:
        return self._columns.get(t, [])

    def _column_bits(self, t: int) -> list[int]:
        out = []
        for entries in self._columns.get(t, ()):
            bits = 0
            for e in entries:
                bits |= 1 << e
            out.append(bits)
        return out

    def _check_d_squared(self) -> None:
        for t in self.degrees():
            next_bits = self._column_bits(t + 1)
            for col, entries in enumerate(self._columns[t]):
                acc = 0
                for e in entries:
                    acc ^= next_bits[e]
                if acc:
                    raise HomComplexError(f"d^2 != 0 at degree {t}, column {col}")

    # -- homology ------------------------------------------------------------------

    def rank_d(self, t: int) -> int:
        got = self._rank.get(t)
        if got is None:
            basis = XorBasis()
            for bits in self._column_bits(t):
                basis.add(bits)
            got = basis.rank
            self._rank[t] = got
        return got

    def betti(self, t: int) -> int:
        return self.dim(t) - self.rank_d(t) - self.rank_d(t - 1)

    def homology_ranks(self) -> dict[int, int]:
        return {t: b for t in self.degrees() if (b := self.betti(t))}

    def boundary_space(self, t: int) -> XorBasis:
        """Span of the image of d in the degree-t slice."""
        got = self._boundaries.get(t)
        if got is None:
            got = XorBasis()
            prev = self._columns.get(t - 1, ())
            for entries in prev:
                bits = 0
                for e in entries:
                    bits |= 1 << e
                got.add(bits)
            self._boundaries[t] = got
        return got

    def cycle_basis(self, t: int) -> list[int]:
        """Kernel of d at degree t, as bitsets over the degree-t basis."""
        pivots: dict[int, tuple[int, int]] = {}
        kernel: list[int] = []
        for j, bits in enumerate(self._column_bits(t)):
            combo = 1 << j
            while bits:
                lead = bits.bit_length() - 1
                got = pivots.get(lead)
                if got is None:
                    pivots[lead] = (bits, combo)
                    break
                bits ^= got[0]
                combo ^= got[1]
            else:
                kernel.append(combo)
        return kernel

    def vector(self, t: int, fn: Callable[[PE], bool]) -> int:
        """Encode the pre-morphism whose coefficient at each basis element is fn(pe)."""
        bits = 0
        for i, pe in enumerate(self._basis.get(t, ())):
            if fn(pe):
                bits |= 1 << i
        return bits

    def is_cycle(self, t: int, bits: int) -> bool:
        cols = self._column_bits(t)
        acc = 0
        for pos in _bit_positions(bits):
            acc ^= cols[pos]
        return acc == 0

    def in_image(self, t: int, bits: int) -> bool:
        return self.boundary_space(t).contains(bits)


def hom_complex(
    source: Bimodule,
    target: Bimodule,
    cap: int,
    normalized: bool = True,
    stability_step: int = 2,
) -> "HomComplexReport":
    """Build the capped pre-morphism complex and its stability report.

    Ranks at the requested cap are compared with the same computation at
    cap - stability_step; a degree whose rank moved is flagged as not yet
    stabilized.
    """
    complex_ = CappedHomComplex(source, target, cap, normalized=normalized)
    lower = None
    if stability_step and cap >= stability_step:
        lower = CappedHomComplex(source, target, cap - stability_step, normalized=normalized)
    ranks = {t: complex_.betti(t) for t in complex_.degrees()}
    stable: dict[int, bool] = {}
    if lower is not None:
        for t in ranks:
            stable[t] = complex_.betti(t) == lower.betti(t)
    return HomComplexReport(complex_=complex_, ranks=ranks, stable=stable, lower_cap=None if lower is None else lower.cap)


@dataclass
class HomComplexReport:
    complex_: CappedHomComplex
    ranks: dict[int, int]
    stable: dict[int, bool]
    lower_cap: int | None

    def nonzero_ranks(self) -> dict[int, int]:
        return {t: r for t, r in sorted(self.ranks.items()) if r}

    def stable_degrees(self) -> list[int]:
        return sorted(t for t, ok in self.stable.items() if ok)


def identity_class_is_nonzero(cx: CappedHomComplex) -> bool:
    """Check the identity component family is a cycle not bounded by anything."""
    if cx.source is not cx.target and cx.source.name != cx.target.name:
        raise HomComplexError("identity class needs matching source and target")

    def is_id(pe: PE) -> bool:
        achain, pair, m, bchain, y = pe
        return not achain and not bchain and m == y

    vec = cx.vector(0, is_id)
    if vec == 0:
        return False
    if not cx.is_cycle(0, vec):
        return False
    return not cx.in_image(0, vec)


# -- maps between capped complexes ---------------------------------------------


def precomposition_columns(
    outer: CappedHomComplex,
    inner: CappedHomComplex,
    reverse_of_t: dict[tuple[Pair, Label], list[tuple[Chain, Pair, Label, Chain]]],
    t_degree: int = 0,
) -> dict[int, list[tuple[int, ...]]]:
    """Matrix of "compose with t" from Hom(Y, W) to Hom(X, W), per degree.

    ``reverse_of_t`` indexes the components of t: X -> Y by their outputs;
    ``outer`` is Hom(Y, W) and ``inner`` is Hom(X, W).
    """
    columns: dict[int, list[tuple[int, ...]]] = {}
    for deg in outer.degrees():
        idx = inner._index.get(deg + t_degree, {})
        cols = []
        for achain, pair, m, bchain, y in outer.basis(deg):
            r, s = len(achain), len(bchain)
            counts: dict[PE, int] = {}
            for alpha, pair2, m2, beta in reverse_of_t.get((pair, m), ()):
                if r + s + len(alpha) + len(beta) <= inner.cap:
                    pe2 = (achain + alpha, pair2, m2, beta + bchain, y)
                    counts[pe2] = counts.get(pe2, 0) ^ 1
            entries = []
            for pe2, c in counts.items():
                if not c:
                    continue
                pos = idx.get(pe2)
                if pos is None:
                    raise HomComplexError(f"precomposition left the capped basis: {pe2!r}")
                entries.append(pos)
            entries.sort()
            cols.append(tuple(entries))
        columns[deg] = cols
    return columns


def comp_reverse_table(
    f: BimodulePreMorphism, cap: int, units: bool = False
) -> dict[tuple[Pair, Label], list[tuple[Chain, Pair, Label, Chain]]]:
    """Index the components of a pre-morphism by their outputs, like act_reverse_table."""
    table: dict[tuple[Pair, Label], list[tuple[Chain, Pair, Label, Chain]]] = {}
    cat = f.source.cat
    for total in range(cap + 1):
        for p in range(total + 1):
            q = total - p
            for a, b in f.source.pairs():
                space = f.source.space(a, b)
                if not space.dim:
                    continue
                for alpha in cat.chains(p, dst=a, units=units):
                    for beta in cat.chains(q, src=b, units=units):
                        out_pair = f.source.output_pair(alpha, a, b, beta)
                        for lab in space.labels:
                            for y in f.comp(alpha, a, b, lab, beta):
                                table.setdefault((out_pair, y), []).append(
                                    (alpha, (a, b), lab, beta)
                                )
    return table


def relabel_columns(
    outer: CappedHomComplex,
    inner: CappedHomComplex,
    transform: Callable[[Pair, Label], Iterable[Label]],
    degree_shift: int = 0,
) -> dict[int, list[tuple[int, ...]]]:
    """Matrix of a map induced by rewriting the source basis element of each component.

    Covers inclusion and projection maps of cones, where composition acts on
    labels one at a time.
    """
    columns: dict[int, list[tuple[int, ...]]] = {}
    for deg in outer.degrees():
        idx = inner._index.get(deg + degree_shift, {})
        cols = []
        for achain, pair, m, bchain, y in outer.basis(deg):
            entries = []
            for m2 in transform(pair, m):
                pe2 = (achain, pair, m2, bchain, y)
                pos = idx.get(pe2)
                if pos is None:
                    raise HomComplexError(f"relabel map left the capped basis: {pe2!r}")
                entries.append(pos)
            entries.sort()
            cols.append(tuple(entries))
        columns[deg] = cols
    return columns
