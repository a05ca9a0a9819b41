"""Exact linear algebra over the two-element field.

Matrices are stored as sets of nonzero positions; elimination works on
dense per-row bitsets (Python ints) internally.  Everything is immutable
after construction, so values can be shared and memoized freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping

Label = Hashable


class F2Error(Exception):
    pass


class F2Matrix:
    """A matrix over GF(2), held as the set of positions carrying a 1.

    Addition is symmetric difference of position sets.  Row bitsets are
    built lazily for elimination.
    """

    __slots__ = ("rows", "cols", "entries", "_row_bits", "_rank")

    def __init__(self, rows: int, cols: int, entries: Iterable[tuple[int, int]] = ()):
        entries = frozenset(entries)
        for i, j in entries:
            if not (0 <= i < rows and 0 <= j < cols):
                raise F2Error(f"entry ({i},{j}) out of bounds for {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self._row_bits: tuple[int, ...] | None = None
        self._rank: int | None = None

    @classmethod
    def from_row_bits(cls, rows: int, cols: int, row_bits: Iterable[int]) -> "F2Matrix":
        row_bits = tuple(row_bits)
        m = cls.__new__(cls)
        m.rows = rows
        m.cols = cols
        m.entries = frozenset(
            (i, j) for i, bits in enumerate(row_bits) for j in _bit_positions(bits)
        )
        m._row_bits = row_bits
        m._rank = None
        return m

    @classmethod
    def from_rows(cls, rows_01: Iterable[Iterable[int]]) -> "F2Matrix":
        rows_01 = [list(r) for r in rows_01]
        n = len(rows_01[0]) if rows_01 else 0
        return cls(
            len(rows_01),
            n,
            ((i, j) for i, r in enumerate(rows_01) for j, v in enumerate(r) if v % 2),
        )

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(n, n, ((i, i) for i in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "F2Matrix":
        return cls(rows, cols)

    def row_bits(self) -> tuple[int, ...]:
        if self._row_bits is None:
            bits = [0] * self.rows
            for i, j in self.entries:
                bits[i] |= 1 << j
            self._row_bits = tuple(bits)
        return self._row_bits

    def is_zero(self) -> bool:
        return not self.entries

    def add(self, other: "F2Matrix") -> "F2Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise F2Error("shape mismatch in add")
        return F2Matrix(self.rows, self.cols, self.entries ^ other.entries)

    def mul(self, other: "F2Matrix") -> "F2Matrix":
        """Matrix product self @ other over GF(2)."""
        if self.cols != other.rows:
            raise F2Error("shape mismatch in mul")
        other_rows = other.row_bits()
        out = []
        for bits in self.row_bits():
            acc = 0
            for j in _bit_positions(bits):
                acc ^= other_rows[j]
            out.append(acc)
        return F2Matrix.from_row_bits(self.rows, other.cols, out)

    def transpose(self) -> "F2Matrix":
        return F2Matrix(self.cols, self.rows, ((j, i) for i, j in self.entries))

    def apply(self, vec_bits: int) -> int:
        """Apply to a column vector given as a bitset over column indices."""
        out = 0
        for i, bits in enumerate(self.row_bits()):
            if (bits & vec_bits).bit_count() % 2:
                out |= 1 << i
        return out

    def rank(self) -> int:
        if self._rank is None:
            basis: dict[int, int] = {}
            for bits in self.row_bits():
                bits = _reduce_against(bits, basis)
                if bits:
                    basis[bits.bit_length() - 1] = bits
            self._rank = len(basis)
        return self._rank

    def rref(self) -> tuple[list[int], list[int]]:
        """Reduced row echelon form.

        Returns (rows, pivot_cols) with rows as bitsets; pivot columns are
        scanned left to right, so the result is canonical.
        """
        rows = list(self.row_bits())
        pivots: list[int] = []
        pivot_row = 0
        for col in range(self.cols):
            mask = 1 << col
            found = next((r for r in range(pivot_row, self.rows) if rows[r] & mask), None)
            if found is None:
                continue
            rows[pivot_row], rows[found] = rows[found], rows[pivot_row]
            for r in range(self.rows):
                if r != pivot_row and rows[r] & mask:
                    rows[r] ^= rows[pivot_row]
            pivots.append(col)
            pivot_row += 1
        return rows[:pivot_row], pivots

    def kernel_basis(self) -> list[tuple[int, ...]]:
        """Deterministic basis of the null space as 0/1 tuples of length cols.

        One basis vector per free column of the reduced echelon form, in
        ascending column order.
        """
        rows, pivots = self.rref()
        pivot_set = set(pivots)
        free = [j for j in range(self.cols) if j not in pivot_set]
        basis = []
        for f in free:
            vec = [0] * self.cols
            vec[f] = 1
            for r, p in zip(rows, pivots):
                if r & (1 << f):
                    vec[p] = 1
            basis.append(tuple(vec))
        return basis

    def column_bits(self, j: int) -> int:
        out = 0
        for i, bits in enumerate(self.row_bits()):
            if bits & (1 << j):
                out |= 1 << i
        return out

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, F2Matrix)
            and (self.rows, self.cols, self.entries)
            == (other.rows, other.cols, other.entries)
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"F2Matrix({self.rows}x{self.cols}, {len(self.entries)} entries)"


def _bit_positions(bits: int):
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def _reduce_against(bits: int, basis: dict[int, int]) -> int:
    while bits:
        lead = bits.bit_length() - 1
        row = basis.get(lead)
        if row is None:
            return bits
        bits ^= row
    return 0


def xor_rank(vectors: Iterable[int]) -> int:
    """Rank of a family of bitset vectors, by leading-bit elimination."""
    basis: dict[int, int] = {}
    for v in vectors:
        v = _reduce_against(v, basis)
        if v:
            basis[v.bit_length() - 1] = v
    return len(basis)


class XorBasis:
    """Incremental GF(2) span of bitset vectors."""

    __slots__ = ("pivots",)

    def __init__(self):
        self.pivots: dict[int, int] = {}

    def add(self, v: int) -> bool:
        """Insert v; returns True if it enlarged the span."""
        v = _reduce_against(v, self.pivots)
        if v:
            self.pivots[v.bit_length() - 1] = v
            return True
        return False

    def contains(self, v: int) -> bool:
        return _reduce_against(v, self.pivots) == 0

    @property
    def rank(self) -> int:
        return len(self.pivots)


class GradedSpace:
    """A finite graded GF(2) vector space with an ordered, labeled basis.

    The constructor order of the generators is the canonical order; all
    reports and matrix encodings rely on it being stable.
    """

    __slots__ = ("labels", "degrees", "_index", "_by_degree")

    def __init__(self, gens: Iterable[tuple[Label, int]]):
        gens = list(gens)
        self.labels = tuple(g for g, _ in gens)
        self.degrees = tuple(int(d) for _, d in gens)
        self._index = {g: i for i, (g, _) in enumerate(gens)}
        if len(self._index) != len(self.labels):
            raise F2Error("duplicate generator labels in graded space")
        by_degree: dict[int, list[int]] = {}
        for i, d in enumerate(self.degrees):
            by_degree.setdefault(d, []).append(i)
        self._by_degree = {d: tuple(ix) for d, ix in by_degree.items()}

    @property
    def dim(self) -> int:
        return len(self.labels)

    def degree(self, label: Label) -> int:
        return self.degrees[self._index[label]]

    def index(self, label: Label) -> int:
        return self._index[label]

    def __contains__(self, label: Label) -> bool:
        return label in self._index

    def degrees_present(self) -> list[int]:
        return sorted(self._by_degree)

    def indices_of_degree(self, q: int) -> tuple[int, ...]:
        return self._by_degree.get(q, ())

    def labels_of_degree(self, q: int) -> tuple[Label, ...]:
        return tuple(self.labels[i] for i in self.indices_of_degree(q))

    def shifted(self, k: int) -> "GradedSpace":
        return GradedSpace((g, d - k) for g, d in zip(self.labels, self.degrees))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GradedSpace)
            and self.labels == other.labels
            and self.degrees == other.degrees
        )

    def __hash__(self) -> int:
        return hash((self.labels, self.degrees))

    def __repr__(self) -> str:
        return f"GradedSpace(dim={self.dim})"


class GradedMap:
    """A degree-homogeneous linear map, stored as one GF(2) block per degree.

    The block at source degree q maps the degree-q slice of the source into
    the degree-(q + degree) slice of the target.
    """

    __slots__ = ("source", "target", "degree", "blocks")

    def __init__(
        self,
        source: GradedSpace,
        target: GradedSpace,
        degree: int,
        blocks: Mapping[int, F2Matrix],
    ):
        self.source = source
        self.target = target
        self.degree = degree
        self.blocks = dict(blocks)
        for q, m in self.blocks.items():
            if m.cols != len(source.indices_of_degree(q)):
                raise F2Error(f"block at degree {q} has wrong column count")
            if m.rows != len(target.indices_of_degree(q + degree)):
                raise F2Error(f"block at degree {q} has wrong row count")

    @classmethod
    def from_function(
        cls,
        source: GradedSpace,
        target: GradedSpace,
        degree: int,
        fn: Callable[[Label], Iterable[Label]],
    ) -> "GradedMap":
        blocks: dict[int, F2Matrix] = {}
        for q in source.degrees_present():
            src_ix = source.indices_of_degree(q)
            tgt_labels = target.indices_of_degree(q + degree)
            tgt_pos = {target.labels[i]: pos for pos, i in enumerate(tgt_labels)}
            entries = []
            for col, i in enumerate(src_ix):
                for out in fn(source.labels[i]):
                    if target.degree(out) != q + degree:
                        raise F2Error(
                            f"output {out!r} of degree {target.degree(out)} breaks "
                            f"the degree-{degree} law at source degree {q}"
                        )
                    entries.append((tgt_pos[out], col))
            blocks[q] = F2Matrix(len(tgt_labels), len(src_ix), entries)
        return cls(source, target, degree, blocks)

    def block(self, q: int) -> F2Matrix:
        m = self.blocks.get(q)
        if m is None:
            m = F2Matrix.zero(
                len(self.target.indices_of_degree(q + self.degree)),
                len(self.source.indices_of_degree(q)),
            )
        return m

    def apply(self, element: frozenset) -> frozenset:
        """Apply to an element given as a set of source labels (must be homogeneous)."""
        if not element:
            return frozenset()
        qs = {self.source.degree(g) for g in element}
        if len(qs) > 1:
            raise F2Error("apply expects a homogeneous element")
        (q,) = qs
        src_ix = self.source.indices_of_degree(q)
        pos = {self.source.labels[i]: p for p, i in enumerate(src_ix)}
        vec = 0
        for g in element:
            vec |= 1 << pos[g]
        out_bits = self.block(q).apply(vec)
        tgt_ix = self.target.indices_of_degree(q + self.degree)
        return frozenset(self.target.labels[tgt_ix[p]] for p in _bit_positions(out_bits))

    def compose(self, inner: "GradedMap") -> "GradedMap":
        """self after inner."""
        if inner.target is not self.source and inner.target != self.source:
            raise F2Error("composition mismatch")
        blocks = {}
        for q in inner.source.degrees_present():
            blocks[q] = self.block(q + inner.degree).mul(inner.block(q))
        return GradedMap(inner.source, self.target, self.degree + inner.degree, blocks)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.blocks.values())


class ChainComplexError(Exception):
    def __init__(self, degree: int, message: str):
        super().__init__(message)
        self.degree = degree


@dataclass(frozen=True)
class Homology:
    """Per-degree GF(2) Betti numbers with chosen representative cycles."""

    ranks: dict[int, int]
    representatives: dict[int, tuple[frozenset, ...]]

    @property
    def total_rank(self) -> int:
        return sum(self.ranks.values())

    def rank(self, q: int) -> int:
        return self.ranks.get(q, 0)


class ChainComplex:
    """A graded space with a square-zero degree +1 differential.

    d**2 = 0 is verified degree by degree at construction; the first failing
    degree is reported.
    """

    __slots__ = ("space", "differential")

    def __init__(self, space: GradedSpace, differential: GradedMap):
        if differential.degree != 1:
            raise F2Error("differential must have degree +1")
        if differential.source != space or differential.target != space:
            raise F2Error("differential must be an endomorphism of the space")
        self.space = space
        self.differential = differential
        for q in sorted(space.degrees_present()):
            prod = differential.block(q + 1).mul(differential.block(q))
            if not prod.is_zero():
                raise ChainComplexError(q, f"differential does not square to zero at degree {q}")

    def homology(self, representatives: bool = True) -> Homology:
        d = self.differential
        space = self.space
        ranks: dict[int, int] = {}
        reps: dict[int, tuple[frozenset, ...]] = {}
        degrees = set(space.degrees_present())
        for q in sorted(degrees):
            block = d.block(q)
            cycles = block.kernel_basis()
            boundaries = XorBasis()
            prev = d.block(q - 1)
            for j in range(prev.cols):
                boundaries.add(prev.column_bits(j))
            b_rank = boundaries.rank
            ranks_q = len(cycles) - b_rank
            if ranks_q:
                ranks[q] = ranks_q
            if representatives:
                chosen = []
                for vec in cycles:
                    bits = 0
                    for pos, v in enumerate(vec):
                        if v:
                            bits |= 1 << pos
                    if boundaries.add(bits):
                        ix = space.indices_of_degree(q)
                        chosen.append(
                            frozenset(space.labels[ix[p]] for p in _bit_positions(bits))
                        )
                if chosen:
                    reps[q] = tuple(chosen)
        return Homology(ranks=ranks, representatives=reps)


def homology(complex_: ChainComplex, representatives: bool = True) -> Homology:
    return complex_.homology(representatives=representatives)
