"""Finite strictly-unital A-infinity categories over GF(2).

Composition-order convention, used everywhere in this package: the inputs
of mu_k are listed along the path, first arrow first.  So mu_k(x1, ..., xk)
takes x1 in hom(A0, A1), x2 in hom(A1, A2), ..., and lands in hom(A0, Ak).
The operation mu_k has degree 2 - k.

Categories are immutable after parsing; all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .f2 import GradedSpace

Chain = tuple[str, ...]
Element = frozenset[str]

ZERO: Element = frozenset()


class CategoryError(Exception):
    """Raised for structurally invalid category data."""


class ParseError(CategoryError):
    """Parse failure with a 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Generator:
    name: str
    src: str
    dst: str
    degree: int
    is_unit: bool = False


class AInftyCategory:
    """Objects, hom spaces, and structure constants of a finite A-infinity category.

    ``mu`` maps composable generator chains to elements of the appropriate
    hom space; omitted chains act as zero.  Strict unit rows of mu_2 are
    stored explicitly so evaluation is a plain lookup.
    """

    def __init__(
        self,
        name: str,
        objects: Sequence[str],
        gens: Sequence[Generator],
        units: Mapping[str, str],
        mu: Mapping[Chain, Element],
        sphere_dim: Mapping[str, int] | None = None,
    ):
        self.name = name
        self.objects = tuple(objects)
        self.gens: dict[str, Generator] = {g.name: g for g in gens}
        if len(self.gens) != len(gens):
            raise CategoryError("generator names must be unique across the category")
        self.units = dict(units)
        self.sphere_dim = dict(sphere_dim or {})
        self._hom: dict[tuple[str, str], GradedSpace] = {}
        for a in self.objects:
            for b in self.objects:
                basis = [(g.name, g.degree) for g in gens if (g.src, g.dst) == (a, b)]
                self._hom[(a, b)] = GradedSpace(basis)
        self.mu: dict[Chain, Element] = {}
        for chain, out in mu.items():
            out = frozenset(out)
            if out:
                self.mu[tuple(chain)] = out
        self.max_arity = max((len(c) for c in self.mu), default=2)
        self._chain_cache: dict[tuple, tuple[Chain, ...]] = {}
        self._mu_preimages: dict[str, tuple[Chain, ...]] | None = None
        self._validate()

    # -- basic structure ---------------------------------------------------

    def hom(self, a: str, b: str) -> GradedSpace:
        try:
            return self._hom[(a, b)]
        except KeyError:
            raise CategoryError(f"unknown object pair ({a}, {b})") from None

    def gen(self, name: str) -> Generator:
        try:
            return self.gens[name]
        except KeyError:
            raise CategoryError(f"unknown generator {name!r}") from None

    def is_unit(self, name: str) -> bool:
        return self.gens[name].is_unit

    def unit(self, obj: str) -> str:
        return self.units[obj]

    def is_sphere(self, obj: str) -> bool:
        return obj in self.sphere_dim

    def degree(self, name: str) -> int:
        return self.gens[name].degree

    def chain_degree(self, chain: Chain) -> int:
        return sum(self.gens[g].degree for g in chain)

    def mu_apply(self, chain: Chain) -> Element:
        """Evaluate mu_k on a composable basis chain (zero when unstated)."""
        return self.mu.get(chain, ZERO)

    def is_composable(self, chain: Chain) -> bool:
        for x, y in zip(chain, chain[1:]):
            if self.gens[x].dst != self.gens[y].src:
                return False
        return True

    def chain_endpoints(self, chain: Chain) -> tuple[str, str]:
        return self.gens[chain[0]].src, self.gens[chain[-1]].dst

    # -- chain enumeration -------------------------------------------------

    def chains(
        self,
        length: int,
        src: str | None = None,
        dst: str | None = None,
        units: bool = False,
    ) -> tuple[Chain, ...]:
        """All composable generator chains of the given length, in canonical order.

        A chain of length 0 is the empty tuple; it matches any endpoint
        constraints that agree with each other.
        """
        key = (length, src, dst, units)
        cached = self._chain_cache.get(key)
        if cached is not None:
            return cached
        if length == 0:
            if src is not None and dst is not None and src != dst:
                result: tuple[Chain, ...] = ()
            else:
                result = ((),)
        else:
            outgoing: dict[str, list[str]] = {o: [] for o in self.objects}
            for g in self.gens.values():
                if units or not g.is_unit:
                    outgoing[g.src].append(g.name)
            starts = [src] if src is not None else list(self.objects)
            found: list[Chain] = []

            def grow(prefix: list[str], at: str) -> None:
                if len(prefix) == length:
                    if dst is None or at == dst:
                        found.append(tuple(prefix))
                    return
                for name in outgoing[at]:
                    prefix.append(name)
                    grow(prefix, self.gens[name].dst)
                    prefix.pop()

            for s in starts:
                grow([], s)
            result = tuple(found)
        self._chain_cache[key] = result
        return result

    def mu_preimages(self, gen_name: str) -> tuple[Chain, ...]:
        """Stored chains whose mu-value contains the given generator."""
        if self._mu_preimages is None:
            table: dict[str, list[Chain]] = {}
            for chain in sorted(self.mu, key=lambda c: (len(c), c)):
                for out in sorted(self.mu[chain]):
                    table.setdefault(out, []).append(chain)
            self._mu_preimages = {g: tuple(cs) for g, cs in table.items()}
        return self._mu_preimages.get(gen_name, ())

    # -- validation --------------------------------------------------------

    def _validate(self) -> None:
        for obj in self.objects:
            if obj not in self.units:
                raise CategoryError(f"object {obj} has no unit")
            e = self.units[obj]
            g = self.gen(e)
            if not (g.src == g.dst == obj and g.degree == 0 and g.is_unit):
                raise CategoryError(f"unit {e} of {obj} must be an endomorphism of degree 0")
        for name, g in self.gens.items():
            if g.src not in self._hom_objects() or g.dst not in self._hom_objects():
                raise CategoryError(f"generator {name} refers to unknown objects")
        for obj, d in self.sphere_dim.items():
            space = self.hom(obj, obj)
            degs = sorted(space.degrees)
            if degs != [0, d]:
                raise CategoryError(
                    f"sphere {obj} of dimension {d} needs hom({obj},{obj}) with "
                    f"degrees [0, {d}], found {degs}"
                )
        for chain, out in self.mu.items():
            k = len(chain)
            if not self.is_composable(chain):
                raise CategoryError(f"non-composable mu entry {chain}")
            src, dst = self.chain_endpoints(chain)
            want = self.chain_degree(chain) + 2 - k
            for y in out:
                g = self.gen(y)
                if (g.src, g.dst) != (src, dst):
                    raise CategoryError(f"mu{k}{chain} output {y} lies in the wrong hom space")
                if g.degree != want:
                    raise CategoryError(
                        f"mu{k}{chain} violates the degree law: expected {want}, got {g.degree}"
                    )
            units_in = [x for x in chain if self.is_unit(x)]
            if units_in:
                if k != 2:
                    raise CategoryError(f"mu{k}{chain} must vanish on unit inputs")
                e, x = chain
                expected = frozenset({chain[1] if self.is_unit(e) else chain[0]})
                if self.is_unit(e) and self.is_unit(x):
                    expected = frozenset({e})
                if out != expected:
                    raise CategoryError(f"mu2{chain} is inconsistent with strict unitality")

    def _hom_objects(self) -> tuple[str, ...]:
        return self.objects

    def __repr__(self) -> str:
        return f"AInftyCategory({self.name}, {len(self.objects)} objects, {len(self.gens)} gens)"


# -- structural A-infinity relation ----------------------------------------


def ainfty_residual(cat: AInftyCategory, chain: Chain) -> Element:
    """Sum over all single insertions of one mu inside another, on one chain."""
    k = len(chain)
    out: set[str] = set()
    for w in range(1, k + 1):
        for t in range(0, k - w + 1):
            inner = cat.mu_apply(chain[t : t + w])
            for u in inner:
                out ^= set(cat.mu_apply(chain[:t] + (u,) + chain[t + w :]))
    return frozenset(out)


@dataclass(frozen=True)
class RelationViolation:
    order: int
    chain: Chain
    residual: Element


@dataclass(frozen=True)
class AInftyReport:
    max_order: int
    chains_checked: int
    violations: tuple[RelationViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_ainfty(cat: AInftyCategory, max_order: int) -> AInftyReport:
    """Verify the A-infinity relations on every composable chain up to max_order.

    Unit-containing chains are included; with strict units they are cheap and
    catch inconsistent unit rows.
    """
    if max_order < 2:
        raise CategoryError("max_order must be at least 2")
    checked = 0
    violations: list[RelationViolation] = []
    for k in range(1, max_order + 1):
        for chain in cat.chains(k, units=True):
            checked += 1
            res = ainfty_residual(cat, chain)
            if res:
                violations.append(RelationViolation(k, chain, res))
    return AInftyReport(max_order=max_order, chains_checked=checked, violations=tuple(violations))


def default_max_order(cat: AInftyCategory, cap: int = 8) -> int:
    """Longest composable chain of non-unit generators, plus two, capped."""
    longest = 0
    for k in range(1, cap + 1):
        if cat.chains(k):
            longest = k
        else:
            break
    return max(2, min(longest + 2, cap))


# -- functors ---------------------------------------------------------------


class AInftyFunctor:
    """An endofunctor given by its object map and multilinear components.

    phi_1 has degree 0; phi_i has degree 1 - i.  In strict mode phi_1 is a
    bijection on each hom space and all higher components vanish.
    """

    def __init__(
        self,
        cat: AInftyCategory,
        object_map: Mapping[str, str],
        phi1: Mapping[str, Element],
        higher: Mapping[Chain, Element] | None = None,
        strict: bool = True,
    ):
        self.cat = cat
        self.object_map = dict(object_map)
        self.phi1 = {g: frozenset(v) for g, v in phi1.items()}
        self.higher = {tuple(c): frozenset(v) for c, v in (higher or {}).items() if v}
        self.strict = strict
        for obj in cat.objects:
            if obj not in self.object_map:
                raise CategoryError(f"functor object map misses {obj}")
        for g, out in self.phi1.items():
            src = cat.gen(g)
            for y in out:
                t = cat.gen(y)
                if (t.src, t.dst) != (self.object_map[src.src], self.object_map[src.dst]):
                    raise CategoryError(f"phi1({g}) lands in the wrong hom space")
                if t.degree != src.degree:
                    raise CategoryError(f"phi1({g}) must preserve degree")
        if strict:
            if self.higher:
                raise CategoryError("strict functors have no higher components")
            for (a, b), space in cat._hom.items():
                image: set[str] = set()
                for g in space.labels:
                    out = self.phi1.get(g, ZERO)
                    if len(out) != 1:
                        raise CategoryError(f"strict phi1 must send {g} to a single generator")
                    image |= set(out)
                ta, tb = self.object_map[a], self.object_map[b]
                if image != set(cat.hom(ta, tb).labels):
                    raise CategoryError(f"strict phi1 is not a bijection on hom({a},{b})")

    def on_object(self, obj: str) -> str:
        return self.object_map[obj]

    def component(self, chain: Chain) -> Element:
        if len(chain) == 1:
            return self.phi1.get(chain[0], ZERO)
        return self.higher.get(chain, ZERO)

    def max_component_arity(self) -> int:
        return max((len(c) for c in self.higher), default=1)


def identity_functor(cat: AInftyCategory) -> AInftyFunctor:
    return AInftyFunctor(
        cat,
        {o: o for o in cat.objects},
        {g: frozenset({g}) for g in cat.gens},
        strict=True,
    )


# -- file format -------------------------------------------------------------


def parse_category(text: str, name_hint: str = "category") -> AInftyCategory:
    """Parse the line-oriented category format.

    Directives: ``category``, ``object``, ``sphere``, ``gen``, ``unit`` and
    ``mu``; ``#`` starts a comment.  Omitted mu entries are zero; unit rows
    of mu_2 are implicit and rejected if stated inconsistently.
    """
    name = name_hint
    objects: list[str] = []
    gens: list[Generator] = []
    by_name: dict[str, Generator] = {}
    units: dict[str, str] = {}
    unit_lines: dict[str, int] = {}
    spheres: dict[str, int] = {}
    mu_entries: dict[Chain, Element] = {}
    mu_lines: dict[Chain, int] = {}

    def fail(lineno: int, msg: str) -> ParseError:
        return ParseError(lineno, msg)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        if head == "category":
            if len(parts) != 2:
                raise fail(lineno, "expected: category <name>")
            name = parts[1]
        elif head == "object":
            if len(parts) != 2:
                raise fail(lineno, "expected: object <Obj>")
            if parts[1] in objects:
                raise fail(lineno, f"object {parts[1]} declared twice")
            objects.append(parts[1])
        elif head == "sphere":
            if len(parts) != 3:
                raise fail(lineno, "expected: sphere <Obj> <d>")
            obj = parts[1]
            if obj not in objects:
                raise fail(lineno, f"unknown object {obj}")
            try:
                spheres[obj] = int(parts[2])
            except ValueError:
                raise fail(lineno, f"bad sphere dimension {parts[2]!r}") from None
        elif head == "gen":
            if len(parts) != 5:
                raise fail(lineno, "expected: gen <Src> <Dst> <name> <degree>")
            src, dst, gname, deg = parts[1], parts[2], parts[3], parts[4]
            for obj in (src, dst):
                if obj not in objects:
                    raise fail(lineno, f"unknown object {obj}")
            if gname in by_name:
                raise fail(lineno, f"generator {gname} declared twice")
            try:
                degree = int(deg)
            except ValueError:
                raise fail(lineno, f"bad degree {deg!r}") from None
            g = Generator(gname, src, dst, degree)
            by_name[gname] = g
            gens.append(g)
        elif head == "unit":
            if len(parts) != 3:
                raise fail(lineno, "expected: unit <Obj> <name>")
            obj, gname = parts[1], parts[2]
            if obj not in objects:
                raise fail(lineno, f"unknown object {obj}")
            if gname not in by_name:
                raise fail(lineno, f"unknown generator {gname}")
            if obj in units:
                raise fail(lineno, f"object {obj} already has unit {units[obj]}")
            g = by_name[gname]
            if g.src != obj or g.dst != obj or g.degree != 0:
                raise fail(lineno, f"unit {gname} must be a degree-0 endomorphism of {obj}")
            units[obj] = gname
            unit_lines[obj] = lineno
        elif head == "mu":
            try:
                k = int(parts[1])
                colon = parts.index(":")
                arrow = parts.index("->")
            except (ValueError, IndexError):
                raise fail(lineno, "expected: mu <k> : <x1> ... <xk> -> <y1> [+ <y2> ...]") from None
            inputs = tuple(parts[colon + 1 : arrow])
            rhs = [p for p in parts[arrow + 1 :] if p != "+"]
            if len(inputs) != k:
                raise fail(lineno, f"mu {k} expects {k} inputs, found {len(inputs)}")
            if not rhs:
                raise fail(lineno, "mu entry needs at least one output (omit the line for zero)")
            for x in inputs + tuple(rhs):
                if x not in by_name:
                    raise fail(lineno, f"unknown generator {x}")
            for x, y in zip(inputs, inputs[1:]):
                if by_name[x].dst != by_name[y].src:
                    raise fail(lineno, f"inputs {x} and {y} do not compose")
            if inputs in mu_entries:
                raise fail(lineno, f"duplicate mu entry for {inputs}")
            out = frozenset(rhs)
            src, dst = by_name[inputs[0]].src, by_name[inputs[-1]].dst
            want = sum(by_name[x].degree for x in inputs) + 2 - k
            for y in out:
                g = by_name[y]
                if (g.src, g.dst) != (src, dst):
                    raise fail(lineno, f"output {y} lies in hom({g.src},{g.dst}), expected hom({src},{dst})")
                if g.degree != want:
                    raise fail(lineno, f"degree law violated: output {y} has degree {g.degree}, expected {want}")
            mu_entries[inputs] = out
            mu_lines[inputs] = lineno
        else:
            raise fail(lineno, f"unknown directive {head!r}")

    if not objects:
        raise ParseError(1, "no objects declared")
    for obj in objects:
        if obj not in units:
            raise ParseError(1, f"object {obj} has no unit declaration")

    # mark units, then splice in the implicit mu_2 unit rows
    marked = [
        Generator(g.name, g.src, g.dst, g.degree, is_unit=(units.get(g.src) == g.name and g.src == g.dst))
        for g in gens
    ]
    unit_names = {units[o] for o in objects}
    full_mu: dict[Chain, Element] = {}
    for chain, out in mu_entries.items():
        k = len(chain)
        has_unit = any(x in unit_names for x in chain)
        if has_unit:
            if k != 2:
                raise fail(mu_lines[chain], f"mu {k} on a unit input must vanish; omit the line")
            e_first = chain[0] in unit_names
            e_second = chain[1] in unit_names
            expected = frozenset({chain[0] if e_second else chain[1]})
            if out != expected:
                raise fail(mu_lines[chain], "unit row of mu 2 stated inconsistently")
            continue  # implicit rows are regenerated below
        full_mu[chain] = out
    for g in marked:
        e_src = units[g.src]
        e_dst = units[g.dst]
        full_mu[(e_src, g.name)] = frozenset({g.name})
        if not g.is_unit:
            full_mu[(g.name, e_dst)] = frozenset({g.name})

    try:
        return AInftyCategory(name, objects, marked, units, full_mu, spheres)
    except CategoryError as exc:
        raise ParseError(1, str(exc)) from exc


def load_category(path) -> AInftyCategory:
    from pathlib import Path

    p = Path(path)
    return parse_category(p.read_text(), name_hint=p.stem)
