"""One-sided modules over an A-infinity category.

Left modules carry maps mu^{r|1}: the r category inputs come first, in path
order, and the module element last; a left module sends M(A_r) to M(A_0)
along a chain A_0 -> ... -> A_r.  Right modules are the mirror image.

The twist of a module along an object is the mapping cone of the evaluation
morphism hom(-, X) (x) M(X) -> M; iterating it over a list of sphere objects
gives the module-level model used as an independent oracle for the twisted
Floer groups.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .category import AInftyCategory, CategoryError, Chain, Element
from .f2 import ChainComplex, GradedMap, GradedSpace, Label

LEFT = "left"
RIGHT = "right"

ZERO: frozenset = frozenset()


class OneSidedModule:
    """A left or right module with labeled graded spaces per object.

    ``act`` takes the category inputs of one structure map application:
    for a left module ``act(chain, obj, m)`` with the chain ending at
    ``obj``; for a right module ``act(obj, m, chain)`` with the chain
    starting at ``obj``.  Outputs are GF(2) sums of basis labels.
    """

    def __init__(
        self,
        cat: AInftyCategory,
        side: str,
        name: str,
        space_fn: Callable[[str], GradedSpace],
        act_fn: Callable[[Chain, str, Label], frozenset],
    ):
        if side not in (LEFT, RIGHT):
            raise CategoryError(f"bad module side {side!r}")
        self.cat = cat
        self.side = side
        self.name = name
        self._space_fn = space_fn
        self._act = act_fn
        self._spaces: dict[str, GradedSpace] = {}
        self._memo: dict[tuple, frozenset] = {}

    def space(self, obj: str) -> GradedSpace:
        sp = self._spaces.get(obj)
        if sp is None:
            sp = self._space_fn(obj)
            self._spaces[obj] = sp
        return sp

    def act(self, chain: Chain, obj: str, m: Label) -> frozenset:
        """Structure map on a basis element; chain in path order.

        Left: chain A0 -> ... -> Ar = obj, m in M(obj), output in M(A0).
        Right: chain obj = B0 -> ... -> Bs, m in M(obj), output in M(Bs).
        """
        key = (chain, obj, m)
        out = self._memo.get(key)
        if out is None:
            out = self._act(chain, obj, m)
            self._memo[key] = out
        return out

    def output_object(self, chain: Chain, obj: str) -> str:
        if not chain:
            return obj
        if self.side == LEFT:
            return self.cat.gen(chain[0]).src
        return self.cat.gen(chain[-1]).dst

    def internal_differential(self, obj: str) -> GradedMap:
        sp = self.space(obj)
        return GradedMap.from_function(sp, sp, 1, lambda m: self.act((), obj, m))

    def complex_at(self, obj: str) -> ChainComplex:
        return ChainComplex(self.space(obj), self.internal_differential(obj))

    def __repr__(self) -> str:
        return f"OneSidedModule({self.side}, {self.name})"


def yoneda_left(cat: AInftyCategory, x: str) -> OneSidedModule:
    """The module A |-> hom(A, X), acting by the category's mu."""
    if x not in cat.objects:
        raise CategoryError(f"unknown object {x}")

    def act(chain: Chain, obj: str, m: Label) -> frozenset:
        return cat.mu_apply(chain + (m,))

    return OneSidedModule(cat, LEFT, f"Yl({x})", lambda a: cat.hom(a, x), act)


def yoneda_right(cat: AInftyCategory, x: str) -> OneSidedModule:
    """The module B |-> hom(X, B), acting by the category's mu."""
    if x not in cat.objects:
        raise CategoryError(f"unknown object {x}")

    def act(chain: Chain, obj: str, m: Label) -> frozenset:
        return cat.mu_apply((m,) + chain)

    return OneSidedModule(cat, RIGHT, f"Yr({x})", lambda b: cat.hom(x, b), act)


def abstract_twist(module: OneSidedModule, x: str) -> OneSidedModule:
    """Twist a left module along an object.

    The twisted space at A is M(A) (+) hom(A, X) (x) M(X) shifted down by
    one; the structure maps are the mapping cone of evaluation: category
    inputs act on the hom factor through mu, and feeding the hom factor into
    the module's own structure maps is the evaluation component.  Labels:
    ('m', g) for the untouched part, ('e', b, c) for the new summand.
    """
    if module.side != LEFT:
        raise CategoryError("abstract_twist needs a left module")
    cat = module.cat
    if x not in cat.objects:
        raise CategoryError(f"unknown object {x}")
    m_at_x = module.space(x)

    def space(a: str) -> GradedSpace:
        gens: list[tuple[Label, int]] = [
            (("m", g), d) for g, d in zip(module.space(a).labels, module.space(a).degrees)
        ]
        hom_ax = cat.hom(a, x)
        gens.extend(
            (("e", b, c), db + dc - 1)
            for b, db in zip(hom_ax.labels, hom_ax.degrees)
            for c, dc in zip(m_at_x.labels, m_at_x.degrees)
        )
        return GradedSpace(gens)

    def act(chain: Chain, obj: str, lab: Label) -> frozenset:
        kind = lab[0]
        out: set = set()
        if kind == "m":
            out ^= {("m", g) for g in module.act(chain, obj, lab[1])}
        else:
            _, b, c = lab
            # evaluation: the hom factor joins the chain as one more input
            out ^= {("m", g) for g in module.act(chain + (b,), x, c)}
            # category action on the hom factor
            out ^= {("e", b2, c) for b2 in cat.mu_apply(chain + (b,))}
            if not chain:
                out ^= {("e", b, c2) for c2 in module.act((), x, c)}
        return frozenset(out)

    return OneSidedModule(cat, LEFT, f"T({x}){module.name}", space, act)


def iterated_twist_oracle(
    cat: AInftyCategory, spheres: Sequence[str], n_prime: str
) -> OneSidedModule:
    """Twist the left Yoneda module of ``n_prime`` along the listed spheres.

    The first sphere in the list is the outermost twist, matching the order
    of the composed Dehn twists the module models.  Used as the independent
    route to the third leg of the open long exact sequence.
    """
    for s in spheres:
        if not cat.is_sphere(s):
            raise CategoryError(f"object {s} is not flagged as a sphere")
    if n_prime not in cat.objects:
        raise CategoryError(f"unknown object {n_prime}")
    module = yoneda_left(cat, n_prime)
    for s in reversed(list(spheres)):
        module = abstract_twist(module, s)
    return module


# -- relation suite ----------------------------------------------------------


def module_relation_residual(module: OneSidedModule, chain: Chain, obj: str, m: Label) -> frozenset:
    """One instance of the module relations; zero iff the relation holds there."""
    cat = module.cat
    r = len(chain)
    out: set = set()
    if module.side == LEFT:
        for split in range(r + 1):
            inner = module.act(chain[split:], obj, m)
            at = module.output_object(chain[split:], obj)
            for y in inner:
                out ^= module.act(chain[:split], at, y)
        for w in range(1, r + 1):
            for t in range(0, r - w + 1):
                for u in cat.mu_apply(chain[t : t + w]):
                    out ^= module.act(chain[:t] + (u,) + chain[t + w :], obj, m)
    else:
        for split in range(r + 1):
            inner = module.act(chain[:split], obj, m)
            at = module.output_object(chain[:split], obj)
            for y in inner:
                out ^= module.act(chain[split:], at, y)
        for w in range(1, r + 1):
            for t in range(0, r - w + 1):
                for u in cat.mu_apply(chain[t : t + w]):
                    out ^= module.act(chain[:t] + (u,) + chain[t + w :], obj, m)
    return frozenset(out)


def module_relation_failures(
    module: OneSidedModule, bound: int, units: bool = False, max_failures: int = 10
) -> list[tuple[Chain, str, Label, frozenset]]:
    """Sweep the module relations over all inputs with chain length <= bound."""
    cat = module.cat
    failures: list[tuple[Chain, str, Label, frozenset]] = []
    for r in range(0, bound + 1):
        for obj in cat.objects:
            if module.side == LEFT:
                chains = cat.chains(r, dst=obj, units=units)
            else:
                chains = cat.chains(r, src=obj, units=units)
            for chain in chains:
                for m in module.space(obj).labels:
                    res = module_relation_residual(module, chain, obj, m)
                    if res:
                        failures.append((chain, obj, m, res))
                        if len(failures) >= max_failures:
                            return failures
    return failures
