"""Buchberger's algorithm on sympy sparse polynomials.

Only the ring arithmetic (multiplication, multivariate division) comes from
sympy; pair selection, the criteria and the final interreduction live here so
the effort can be capped by a step budget.
"""
from __future__ import annotations

from dataclasses import dataclass

from sympy.polys.orderings import grevlex, lex
from sympy.polys.rings import PolyElement, PolyRing

from .errors import ResourceLimit

ORDERS = {"lex": lex, "degrevlex": grevlex, "grevlex": grevlex}


@dataclass
class Budget:
    """Mutable step counter shared by one solver run."""

    limit: int | None = 20000
    used: int = 0

    def spend(self, what: str = "step", amount: int = 1) -> None:
        self.used += amount
        if self.limit is not None and self.used > self.limit:
            raise ResourceLimit(f"budget of {self.limit} steps exhausted during {what}")


def _lcm(m1: tuple, m2: tuple) -> tuple:
    return tuple(max(a, b) for a, b in zip(m1, m2))


def _divides(m1: tuple, m2: tuple) -> bool:
    return all(a <= b for a, b in zip(m1, m2))


def _coprime(m1: tuple, m2: tuple) -> bool:
    return all(a == 0 or b == 0 for a, b in zip(m1, m2))


def _spoly(f: PolyElement, g: PolyElement) -> PolyElement:
    mf, mg = f.LM, g.LM
    m = _lcm(mf, mg)
    uf = tuple(a - b for a, b in zip(m, mf))
    ug = tuple(a - b for a, b in zip(m, mg))
    one = f.ring.domain.one
    return f.mul_term((uf, one / f.LC)) - g.mul_term((ug, one / g.LC))


def _interreduce(G: list[PolyElement]) -> list[PolyElement]:
    G = [g.monic() for g in G if g]
    # drop elements whose leading monomial is divisible by another's
    minimal = []
    for i, g in enumerate(G):
        if any(j != i and _divides(h.LM, g.LM) and (h.LM != g.LM or j < i) for j, h in enumerate(G)):
            continue
        minimal.append(g)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        r = g.rem(others) if others else g
        reduced.append(r.monic())
    return sorted(reduced, key=lambda p: p.LM, reverse=True)


def groebner_basis(system: list[PolyElement], order: str = "degrevlex", budget: Budget | None = None) -> list[PolyElement]:
    """Reduced Groebner basis of the ideal generated by ``system``.

    The result lives in a clone of the input ring carrying the requested order.
    ``[1]`` signals an inconsistent system; an all-zero input gives ``[]``.
    """
    if order not in ORDERS:
        raise ValueError(f"unsupported monomial order {order!r}")
    budget = budget or Budget()
    polys = [p for p in system if p]
    if not polys:
        return []
    ring: PolyRing = polys[0].ring.clone(order=ORDERS[order])
    G = [p.set_ring(ring).monic() for p in polys]
    if any(g.is_ground for g in G):
        return [ring.one]
    pairs = [(i, j) for j in range(len(G)) for i in range(j)]
    while pairs:
        # normal selection strategy: smallest lcm first
        pairs.sort(key=lambda ij: ring.order(_lcm(G[ij[0]].LM, G[ij[1]].LM)))
        i, j = pairs.pop(0)
        f, g = G[i], G[j]
        if _coprime(f.LM, g.LM):
            continue
        m = _lcm(f.LM, g.LM)
        # chain criterion: some other h with LM(h) | lcm and both pairs already handled
        if any(
            k not in (i, j)
            and _divides(G[k].LM, m)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(G))
        ):
            continue
        budget.spend("Groebner reduction")
        h = _spoly(f, g).rem(G)
        if not h:
            continue
        h = h.monic()
        if h.is_ground:
            return [ring.one]
        G.append(h)
        k = len(G) - 1
        pairs.extend((t, k) for t in range(k))
    return _interreduce(G)


def reduces_to_zero(p: PolyElement, basis: list[PolyElement]) -> bool:
    if not p:
        return True
    if not basis:
        return False
    ring = basis[0].ring
    return not p.set_ring(ring).rem(basis)
