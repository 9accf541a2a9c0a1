"""Standardizations: the leading-coefficient ratio k_{n+1}/k_n and k_0."""
from __future__ import annotations

from dataclasses import dataclass, field

import sympy as sp

from .algebra import N, RatFuncN, canonical


@dataclass(frozen=True)
class Standardization:
    kratio: RatFuncN = field(default_factory=lambda: RatFuncN(1))
    k0: sp.Expr = sp.Integer(1)
    name: str = "custom"

    def __post_init__(self):
        kr = self.kratio if isinstance(self.kratio, RatFuncN) else RatFuncN(self.kratio)
        if kr.is_zero():
            raise ValueError("kratio must not vanish identically")
        object.__setattr__(self, "kratio", kr)
        k0 = canonical(self.k0)
        if k0 == 0:
            raise ValueError("k0 must be nonzero")
        object.__setattr__(self, "k0", k0)

    def leading(self, n: int):
        """k_n = k0 * prod_{j<n} kratio(j)."""
        k = self.k0
        for j in range(n):
            k = k * self.kratio(j)
        return canonical(k)


MONIC = Standardization(RatFuncN(1), 1, "monic")

PRESETS: dict[str, Standardization] = {
    "monic": MONIC,
    "hermite": Standardization(RatFuncN(2), 1, "hermite"),
    "legendre": Standardization(RatFuncN((2 * N + 1) / (N + 1)), 1, "legendre"),
    "laguerre": Standardization(RatFuncN(-1 / (N + 1)), 1, "laguerre"),
    # T_0 := 1/2 makes k_{n+1}/k_n = 2 for every n >= 0
    "chebyshev-t": Standardization(RatFuncN(2), sp.Rational(1, 2), "chebyshev-t"),
    "chebyshev-u": Standardization(RatFuncN(2), 1, "chebyshev-u"),
}


def standardization(spec=None) -> Standardization:
    """Resolve a preset name, a Standardization, or a ratio expression in n."""
    if spec is None:
        return MONIC
    if isinstance(spec, Standardization):
        return spec
    if isinstance(spec, str) and spec.lower() in PRESETS:
        return PRESETS[spec.lower()]
    return Standardization(RatFuncN(spec), 1, "custom")
