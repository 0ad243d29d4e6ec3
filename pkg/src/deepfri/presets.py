"""Named parameter sets for the command line and the test-suite."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .deep_fri import DeepFriParams, deep_fri_soundness, johnson_preset, make_deep_params
from .domains import Subspace
from .field import field as get_field
from .fri import FriParams, make_fri_params


@dataclass(frozen=True)
class Preset:
    name: str
    field_n: int
    log_size: int  # |L0| = 2^log_size
    degree: int  # DEEP-FRI bound d0 (degree < d0)
    fri_rate_bits: int
    kind: str = "rs"
    shift: int = 0

    @property
    def size(self) -> int:
        return 1 << self.log_size

    @property
    def q(self) -> int:
        return 1 << self.field_n

    def domain(self) -> Subspace:
        return Subspace.standard(get_field(self.field_n), self.log_size, self.shift)

    def deep_params(self) -> DeepFriParams:
        return make_deep_params(self.domain(), self.degree)

    def fri_params(self) -> FriParams:
        return make_fri_params(self.domain(), self.fri_rate_bits)

    def soundness(self, delta0: float = 1.0, ell: int = 1) -> dict:
        """Johnson-regime defaults: delta = min(delta0, 1 - sqrt(rho) - q^(-1/13))."""
        j = johnson_preset(self.size, self.degree, self.q, delta0)
        rounds = len(self.deep_params().domains) - 1
        terms = deep_fri_soundness(self.size, self.degree, self.q, rounds, j["delta"], j["eps"], j["list_size"], ell)
        return {**j, "delta_star": terms.delta_star, "err_commit": terms.err_commit, "err_query": terms.err_query, "total": terms.total}


PRESETS = {
    p.name: p
    for p in (
        Preset("r1-q8", 8, 4, 4, 3),
        Preset("r2-q16", 16, 5, 10, 3),
        Preset("r3-q16", 16, 6, 22, 3),
        Preset("ali-fib-q16", 16, 6, 16, 2, kind="ali"),
    )
}

ALI_RATE_BITS = 2


def get_preset(name: str, **overrides) -> Preset:
    """A preset with explicit fields overriding its defaults (None means keep)."""
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    changes = {k: v for k, v in overrides.items() if v is not None}
    return replace(PRESETS[name], **changes)


def custom(field_n: int, log_size: int, degree: int | None = None, rate_bits: int = 3) -> Preset:
    degree = degree if degree is not None else max(1, (1 << log_size) >> rate_bits)
    if not 0 < log_size < field_n:
        raise ValueError(f"domain of size 2^{log_size} does not fit GF(2^{field_n})")
    if math.log2(degree) > log_size:
        raise ValueError("degree exceeds domain size")
    return Preset(f"custom-q{field_n}-k{log_size}", field_n, log_size, degree, rate_bits)
