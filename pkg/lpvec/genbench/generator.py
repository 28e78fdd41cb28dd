"""
Random definite programs

Programs are drawn from a seeded PCG64 stream so the same ``GenSpec``
produces the same program on every platform. A program has ``x`` facts
with distinct heads, ``1 <= x < n * fact_fraction_bound``; the remaining
rules draw a body size from ``body_dist``, a uniform head and a body
sampled without replacement from the other atoms.
"""

from __future__ import annotations

import logging
import math
import re
from collections import Counter
from typing import Dict, FrozenSet, List, Sequence, Set, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from lpvec.config import (
    DEFAULT_BODY_DISTRIBUTION,
    DEFAULT_FACT_FRACTION_BOUND,
    MAX_BODY_SIZE,
)
from lpvec.errors import InfeasibleSpecError
from lpvec.program.model import AtomTable, DefiniteProgram, Rule

logger = logging.getLogger(__name__)

MAX_DUPLICATE_RETRIES = 1000


class GenSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    m: int = Field(ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    body_dist: Dict[int, float] = Field(
        default_factory=lambda: dict(DEFAULT_BODY_DISTRIBUTION)
    )
    fact_fraction_bound: float = Field(default=DEFAULT_FACT_FRACTION_BOUND, gt=0, le=1)

    @field_validator("body_dist")
    @classmethod
    def _check_body_dist(cls, value: Dict[int, float]) -> Dict[int, float]:
        for size, weight in value.items():
            if not 1 <= size <= MAX_BODY_SIZE:
                raise ValueError(
                    f"body size {size} outside 1..{MAX_BODY_SIZE}; facts are "
                    "drawn separately"
                )
            if weight < 0:
                raise ValueError(f"body size {size} has negative weight {weight}")
        if sum(value.values()) <= 0:
            raise ValueError("body_dist needs at least one positive weight")
        return value

    def normalized_body_dist(self) -> Tuple[Tuple[int, ...], Tuple[float, ...]]:
        """Body sizes with positive weight and their probabilities."""
        items = sorted((s, w) for s, w in self.body_dist.items() if w > 0)
        total = sum(w for _, w in items)
        return tuple(s for s, _ in items), tuple(w / total for _, w in items)

    def fact_range(self) -> Tuple[int, int]:
        """Inclusive bounds of the fact count."""
        upper = math.ceil(self.n * self.fact_fraction_bound) - 1
        return 1, min(max(1, upper), self.m)


class ProgramStats(BaseModel):
    atoms: int
    rules: int
    facts: int
    body_sizes: Dict[int, int]
    head_multiplicity: Dict[int, int]
    single_defined: bool


def atom_names(n: int) -> Tuple[str, ...]:
    return tuple(f"p{i}" for i in range(n))


def generate_program(spec: GenSpec) -> DefiniteProgram:
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    n = spec.n
    low, high = spec.fact_range()
    x = int(rng.integers(low, high + 1))
    rules: List[Rule] = [
        Rule(int(head)) for head in sorted(rng.choice(n, size=x, replace=False))
    ]

    remaining = spec.m - x
    if remaining > 0:
        sizes, probs = spec.normalized_body_dist()
        if max(sizes) > n - 1:
            raise InfeasibleSpecError(
                f"body size {max(sizes)} needs at least {max(sizes) + 1} atoms, "
                f"but n={n}; lower the body-size distribution or raise n"
            )
        seen: Set[Tuple[int, FrozenSet[int]]] = set()
        for index in range(remaining):
            for _ in range(MAX_DUPLICATE_RETRIES):
                size = int(rng.choice(sizes, p=probs))
                head = int(rng.integers(n))
                body = rng.choice(n - 1, size=size, replace=False)
                body[body >= head] += 1
                key = (head, frozenset(int(b) for b in body))
                if key not in seen:
                    seen.add(key)
                    rules.append(Rule(head, tuple(int(b) for b in body)))
                    break
            else:
                raise InfeasibleSpecError(
                    f"could not draw a new distinct rule after "
                    f"{MAX_DUPLICATE_RETRIES} attempts (rule {index + x + 1} of "
                    f"{spec.m}, n={n}); the spec asks for more rules than exist"
                )
    program = DefiniteProgram(AtomTable(atom_names(n)), tuple(rules))
    logger.debug(
        "Generated n=%d m=%d seed=%d with %d facts", n, spec.m, spec.seed, x
    )
    return program


def describe_program(program: DefiniteProgram) -> ProgramStats:
    body_sizes = Counter(len(rule.body) for rule in program.rules if rule.body)
    multiplicity = Counter(len(p) for p in program.rules_by_head.values())
    return ProgramStats(
        atoms=program.n,
        rules=len(program.rules),
        facts=sum(1 for rule in program.rules if rule.is_fact),
        body_sizes=dict(sorted(body_sizes.items())),
        head_multiplicity=dict(sorted(multiplicity.items())),
        single_defined=all(count == 1 for count in multiplicity),
    )


def build_specs(
    count: int,
    atoms_list: Sequence[int],
    rule_factors: Sequence[int],
    seed: int = 0,
) -> List[GenSpec]:
    """Cycle through atom counts, then rule factors; seeds are ``seed + i``."""
    if count < 1 or not atoms_list or not rule_factors:
        raise ValueError("build_specs needs count >= 1 and nonempty grids")
    specs = []
    for i in range(count):
        n = atoms_list[i % len(atoms_list)]
        factor = rule_factors[(i // len(atoms_list)) % len(rule_factors)]
        specs.append(GenSpec(n=n, m=factor * n, seed=seed + i))
    return specs


_K_TOKEN = re.compile(r"^n(?:/(\d+))?$")


def resolve_k_tokens(tokens: Sequence[str], n: int) -> List[int]:
    """Expand tokens like ``1 5 n/2 n`` for base size ``n``."""
    resolved: List[int] = []
    for raw in tokens:
        token = raw.strip().lower()
        match = _K_TOKEN.match(token)
        if match:
            divisor = int(match.group(1) or 1)
            if divisor == 0:
                raise ValueError(f"k token '{raw}' divides by zero")
            value = max(1, n // divisor)
        elif token.isdigit():
            value = int(token)
        else:
            raise ValueError(
                f"k token '{raw}' must be an integer, 'n' or 'n/<d>'"
            )
        if value not in resolved:
            resolved.append(value)
    return resolved
