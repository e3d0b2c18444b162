"""Per-parameter identifiability from the input-output coefficient map.

Two independent routes run on the same random specialization ``theta*``
over GF(p):

* the Jacobian rank test separates parameters that are algebraic over the
  coefficient field (locally identifiable or better) from transcendental
  ones (non-identifiable);
* a Groebner basis of the fiber ideal ``<c_i(theta) - c_i(theta*)>``
  decides the same split independently and, for algebraic parameters,
  counts the distinct values on the fiber through the squarefree part of
  the parameter's minimal polynomial: one value means globally
  identifiable, several mean locally identifiable.

For larger models the fiber is positive-dimensional and its basis gets
expensive, so the ``sliced`` strategy first fixes a transcendence basis of
the parameters (read off the Jacobian) at its true values.  The remaining
fiber is finite, and the number of values an algebraic parameter takes on it
does not change.

Verdicts are published only when two consecutive trials (alternating
primes, fresh points) agree.
"""

from __future__ import annotations

import enum
import hashlib
import logging
from dataclasses import dataclass, field
from typing import Sequence

from . import __version__
from .algebra.fields import CONFIRM_PRIME, DEFAULT_PRIME, PrimeField
from .algebra.groebner import (
    buchberger,
    is_algebraic,
    is_zero_dimensional,
    minimal_polynomial,
    standard_monomials,
)
from .algebra.linalg import matrix_rank_fp
from .algebra.poly import GREVLEX, MultiPoly, PolyRing
from .algebra.univariate import roots_in_field, squarefree_part
from .ioeq import CoefficientMap, model_coefficient_map
from .model import Model, ParamKey, canonicalize, invert, param_keys, relabel_result

log = logging.getLogger(__name__)

DEFAULT_SEED = 20240917

__all__ = [
    "IdStatus",
    "RankVerdict",
    "AssessConfig",
    "AssessmentRecord",
    "UndeterminedError",
    "CounterRNG",
    "jacobian_test",
    "groebner_classify",
    "assess",
    "assess_labeled",
    "DEFAULT_SEED",
]


class IdStatus(str, enum.Enum):
    GLOBALLY = "globally"
    LOCALLY = "locally"
    NONIDENTIFIABLE = "nonidentifiable"
    UNDETERMINED = "undetermined"

    def __str__(self):
        return self.value


class RankVerdict(str, enum.Enum):
    LOCALLY_OR_BETTER = "locally-or-better"
    NONIDENTIFIABLE = "nonidentifiable"


class UndeterminedError(RuntimeError):
    """Trials never agreed on a fully determined verdict."""

    def __init__(self, key: str, detail: str = ""):
        self.key = key
        super().__init__(f"identifiability undetermined for model {key}" + (f": {detail}" if detail else ""))


class InconsistentFiberError(RuntimeError):
    """The fiber ideal came out as the unit ideal; the point lies on it by construction."""


@dataclass(frozen=True)
class AssessConfig:
    prime: int = DEFAULT_PRIME
    prime2: int = CONFIRM_PRIME
    seed: int = DEFAULT_SEED
    max_trials: int = 6
    degree_cap: int | None = None
    strategy: str = "auto"  # full | sliced | auto (full up to 3 nodes)

    def __post_init__(self):
        if self.prime == self.prime2:
            raise ValueError("primary and confirmation primes must differ")
        if self.strategy not in ("auto", "full", "sliced"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.max_trials < 2:
            raise ValueError("max_trials must be at least 2")
        PrimeField(self.prime)
        PrimeField(self.prime2)


@dataclass
class AssessmentRecord:
    model: Model
    key: str
    statuses: dict[ParamKey, IdStatus]
    prime: int
    prime2: int
    seed: int
    trials: int
    version: str = __version__
    extra: dict = field(default_factory=dict, compare=False)


class CounterRNG:
    """Counter-mode generator: the k-th draw hashes (material, k)."""

    def __init__(self, *material):
        self.material = ":".join(str(x) for x in material)
        self.counter = 0

    def below(self, bound: int) -> int:
        h = hashlib.blake2b(f"{self.material}:{self.counter}".encode(), digest_size=16).digest()
        self.counter += 1
        return int.from_bytes(h, "big") % bound

    def nonzero(self, p: int) -> int:
        return 1 + self.below(p - 1)


def _to_fp(cmap: CoefficientMap, p: int) -> list[MultiPoly]:
    F = PrimeField(p)
    return [c.to_domain(F) for c in cmap.polys]


def jacobian_matrix(cmap: CoefficientMap, point: Sequence[int], p: int) -> list[list[int]]:
    polys = _to_fp(cmap, p)
    nv = cmap.ring.nvars
    return [[d.evaluate(point) if d else 0 for d in (f.diff(k) for k in range(nv))] for f in polys]


def _unit(k: int, nv: int) -> list[int]:
    return [1 if i == k else 0 for i in range(nv)]


def jacobian_test(
    cmap: CoefficientMap, point: Sequence[int], p: int, J: list[list[int]] | None = None
) -> list[RankVerdict]:
    """Parameter k is algebraic over the coefficients iff e_k is in the row space of J."""
    nv = cmap.ring.nvars
    if J is None:
        J = jacobian_matrix(cmap, point, p)
    base = matrix_rank_fp(J, p) if J else 0
    return [
        RankVerdict.LOCALLY_OR_BETTER
        if matrix_rank_fp(J + [_unit(k, nv)], p) == base
        else RankVerdict.NONIDENTIFIABLE
        for k in range(nv)
    ]


def transcendence_slice(J: list[list[int]], nv: int, p: int) -> list[int]:
    """Greedy set T of parameters with J and {e_k : k in T} of full rank nv.

    T is a transcendence basis of the parameters over the coefficient field;
    fixing T at its true values leaves a finite fiber without changing how
    many values each algebraic parameter takes on it.
    """
    rows = [list(r) for r in J]
    rank = matrix_rank_fp(rows, p) if rows else 0
    chosen = []
    for k in range(nv):
        if rank == nv:
            break
        r = matrix_rank_fp(rows + [_unit(k, nv)], p)
        if r > rank:
            rows.append(_unit(k, nv))
            rank = r
            chosen.append(k)
    return chosen


@dataclass
class GroebnerResult:
    statuses: list[IdStatus | None]  # None for variables fixed by the slice
    minpolys: list[list[int] | None]
    zero_dimensional: bool


def groebner_classify(
    cmap: CoefficientMap,
    point: Sequence[int],
    p: int,
    rng: CounterRNG | None = None,
    degree_cap: int | None = None,
    fixed: Sequence[int] = (),
) -> GroebnerResult:
    """Classify parameters from a Groebner basis of the fiber through ``point``.

    ``fixed`` variables are specialized to their ``point`` values first and
    get no verdict.
    """
    nv = cmap.ring.nvars
    keep = [k for k in range(nv) if k not in set(fixed)]
    polys = _to_fp(cmap, p)
    statuses: list[IdStatus | None] = [None] * nv
    minpolys: list[list[int] | None] = [None] * nv
    if fixed:
        sub = {k: point[k] for k in fixed}
        F = PrimeField(p)
        ring = PolyRing([cmap.ring.names[k] for k in keep], F)
        polys = [f.evaluate(sub).restrict(keep, ring) for f in polys]
    fiber = [f - f.ring.constant(f.evaluate([point[k] for k in keep])) for f in polys]
    fiber = [f for f in fiber if f]
    if not keep:
        return GroebnerResult(statuses, minpolys, True)
    if not fiber:
        for k in keep:
            statuses[k] = IdStatus.NONIDENTIFIABLE
        return GroebnerResult(statuses, minpolys, False)
    rng = rng or CounterRNG("slice", p, tuple(point))
    G = buchberger(fiber, GREVLEX)
    if len(G) == 1 and G[0].is_constant():
        raise InconsistentFiberError("fiber ideal is the unit ideal")
    zero_dim = is_zero_dimensional(G)
    cap_zero = len(standard_monomials(G)) if zero_dim else None
    for pos, k in enumerate(keep):
        if zero_dim:
            q = minimal_polynomial(pos, G, cap_zero)
        elif not is_algebraic(pos, G, rng.nonzero(p)):
            statuses[k] = IdStatus.NONIDENTIFIABLE
            continue
        else:
            q = minimal_polynomial(pos, G, degree_cap or 256)
            if q is None:
                statuses[k] = IdStatus.UNDETERMINED
                continue
        if q is None:
            statuses[k] = IdStatus.NONIDENTIFIABLE
            continue
        minpolys[k] = q
        sqf = squarefree_part(q, p)
        if not roots_in_field(sqf, p, [point[k]]):
            statuses[k] = IdStatus.UNDETERMINED
        elif len(sqf) == 2:
            statuses[k] = IdStatus.GLOBALLY
        else:
            statuses[k] = IdStatus.LOCALLY
    return GroebnerResult(statuses, minpolys, zero_dim)


def _trial(cmap: CoefficientMap, p: int, rng: CounterRNG, cfg: "AssessConfig", n: int):
    nv = cmap.ring.nvars
    point = [rng.nonzero(p) for _ in range(nv)]
    J = jacobian_matrix(cmap, point, p)
    jac = jacobian_test(cmap, point, p, J)
    sliced = cfg.strategy == "sliced" or (cfg.strategy == "auto" and n > 3)
    fixed = transcendence_slice(J, nv, p) if sliced else []
    try:
        gb = groebner_classify(cmap, point, p, rng, cfg.degree_cap, fixed)
    except InconsistentFiberError:
        log.warning("unit fiber ideal at p=%d; discarding trial", p)
        return None
    if sliced and not gb.zero_dimensional:
        log.warning("sliced fiber not zero-dimensional at p=%d; discarding trial", p)
        return None
    statuses = []
    for k in range(nv):
        j, s = jac[k], gb.statuses[k]
        if s is None:  # fixed by the slice; only the rank test speaks
            s = IdStatus.NONIDENTIFIABLE
            if j is not RankVerdict.NONIDENTIFIABLE:
                return None
        elif sliced and j is RankVerdict.NONIDENTIFIABLE:
            # algebraic over the enlarged field only; the rank test decides
            s = IdStatus.NONIDENTIFIABLE
        elif (j is RankVerdict.NONIDENTIFIABLE) != (s is IdStatus.NONIDENTIFIABLE):
            log.warning("rank and Groebner verdicts disagree at p=%d; discarding trial", p)
            return None
        if s is IdStatus.UNDETERMINED:
            return None
        statuses.append(s)
    return statuses


def assess_labeled(m: Model, cfg: AssessConfig = AssessConfig(), key: str | None = None) -> AssessmentRecord:
    """Assess ``m`` in its own labeling; random points are seeded by ``key``."""
    key = key if key is not None else canonicalize(m).key
    params = param_keys(m)
    cmap = model_coefficient_map(m)
    history: list[list[IdStatus] | None] = []
    for t in range(cfg.max_trials):
        p = cfg.prime if t % 2 == 0 else cfg.prime2
        rng = CounterRNG(cfg.seed, key, t)
        history.append(_trial(cmap, p, rng, cfg, m.n))
        if t >= 1 and history[-1] is not None and history[-1] == history[-2]:
            statuses = dict(zip(params, history[-1]))
            return AssessmentRecord(m, key, statuses, cfg.prime, cfg.prime2, cfg.seed, t + 1)
    raise UndeterminedError(key, f"{cfg.max_trials} trials without two agreeing")


def assess(m: Model, cfg: AssessConfig = AssessConfig()) -> AssessmentRecord:
    """Assess the canonical form of ``m`` and report against ``m``'s labels."""
    cf = canonicalize(m)
    rec = assess_labeled(cf.canonical, cfg, cf.key)
    if cf.canonical == m:
        return rec
    statuses = relabel_result(rec.statuses, invert(cf.permutation))
    return AssessmentRecord(m, rec.key, statuses, rec.prime, rec.prime2, rec.seed, rec.trials, rec.version)
