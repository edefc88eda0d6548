"""Computation monads and a splittable deterministic randomness source.

A :class:`Computation` is an effectful value over some carrier of plain
Python values: a single value, a non-empty set of candidate values, a
finitely-supported probability distribution, or a seeded sampling
procedure.  ``unit`` embeds a value into a computation and ``bind``
sequences computations (the Kleisli extension), with the usual laws

    bind(unit(x), k) == k(x)
    bind(c, unit)    == c
    bind(bind(c, f), g) == bind(c, lambda x: bind(f(x), g))

holding exactly for the finite kinds and statistically for samplers.

Randomness is never global: every draw is a pure function of a
:class:`RandomKey`, so sampling is reproducible bit-for-bit given
``(seed, sample index)`` regardless of evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Union

from .errors import BudgetMissingError, KindMismatchError

Value = Union[bool, int, float, str]

IDENTITY = "identity"
NONEMPTY_SET = "nonempty_set"
DISTRIBUTION = "distribution"
SAMPLER = "sampler"

MONAD_KINDS = (IDENTITY, NONEMPTY_SET, DISTRIBUTION, SAMPLER)

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_DRAW_SALT = 0xD1B54A32D192ED03
_PROB_EPS = 1e-15
_SUM_TOL = 1e-9


def _mix(z: int) -> int:
    """splitmix64 finalizer: avalanche a 64-bit state."""
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


class RandomKey:
    """A point in a key tree: a 64-bit seed plus a path of child indices.

    Child keys derived from distinct indices yield statistically
    independent streams; derivation is a pure function of (seed, path).
    """

    __slots__ = ("seed", "path", "_state")

    def __init__(self, seed: int, path: tuple = ()):
        self.seed = seed & _MASK
        self.path = ()
        self._state = _mix(self.seed ^ _GAMMA)
        for index in path:
            child = self.child(index)
            self.path, self._state = child.path, child._state

    def child(self, index: int) -> "RandomKey":
        key = object.__new__(RandomKey)
        key.seed = self.seed
        key.path = self.path + (index,)
        # splitmix64 finalizer, inlined for the per-sample hot path
        z = (self._state + (index + 1) * _GAMMA) & _MASK
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
        key._state = z ^ (z >> 31)
        return key

    def uniform(self, index: int = 0) -> float:
        """Deterministic uniform draw in (0, 1), one per (key, index)."""
        z = (self._state + (index + 1) * _DRAW_SALT) & _MASK
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
        return ((z ^ (z >> 31)) + 1.0) / (2.0**64 + 1.0)

    def normal(self, mu: float = 0.0, sigma: float = 1.0, index: int = 0) -> float:
        """Deterministic normal draw via the Box-Muller transform."""
        u1 = self.uniform(2 * index)
        u2 = self.uniform(2 * index + 1)
        return mu + sigma * math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def __repr__(self) -> str:
        return f"RandomKey(seed={self.seed}, path={self.path})"


def _type_rank(v: Value) -> int:
    if isinstance(v, bool):
        return 0
    if isinstance(v, int):
        return 1
    if isinstance(v, float):
        return 2
    return 3


def _sort_key(v: Value):
    return (_type_rank(v), v)


class Computation:
    """Base class; concrete kinds below."""

    kind: str


@dataclass(frozen=True)
class Pure(Computation):
    """A stateless computation: just the value (identity monad)."""

    value: Value
    kind = IDENTITY


class NESet(Computation):
    """A non-deterministic computation: a non-empty set of candidates."""

    kind = NONEMPTY_SET
    __slots__ = ("values",)

    def __init__(self, values: Iterable[Value]):
        vs = frozenset(values)
        if not vs:
            raise ValueError("non-deterministic computations need at least one value")
        object.__setattr__(self, "values", vs)

    def __eq__(self, other):
        return isinstance(other, NESet) and self.values == other.values

    def __hash__(self):
        return hash((NESet, self.values))

    def __repr__(self):
        return f"NESet({sorted(self.values, key=_sort_key)!r})"


class Dist(Computation):
    """A finitely-supported probability distribution.

    Support is canonicalized: duplicates merged, entries below 1e-15
    dropped (then renormalized), pairs sorted by a total value order, so
    structural equality is decidable.
    """

    kind = DISTRIBUTION
    __slots__ = ("pairs",)

    def __init__(self, pairs: Iterable):
        acc: dict = {}
        for v, p in pairs:
            p = float(p)
            if p < 0.0:
                raise ValueError(f"negative probability {p!r} for {v!r}")
            acc[v] = acc.get(v, 0.0) + p
        total = sum(acc.values())
        if not math.isclose(total, 1.0, rel_tol=0.0, abs_tol=_SUM_TOL):
            raise ValueError(f"distribution mass {total!r} is not 1")
        kept = {v: p for v, p in acc.items() if p >= _PROB_EPS}
        if not kept:
            raise ValueError("distribution has no support above threshold")
        norm = sum(kept.values())
        if len(kept) != len(acc):
            kept = {v: p / norm for v, p in kept.items()}
        object.__setattr__(
            self, "pairs", tuple(sorted(kept.items(), key=lambda vp: _sort_key(vp[0])))
        )

    def prob(self, value: Value) -> float:
        for v, p in self.pairs:
            if v == value:
                return p
        return 0.0

    @property
    def support(self):
        return tuple(v for v, _ in self.pairs)

    def __eq__(self, other):
        return isinstance(other, Dist) and self.pairs == other.pairs

    def __hash__(self):
        return hash((Dist, self.pairs))

    def __repr__(self):
        return f"Dist({list(self.pairs)!r})"


_NO_CONST = object()


class Sampler(Computation):
    """A seeded sampling procedure: a pure function of a RandomKey.

    Constant samplers (the image of ``unit``) are flagged so ``bind`` may
    apply the left-unit monad law directly instead of consuming keys.
    """

    kind = SAMPLER
    __slots__ = ("fn", "const")

    def __init__(self, fn: Callable[[RandomKey], Value] = None, const=_NO_CONST):
        self.fn = fn
        self.const = const

    @property
    def is_const(self) -> bool:
        return self.const is not _NO_CONST

    def sample(self, key: RandomKey) -> Value:
        if self.const is not _NO_CONST:
            return self.const
        return self.fn(key)

    def __repr__(self):
        if self.is_const:
            return f"Sampler(const={self.const!r})"
        return f"Sampler({self.fn!r})"


_TRUE_SAMPLER: "Sampler"
_FALSE_SAMPLER: "Sampler"


def unit(kind: str, v: Value) -> Computation:
    """Embed a value into a computation of the given monad kind."""
    if kind == IDENTITY:
        return Pure(v)
    if kind == NONEMPTY_SET:
        return NESet((v,))
    if kind == DISTRIBUTION:
        return Dist(((v, 1.0),))
    if kind == SAMPLER:
        if v is True:  # constant samplers are immutable, so share them
            return _TRUE_SAMPLER
        if v is False:
            return _FALSE_SAMPLER
        return Sampler(const=v)
    raise KindMismatchError(f"unknown monad kind {kind!r}")


def _expect_kind(c: Computation, kind: str) -> Computation:
    if c.kind != kind:
        raise KindMismatchError(
            f"continuation returned a {c.kind!r} computation inside a {kind!r} one"
        )
    return c


def bind(c: Computation, k: Callable[[Value], Computation]) -> Computation:
    """Kleisli extension: sequence ``c`` into the computation ``k`` builds.

    identity: plain application.  Sets: union of images.  Distributions:
    the two-level marginal, renormalization-checked.  Samplers: draw the
    outer value with child key 0, run the continuation with child key 1.
    """
    if isinstance(c, Pure):
        return _expect_kind(k(c.value), IDENTITY)
    if isinstance(c, NESet):
        out = set()
        for a in c.values:
            out |= _expect_kind(k(a), NONEMPTY_SET).values
        return NESet(out)
    if isinstance(c, Dist):
        acc: dict = {}
        for a, p in c.pairs:
            for b, q in _expect_kind(k(a), DISTRIBUTION).pairs:
                acc[b] = acc.get(b, 0.0) + p * q
        return Dist(acc.items())
    if isinstance(c, Sampler):
        if c.is_const:
            return _expect_kind(k(c.const), SAMPLER)

        def run(key: RandomKey) -> Value:
            a = c.sample(key.child(0))
            return _expect_kind(k(a), SAMPLER).sample(key.child(1))

        return Sampler(run)
    raise KindMismatchError(f"cannot bind {type(c).__name__}")


_TRUE_SAMPLER = Sampler(const=True)
_FALSE_SAMPLER = Sampler(const=False)


def _as_bool(v: Value) -> bool:
    if isinstance(v, bool):
        return v
    if v in (0, 1):
        return bool(v)
    raise KindMismatchError(f"{v!r} is not a truth-basis value")


@dataclass(frozen=True)
class Realization:
    """The observable result of a computation over the truth basis."""

    value: object
    stderr: float = None
    samples: int = None
    seed: int = None

    @property
    def is_estimate(self) -> bool:
        return self.stderr is not None


def realize(c: Computation, budget: int = None, key: RandomKey = None) -> Realization:
    """Read a truth-basis computation off as a report.

    Exact kinds are read directly; samplers are estimated from ``budget``
    draws keyed by (seed, sample index), with a binomial standard error.
    """
    from .algebra import LP3

    if isinstance(c, Pure):
        return Realization(_as_bool(c.value))
    if isinstance(c, NESet):
        return Realization(LP3.from_members(_as_bool(v) for v in c.values))
    if isinstance(c, Dist):
        return Realization(sum(p for v, p in c.pairs if _as_bool(v)))
    if isinstance(c, Sampler):
        if c.is_const:
            return Realization(
                1.0 if _as_bool(c.const) else 0.0,
                stderr=0.0,
                samples=budget,
                seed=key.seed if key is not None else None,
            )
        if budget is None or budget < 1:
            raise BudgetMissingError("sampler realization needs a sample budget N >= 1")
        if key is None:
            raise BudgetMissingError("sampler realization needs a RandomKey")
        hits = 0
        sample = c.sample
        child = key.child
        for i in range(budget):
            v = sample(child(i))
            if v is True:
                hits += 1
            elif v is not False and _as_bool(v):
                hits += 1
        est = hits / budget
        stderr = math.sqrt(est * (1.0 - est) / budget)
        return Realization(est, stderr=stderr, samples=budget, seed=key.seed)
    raise KindMismatchError(f"cannot realize {type(c).__name__}")
