"""Truth algebras: connective tables and quantifier aggregators.

Each algebra packages the constants, the unary negation, the three binary
connectives and a pair of weighted-family aggregators (one per quantifier)
over one carrier of truth values:

* ``boolean``  -- classical two-valued logic on ``bool``.
* ``priest``   -- the three-valued logic of paradox on F < B < T.
* ``product``  -- probabilities with the product t-norm, probabilistic sum,
  Goguen (residual) implication and residual negation.
* ``sproduct`` -- same monoids with the strong implication 1 - x + x*y and
  involutive negation.
* ``ltn_p``    -- sproduct connectives with p-mean quantifiers (p >= 1).
* ``ltn_q``    -- sproduct connectives with log-power q-mean quantifiers
  (1/2 <= q <= 1); the universal quantifier tends to the geometric mean as
  q -> 1 and the existential one is its de-Morgan dual.
* ``stl_r``    -- extended-real robustness values combined with the smooth
  min/max approximations A^r / O^r (r > 0).  Only approximately a double
  monoid: the smooth connectives are not associative, so the monoid-law
  self-tests skip them by design.

``lift_algebra`` builds the canonical algebra on computations over a base
carrier: every connective binds its arguments and re-embeds the base
result, so e.g. lifting the boolean algebra over distributions yields the
closed forms p*q, p + q - p*q, 1 - p and 1 - p + p*q.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Tuple

from . import effects
from .errors import (
    ArityMismatchError,
    CarrierMismatchError,
    EmptyFamilyError,
    ExactOnlyError,
    NegativeWeightError,
    ParamOutOfRangeError,
    UnknownAlgebraError,
)

_LN_ZERO = 1e-300  # values below this count as 0 and contribute ln 0 = -inf
_SNAP_TOL = 1e-9


def snap01(x: float) -> float:
    """Pin epsilon excursions of probability arithmetic to the boundary.

    Convex combinations and t-(co)norm formulas are mathematically inside
    [0, 1]; floating point can land a few ulps outside.  Anything beyond
    the tolerance is a genuine carrier violation and passes through for
    the carrier check to reject.
    """
    if 0.0 <= x <= 1.0:
        return x
    if 1.0 < x <= 1.0 + _SNAP_TOL:
        return 1.0
    if -_SNAP_TOL <= x < 0.0:
        return 0.0
    return x

BOOL = "bool"
LP3_CARRIER = "lp3"
PROB = "prob"
XREAL = "xreal"
SAMPLER_CARRIER = "sampler"

FORALL = "forall"
EXISTS = "exists"


class LP3(enum.IntEnum):
    """Three-valued truth: false < both-true-and-false < true."""

    F = 0
    B = 1
    T = 2

    @classmethod
    def from_bool(cls, b: bool) -> "LP3":
        return cls.T if b else cls.F

    @classmethod
    def from_members(cls, members: Iterable[bool]) -> "LP3":
        ms = set(members)
        if ms == {True}:
            return cls.T
        if ms == {False}:
            return cls.F
        if ms == {True, False}:
            return cls.B
        raise CarrierMismatchError(f"{ms!r} is not a non-empty subset of the truth basis")

    @property
    def members(self) -> frozenset:
        if self is LP3.T:
            return frozenset((True,))
        if self is LP3.F:
            return frozenset((False,))
        return frozenset((True, False))

    def __repr__(self) -> str:
        return self.name

    __str__ = __repr__


class WeightedFamily:
    """A family of items to aggregate: exact weighted pairs or a sampled batch.

    Exact families pair every item with a nonnegative weight (not all
    zero); sampled families hold a deterministic batch of N >= 1 draws.
    """

    __slots__ = ("kind", "pairs", "values")

    def __init__(self, kind, pairs=None, values=None):
        self.kind = kind
        self.pairs = pairs
        self.values = values

    @classmethod
    def exact(cls, pairs: Iterable[Tuple[float, object]]) -> "WeightedFamily":
        ps = tuple((float(w), v) for w, v in pairs)
        for w, _ in ps:
            if w < 0.0:
                raise NegativeWeightError(f"negative family weight {w!r}")
            if not math.isfinite(w):
                raise NegativeWeightError(f"non-finite family weight {w!r}")
        if not ps or all(w == 0.0 for w, _ in ps):
            raise EmptyFamilyError("exact family needs at least one positive weight")
        return cls("exact", pairs=ps)

    @classmethod
    def sampled(cls, values: Sequence[object]) -> "WeightedFamily":
        vs = tuple(values)
        if not vs:
            raise EmptyFamilyError("sampled family needs at least one draw")
        return cls("sampled", values=vs)

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    def items(self):
        """Positive-weight items of an exact family."""
        return tuple((w, v) for w, v in self.pairs if w > 0.0)

    def map_values(self, fn: Callable) -> "WeightedFamily":
        if self.is_exact:
            return WeightedFamily("exact", pairs=tuple((w, fn(v)) for w, v in self.pairs))
        return WeightedFamily("sampled", values=tuple(fn(v) for v in self.values))

    def __repr__(self):
        body = self.pairs if self.is_exact else self.values
        return f"WeightedFamily({self.kind}, {body!r})"


@dataclass(frozen=True)
class TruthAlgebra:
    """An operation table over one truth-value carrier."""

    name: str
    carrier: str
    top: object
    bot: object
    neg: Callable
    conj: Callable
    disj: Callable
    implies: Callable
    params: dict = field(default_factory=dict)
    approximate: bool = False  # smooth connectives; monoid laws hold only in the limit


# connective tables


def _prob_implies_residual(x: float, y: float) -> float:
    return 1.0 if x <= y else y / x


def _prob_neg_residual(x: float) -> float:
    return 1.0 if x == 0.0 else 0.0


def _signed_pow(x: float, q: float) -> float:
    """Odd extension of the power map, so log-space means stay real."""
    if x == 0.0:
        return 0.0
    if x == -math.inf:
        return -math.inf
    if x == math.inf:
        return math.inf
    return math.copysign(abs(x) ** q, x)


def _smooth_min(pairs: Sequence[Tuple[float, float]], r: float) -> float:
    """Weighted smooth-minimum of extended reals; tends to min as r grows.

    Three cases split on the sign of the minimum; +inf entries carry
    vanishing weight and drop out unless every entry is +inf.
    """
    finite_min = math.inf
    for _, v in pairs:
        if v < finite_min:
            finite_min = v
    m = finite_min
    if m == math.inf:
        return math.inf
    if m == -math.inf:
        return -math.inf
    if m == 0.0:
        return 0.0
    num = den = 0.0
    if m < 0.0:
        for w, v in pairs:
            if v == math.inf:
                continue
            t = (v - m) / m  # <= 0
            e = math.exp(r * t)
            num += w * m * math.exp(t) * e
            den += w * e
    else:
        for w, v in pairs:
            if v == math.inf:
                continue
            t = (v - m) / m  # >= 0
            e = math.exp(-r * t)
            num += w * v * e
            den += w * e
    return num / den


def _smooth_max(pairs: Sequence[Tuple[float, float]], r: float) -> float:
    return -_smooth_min(tuple((w, -v) for w, v in pairs), r)


def make_algebra(name: str, params: dict = None) -> TruthAlgebra:
    """Build a named truth algebra, validating its parameters."""
    params = dict(params or {})
    if name == "boolean":
        return TruthAlgebra(
            name, BOOL, True, False,
            neg=lambda x: not x,
            conj=lambda x, y: x and y,
            disj=lambda x, y: x or y,
            implies=lambda x, y: (not x) or y,
        )
    if name == "priest":
        return TruthAlgebra(
            name, LP3_CARRIER, LP3.T, LP3.F,
            neg=lambda x: LP3(2 - x),
            conj=lambda x, y: LP3(min(x, y)),
            disj=lambda x, y: LP3(max(x, y)),
            implies=lambda x, y: LP3(max(2 - x, y)),
        )
    if name == "product":
        return TruthAlgebra(
            name, PROB, 1.0, 0.0,
            neg=_prob_neg_residual,
            conj=lambda x, y: x * y,
            disj=lambda x, y: snap01(x + y - x * y),
            implies=_prob_implies_residual,
        )
    if name in ("sproduct", "ltn_p", "ltn_q"):
        if name == "ltn_p":
            p = float(params.get("p", 0.0))
            if p < 1.0:
                raise ParamOutOfRangeError(f"ltn_p needs p >= 1, got {params.get('p')!r}")
            params = {"p": p}
        elif name == "ltn_q":
            q = float(params.get("q", 0.0))
            if not 0.5 <= q <= 1.0:
                raise ParamOutOfRangeError(f"ltn_q needs 1/2 <= q <= 1, got {params.get('q')!r}")
            params = {"q": q}
        else:
            params = {}
        return TruthAlgebra(
            name, PROB, 1.0, 0.0,
            neg=lambda x: 1.0 - x,
            conj=lambda x, y: x * y,
            disj=lambda x, y: snap01(x + y - x * y),
            implies=lambda x, y: snap01(1.0 - x + x * y),
            params=params,
        )
    if name == "stl_r":
        r = float(params.get("r", 0.0))
        if not r > 0.0:
            raise ParamOutOfRangeError(f"stl_r needs r > 0, got {params.get('r')!r}")
        return TruthAlgebra(
            name, XREAL, math.inf, -math.inf,
            neg=lambda x: -x,
            conj=lambda x, y: _smooth_min(((1.0, x), (1.0, y)), r),
            disj=lambda x, y: _smooth_max(((1.0, x), (1.0, y)), r),
            implies=lambda x, y: _smooth_max(((1.0, -x), (1.0, y)), r),
            params={"r": r},
            approximate=True,
        )
    raise UnknownAlgebraError(f"unknown algebra {name!r}")


def parse_algebra_string(text: str) -> TruthAlgebra:
    """Parse a selection string: boolean | priest | product | sproduct |
    ltn:p=<float> | ltnq:q=<float> | stl:r=<float>."""
    head, _, tail = text.partition(":")
    if head in ("boolean", "priest", "product", "sproduct") and not tail:
        return make_algebra(head)
    named = {"ltn": ("ltn_p", "p"), "ltnq": ("ltn_q", "q"), "stl": ("stl_r", "r")}
    if head in named and tail:
        name, pname = named[head]
        key, _, raw = tail.partition("=")
        if key == pname:
            try:
                value = float(raw)
            except ValueError:
                raise UnknownAlgebraError(f"bad algebra parameter in {text!r}")
            return make_algebra(name, {pname: value})
    raise UnknownAlgebraError(f"unknown algebra selection {text!r}")


def check_carrier(alg: TruthAlgebra, v):
    """Coerce and validate one truth value against the algebra's carrier."""
    if alg.carrier == BOOL:
        if isinstance(v, bool):
            return v
    elif alg.carrier == LP3_CARRIER:
        if isinstance(v, LP3):
            return v
    elif alg.carrier == PROB:
        if isinstance(v, (int, float)) and not isinstance(v, bool) and 0.0 <= v <= 1.0:
            return float(v)
    elif alg.carrier == XREAL:
        if isinstance(v, (int, float)) and not isinstance(v, bool) and not math.isnan(v):
            return float(v)
    elif alg.carrier == SAMPLER_CARRIER:
        if isinstance(v, effects.Sampler):
            return v
    raise CarrierMismatchError(f"{v!r} is not a {alg.carrier} truth value ({alg.name})")


_CONNECTIVES = {"neg": 1, "conj": 2, "disj": 2, "implies": 2}


def apply_connective(alg: TruthAlgebra, op: str, args: Sequence):
    """Apply one of neg/conj/disj/implies to carrier-checked arguments."""
    if op not in _CONNECTIVES:
        raise ArityMismatchError(f"unknown connective {op!r}")
    if len(args) != _CONNECTIVES[op]:
        raise ArityMismatchError(f"{op} expects {_CONNECTIVES[op]} arguments, got {len(args)}")
    checked = [check_carrier(alg, a) for a in args]
    return getattr(alg, op)(*checked)


# aggregation


def sampled_log_mean_stats(values: Sequence[float]) -> Tuple[float, float]:
    """Monte Carlo estimate of exp(E[ln v]) with a delta-method stderr.

    The mean is the plain (Bessel-uncorrected) sample mean of ln v; a zero
    among the draws collapses the estimate to 0 with an undefined stderr.
    """
    n = len(values)
    logs = []
    for v in values:
        if v < _LN_ZERO:
            return 0.0, math.nan
        logs.append(math.log(v))
    mean = sum(logs) / n
    est = math.exp(mean)
    var = sum((l - mean) ** 2 for l in logs) / n
    return est, est * math.sqrt(var / n)


def _weighted_product(items, complement: bool) -> float:
    total = 1.0
    for w, v in items:
        x = (1.0 - v) if complement else v
        if x < _LN_ZERO:
            return 0.0
        total *= x**w
    return total


def _normalized(items):
    total = sum(w for w, _ in items)
    return tuple((w / total, v) for w, v in items)


def _pmean(items, p: float) -> float:
    acc = 0.0
    for w, v in items:
        acc += w * v**p
    return acc ** (1.0 / p)


def _log_power_forall(items, q: float) -> float:
    acc = 0.0
    for w, v in items:
        if v < _LN_ZERO:
            return 0.0
        acc += w * _signed_pow(math.log(v), q)
    return math.exp(_signed_pow(acc, 1.0 / q))


def aggregate(alg: TruthAlgebra, kind: str, fam: WeightedFamily):
    """Reduce a weighted family of truth values with the algebra's quantifier
    aggregator (``forall`` or ``exists``)."""
    if kind not in (FORALL, EXISTS):
        raise ArityMismatchError(f"unknown aggregation kind {kind!r}")
    if fam.is_exact:
        items = tuple((w, check_carrier(alg, v)) for w, v in fam.items())
    else:
        values = tuple(check_carrier(alg, v) for v in fam.values)

    if alg.carrier in (BOOL, LP3_CARRIER, SAMPLER_CARRIER):
        if not fam.is_exact:
            raise ExactOnlyError(f"{alg.name} aggregates exact finite families only")
        if alg.carrier == SAMPLER_CARRIER:
            # lifted fold; expectation equals the product-family aggregators
            for w, _ in items:
                if w != 1.0:
                    raise CarrierMismatchError(
                        "sampler-carrier aggregation supports unit weights only"
                    )
        op = alg.conj if kind == FORALL else alg.disj
        acc = items[0][1]
        for _, v in items[1:]:
            acc = op(acc, v)
        return acc

    if alg.name in ("product", "sproduct") or alg.name.startswith("lifted_"):
        if fam.is_exact:
            if kind == FORALL:
                return _weighted_product(items, complement=False)
            return 1.0 - _weighted_product(items, complement=True)
        if kind == FORALL:
            return sampled_log_mean_stats(values)[0]
        return 1.0 - sampled_log_mean_stats([1.0 - v for v in values])[0]

    if alg.name == "ltn_p":
        p = alg.params["p"]
        items = _normalized(items) if fam.is_exact else tuple(
            (1.0 / len(values), v) for v in values
        )
        if kind == EXISTS:
            return snap01(_pmean(items, p))
        return snap01(1.0 - _pmean(tuple((w, 1.0 - v) for w, v in items), p))

    if alg.name == "ltn_q":
        q = alg.params["q"]
        items = _normalized(items) if fam.is_exact else tuple(
            (1.0 / len(values), v) for v in values
        )
        if kind == FORALL:
            return snap01(_log_power_forall(items, q))
        return snap01(1.0 - _log_power_forall(tuple((w, 1.0 - v) for w, v in items), q))

    if alg.name == "stl_r":
        if not fam.is_exact:
            raise ExactOnlyError("stl_r aggregates exact finite families only")
        r = alg.params["r"]
        return _smooth_min(items, r) if kind == FORALL else _smooth_max(items, r)

    raise UnknownAlgebraError(f"no aggregator for algebra {alg.name!r}")


# lifting


def _lift_embed(monad_kind: str):
    if monad_kind == effects.IDENTITY:
        return lambda b: effects.Pure(b), lambda c: c.value
    if monad_kind == effects.NONEMPTY_SET:
        return (
            lambda t: effects.NESet(t.members),
            lambda c: LP3.from_members(c.values),
        )
    if monad_kind == effects.DISTRIBUTION:
        return (
            lambda p: effects.Dist(((True, p), (False, 1.0 - p))),
            lambda c: snap01(sum(q for v, q in c.pairs if v)),
        )
    if monad_kind == effects.SAMPLER:
        return lambda s: s, lambda c: c
    raise CarrierMismatchError(f"cannot lift over monad kind {monad_kind!r}")


_LIFT_CARRIER = {
    effects.IDENTITY: BOOL,
    effects.NONEMPTY_SET: LP3_CARRIER,
    effects.DISTRIBUTION: PROB,
    effects.SAMPLER: SAMPLER_CARRIER,
}


def lift_algebra(base: TruthAlgebra, monad_kind: str) -> TruthAlgebra:
    """Lift a base algebra to computations: bind the arguments, apply the
    base operation, and return the unit of the result."""
    if base.carrier != BOOL:
        raise CarrierMismatchError("only the boolean base algebra is lifted")
    embed, extract = _lift_embed(monad_kind)

    if monad_kind == effects.SAMPLER:
        # same bind-both-arguments semantics, specialized so constant
        # samplers (the unit image) fold without consuming keys
        def lifted_unop(op):
            def run(a):
                if a.is_const:
                    return effects.unit(effects.SAMPLER, op(a.const))
                return effects.Sampler(lambda key: op(a.sample(key)))

            return run

        def lifted_binop(op):
            def run(a, b):
                if a.is_const and b.is_const:
                    return effects.unit(effects.SAMPLER, op(a.const, b.const))
                return effects.Sampler(
                    lambda key: op(a.sample(key.child(0)), b.sample(key.child(1)))
                )

            return run

    else:

        def lifted_unop(op):
            def run(a):
                ca = embed(a)
                return extract(
                    effects.bind(ca, lambda x: effects.unit(monad_kind, op(x)))
                )

            return run

        def lifted_binop(op):
            def run(a, b):
                ca, cb = embed(a), embed(b)
                return extract(
                    effects.bind(
                        ca,
                        lambda x: effects.bind(
                            cb, lambda y: effects.unit(monad_kind, op(x, y))
                        ),
                    )
                )

            return run

    return TruthAlgebra(
        name=f"lifted_{base.name}_{monad_kind}",
        carrier=_LIFT_CARRIER[monad_kind],
        top=extract(effects.unit(monad_kind, base.top)),
        bot=extract(effects.unit(monad_kind, base.bot)),
        neg=lifted_unop(base.neg),
        conj=lifted_binop(base.conj),
        disj=lifted_binop(base.disj),
        implies=lifted_binop(base.implies),
    )
