"""Shared generators for randomized property tests.

Systems are built directly as in-memory objects so the same row data can
be loaded under several monad kinds (e.g. to compare distributional and
classical evaluation of Dirac tables).
"""

from __future__ import annotations

import random

from monadlogic import (
    IDENTITY,
    NONEMPTY_SET,
    CTable,
    Dist,
    EnumDomain,
    Interpretation,
    TableFunc,
)
from monadlogic import syntax
from monadlogic.syntax import (
    And,
    Atom,
    Bind,
    Forall,
    Implies,
    Not,
    Or,
    Signature,
    Var,
)


def random_dist_pairs(rng: random.Random, values, dirac: bool = False):
    if dirac:
        return ((rng.choice(values), 1.0),)
    support = rng.sample(values, rng.randint(1, len(values)))
    raw = [rng.random() + 0.1 for _ in support]
    total = sum(raw)
    return tuple((v, w / total) for v, w in zip(support, raw))


def finite_system(rng: random.Random, dirac: bool = False):
    """A one-sort system: predicate q, computational function m, and a
    closed formula quantifying over the sort and binding m.

    Returns (signature, row data, formula).  Use :func:`interpret` to
    realize the rows under a monad kind.
    """
    size = rng.randint(1, 3)
    values = tuple(range(size))
    sig = Signature(
        sorts=frozenset(("S",)),
        mfuncs={"m": (("S",), "S")},
        preds={"q": ("S",), "r": ("S",)},
    )
    rows = {
        "q": {(v,): rng.random() < 0.5 for v in values},
        "r": {(v,): rng.random() < 0.5 for v in values},
        "m": {(v,): random_dist_pairs(rng, values, dirac) for v in values},
    }

    x, y = Var("x", "S"), Var("y", "S")
    atoms = [Atom("q", (x,)), Atom("r", (x,)), Atom("q", (y,)), Atom("r", (y,))]
    body = rng.choice(atoms)
    for _ in range(rng.randint(0, 2)):
        shape = rng.choice(("not", "and", "or", "implies"))
        other = rng.choice(atoms)
        if shape == "not":
            body = Not(body)
        elif shape == "and":
            body = And(body, other)
        elif shape == "or":
            body = Or(body, other)
        else:
            body = Implies(body, other)
    formula = Forall("x", "S", Bind("y", "m", (x,), body))
    return sig, values, rows, formula


def interpret(values, rows, monad_kind: str) -> Interpretation:
    """Realize finite-system rows under a monad kind."""

    def payload(pairs):
        if monad_kind == IDENTITY:
            assert len(pairs) == 1 and pairs[0][1] == 1.0
            return pairs[0][0]
        if monad_kind == NONEMPTY_SET:
            return frozenset(v for v, _ in pairs)
        return Dist(pairs)

    return Interpretation(
        kind=monad_kind,
        sorts={"S": EnumDomain(values)},
        preds={name: TableFunc(dict(rows[name])) for name in ("q", "r")},
        mfuncs={"m": CTable({k: payload(p) for k, p in rows["m"].items()})},
    )


def random_network_system(rng: random.Random, max_vars: int = 4, max_values: int = 3):
    """A random Bayesian network document plus a random query formula text.

    Returns (sig, doc, formula_text) in the JSON document schema so the
    same inputs drive the library and the command line.
    """
    n_vars = rng.randint(1, max_vars)
    size = rng.randint(2, max_values)
    values = list(range(size))
    sig_doc = {
        "sorts": ["S"],
        "preds": {"eq": {"args": ["S", "S"]}},
    }
    names = [f"x{i+1}" for i in range(n_vars)]
    entries = []
    for i, name in enumerate(names):
        parents = [p for p in names[:i] if rng.random() < 0.4][:2]
        rows = []
        combos = [()]
        for _ in parents:
            combos = [c + (v,) for c in combos for v in values]
        for combo in combos:
            pairs = random_dist_pairs(rng, values)
            rows.append([*combo, [[v, p] for v, p in pairs]])
        entries.append({"name": name, "sort": "S", "parents": parents, "rows": rows})
    doc = {
        "sorts": {"S": {"kind": "enum", "values": values}},
        "preds": {"eq": {"kind": "builtin", "name": "eq"}},
        "network": {"vars": entries},
    }

    def atom():
        return f"eq({rng.choice(names)}, {rng.choice(values)})"

    text = atom()
    for _ in range(rng.randint(0, 3)):
        shape = rng.choice(("!", "&", "|", "->"))
        if shape == "!":
            text = f"!({text})"
        else:
            text = f"({text}) {shape} ({atom()})"
    return sig_doc, doc, text


def random_checked_formula(rng: random.Random, sig: syntax.Signature, depth: int = 3):
    """A random well-sorted formula over the traffic-style signature,
    rendered through the public constructors (used for round-trip tests)."""
    def term_colour(env):
        if "l" in env and rng.random() < 0.6:
            return Var("l", "Colour")
        return syntax.App("red", (), "Colour")

    def formula(depth, env):
        roll = rng.random()
        if depth == 0 or roll < 0.25:
            choice = rng.randrange(4)
            if choice == 0:
                return syntax.TOP
            if choice == 1:
                return syntax.BOT
            if choice == 2:
                return Atom("eqc", (term_colour(env), term_colour(env)))
            return Atom("eqa", (syntax.App("go", (), "Action"),) * 2)
        if roll < 0.40:
            return Not(formula(depth - 1, env))
        if roll < 0.55:
            return And(formula(depth - 1, env), formula(depth - 1, env))
        if roll < 0.70:
            return Or(formula(depth - 1, env), formula(depth - 1, env))
        if roll < 0.85:
            return Implies(formula(depth - 1, env), formula(depth - 1, env))
        if roll < 0.95 and "x" not in env:
            return Forall("x", "Crossing", formula(depth - 1, env | {"x"}))
        if "x" in env and "l" not in env:
            return Bind("l", "light", (Var("x", "Crossing"),), formula(depth - 1, env | {"l"}))
        return Atom("eqc", (term_colour(env), term_colour(env)))

    return formula(depth, set())
