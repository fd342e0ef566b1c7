"""Equational properties of quasigroups and a forward-chaining deduction engine.

Identities live in a plain-text catalogue (``data/identities.txt``) and are
evaluated exhaustively with numpy broadcasting.  Results are stored in the
quasigroup's attribute store; after every store, :func:`deduce_properties`
applies the implication rules so that, e.g., a commutative left Bol loop is
known to be Moufang without scanning the Moufang identity.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from importlib import resources
from typing import Callable

import numpy as np

from .core import Loop, Quasigroup, closure_mask
from .errors import AttributeConflict, LoopRequired, NotPowerAssociative, UnknownIdentity, UnknownProperty

# ---------------------------------------------------------------------------
# terms

_BINARY = {"*", "\\", "/"}
_UNARY = {"^l", "^r"}


@dataclass(frozen=True)
class Term:
    op: str  # "var", one of _BINARY or _UNARY
    args: tuple = ()
    name: str = ""

    def variables(self) -> list[str]:
        if self.op == "var":
            return [self.name]
        out = []
        for a in self.args:
            for v in a.variables():
                if v not in out:
                    out.append(v)
        return out

    def __str__(self) -> str:
        if self.op == "var":
            return self.name
        return " ".join([self.op] + [str(a) for a in self.args])


def parse_term(text: str | list[str]) -> Term:
    """Parse a term in prefix notation, e.g. ``"* * x y z"``."""
    tokens = text.split() if isinstance(text, str) else list(text)
    pos = 0

    def walk() -> Term:
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError(f"truncated term {text!r}")
        tok = tokens[pos]
        pos += 1
        if tok in _BINARY:
            return Term(tok, (walk(), walk()))
        if tok in _UNARY:
            return Term(tok, (walk(),))
        if tok.isidentifier():
            return Term("var", name=tok)
        raise ValueError(f"bad token {tok!r} in {text!r}")

    term = walk()
    if pos != len(tokens):
        raise ValueError(f"trailing tokens in {text!r}")
    return term


@dataclass(frozen=True)
class Identity:
    name: str
    arity: int
    loops_only: bool
    lhs: Term
    rhs: Term

    @property
    def variables(self) -> list[str]:
        out = self.lhs.variables()
        for v in self.rhs.variables():
            if v not in out:
                out.append(v)
        return out


def parse_catalogue(text: str) -> dict[str, Identity]:
    out: dict[str, Identity] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rhs = line.partition("=")
        parts = head.split()
        if len(parts) < 4 or not rhs.strip():
            raise ValueError(f"line {lineno}: malformed identity")
        name, arity, scope = parts[0], int(parts[1]), parts[2]
        if scope not in ("Q", "L"):
            raise ValueError(f"line {lineno}: scope must be Q or L")
        ident = Identity(name, arity, scope == "L", parse_term(parts[3:]), parse_term(rhs))
        if len(ident.variables) != arity:
            raise ValueError(f"line {lineno}: arity {arity} but variables {ident.variables}")
        if name in out:
            raise ValueError(f"line {lineno}: duplicate identity {name}")
        out[name] = ident
    return out


def catalogue_text() -> str:
    return resources.files("loopkit").joinpath("data/identities.txt").read_text(encoding="utf-8")


IDENTITIES: dict[str, Identity] = parse_catalogue(catalogue_text())

# ---------------------------------------------------------------------------
# evaluation

# How many direct (non-cached) scans were run, by property name.
EVALUATIONS: Counter = Counter()

_CHUNK = 1 << 22


def _eval_term(term: Term, env: dict, Q: Quasigroup):
    if term.op == "var":
        return env[term.name]
    a = [_eval_term(x, env, Q) for x in term.args]
    if term.op == "*":
        return Q.table[a[0], a[1]]
    if term.op == "\\":
        return Q.ldiv_table[a[0], a[1]]
    if term.op == "/":
        return Q.rdiv_table[a[0], a[1]]
    if term.op == "^l":
        return Q.rdiv_table[0, a[0]]
    return Q.ldiv_table[a[0], 0]


def _check_scope(Q: Quasigroup, name: str, loops_only: bool) -> None:
    if loops_only and not isinstance(Q, Loop):
        raise LoopRequired(f"{name} is defined for loops only")


def counterexample(Q: Quasigroup, name: str) -> tuple[int, ...] | None:
    """First violating variable assignment in row-major order, or None."""
    try:
        ident = IDENTITIES[name]
    except KeyError:
        raise UnknownIdentity(name) from None
    _check_scope(Q, name, ident.loops_only)
    EVALUATIONS[name] += 1
    n = Q.order
    vars_ = ident.variables
    k = len(vars_)
    if n ** k <= _CHUNK or k == 1:
        env = {v: np.arange(n).reshape([n if i == j else 1 for j in range(k)]) for i, v in enumerate(vars_)}
        bad = np.argwhere(np.broadcast_to(_eval_term(ident.lhs, env, Q) != _eval_term(ident.rhs, env, Q), (n,) * k))
        return tuple(int(i) for i in bad[0]) if len(bad) else None
    for first in range(n):
        env = {vars_[0]: np.array(first).reshape((1,) * (k - 1))}
        for i, v in enumerate(vars_[1:]):
            env[v] = np.arange(n).reshape([n if i == j else 1 for j in range(k - 1)])
        diff = np.broadcast_to(_eval_term(ident.lhs, env, Q) != _eval_term(ident.rhs, env, Q), (n,) * (k - 1))
        bad = np.argwhere(diff)
        if len(bad):
            return (first, *(int(i) for i in bad[0]))
    return None


def _is_assoc(t: np.ndarray) -> bool:
    return bool(np.array_equal(t[t], t[:, t]))


def _sub_table(Q: Quasigroup, idx: np.ndarray) -> np.ndarray:
    lookup = np.full(Q.order, -1, dtype=np.intp)
    lookup[idx] = np.arange(idx.size)
    return lookup[Q.table[np.ix_(idx, idx)]]


def _generated(Q: Quasigroup, elems) -> np.ndarray:
    mask = np.zeros(Q.order, dtype=bool)
    mask[list(elems)] = True
    return np.nonzero(closure_mask(Q.table, Q.ldiv_table, Q.rdiv_table, mask))[0]


def _power_associative(L: Loop) -> bool:
    return all(_is_assoc(_sub_table(L, _generated(L, (0, x)))) for x in range(L.order))


def _diassociative(L: Loop) -> bool:
    n = L.order
    verified: list[np.ndarray] = []
    for x in range(1, n):
        for y in range(x + 1, n):
            if any(h[x] and h[y] for h in verified):
                continue
            idx = _generated(L, (0, x, y))
            if not _is_assoc(_sub_table(L, idx)):
                return False
            mask = np.zeros(n, dtype=bool)
            mask[idx] = True
            verified.append(mask)
    return True


def _powers(L: Loop, x: int) -> list[int]:
    sub = _generated(L, (0, x))
    if not _is_assoc(_sub_table(L, sub)):
        raise NotPowerAssociative(f"element {x} does not generate a group")
    out, r = [0], int(L.table[0, x])
    while r != 0:
        out.append(r)
        r = int(L.table[r, x])
    return out


def _all_powers(L: Loop) -> list[list[int]]:
    return [_powers(L, x) for x in range(L.order)]


def _left_power_alternative(L: Loop) -> bool:
    t = L.table
    for p in _all_powers(L):
        k = len(p)
        for a in range(k):
            for b in range(k):
                if not np.array_equal(t[p[a]][t[p[b]]], t[p[(a + b) % k]]):
                    return False
    return True


def _right_power_alternative(L: Loop) -> bool:
    t = L.table
    for p in _all_powers(L):
        k = len(p)
        for a in range(k):
            for b in range(k):
                if not np.array_equal(t[t[:, p[a]], p[b]], t[:, p[(a + b) % k]]):
                    return False
    return True


def _lcc(L: Loop) -> bool:
    t, ld = L.table, L.ldiv_table
    section = {row.tobytes() for row in t}
    for x in range(L.order):
        for y in range(L.order):
            # z -> x(y(x\z))
            if t[x][t[y][ld[x]]].tobytes() not in section:
                return False
    return True


def _rcc(L: Loop) -> bool:
    t, rd = L.table, L.rdiv_table
    section = {np.ascontiguousarray(t[:, j]).tobytes() for j in range(L.order)}
    for x in range(L.order):
        for y in range(L.order):
            # z -> ((z/x)y)x
            if t[:, x][t[:, y][rd[:, x]]].tobytes() not in section:
                return False
    return True


# Predicates that are not a single identity.  Each takes the quasigroup and
# a lookup used to obtain other properties (cached or direct).
Lookup = Callable[[Quasigroup, str], bool]

PREDICATES: dict[str, tuple[bool, Callable[[Quasigroup, Lookup], bool]]] = {
    "alternative": (False, lambda Q, f: f(Q, "leftAlternative") and f(Q, "rightAlternative")),
    "distributive": (False, lambda Q, f: f(Q, "leftDistributive") and f(Q, "rightDistributive")),
    "totallySymmetric": (False, lambda Q, f: f(Q, "semisymmetric") and f(Q, "commutative")),
    "steinerQuasigroup": (False, lambda Q, f: f(Q, "idempotent") and f(Q, "totallySymmetric")),
    "inverseProperty": (True, lambda Q, f: f(Q, "leftInverseProperty") and f(Q, "rightInverseProperty")),
    "powerAssociative": (True, lambda Q, f: _power_associative(Q)),
    "diassociative": (True, lambda Q, f: _diassociative(Q)),
    "leftPowerAlternative": (True, lambda Q, f: _left_power_alternative(Q)),
    "rightPowerAlternative": (True, lambda Q, f: _right_power_alternative(Q)),
    "powerAlternative": (True, lambda Q, f: f(Q, "leftPowerAlternative") and f(Q, "rightPowerAlternative")),
    "LCC": (True, lambda Q, f: _lcc(Q)),
    "RCC": (True, lambda Q, f: _rcc(Q)),
    "CC": (True, lambda Q, f: f(Q, "LCC") and f(Q, "RCC")),
    "leftBruck": (True, lambda Q, f: f(Q, "leftBol") and f(Q, "automorphicInverseProperty")),
    "rightBruck": (True, lambda Q, f: f(Q, "rightBol") and f(Q, "automorphicInverseProperty")),
}

ALIASES = {
    "medial": "entropic",
    "leftKLoop": "leftBruck",
    "rightKLoop": "rightBruck",
    "steiner": "steinerQuasigroup",
}

ALL_PROPERTIES = tuple(IDENTITIES) + tuple(PREDICATES)


def loops_only(name: str) -> bool:
    name = ALIASES.get(name, name)
    if name in IDENTITIES:
        return IDENTITIES[name].loops_only
    return PREDICATES[name][0]


def evaluate(Q: Quasigroup, name: str) -> bool:
    """Direct test of a property, ignoring and not touching any cache."""
    name = ALIASES.get(name, name)
    if name in IDENTITIES:
        return counterexample(Q, name) is None
    if name not in PREDICATES:
        raise UnknownProperty(name)
    scope, fn = PREDICATES[name]
    _check_scope(Q, name, scope)
    EVALUATIONS[name] += 1
    return bool(fn(Q, evaluate))


def has_property(Q: Quasigroup, name: str) -> bool:
    """Cached test of an identity or predicate, followed by deduction."""
    name = ALIASES.get(name, name)
    if name not in IDENTITIES and name not in PREDICATES:
        raise UnknownProperty(name)
    known = Q.attrs.get(name)
    if known is not None:
        return known
    if name in IDENTITIES:
        _check_scope(Q, name, IDENTITIES[name].loops_only)
        value = counterexample(Q, name) is None
    else:
        scope, fn = PREDICATES[name]
        _check_scope(Q, name, scope)
        EVALUATIONS[name] += 1
        value = bool(fn(Q, has_property))
    Q.attrs.set(name, value, "computed")
    deduce_properties(Q)
    return value


def satisfies_identity(Q: Quasigroup, name: str) -> bool:
    if ALIASES.get(name, name) not in IDENTITIES:
        raise UnknownIdentity(name)
    return has_property(Q, name)


def property_predicate(Q: Quasigroup, name: str) -> bool:
    if ALIASES.get(name, name) not in PREDICATES:
        raise UnknownProperty(name)
    return has_property(Q, name)


# ---------------------------------------------------------------------------
# deduction


@dataclass(frozen=True)
class Rule:
    premises: tuple[str, ...]
    conclusion: str

    def __str__(self) -> str:
        return " and ".join(self.premises) + " => " + self.conclusion


# Identities that hold in every group.
GROUP_LAWS = (
    "leftAlternative",
    "rightAlternative",
    "flexible",
    "extra",
    "cLoop",
    "moufang",
    "rcLoop",
    "lcLoop",
    "rightBol",
    "leftBol",
    "rightNuclearSquare",
    "middleNuclearSquare",
    "leftNuclearSquare",
    "leftInverseProperty",
    "rightInverseProperty",
    "twoSidedInverses",
    "weakInverseProperty",
    "antiautomorphicInverseProperty",
    "alternative",
    "inverseProperty",
    "powerAssociative",
    "diassociative",
    "leftPowerAlternative",
    "rightPowerAlternative",
    "powerAlternative",
    "LCC",
    "RCC",
    "CC",
)


def _rules() -> list[Rule]:
    r = [Rule(("associative",), c) for c in GROUP_LAWS]
    r += [
        Rule(("leftBol", "commutative"), "moufang"),
        Rule(("rightBol", "commutative"), "moufang"),
        Rule(("leftBol", "rightBol"), "moufang"),
        Rule(("extra",), "moufang"),
        Rule(("moufang",), "leftBol"),
        Rule(("moufang",), "rightBol"),
        Rule(("moufang",), "flexible"),
        Rule(("moufang",), "diassociative"),
        Rule(("diassociative",), "powerAssociative"),
        Rule(("diassociative",), "alternative"),
        Rule(("diassociative",), "inverseProperty"),
        Rule(("steinerQuasigroup",), "totallySymmetric"),
        Rule(("steinerQuasigroup",), "idempotent"),
        Rule(("totallySymmetric", "idempotent"), "steinerQuasigroup"),
        Rule(("totallySymmetric",), "semisymmetric"),
        Rule(("totallySymmetric",), "commutative"),
        Rule(("semisymmetric", "commutative"), "totallySymmetric"),
        Rule(("CC",), "LCC"),
        Rule(("CC",), "RCC"),
        Rule(("LCC", "RCC"), "CC"),
        Rule(("alternative",), "leftAlternative"),
        Rule(("alternative",), "rightAlternative"),
        Rule(("leftAlternative", "rightAlternative"), "alternative"),
        Rule(("inverseProperty",), "leftInverseProperty"),
        Rule(("inverseProperty",), "rightInverseProperty"),
        Rule(("leftInverseProperty", "rightInverseProperty"), "inverseProperty"),
        Rule(("distributive",), "leftDistributive"),
        Rule(("distributive",), "rightDistributive"),
        Rule(("leftDistributive", "rightDistributive"), "distributive"),
        Rule(("powerAlternative",), "leftPowerAlternative"),
        Rule(("powerAlternative",), "rightPowerAlternative"),
        Rule(("leftPowerAlternative", "rightPowerAlternative"), "powerAlternative"),
        Rule(("leftBruck",), "leftBol"),
        Rule(("leftBruck",), "automorphicInverseProperty"),
        Rule(("leftBol", "automorphicInverseProperty"), "leftBruck"),
        Rule(("rightBruck",), "rightBol"),
        Rule(("rightBruck",), "automorphicInverseProperty"),
        Rule(("rightBol", "automorphicInverseProperty"), "rightBruck"),
    ]
    return r


RULES: list[Rule] = _rules()


def deduce_properties(Q: Quasigroup, rules: list[Rule] | None = None):
    """Apply implication rules to the known flags of ``Q`` until nothing changes.

    Deduced flags are stored with provenance ``"deduced"``; computed flags
    are never overwritten.  Returns the attribute store.
    """
    rules = RULES if rules is None else rules
    is_loop = isinstance(Q, Loop)
    changed = True
    while changed:
        changed = False
        for rule in rules:
            if Q.attrs.get(rule.conclusion) is True:
                continue
            if not all(Q.attrs.get(p) is True for p in rule.premises):
                continue
            if loops_only(rule.conclusion) and not is_loop:
                continue
            if Q.attrs.get(rule.conclusion) is False:
                raise AttributeConflict(f"rule {rule} contradicts a computed flag")
            Q.attrs.set(rule.conclusion, True, "deduced")
            changed = True
    return Q.attrs


def known_properties(Q: Quasigroup) -> dict[str, tuple[bool, str]]:
    return {k: (v, p) for k, v, p in Q.attrs.items() if k in ALL_PROPERTIES}
