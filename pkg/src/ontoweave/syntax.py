"""Signatures, schema variables, formulas, parsing, and bounded enumeration.

Formulas are finite trees over arity-indexed symbols and schema variables
x1, x2, ... (written xi in the DSL). Every formula is hash-consed through a
module-level intern table, so structurally equal formulas are the same
object; equality and hashing are O(1) after construction.

The canonical total order on formulas is (node count, structural order),
where the structural order puts schema variables before symbol applications,
orders variables by index, and orders applications by symbol name, arity,
then arguments. Enumeration, reports and serialized artifacts all use this
order so that runs are reproducible.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import ArityError, CapExceeded, LanguageError, ParseError, UnknownSymbol

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_VAR_NAME_RE = re.compile(r"x([1-9][0-9]*)\Z")

DEFAULT_ENUM_CAP = 200_000


class Symbol(NamedTuple):
    """A connective: identity is the (name, arity) pair."""

    name: str
    arity: int

    def __str__(self) -> str:
        return f"{self.name}/{self.arity}"


def _check_symbol_name(name: str) -> None:
    if not _IDENT_RE.match(name):
        raise ParseError(f"malformed identifier: {name!r}")
    if _VAR_NAME_RE.match(name):
        raise ParseError(f"identifier {name!r} is reserved for schema variables")


class Signature:
    """An arity-indexed family of finite symbol sets. Immutable."""

    __slots__ = ("_levels", "_key", "_hash")

    def __init__(self, levels: Mapping[int, Iterable[Symbol]]):
        cleaned: dict[int, tuple[Symbol, ...]] = {}
        for arity in sorted(levels):
            syms = sorted(set(levels[arity]))
            if not syms:
                continue
            for sym in syms:
                if sym.arity != arity:
                    raise ArityError(f"symbol {sym} stored at level {arity}")
            cleaned[arity] = tuple(syms)
        self._levels = cleaned
        self._key = tuple((k, v) for k, v in cleaned.items())
        self._hash = hash(self._key)

    def level(self, arity: int) -> tuple[Symbol, ...]:
        return self._levels.get(arity, ())

    def arities(self) -> tuple[int, ...]:
        return tuple(self._levels)

    def symbols(self) -> Iterator[Symbol]:
        """All symbols, sorted by (arity, name)."""
        for arity in self._levels:
            yield from self._levels[arity]

    def constants(self) -> tuple[Symbol, ...]:
        return self.level(0)

    def __contains__(self, sym: Symbol) -> bool:
        return sym in self._levels.get(sym.arity, ())

    def lookup(self, name: str, arity: int) -> Symbol | None:
        sym = Symbol(name, arity)
        return sym if sym in self else None

    def has_name(self, name: str) -> bool:
        return any(sym.name == name for sym in self.symbols())

    def is_empty(self) -> bool:
        return not self._levels

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Signature) and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        decls = "; ".join(str(s) for s in self.symbols())
        return f"Signature({decls})"


def make_signature(decls: Iterable[tuple[str, int]]) -> Signature:
    """Build a signature from (name, arity) pairs; duplicates collapse."""
    levels: dict[int, set[Symbol]] = {}
    for name, arity in decls:
        _check_symbol_name(name)
        if arity < 0:
            raise ParseError(f"negative arity for {name!r}")
        levels.setdefault(arity, set()).add(Symbol(name, arity))
    return Signature(levels)


EMPTY_SIGNATURE = make_signature([])


def signature_union(c1: Signature, c2: Signature) -> Signature:
    levels: dict[int, set[Symbol]] = {}
    for sig in (c1, c2):
        for arity in sig.arities():
            levels.setdefault(arity, set()).update(sig.level(arity))
    return Signature(levels)


def signature_leq(c1: Signature, c2: Signature) -> bool:
    """Componentwise inclusion: every level of c1 is a subset of c2's."""
    for arity in c1.arities():
        lvl2 = set(c2.level(arity))
        if not set(c1.level(arity)) <= lvl2:
            return False
    return True


# ---------------------------------------------------------------------------
# Formulas


class Formula:
    """A schema variable or a symbol applied to exactly arity-many children.

    Do not call the constructor directly; use svar() and apply_symbol(),
    which intern every node.
    """

    __slots__ = ("var", "head", "args", "size", "_hash", "_skey", "_text", "_vars")

    var: int | None
    head: Symbol | None
    args: tuple["Formula", ...]
    size: int

    def __init__(self, var, head, args, size):
        self.var = var
        self.head = head
        self.args = args
        self.size = size
        if var is not None:
            self._hash = hash(("v", var))
        else:
            self._hash = hash((head, tuple(a._hash for a in args)))
        self._skey = None
        self._text = None
        self._vars = None

    @property
    def is_var(self) -> bool:
        return self.var is not None

    @property
    def sort_key(self):
        """(node count, structural token sequence); total and deterministic."""
        if self._skey is None:
            tokens: list[tuple] = []
            stack = [self]
            while stack:
                node = stack.pop()
                if node.var is not None:
                    tokens.append((0, node.var, ""))
                else:
                    tokens.append((1, node.head.arity, node.head.name))
                    stack.extend(reversed(node.args))
            self._skey = (self.size, tuple(tokens))
        return self._skey

    @property
    def text(self) -> str:
        if self._text is None:
            if self.var is not None:
                self._text = f"x{self.var}"
            elif not self.args:
                self._text = self.head.name
            else:
                inner = ", ".join(a.text for a in self.args)
                self._text = f"{self.head.name}({inner})"
        return self._text

    @property
    def variables(self) -> frozenset[int]:
        if self._vars is None:
            if self.var is not None:
                self._vars = frozenset((self.var,))
            else:
                acc: set[int] = set()
                for a in self.args:
                    acc |= a.variables
                self._vars = frozenset(acc)
        return self._vars

    def subformulas(self) -> Iterator["Formula"]:
        """Every subtree, in preorder; repeats are possible."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.args))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Formula):
            return NotImplemented
        return self.sort_key == other.sort_key

    def __lt__(self, other: "Formula") -> bool:
        return self.sort_key < other.sort_key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return self.text


_INTERN: dict[tuple, Formula] = {}


def svar(index: int) -> Formula:
    """The schema variable with the given positive index."""
    if index < 1:
        raise ValueError(f"schema variable index must be >= 1, got {index}")
    key = ("v", index)
    node = _INTERN.get(key)
    if node is None:
        node = Formula(index, None, (), 1)
        _INTERN[key] = node
    return node


def apply_symbol(sym: Symbol, args: Iterable[Formula] = ()) -> Formula:
    args = tuple(args)
    if len(args) != sym.arity:
        raise ArityError(f"{sym} applied to {len(args)} argument(s)")
    key = (sym, tuple(id(a) for a in args))
    node = _INTERN.get(key)
    if node is None:
        node = Formula(None, sym, args, 1 + sum(a.size for a in args))
        _INTERN[key] = node
    return node


def formula_in_language(phi: Formula, sig: Signature) -> bool:
    """Membership in L(sig): every head symbol is declared."""
    return all(node.var is not None or node.head in sig for node in phi.subformulas())


def require_in_language(phi: Formula, sig: Signature, what: str = "formula") -> None:
    if not formula_in_language(phi, sig):
        raise LanguageError(f"{what} {phi.text} is not in the given language")


def print_formula(phi: Formula) -> str:
    """Canonical rendering; parse_formula inverts it."""
    return phi.text


# ---------------------------------------------------------------------------
# Substitution


class Substitution:
    """A finite map from schema-variable indices to formulas.

    Variables outside the map are fixed. Application is simultaneous.
    """

    __slots__ = ("mapping",)

    def __init__(self, mapping: Mapping[int, Formula]):
        self.mapping = {int(k): v for k, v in mapping.items()}
        for k in self.mapping:
            if k < 1:
                raise ValueError(f"bad schema variable index {k}")

    @property
    def is_renaming(self) -> bool:
        return all(v.is_var for v in self.mapping.values())

    def inverse(self) -> "Substitution":
        if not self.is_renaming:
            raise ValueError("only renaming substitutions can be inverted")
        inv: dict[int, Formula] = {}
        for k, v in self.mapping.items():
            if v.var in inv:
                raise ValueError("renaming is not injective")
            inv[v.var] = svar(k)
        return Substitution(inv)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Substitution) and self.mapping == other.mapping

    def __repr__(self) -> str:
        body = ", ".join(f"x{k} -> {v.text}" for k, v in sorted(self.mapping.items()))
        return f"Substitution({body})"


def substitute(phi: Formula, sigma: Substitution | Mapping[int, Formula]) -> Formula:
    mapping = sigma.mapping if isinstance(sigma, Substitution) else sigma
    if not mapping:
        return phi

    def walk(node: Formula) -> Formula:
        if node.var is not None:
            return mapping.get(node.var, node)
        if not node.variables:
            return node
        return apply_symbol(node.head, tuple(walk(a) for a in node.args))

    return walk(phi)


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|\(|\)|,)")


def _tokenize_formula(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ParseError(f"bad token at {rest[:10]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def parse_formula(text: str, sig: Signature) -> Formula:
    """Parse the prefix DSL form against a signature."""
    tokens = _tokenize_formula(text)
    pos = 0

    def peek() -> str | None:
        return tokens[pos] if pos < len(tokens) else None

    def take(expected: str | None = None) -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of formula")
        tok = tokens[pos]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}")
        pos += 1
        return tok

    def parse_node() -> Formula:
        tok = take()
        if tok in ("(", ")", ","):
            raise ParseError(f"unexpected {tok!r}")
        var_match = _VAR_NAME_RE.match(tok)
        if var_match:
            return svar(int(var_match.group(1)))
        if peek() == "(":
            take("(")
            args = [parse_node()]
            while peek() == ",":
                take(",")
                args.append(parse_node())
            take(")")
            sym = sig.lookup(tok, len(args))
            if sym is None:
                if sig.has_name(tok):
                    raise ArityError(f"{tok!r} is not declared at arity {len(args)}")
                raise UnknownSymbol(f"unknown symbol {tok!r}")
            return apply_symbol(sym, args)
        sym = sig.lookup(tok, 0)
        if sym is None:
            if sig.has_name(tok):
                raise ArityError(f"{tok!r} is not a constant")
            raise UnknownSymbol(f"unknown symbol {tok!r}")
        return apply_symbol(sym)

    node = parse_node()
    if pos != len(tokens):
        raise ParseError(f"trailing tokens after formula: {tokens[pos:]}")
    return node


# ---------------------------------------------------------------------------
# Bounded enumeration


def count_formulas(sig: Signature, max_depth: int, max_var: int) -> int:
    """How many formulas enumerate_formulas would return; same recurrence."""
    if max_depth < 1 or max_var < 1:
        raise ValueError("max_depth and max_var must be >= 1")
    leaves = max_var + len(sig.constants())
    total = leaves
    for _ in range(max_depth - 1):
        nxt = leaves
        for arity in sig.arities():
            if arity >= 1:
                nxt += len(sig.level(arity)) * total**arity
        total = nxt
    return total


def enumerate_formulas(
    sig: Signature,
    max_depth: int,
    max_var: int,
    cap: int = DEFAULT_ENUM_CAP,
) -> list[Formula]:
    """Every formula of depth <= max_depth over x1..x(max_var), sorted
    canonically. Deterministic; raises CapExceeded if the count outgrows cap.
    """
    total = count_formulas(sig, max_depth, max_var)
    if total > cap:
        raise CapExceeded(f"enumeration would produce {total} formulas (cap {cap})")
    layer: list[Formula] = [svar(i) for i in range(1, max_var + 1)]
    layer.extend(apply_symbol(c) for c in sig.constants())
    acc = list(layer)
    for _ in range(max_depth - 1):
        prev = acc
        nxt = list(layer)
        for arity in sig.arities():
            if arity < 1:
                continue
            for sym in sig.level(arity):
                args_stack = [()]
                for _slot in range(arity):
                    args_stack = [t + (p,) for t in args_stack for p in prev]
                nxt.extend(apply_symbol(sym, t) for t in args_stack)
        acc = nxt
    uniq = sorted(set(acc), key=lambda f: f.sort_key)
    return uniq
