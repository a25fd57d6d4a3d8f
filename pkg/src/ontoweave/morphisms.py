"""Signature morphisms, splitting morphisms, and fibring translations.

The translation machinery realizes the two mutually inverse maps between a
combined language and a component language: variables move to odd indices
(xi becomes x(2i+1)), foreign-headed subtrees collapse to even-indexed
variables x(2g), and g is realized lazily as an interning table that hands
out indices 1, 2, 3, ... at first registration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import (
    CompositionError,
    LanguageError,
    ParseError,
    SignatureError,
    UnknownInternIndex,
    UnknownSymbol,
)
from .syntax import (
    Formula,
    Signature,
    Symbol,
    apply_symbol,
    parse_formula,
    signature_leq,
    substitute,
    svar,
)


class SignatureMorphism:
    """A family of per-arity symbol maps, total on the source signature."""

    __slots__ = ("source", "target", "maps", "_key")

    def __init__(self, source: Signature, target: Signature, maps: Mapping[Symbol, Symbol]):
        self.source = source
        self.target = target
        self.maps = dict(maps)
        for sym in source.symbols():
            image = self.maps.get(sym)
            if image is None:
                raise SignatureError(f"morphism is not total: {sym} unmapped")
            if image.arity != sym.arity:
                raise SignatureError(f"{sym} maps across arities to {image}")
            if image not in target:
                raise SignatureError(f"image {image} missing from target signature")
        for sym in self.maps:
            if sym not in source:
                raise SignatureError(f"mapped symbol {sym} not in source signature")
        self._key = tuple(sorted((s, t) for s, t in self.maps.items()))

    @classmethod
    def identity(cls, sig: Signature) -> "SignatureMorphism":
        return cls(sig, sig, {s: s for s in sig.symbols()})

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SignatureMorphism)
            and self.source == other.source
            and self.target == other.target
            and self._key == other._key
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self._key))

    def __repr__(self) -> str:
        body = ", ".join(f"{s}->{t}" for s, t in self._key)
        return f"SignatureMorphism({body})"


def apply_signature_morphism(h: SignatureMorphism, phi: Formula) -> Formula:
    """Homomorphic extension of h to formulas; variables are fixed."""
    if phi.var is not None:
        return phi
    image = h.maps.get(phi.head)
    if image is None:
        raise UnknownSymbol(f"{phi.head} is outside the morphism source")
    return apply_symbol(image, tuple(apply_signature_morphism(h, a) for a in phi.args))


def is_monomorphic(h: SignatureMorphism) -> bool:
    """True iff every per-arity map is injective."""
    for arity in h.source.arities():
        images = [h.maps[s] for s in h.source.level(arity)]
        if len(set(images)) != len(images):
            return False
    return True


def compose_signature_morphisms(g: SignatureMorphism, h: SignatureMorphism) -> SignatureMorphism:
    """g after h; requires h.target = g.source."""
    if h.target != g.source:
        raise CompositionError("signature morphisms do not compose")
    return SignatureMorphism(h.source, g.target, {s: g.maps[t] for s, t in h.maps.items()})


# ---------------------------------------------------------------------------
# Splitting morphisms


class SplittingMorphism:
    """Maps each k-ary source symbol to a target formula using exactly x1..xk."""

    __slots__ = ("source", "target", "assign", "_key")

    def __init__(self, source: Signature, target: Signature, assign: Mapping[Symbol, Formula]):
        self.source = source
        self.target = target
        self.assign = dict(assign)
        for sym in source.symbols():
            body = self.assign.get(sym)
            if body is None:
                raise SignatureError(f"splitting is not total: {sym} unmapped")
            wanted = frozenset(range(1, sym.arity + 1))
            if body.variables != wanted:
                raise SignatureError(
                    f"image of {sym} must use exactly x1..x{sym.arity}, got {body.text}"
                )
            for node in body.subformulas():
                if node.var is None and node.head not in target:
                    raise SignatureError(f"image of {sym} uses foreign symbol {node.head}")
        for sym in self.assign:
            if sym not in source:
                raise SignatureError(f"mapped symbol {sym} not in source signature")
        self._key = tuple(sorted(((s, f.sort_key) for s, f in self.assign.items())))

    @classmethod
    def identity(cls, sig: Signature) -> "SplittingMorphism":
        assign = {}
        for sym in sig.symbols():
            assign[sym] = apply_symbol(sym, tuple(svar(i) for i in range(1, sym.arity + 1)))
        return cls(sig, sig, assign)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SplittingMorphism)
            and self.source == other.source
            and self.target == other.target
            and self._key == other._key
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self._key))

    def __repr__(self) -> str:
        body = ", ".join(f"{s}->{f.text}" for s, f in sorted(self.assign.items()))
        return f"SplittingMorphism({body})"


def apply_splitting(f: SplittingMorphism, phi: Formula) -> Formula:
    """The induced unfolding: variables fixed, every node rewritten through f."""
    if phi.var is not None:
        return phi
    body = f.assign.get(phi.head)
    if body is None:
        raise UnknownSymbol(f"{phi.head} is outside the splitting source")
    if not phi.args:
        return body
    children = {i + 1: apply_splitting(f, arg) for i, arg in enumerate(phi.args)}
    return substitute(body, children)


def compose_splitting(g: SplittingMorphism, f: SplittingMorphism) -> SplittingMorphism:
    """g after f: each source symbol is sent through f, then unfolded by g."""
    if f.target != g.source:
        raise CompositionError("splitting morphisms do not compose")
    assign = {sym: apply_splitting(g, body) for sym, body in f.assign.items()}
    return SplittingMorphism(f.source, g.target, assign)


# ---------------------------------------------------------------------------
# Interning and translations


class Interning:
    """A growable bijection between formulas and positive indices.

    Indices are handed out in registration order starting at 1, so a fixed
    registration sequence reproduces identical tables across runs.
    """

    def __init__(self) -> None:
        self._by_formula: dict[Formula, int] = {}
        self._by_index: list[Formula] = []
        self._frozen = False

    def __len__(self) -> int:
        return len(self._by_index)

    def register(self, phi: Formula) -> int:
        idx = self._by_formula.get(phi)
        if idx is not None:
            return idx
        if self._frozen:
            raise UnknownInternIndex(f"interning is frozen; {phi.text} unregistered")
        self._by_index.append(phi)
        idx = len(self._by_index)
        self._by_formula[phi] = idx
        return idx

    def index_of(self, phi: Formula) -> int | None:
        return self._by_formula.get(phi)

    def formula_of(self, index: int) -> Formula:
        if index < 1 or index > len(self._by_index):
            raise UnknownInternIndex(f"no formula registered at index {index}")
        return self._by_index[index - 1]

    def has_index(self, index: int) -> bool:
        return 1 <= index <= len(self._by_index)

    def freeze(self) -> None:
        """Disallow further growth; reads stay safe to share."""
        self._frozen = True

    def items(self) -> Iterable[tuple[int, Formula]]:
        return enumerate(self._by_index, start=1)

    def serialize(self) -> str:
        """Line-based dump: index, a tab, the canonical formula text."""
        return "".join(f"{i}\t{f.text}\n" for i, f in self.items())

    @classmethod
    def deserialize(cls, text: str, sig: Signature) -> "Interning":
        table = cls()
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                index_str, formula_str = line.split("\t", 1)
                index = int(index_str)
            except ValueError as exc:
                raise ParseError(f"bad interning line {lineno}: {raw!r}") from exc
            phi = parse_formula(formula_str, sig)
            got = table.register(phi)
            if got != index:
                raise ParseError(
                    f"interning line {lineno} expects index {index}, table has {got}"
                )
        return table

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Interning) and self._by_index == other._by_index


@dataclass
class Translation:
    """Mediates between a combined language (big) and a component (small).

    small must be componentwise included in big. One interning may be shared
    by several translations over the same big signature.
    """

    small: Signature
    big: Signature
    interning: Interning = field(default_factory=Interning)

    def __post_init__(self) -> None:
        if not signature_leq(self.small, self.big):
            raise SignatureError("translation requires small <= big componentwise")


def translate(t: Translation, phi: Formula) -> Formula:
    """Map a big-language formula into the small language.

    Variables xi become x(2i+1); shared symbols recurse; foreign constants
    and foreign-headed subtrees collapse to x(2g), where g is the interning
    index of the original subtree. New subtrees are registered on demand,
    left to right, depth first.
    """
    if phi.var is not None:
        return svar(2 * phi.var + 1)
    if phi.head not in t.big:
        raise LanguageError(f"{phi.text} is not in the combined language")
    if phi.head in t.small:
        if not phi.args:
            return phi
        return apply_symbol(phi.head, tuple(translate(t, a) for a in phi.args))
    return svar(2 * t.interning.register(phi))


def is_back_translatable(t: Translation, phi: Formula) -> bool:
    """True iff every variable of phi is odd with index >= 3, or an even
    index already registered in the interning."""
    for v in phi.variables:
        if v % 2 == 1:
            if v < 3:
                return False
        elif not t.interning.has_index(v // 2):
            return False
    return True


def substitute_back(t: Translation, phi: Formula) -> Formula:
    """Inverse direction: odd x(2i+1) back to xi, even x(2i) back to the
    registered subtree, symbols of the small language kept."""
    if phi.var is not None:
        index = phi.var
        if index % 2 == 1:
            i = index // 2
            if i < 1:
                raise UnknownInternIndex(
                    f"x{index} has no preimage: odd indices start at x3"
                )
            return svar(i)
        return t.interning.formula_of(index // 2)
    if phi.head not in t.small:
        raise LanguageError(f"{phi.text} is not in the component language")
    if not phi.args:
        return phi
    return apply_symbol(phi.head, tuple(substitute_back(t, a) for a in phi.args))


def in_k_restricted(phi: Formula, sig: Signature, k: int) -> bool:
    """Membership in the k-restricted language: in L(sig) and the variable
    set is exactly x1..xk (empty for k = 0)."""
    from .syntax import formula_in_language

    if not formula_in_language(phi, sig):
        return False
    return phi.variables == frozenset(range(1, k + 1))
