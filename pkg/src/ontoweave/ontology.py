"""Ontologies: consequence systems extended with an ontological signature
and an axiomatic ontological theory, plus morphism checks and connection.

An ontology's consequence map is the effective calculus: the base
presentation with every ontological axiom added as a premise-free rule.
That makes the theory axiomatic by construction, and validation re-checks
it rather than trusting it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .consequence import (
    CalculusPresentation,
    Fuel,
    Report,
    ReportEntry,
    Rule,
    check_operator_laws,
    closure_bounded,
    derives,
)
from .errors import LanguageError, OntoSigError, ParseError, SignatureError
from .fibring import FibringSession, fibred_derives, open_session
from .morphisms import SignatureMorphism, apply_signature_morphism, substitute_back, translate
from .syntax import (
    Formula,
    Signature,
    enumerate_formulas,
    formula_in_language,
    signature_leq,
    signature_union,
)


class Ontology:
    """A named consequence system plus ontological signature and theory."""

    __slots__ = ("name", "base", "onto_sig", "axioms", "_effective", "_key", "_hash")

    def __init__(
        self,
        name: str,
        base: CalculusPresentation,
        onto_sig: Signature,
        axioms: Iterable[Formula],
    ):
        self.name = name
        self.base = base
        self.onto_sig = onto_sig
        self.axioms = tuple(sorted(set(axioms), key=lambda f: f.sort_key))
        self._effective = None
        self._key = (name, base, onto_sig, self.axioms)
        self._hash = hash(self._key)

    @property
    def effective(self) -> CalculusPresentation:
        """The base presentation extended with the ontological axioms."""
        if self._effective is None:
            if self.axioms:
                self._effective = self.base.with_axiom_formulas(self.axioms, prefix="onto_")
            else:
                self._effective = self.base
        return self._effective

    def same_content(self, other: "Ontology") -> bool:
        """Equality up to the node name."""
        return (
            self.base == other.base
            and self.onto_sig == other.onto_sig
            and self.axioms == other.axioms
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Ontology) and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Ontology({self.name!r}, axioms={[f.text for f in self.axioms]})"


import re as _re

_NAME_RE = _re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def make_ontology(
    base: CalculusPresentation,
    onto_sig: Signature,
    axioms: Iterable[Formula],
    name: str = "unnamed",
) -> Ontology:
    """Check the ontological signature and language, then build the ontology.

    Every axiom becomes derivable from the empty theory at depth one because
    the effective calculus carries it as a premise-free rule. Names must fit
    the identifier grammar so nodes stay serializable.
    """
    if not _NAME_RE.match(name):
        raise ParseError(f"ontology name {name!r} is not a valid identifier")
    if not signature_leq(onto_sig, base.sig):
        raise OntoSigError(
            f"ontological signature of {name!r} is not included in the base signature"
        )
    axioms = tuple(axioms)
    for phi in axioms:
        if not formula_in_language(phi, base.sig):
            raise LanguageError(f"axiom {phi.text} is outside the base language")
    return Ontology(name, base, onto_sig, axioms)


def validate_ontology(
    o: Ontology,
    fuel: Fuel,
    *,
    samples: int = 20,
    seed: int = 17,
    corpus_depth: int = 2,
) -> Report:
    """Re-check the three defining conditions with bounded evidence."""
    laws = check_operator_laws(
        o.effective, samples=samples, fuel=fuel, seed=seed, corpus_depth=corpus_depth
    )
    entries = [
        ReportEntry(
            "consequence-laws",
            laws.ok,
            "" if laws.ok else next(e.witness for e in laws.entries if not e.ok),
        )
    ]
    inclusion_ok = signature_leq(o.onto_sig, o.base.sig)
    entries.append(
        ReportEntry(
            "onto-signature-inclusion",
            inclusion_ok,
            "" if inclusion_ok else "ontological signature exceeds the base signature",
        )
    )
    bad = ""
    for phi in o.axioms:
        if not derives(o.effective, (), phi, fuel).is_derived:
            bad = phi.text
            break
    entries.append(ReportEntry("axioms-derivable", not bad, bad))
    return Report(entries)


# ---------------------------------------------------------------------------
# Morphisms between ontologies


@dataclass(frozen=True)
class EcsyEvidence:
    """Bounded evidence that a signature morphism is an ontology morphism."""

    consequence_verified: bool
    gamma_equal: bool
    corpus_depth: int
    fuel: Fuel
    witness: str = ""
    checked: int = 0

    @property
    def ok(self) -> bool:
        return self.consequence_verified and self.gamma_equal

    def render(self) -> str:
        status = "verified-up-to" if self.ok else "refuted"
        return f"ecsy-morphism\t{status}\t{self.witness or f'checked={self.checked}'}"


def check_ecsy_morphism(
    h: SignatureMorphism,
    a: Ontology,
    b: Ontology,
    corpus_depth: int,
    fuel: Fuel,
    *,
    max_var: int = 2,
    max_premises: int = 2,
) -> EcsyEvidence:
    """Check the consequence-morphism condition on small corpus premise sets
    and the exact equality of the translated ontological theory."""
    if h.source != a.base.sig or h.target != b.base.sig:
        raise SignatureError("morphism endpoints do not match the ontologies")
    corpus = enumerate_formulas(a.base.sig, corpus_depth, max_var)
    corpus_set = set(corpus)
    escalation = fuel.escalated()
    checked = 0
    witness = ""
    consequence_ok = True

    def gamma_candidates():
        yield ()
        for f in corpus:
            yield (f,)
        if max_premises >= 2:
            for i, f in enumerate(corpus):
                for g in corpus[i + 1 :]:
                    yield (f, g)

    for gamma in gamma_candidates():
        # premise images transfer by extensivity; check the strict consequences
        derivable = sorted(
            (closure_bounded(a.effective, gamma, fuel) & corpus_set) - set(gamma),
            key=lambda f: f.sort_key,
        )
        checked += len(gamma)
        if not derivable:
            continue
        image_gamma = [apply_signature_morphism(h, g) for g in gamma]
        images = [apply_signature_morphism(h, psi) for psi in derivable]
        seeds: list[Formula] = []
        for img in images:
            seeds.extend(img.subformulas())
        transferred = closure_bounded(b.effective, image_gamma, fuel, extra_pool=seeds)
        if any(img not in transferred for img in images):
            transferred = closure_bounded(
                b.effective, image_gamma, escalation, extra_pool=seeds
            )
        for psi, img in zip(derivable, images):
            checked += 1
            if img not in transferred:
                consequence_ok = False
                witness = (
                    "gamma={" + ", ".join(g.text for g in gamma) + "} "
                    f"phi={psi.text} image={img.text}"
                )
                break
        if not consequence_ok:
            break

    image_axioms = tuple(
        sorted({apply_signature_morphism(h, phi) for phi in a.axioms}, key=lambda f: f.sort_key)
    )
    gamma_equal = image_axioms == b.axioms
    if not gamma_equal and not witness:
        sym_diff = set(image_axioms) ^ set(b.axioms)
        off = sorted(sym_diff, key=lambda f: f.sort_key)[0]
        witness = f"theory mismatch at {off.text}"
    return EcsyEvidence(
        consequence_verified=consequence_ok,
        gamma_equal=gamma_equal,
        corpus_depth=corpus_depth,
        fuel=fuel,
        witness=witness,
        checked=checked,
    )


# ---------------------------------------------------------------------------
# Heterogeneous connection


def _merge_rules(left: tuple[Rule, ...], right: tuple[Rule, ...]) -> tuple[Rule, ...]:
    """Union of rule lists; identical rules collapse, clashing names get a
    deterministic suffix."""
    merged: list[Rule] = list(left)
    names = {r.name for r in left}
    seen = set(left)
    for rule in right:
        if rule in seen:
            continue
        name = rule.name
        suffix = 2
        while name in names:
            name = f"{rule.name}_{suffix}"
            suffix += 1
        renamed = Rule(name, rule.premises, rule.conclusion) if name != rule.name else rule
        merged.append(renamed)
        names.add(name)
        seen.add(rule)
    return tuple(merged)


def merge_presentations(
    left: CalculusPresentation, right: CalculusPresentation
) -> CalculusPresentation:
    """The union presentation over the union signature. Schema rules are
    carried verbatim: schema variables range over the whole combined
    language, so each side's rules act exactly as its side closure does.
    If both sides designate a negation, the left one wins."""
    negation = left.negation if left.negation is not None else right.negation
    return CalculusPresentation(
        signature_union(left.sig, right.sig),
        _merge_rules(left.axioms, right.axioms),
        _merge_rules(left.rules, right.rules),
        negation,
    )


def connection_session(o1: Ontology, o2: Ontology, fuel: Fuel) -> FibringSession:
    """The fibring session underlying connect: both effective calculi."""
    return open_session(o1.effective, o2.effective, fuel)


def connect(o1: Ontology, o2: Ontology, fuel: Fuel, name: str | None = None) -> Ontology:
    """Connect two ontologies through fibring.

    The result's base is the union presentation, its ontological signature
    the union of both, and its theory exactly the substituted images of both
    input theories (the least set the connection conditions allow). Each
    axiom is registered through its own side's translation and mapped back,
    which normalizes it into the combined language verbatim.
    """
    session = connection_session(o1, o2, fuel)
    axioms: set[Formula] = set()
    for ontology, translation in ((o1, session.t_left), (o2, session.t_right)):
        for phi in ontology.axioms:
            axioms.add(substitute_back(translation, translate(translation, phi)))
    base = merge_presentations(o1.base, o2.base)
    onto_sig = signature_union(o1.onto_sig, o2.onto_sig)
    if name is None:
        name = f"{o1.name}_{o2.name}"
    return make_ontology(base, onto_sig, axioms, name)


def connection_axiom_rounds(o1: Ontology, o2: Ontology, fuel: Fuel) -> list[tuple[Formula, int]]:
    """For each substituted input axiom, the alternation round at which it is
    fibred-derivable from the empty theory. Raises if any is not found."""
    session = connection_session(o1, o2, fuel)
    out = []
    for ontology, translation in ((o1, session.t_left), (o2, session.t_right)):
        for phi in ontology.axioms:
            image = substitute_back(translation, translate(translation, phi))
            verdict = fibred_derives(session, (), image)
            if not verdict.is_derived:
                raise LanguageError(f"axiom image {image.text} not fibred-derivable")
            out.append((image, verdict.depth))
    return out
