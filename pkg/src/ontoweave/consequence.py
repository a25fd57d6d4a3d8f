"""Finitely presented consequence systems and bounded derivability.

A calculus presentation (axiom schemas plus inference rules) induces a
closure map on sets of formulas. Everything here is bounded: closure runs a
fixed number of rounds, instantiates schemas only over a small pool of
candidate formulas, and truncates deterministically at the set cap. Negative
answers therefore never claim underivability, only underivability within the
given fuel.

The round operator F is a pure, monotone function of the current set: each
round adds (a) every axiom-schema instance whose values come from the pool
(subformulas of the current set up to a size threshold, the schema variables
x1..xm of the presentation, the signature constants, and any caller-supplied
seed formulas) and (b) every rule instance whose premise instances are all
present. Because closure is literally F iterated, extensivity, monotonicity,
cut at doubled fuel, and bounded idempotence hold by construction whenever
the set cap does not bind.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .errors import CapExceeded, ConfigError, LanguageError, SignatureError
from .syntax import (
    Formula,
    Signature,
    Symbol,
    apply_symbol,
    enumerate_formulas,
    formula_in_language,
    require_in_language,
    signature_leq,
    substitute,
    svar,
)


@dataclass(frozen=True)
class Fuel:
    """Resource bounds for one bounded-closure computation."""

    max_closure_rounds: int = 6
    max_formula_size: int = 31
    max_set_size: int = 512

    def __post_init__(self) -> None:
        if min(self.max_closure_rounds, self.max_formula_size, self.max_set_size) < 1:
            raise ValueError("all fuel fields must be positive")

    @property
    def pool_size(self) -> int:
        """Size threshold for formulas admitted into the instantiation pool."""
        return max(1, self.max_formula_size // 8)

    @property
    def wide_pool_size(self) -> int:
        """Tighter value threshold for schemas with three or more variables,
        whose instantiation space grows cubically."""
        return max(1, self.max_formula_size // 16)

    @property
    def bare_size(self) -> int:
        """Size threshold for candidates of bare-variable premises."""
        return max(self.pool_size, self.max_formula_size // 4)

    def doubled(self) -> "Fuel":
        """Twice the rounds at the same language caps; the round operator is
        unchanged, so iterating it twice as long is the exact composition."""
        return Fuel(
            2 * self.max_closure_rounds,
            self.max_formula_size,
            self.max_set_size,
        )

    def widened(self) -> "Fuel":
        """Twice the rounds and twice the language caps, for checks whose
        re-derivations involve larger formulas (e.g. substitution images)."""
        return Fuel(
            2 * self.max_closure_rounds,
            2 * self.max_formula_size,
            2 * self.max_set_size,
        )

    def escalated(self) -> "Fuel":
        """A generous bound used when hunting for counter-evidence."""
        return Fuel(
            4 * self.max_closure_rounds,
            2 * self.max_formula_size,
            8 * self.max_set_size,
        )


@dataclass(frozen=True)
class Derived:
    """Definitive verdict: the goal appeared in round `depth`."""

    depth: int

    @property
    def is_derived(self) -> bool:
        return True


@dataclass(frozen=True)
class NotDerivedWithin:
    """Bounded negative: not found within `bound`; not a refutation."""

    bound: Fuel

    @property
    def is_derived(self) -> bool:
        return False


Verdict = Derived | NotDerivedWithin


@dataclass(frozen=True)
class Rule:
    """An inference rule schema; premise-free rules are axiom schemas."""

    name: str
    premises: tuple[Formula, ...]
    conclusion: Formula

    @property
    def is_axiom(self) -> bool:
        return not self.premises

    def schemas(self) -> Iterable[Formula]:
        yield from self.premises
        yield self.conclusion


class CalculusPresentation:
    """A signature with axiom schemas, rules, and an optional negation."""

    __slots__ = (
        "sig",
        "axioms",
        "rules",
        "negation",
        "_key",
        "_hash",
        "_base_var_count",
        "_inst_memo",
        "_plans",
        "_axiom_meta",
    )

    def __init__(
        self,
        sig: Signature,
        axioms: Iterable[Rule] = (),
        rules: Iterable[Rule] = (),
        negation: Symbol | None = None,
    ):
        self.sig = sig
        self.axioms = tuple(sorted(axioms, key=lambda r: (r.name, r.conclusion.sort_key)))
        self.rules = tuple(
            sorted(rules, key=lambda r: (r.name, tuple(p.sort_key for p in r.schemas())))
        )
        for rule in self.axioms:
            if rule.premises:
                raise ValueError(f"axiom {rule.name!r} has premises")
        for rule in self.axioms + self.rules:
            for schema in rule.schemas():
                require_in_language(schema, sig, f"schema of {rule.name!r}")
        if negation is not None:
            if negation.arity != 1 or negation not in sig:
                raise ConfigError(f"designated negation {negation} must be unary in the signature")
        self.negation = negation
        self._key = (sig, self.axioms, self.rules, negation)
        self._hash = hash(self._key)
        maxvar = 2
        for rule in self.axioms + self.rules:
            for schema in rule.schemas():
                if schema.variables:
                    maxvar = max(maxvar, max(schema.variables))
        self._base_var_count = maxvar
        self._inst_memo: dict = {}
        self._plans = None
        self._axiom_meta = None

    def with_axiom_formulas(self, formulas: Iterable[Formula], prefix: str) -> "CalculusPresentation":
        """A new presentation with each formula added as a premise-free rule."""
        extra = [
            Rule(f"{prefix}{i}", (), phi)
            for i, phi in enumerate(sorted(set(formulas), key=lambda f: f.sort_key), start=1)
        ]
        return CalculusPresentation(self.sig, self.axioms + tuple(extra), self.rules, self.negation)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CalculusPresentation) and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return (
            f"CalculusPresentation(axioms={[r.name for r in self.axioms]}, "
            f"rules={[r.name for r in self.rules]})"
        )


# ---------------------------------------------------------------------------
# The bounded closure engine


def _premise_plan(rule: Rule) -> tuple[int, ...]:
    """Premise evaluation order: structured patterns first, bare variables last."""
    order = sorted(
        range(len(rule.premises)),
        key=lambda i: (rule.premises[i].var is not None, i),
    )
    return tuple(order)


class _StagingFull(Exception):
    """Internal: the per-round staging budget is exhausted."""


class _Engine:
    def __init__(self, cal: CalculusPresentation, fuel: Fuel, extra_pool: Iterable[Formula]):
        self.cal = cal
        self.fuel = fuel
        self.size_cap = fuel.max_formula_size
        self.set_cap = fuel.max_set_size
        self.psize = fuel.pool_size
        self.wide_psize = fuel.wide_pool_size
        self.bare_cap = fuel.bare_size
        if cal._plans is None:
            cal._plans = {id(r): _premise_plan(r) for r in cal.rules}
            meta = []
            for rule in cal.axioms:
                schema = rule.conclusion
                varlist = sorted(schema.variables)
                occs = [0] * len(varlist)
                for node in schema.subformulas():
                    if node.var is not None:
                        occs[varlist.index(node.var)] += 1
                meta.append((schema, varlist, occs))
            cal._axiom_meta = meta
        self.members: set[Formula] = set()
        self.by_head: dict[Symbol, list[Formula]] = {}
        self.bare_candidates: list[Formula] = []
        self.pool_old: list[Formula] = []
        self.emitted_closed_axioms = False
        seeds: set[Formula] = {svar(i) for i in range(1, cal._base_var_count + 1)}
        seeds.update(apply_symbol(c) for c in cal.sig.constants())
        self.seed_exempt: set[Formula] = set()
        for phi in extra_pool:
            self.seed_exempt.update(phi.subformulas())
        seeds |= self.seed_exempt
        self.pool: set[Formula] = set(seeds)
        self.pool_new: list[Formula] = sorted(seeds, key=lambda f: f.sort_key)
        self.stage_quota = fuel.max_set_size
        self.work_left = 0

    def _stage(self, staged: set[Formula], phi: Formula) -> None:
        staged.add(phi)
        if len(staged) >= self.stage_quota:
            raise _StagingFull

    def _spend(self, amount: int = 1) -> None:
        self.work_left -= amount
        if self.work_left <= 0:
            raise _StagingFull

    # -- membership bookkeeping

    def _admit(self, batch: Sequence[Formula], first_seen: dict[Formula, int], round_no: int) -> list[Formula]:
        """Add a canonically sorted batch, respecting the set cap."""
        room = self.set_cap - len(self.members)
        added: list[Formula] = []
        pool = self.pool
        pool_new = self.pool_new
        psize = self.psize
        for phi in batch:
            if room <= 0:
                break
            if phi in self.members:
                continue
            self.members.add(phi)
            first_seen.setdefault(phi, round_no)
            added.append(phi)
            room -= 1
            if phi.var is None:
                self.by_head.setdefault(phi.head, []).append(phi)
            if phi.size <= self.bare_cap:
                self.bare_candidates.append(phi)
            # grow the pool with small subtrees; small pool members are
            # subformula-closed, so present ones need no descent
            stack = [phi]
            while stack:
                node = stack.pop()
                if node.size <= psize:
                    if node in pool:
                        continue
                    pool.add(node)
                    pool_new.append(node)
                stack.extend(node.args)
        self.pool_new.sort(key=lambda f: f.sort_key)
        return added

    # -- axiom instantiation

    def _axiom_conclusions(self, staged: set[Formula]) -> None:
        old_sorted = self.pool_old
        new_sorted = self.pool_new
        all_sorted = sorted(self.pool, key=lambda f: f.sort_key)
        memo = self.cal._inst_memo
        exempt = self.seed_exempt
        for rule_idx, (schema, varlist, occs) in enumerate(self.cal._axiom_meta):
            if not varlist:
                if not self.emitted_closed_axioms and schema.size <= self.size_cap:
                    self._stage(staged, schema)
                continue
            budget = self.size_cap - schema.size
            if budget < 0:
                continue
            n = len(varlist)
            vcap = self.psize if n <= 2 else self.wide_psize
            chosen: list[Formula] = []

            def rec(pos: int, remaining: int, first_new: int) -> None:
                if pos == n:
                    key = (rule_idx, tuple(id(v) for v in chosen))
                    concl = memo.get(key)
                    if concl is None:
                        concl = substitute(schema, dict(zip(varlist, chosen)))
                        memo[key] = concl
                    self._stage(staged, concl)
                    return
                if pos < first_new:
                    source = old_sorted
                elif pos == first_new:
                    source = new_sorted
                else:
                    source = all_sorted
                occ = occs[pos]
                for value in source:
                    self._spend()
                    cost = occ * (value.size - 1)
                    if cost > remaining:
                        break
                    if value.size > vcap and value not in exempt:
                        continue
                    chosen.append(value)
                    rec(pos + 1, remaining - cost, first_new)
                    chosen.pop()

            for first_new in range(n):
                rec(0, budget, first_new)
        self.emitted_closed_axioms = True

    # -- rule firing

    def _match(self, pat: Formula, cand: Formula, bind: dict[int, Formula], trail: list[int]) -> bool:
        if pat.var is not None:
            bound = bind.get(pat.var)
            if bound is None:
                bind[pat.var] = cand
                trail.append(pat.var)
                return True
            return bound is cand or bound == cand
        if cand.var is not None or cand.head != pat.head:
            return False
        for p_child, c_child in zip(pat.args, cand.args):
            if not self._match(p_child, c_child, bind, trail):
                return False
        return True

    def _rule_conclusions(self, delta: Sequence[Formula], staged: set[Formula]) -> None:
        if not delta or not self.cal.rules:
            return
        delta_set = set(delta)
        delta_by_head: dict[Symbol, list[Formula]] = {}
        delta_bare: list[Formula] = []
        for phi in delta:
            if phi.var is None:
                delta_by_head.setdefault(phi.head, []).append(phi)
            if phi.size <= self.bare_cap:
                delta_bare.append(phi)
        pool_sorted = sorted(self.pool, key=lambda f: f.sort_key)

        for rule in self.cal.rules:
            plan = self.cal._plans[id(rule)]
            n = len(plan)
            concl_vars = sorted(rule.conclusion.variables)

            def emit(bind: dict[int, Formula]) -> None:
                free = [v for v in concl_vars if v not in bind]
                if not free:
                    concl = substitute(rule.conclusion, bind)
                    if concl.size <= self.size_cap:
                        self._stage(staged, concl)
                    return
                # conclusion-only variables range over the pool
                def fill(i: int) -> None:
                    if i == len(free):
                        concl = substitute(rule.conclusion, bind)
                        if concl.size <= self.size_cap:
                            self._stage(staged, concl)
                        return
                    for value in pool_sorted:
                        bind[free[i]] = value
                        fill(i + 1)
                        del bind[free[i]]

                fill(0)

            def candidates(pat: Formula, from_delta: bool, bind: dict[int, Formula]):
                if pat.var is not None and pat.var in bind:
                    bound = bind[pat.var]
                    if bound.size > self.size_cap:
                        return ()
                    if from_delta:
                        return (bound,) if bound in delta_set else ()
                    return (bound,) if bound in self.members else ()
                if pat.var is not None:
                    return delta_bare if from_delta else self.bare_candidates
                src = delta_by_head if from_delta else self.by_head
                return src.get(pat.head, ())

            def join(i: int, drive: int, bind: dict[int, Formula]) -> None:
                if i == n:
                    emit(bind)
                    return
                pat = rule.premises[plan[i]]
                for cand in candidates(pat, plan[i] == drive, bind):
                    self._spend()
                    if cand.size > self.size_cap:
                        continue
                    trail: list[int] = []
                    if self._match(pat, cand, bind, trail):
                        join(i + 1, drive, bind)
                    for v in trail:
                        del bind[v]

            for drive in range(n):
                join(0, drive, {})

    # -- rounds

    def run(
        self,
        gamma: Sequence[Formula],
        watch: Formula | None = None,
    ) -> tuple[frozenset[Formula], dict[Formula, int], int | None]:
        first_seen: dict[Formula, int] = {}
        delta = self._admit(sorted(set(gamma), key=lambda f: f.sort_key), first_seen, 0)
        found = 0 if watch is not None and watch in self.members else None
        if found is not None:
            return frozenset(self.members), first_seen, found
        for round_no in range(1, self.fuel.max_closure_rounds + 1):
            room = self.set_cap - len(self.members)
            if room <= 0:
                break
            # generation stops once nothing more could be admitted anyway;
            # the slack keeps canonical truncation meaningful near the cap.
            # Rules fire first so schema instantiation cannot starve them
            # of the round's work budget.
            self.stage_quota = 4 * room + 64
            staged: set[Formula] = set()
            try:
                self.work_left = 6 * self.stage_quota + 4096
                self._rule_conclusions(delta, staged)
            except _StagingFull:
                pass
            try:
                self.work_left = 6 * self.stage_quota + 4096
                self._axiom_conclusions(staged)
            except _StagingFull:
                pass
            self.pool_old = sorted(self.pool, key=lambda f: f.sort_key)
            self.pool_new = []
            fresh = sorted(staged - self.members, key=lambda f: f.sort_key)
            if not fresh:
                break
            delta = self._admit(fresh, first_seen, round_no)
            if watch is not None and watch in self.members:
                return frozenset(self.members), first_seen, round_no
            if not delta:
                break
        return frozenset(self.members), first_seen, None


def _check_gamma(cal: CalculusPresentation, gamma: Iterable[Formula], fuel: Fuel) -> list[Formula]:
    out = []
    for phi in gamma:
        if not formula_in_language(phi, cal.sig):
            raise LanguageError(f"premise {phi.text} is outside the calculus language")
        out.append(phi)
    if len(set(out)) > fuel.max_set_size:
        raise CapExceeded(f"premise set larger than the set cap {fuel.max_set_size}")
    return out


def closure_bounded(
    cal: CalculusPresentation,
    gamma: Iterable[Formula],
    fuel: Fuel,
    *,
    extra_pool: Iterable[Formula] = (),
) -> frozenset[Formula]:
    """A bounded under-approximation of the consequences of gamma.

    extra_pool formulas seed the instantiation pool (their subformulas are
    admitted regardless of the pool size threshold) without being premises.
    """
    checked = _check_gamma(cal, gamma, fuel)
    engine = _Engine(cal, fuel, extra_pool)
    members, _, _ = engine.run(checked)
    return members


def derives(
    cal: CalculusPresentation,
    gamma: Iterable[Formula],
    phi: Formula,
    fuel: Fuel,
    *,
    extra_pool: Iterable[Formula] | None = None,
) -> Verdict:
    """Bounded derivability of phi from gamma.

    By default the goal's subformulas seed the instantiation pool, so the
    verdict equals membership of phi in closure_bounded(gamma) with the same
    seeds. Derived verdicts are definitive and stable under fuel increase.
    """
    if not formula_in_language(phi, cal.sig):
        raise LanguageError(f"goal {phi.text} is outside the calculus language")
    checked = _check_gamma(cal, gamma, fuel)
    seeds = (phi,) if extra_pool is None else tuple(extra_pool)
    engine = _Engine(cal, fuel, seeds)
    _, _, found = engine.run(checked, watch=phi)
    if found is None:
        return NotDerivedWithin(fuel)
    return Derived(found)


# ---------------------------------------------------------------------------
# Reports


@dataclass
class ReportEntry:
    label: str
    ok: bool
    witness: str = ""

    def render(self) -> str:
        status = "pass" if self.ok else "fail"
        return f"{self.label}\t{status}\t{self.witness}"


@dataclass
class Report:
    entries: list[ReportEntry]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def entry(self, label: str) -> ReportEntry:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)

    def render(self) -> str:
        return "\n".join(e.render() for e in self.entries)


def _format_set(gamma: Iterable[Formula]) -> str:
    return "{" + ", ".join(f.text for f in sorted(gamma, key=lambda f: f.sort_key)) + "}"


# ---------------------------------------------------------------------------
# Operator-law checks

ClosureFn = Callable[..., frozenset]


def check_operator_laws(
    cal: CalculusPresentation,
    samples: int,
    fuel: Fuel,
    seed: int,
    *,
    corpus_depth: int = 3,
    max_var: int = 2,
    closure_fn: ClosureFn | None = None,
) -> Report:
    """Probe extensivity, monotonicity, cut, and bounded idempotence on
    seeded random premise sets drawn from the enumerated corpus.

    closure_fn exists so a deliberately broken closure can be checked
    against the laws; it defaults to closure_bounded.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    close = closure_fn or closure_bounded
    rng = random.Random(seed)
    corpus = enumerate_formulas(cal.sig, corpus_depth, max_var)
    failures: dict[str, str] = {}
    counts = {"extensivity": 0, "monotonicity": 0, "cut": 0, "idempotence": 0}
    cut_tested = 0

    for _ in range(samples):
        gamma = frozenset(rng.sample(corpus, k=rng.randint(0, min(3, len(corpus)))))
        delta = frozenset(f for f in gamma if rng.random() < 0.7)
        closed_gamma = close(cal, gamma, fuel)
        closed_delta = close(cal, delta, fuel)

        counts["extensivity"] += 1
        if "extensivity" not in failures and not gamma <= closed_gamma:
            missing = sorted(gamma - closed_gamma, key=lambda f: f.sort_key)[0]
            failures["extensivity"] = f"gamma={_format_set(gamma)} lost {missing.text}"

        counts["monotonicity"] += 1
        if "monotonicity" not in failures and not closed_delta <= closed_gamma:
            lost = sorted(closed_delta - closed_gamma, key=lambda f: f.sort_key)[0]
            failures["monotonicity"] = (
                f"delta={_format_set(delta)} gamma={_format_set(gamma)} lost {lost.text}"
            )

        # cut: pick A from the closure of delta so the hypothesis is live
        pick_from = sorted(closed_delta, key=lambda f: f.sort_key)
        a = rng.choice(pick_from) if pick_from and rng.random() < 0.8 else rng.choice(corpus)
        b = rng.choice(corpus)
        seeds = tuple(a.subformulas()) + tuple(b.subformulas())
        counts["cut"] += 1
        if a in close(cal, delta, fuel, extra_pool=seeds):
            hyp2 = close(cal, gamma | {a}, fuel, extra_pool=seeds)
            if b in hyp2:
                cut_tested += 1
                concl = close(cal, delta | gamma, fuel.doubled(), extra_pool=seeds)
                if "cut" not in failures and b not in concl:
                    failures["cut"] = (
                        f"delta={_format_set(delta)} gamma={_format_set(gamma)} "
                        f"a={a.text} b={b.text}"
                    )

        counts["idempotence"] += 1
        if "idempotence" not in failures:
            reclosed = close(cal, closed_gamma, fuel)
            widened = close(cal, gamma, fuel.doubled())
            if not reclosed <= widened:
                lost = sorted(reclosed - widened, key=lambda f: f.sort_key)[0]
                failures["idempotence"] = f"gamma={_format_set(gamma)} escapee {lost.text}"

    entries = []
    for law in ("extensivity", "monotonicity", "cut", "idempotence"):
        witness = failures.get(law, "")
        if law == "cut" and not witness:
            witness = f"instances={cut_tested}"
        entries.append(ReportEntry(law, law not in failures, witness))
    return Report(entries)


def _random_substitution(rng: random.Random, cal: CalculusPresentation, renaming_only: bool) -> Mapping[int, Formula]:
    """Small substitutions: renamings, or maps into leaf-sized formulas."""
    indices = list(range(1, 5))
    mapping: dict[int, Formula] = {}
    if renaming_only:
        targets = rng.sample(range(1, 7), len(indices))
        for i, t in zip(indices, targets):
            mapping[i] = svar(t)
        return mapping
    leaves: list[Formula] = [svar(i) for i in range(1, 4)]
    leaves.extend(apply_symbol(c) for c in cal.sig.constants())
    small: list[Formula] = list(leaves)
    for sym in cal.sig.level(1):
        small.extend(apply_symbol(sym, (leaf,)) for leaf in leaves)
    for i in indices:
        mapping[i] = rng.choice(small)
    return mapping


def check_structural(
    cal: CalculusPresentation,
    samples: int,
    fuel: Fuel,
    seed: int,
    *,
    corpus_depth: int = 2,
    max_var: int = 2,
) -> Report:
    """Probe closure under substitution: images of bounded consequences must
    be bounded consequences of the substituted premises at doubled fuel.

    Substitution values are kept leaf-sized so image derivations stay inside
    the doubled pool threshold; both renamings and general substitutions are
    drawn.
    """
    rng = random.Random(seed)
    corpus = enumerate_formulas(cal.sig, corpus_depth, max_var)
    renaming_failure = ""
    general_failure = ""
    tested = 0
    for _ in range(samples):
        gamma = frozenset(rng.sample(corpus, k=rng.randint(0, 2)))
        renaming_only = rng.random() < 0.5
        sigma = _random_substitution(rng, cal, renaming_only)
        closed = closure_bounded(cal, gamma, fuel)
        checked = sorted(set(closed) & set(corpus), key=lambda f: f.sort_key)
        images = [substitute(phi, sigma) for phi in checked]
        gamma_image = [substitute(phi, sigma) for phi in sorted(gamma, key=lambda f: f.sort_key)]
        seeds: list[Formula] = []
        for img in images:
            seeds.extend(img.subformulas())
        closed_image = closure_bounded(cal, gamma_image, fuel.widened(), extra_pool=seeds)
        tested += len(images)
        for img in images:
            if img not in closed_image:
                msg = f"gamma={_format_set(gamma)} sigma-image {img.text} not rederived"
                if renaming_only and not renaming_failure:
                    renaming_failure = msg
                elif not renaming_only and not general_failure:
                    general_failure = msg
                break
    return Report(
        [
            ReportEntry("renaming-substitutions", not renaming_failure, renaming_failure or f"images={tested}"),
            ReportEntry("general-substitutions", not general_failure, general_failure or f"images={tested}"),
        ]
    )


# ---------------------------------------------------------------------------
# Weakness relation


@dataclass(frozen=True)
class WeaknessEvidence:
    """Outcome of the bounded weaker-than scan.

    verified: every corpus derivability of the weaker side transfers.
    witness: (gamma, phi) pair refuting the transfer, if any.
    partial_verified: the premise-free variant (gamma empty only).
    """

    verified: bool
    corpus_depth: int
    fuel: Fuel
    witness_gamma: tuple[Formula, ...] | None = None
    witness_phi: Formula | None = None
    escalation: Fuel | None = None
    partial_verified: bool = True
    checked: int = 0

    def render(self) -> str:
        if self.verified:
            return (
                f"weaker-than\tverified-up-to\tdepth={self.corpus_depth} "
                f"rounds={self.fuel.max_closure_rounds} checked={self.checked}"
            )
        gamma = _format_set(self.witness_gamma or ())
        return (
            f"weaker-than\trefuted\tgamma={gamma} phi={self.witness_phi.text} "
            f"escalation-rounds={self.escalation.max_closure_rounds}"
        )


def _gamma_candidates(corpus: Sequence[Formula], max_premises: int):
    yield ()
    if max_premises >= 1:
        for f in corpus:
            yield (f,)
    if max_premises >= 2:
        for i, f in enumerate(corpus):
            for g in corpus[i + 1 :]:
                yield (f, g)


def weaker_than(
    cal1: CalculusPresentation,
    cal2: CalculusPresentation,
    corpus_depth: int,
    fuel: Fuel,
    *,
    max_var: int = 2,
    max_premises: int = 2,
) -> WeaknessEvidence:
    """Bounded evidence for "cal1 is weaker than cal2".

    Scans every premise set of at most max_premises corpus formulas in
    canonical order; everything cal1 derives within fuel must be derivable
    by cal2 within escalated fuel. The first failure is reported as a
    refutation witness.
    """
    if not signature_leq(cal1.sig, cal2.sig):
        raise SignatureError("weaker-than needs the left language inside the right one")
    corpus = enumerate_formulas(cal1.sig, corpus_depth, max_var)
    corpus_set = set(corpus)
    escalation = fuel.escalated()
    checked = 0
    partial_verified = True
    for gamma in _gamma_candidates(corpus, max_premises):
        # premise members always transfer by extensivity; check the rest
        derivable = sorted(
            (closure_bounded(cal1, gamma, fuel) & corpus_set) - set(gamma),
            key=lambda f: f.sort_key,
        )
        checked += len(gamma)
        if not derivable:
            continue
        seeds: list[Formula] = []
        for phi in derivable:
            seeds.extend(phi.subformulas())
        transferred = closure_bounded(cal2, gamma, fuel, extra_pool=seeds)
        missing = [phi for phi in derivable if phi not in transferred]
        if missing:
            # give the target one generous retry before refuting
            transferred = closure_bounded(cal2, gamma, escalation, extra_pool=seeds)
            missing = [phi for phi in missing if phi not in transferred]
        checked += len(derivable)
        if missing:
            if gamma == ():
                partial_verified = False
            return WeaknessEvidence(
                verified=False,
                corpus_depth=corpus_depth,
                fuel=fuel,
                witness_gamma=gamma,
                witness_phi=missing[0],
                escalation=escalation,
                partial_verified=partial_verified,
                checked=checked,
            )
    return WeaknessEvidence(
        verified=True,
        corpus_depth=corpus_depth,
        fuel=fuel,
        partial_verified=True,
        checked=checked,
    )


# ---------------------------------------------------------------------------
# Meta-principle probes


def check_principles(
    cal: CalculusPresentation,
    corpus_depth: int,
    fuel: Fuel,
    *,
    max_var: int = 2,
    which: tuple[str, ...] = ("PNT", "PNC", "PPS"),
) -> Report:
    """Bounded probes of non-triviality, non-contradiction, and explosion.

    Non-triviality and non-contradiction search the corpus for witnesses;
    explosion is checked exhaustively over corpus (A, B) pairs with an empty
    side premise set, which bounded-closure monotonicity makes the hardest
    case. PNC and PPS need a designated negation; PNT does not.
    """
    if ("PNC" in which or "PPS" in which) and cal.negation is None:
        raise ConfigError("PNC and PPS probes need a designated negation")
    corpus = enumerate_formulas(cal.sig, corpus_depth, max_var)
    entries: list[ReportEntry] = []
    neg = cal.negation

    if "PNT" in which:
        # Non-triviality: some (gamma, B) with B not derivable within fuel.
        pnt_witness = ""
        for gamma in _gamma_candidates(corpus, 1):
            for b in corpus:
                if not derives(cal, gamma, b, fuel).is_derived:
                    pnt_witness = f"gamma={_format_set(gamma)} b={b.text}"
                    break
            if pnt_witness:
                break
        entries.append(
            ReportEntry("PNT", bool(pnt_witness), pnt_witness or "no witness up to bound")
        )

    if "PNC" in which:
        # Non-contradiction: some gamma deriving neither phi nor not-phi.
        pnc_witness = ""
        for gamma in _gamma_candidates(corpus, 1):
            for phi in corpus:
                if derives(cal, gamma, phi, fuel).is_derived:
                    continue
                negated = apply_symbol(neg, (phi,))
                if not derives(cal, gamma, negated, fuel).is_derived:
                    pnc_witness = f"gamma={_format_set(gamma)} phi={phi.text}"
                    break
            if pnc_witness:
                break
        entries.append(
            ReportEntry("PNC", bool(pnc_witness), pnc_witness or "no witness up to bound")
        )

    if "PPS" in which:
        # Explosion: from A and not-A, everything in the corpus follows.
        pps_counter = ""
        pps_checked = 0
        for a in corpus:
            gamma = (a, apply_symbol(neg, (a,)))
            for b in corpus:
                pps_checked += 1
                if not derives(cal, gamma, b, fuel).is_derived:
                    pps_counter = f"gamma={{}} a={a.text} b={b.text}"
                    break
            if pps_counter:
                break
        entries.append(
            ReportEntry(
                "PPS",
                not pps_counter,
                pps_counter or f"holds-up-to-bound pairs={pps_checked}",
            )
        )
    return Report(entries)
