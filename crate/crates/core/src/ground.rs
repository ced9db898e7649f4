//! Translation of a theory into propositional normal logic programs.
//!
//! Two translations live here. [`ground`] produces the *tagged* program
//! that treats all four proof tags at once: its atoms carry a context tag
//! `Z` (the regime the enclosing derivation runs under) and, for
//! provability atoms, the annotation tag `t` actually requested. [`ground_reference`]
//! produces the classical single-logic program for one fixed tag, used as
//! an independent check that the tagged program conservatively extends it.
//!
//! Both are grounded by direct schema instantiation: every clause schema is
//! written out over the four proof tags, the theory's literals (closed
//! under complement), and its rule labels. No clever sharing is attempted —
//! the point is that even written out naively the program stays quadratic
//! in the theory size, which [`GroundProgram::symbol_count`] lets callers
//! confirm.
//!
//! Annotations are compiled away rather than represented: a `free` tag
//! resolves to the enclosing context tag, and a fail-expression turns into
//! negation as failure on the `defeasibly` atom for its literal — in every
//! clause family, support clauses included, since failure-to-prove always
//! means failure of *defeasible* provability. Consequently the ground
//! programs contain no trace of `free` or `fail`.
//!
//! Key clause families in the tagged program, writing `Z` for the context
//! and `Y` for the annotation under which a head is derived:
//!
//! * `definitely(q)` — facts and strict-rule closure, tag-independent;
//! * `defeasibly[Z][Y](q) :- definitely(q)` — definite knowledge is
//!   defeasibly accepted under every regime, and likewise `supported`;
//! * `defeasibly[Z][Y](q)` via a supportive rule `r`, guarded by
//!   `not definitely(~q)` and `not overruled[Y](r, q)`; the body is
//!   compiled under context `Y`;
//! * `overruled[Z](r, q)` — some attacker `s` for `~q` fires (its body
//!   defeasible under `Z` for blocking tags, merely supported for
//!   propagating ones) and is not defeated;
//! * `defeated[Z](r, s, ~q)` — under team defeat, some supportive rule for
//!   `q` with defeasible body is superior to `s`; under individual defeat,
//!   a fact exactly when `r > s`;
//! * `supported[Z][Y](q)` via a supportive rule with supported body,
//!   guarded by `not beaten[Y](r, q)`;
//! * `beaten[Z](r, q)` — some attacker superior to `r` has a defeasible
//!   body.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use crate::theory::{DefeasibleTheory, Label, Literal, ProofTag, Rule, RuleKind};

/// Index of an atom in a [`GroundProgram`]'s universe.
pub type AtomId = u32;

/// Ground atoms of the tagged meta-program. The first tag is always the
/// context `Z`; for `Defeasibly`/`Supported` the second is the annotation
/// tag being established.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GroundAtom {
    Definitely(Literal),
    Defeasibly(ProofTag, ProofTag, Literal),
    Overruled(ProofTag, Label, Literal),
    Defeated(ProofTag, Label, Label, Literal),
    Supported(ProofTag, ProofTag, Literal),
    Beaten(ProofTag, Label, Literal),
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundAtom::Definitely(q) => write!(f, "definitely({q})"),
            GroundAtom::Defeasibly(z, t, q) => write!(f, "defeasibly[{z}][{t}]({q})"),
            GroundAtom::Overruled(z, r, q) => write!(f, "overruled[{z}]({r}, {q})"),
            GroundAtom::Defeated(z, r, s, q) => write!(f, "defeated[{z}]({r}, {s}, {q})"),
            GroundAtom::Supported(z, t, q) => write!(f, "supported[{z}][{t}]({q})"),
            GroundAtom::Beaten(z, r, q) => write!(f, "beaten[{z}]({r}, {q})"),
        }
    }
}

/// Ground atoms of a single-logic program (one fixed proof tag).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum RefAtom {
    Definitely(Literal),
    Defeasibly(Literal),
    Overruled(Label, Literal),
    Defeated(Label, Literal),
    Supported(Literal),
    Beaten(Label, Literal),
}

impl fmt::Display for RefAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RefAtom::Definitely(q) => write!(f, "definitely({q})"),
            RefAtom::Defeasibly(q) => write!(f, "defeasibly({q})"),
            RefAtom::Overruled(r, q) => write!(f, "overruled({r}, {q})"),
            RefAtom::Defeated(s, q) => write!(f, "defeated({s}, {q})"),
            RefAtom::Supported(q) => write!(f, "supported({q})"),
            RefAtom::Beaten(r, q) => write!(f, "beaten({r}, {q})"),
        }
    }
}

/// `head :- pos, not neg.` All members are indices into the program's atom
/// universe. An empty clause body makes the head a fact.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroundClause {
    pub head: AtomId,
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
}

/// A ground normal logic program over an indexed atom universe. Atoms with
/// no clauses are deliberately kept: under the three-valued semantics they
/// are false, which is exactly what e.g. an `overruled` atom without
/// attackers must be.
#[derive(Clone, Debug)]
pub struct GroundProgram<A> {
    atoms: Vec<A>,
    ids: HashMap<A, AtomId>,
    clauses: Vec<GroundClause>,
    by_head: Vec<Vec<u32>>,
    literals: Vec<Literal>,
}

impl<A: Copy + Eq + Hash> GroundProgram<A> {
    pub(crate) fn new(literals: Vec<Literal>) -> Self {
        GroundProgram {
            atoms: Vec::new(),
            ids: HashMap::new(),
            clauses: Vec::new(),
            by_head: Vec::new(),
            literals,
        }
    }

    pub(crate) fn add_atom(&mut self, atom: A) -> AtomId {
        *self.ids.entry(atom).or_insert_with(|| {
            let id = self.atoms.len() as AtomId;
            self.atoms.push(atom);
            self.by_head.push(Vec::new());
            id
        })
    }

    pub(crate) fn add_clause(&mut self, head: AtomId, pos: Vec<AtomId>, neg: Vec<AtomId>) {
        self.by_head[head as usize].push(self.clauses.len() as u32);
        self.clauses.push(GroundClause { head, pos, neg });
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom(&self, id: AtomId) -> A {
        self.atoms[id as usize]
    }

    pub fn atom_id(&self, atom: &A) -> Option<AtomId> {
        self.ids.get(atom).copied()
    }

    pub fn atoms(&self) -> &[A] {
        &self.atoms
    }

    pub fn clauses(&self) -> &[GroundClause] {
        &self.clauses
    }

    /// Indices into [`Self::clauses`] of the clauses with this head.
    pub fn clauses_for(&self, head: AtomId) -> &[u32] {
        &self.by_head[head as usize]
    }

    /// The literal universe of the source theory, sorted, closed under
    /// complement.
    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    /// Size of the program counted in symbols: one per clause head plus one
    /// per body atom occurrence.
    pub fn symbol_count(&self) -> usize {
        self.clauses.iter().map(|c| 1 + c.pos.len() + c.neg.len()).sum()
    }
}

impl<A: Copy + Eq + Hash + fmt::Display> GroundProgram<A> {
    /// Debug rendering, one clause per line:
    /// `head :- a1, ..., an, not b1, ..., not bm.`
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for c in &self.clauses {
            out.push_str(&format!("{}", self.atom(c.head)));
            let mut sep = " :- ";
            for &a in &c.pos {
                out.push_str(&format!("{sep}{}", self.atom(a)));
                sep = ", ";
            }
            for &a in &c.neg {
                out.push_str(&format!("{sep}not {}", self.atom(a)));
                sep = ", ";
            }
            out.push_str(".\n");
        }
        out
    }
}

/// The theory restated as a flat fact base: one record per fact, rule, and
/// superiority pair, plus the fixed classification of the four proof tags.
/// [`ground`] instantiates its clause schemas over exactly these records.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TheoryFact {
    Fact(Literal),
    Strict(Label, Literal, Vec<crate::theory::BodyExpr>),
    Defeasible(Label, Literal, Vec<crate::theory::BodyExpr>),
    Defeater(Label, Literal, Vec<crate::theory::BodyExpr>),
    Sup(Label, Label),
    Team(ProofTag),
    Individual(ProofTag),
    AmbiguityBlocking(ProofTag),
    AmbiguityPropagating(ProofTag),
    IsProofTag(ProofTag),
}

/// Restate a theory as the fact base the clause schemas range over.
pub fn translate(t: &DefeasibleTheory) -> Vec<TheoryFact> {
    let mut out = Vec::new();
    for d in ProofTag::ALL {
        out.push(TheoryFact::IsProofTag(d));
        out.push(if d.team() { TheoryFact::Team(d) } else { TheoryFact::Individual(d) });
        out.push(if d.blocking() {
            TheoryFact::AmbiguityBlocking(d)
        } else {
            TheoryFact::AmbiguityPropagating(d)
        });
    }
    for &q in &t.facts {
        out.push(TheoryFact::Fact(q));
    }
    for r in &t.rules {
        out.push(match r.kind {
            RuleKind::Strict => TheoryFact::Strict(r.label, r.head, r.body.clone()),
            RuleKind::Defeasible => TheoryFact::Defeasible(r.label, r.head, r.body.clone()),
            RuleKind::Defeater => TheoryFact::Defeater(r.label, r.head, r.body.clone()),
        });
    }
    for &(a, b) in &t.sup {
        out.push(TheoryFact::Sup(a, b));
    }
    out
}

/// The single-logic translations require a plain theory: tags and
/// fail-expressions only make sense against the tagged program.
#[derive(Clone, Copy, PartialEq, Eq, Debug, thiserror::Error)]
#[error("theory carries tag annotations or fail-expressions; this operation is defined for plain theories only")]
pub struct AnnotatedInputError;

/// Rule indexes shared by both grounders.
struct RuleIndex<'a> {
    rules: Vec<(&'a Label, &'a Rule)>,
    /// All rules with the given head.
    for_head: HashMap<Literal, Vec<usize>>,
    /// Supportive (strict or defeasible) rules with the given head.
    supportive_for_head: HashMap<Literal, Vec<usize>>,
    sup: std::collections::HashSet<(Label, Label)>,
}

impl<'a> RuleIndex<'a> {
    fn build(t: &'a DefeasibleTheory) -> Self {
        let mut for_head: HashMap<Literal, Vec<usize>> = HashMap::new();
        let mut supportive_for_head: HashMap<Literal, Vec<usize>> = HashMap::new();
        for (i, r) in t.rules.iter().enumerate() {
            for_head.entry(r.head).or_default().push(i);
            if r.kind.supportive() {
                supportive_for_head.entry(r.head).or_default().push(i);
            }
        }
        RuleIndex {
            rules: t.rules.iter().map(|r| (&r.label, r)).collect(),
            for_head,
            supportive_for_head,
            sup: t.sup.iter().copied().collect(),
        }
    }

    fn attackers(&self, q: Literal) -> &[usize] {
        self.for_head.get(&q.complement()).map(Vec::as_slice).unwrap_or(&[])
    }

    fn supportive(&self, q: Literal) -> &[usize] {
        self.supportive_for_head.get(&q).map(Vec::as_slice).unwrap_or(&[])
    }

    fn superior(&self, a: Label, b: Label) -> bool {
        self.sup.contains(&(a, b))
    }
}

/// Compile a rule body into clause body atoms under a context tag. Each
/// expression resolves its tag against the context, picks `defeasibly` or
/// `supported` per `mode`, and lands in the positive or negative part
/// according to its fail wrapper. Duplicate compiled atoms are dropped.
///
/// Fail-expressions compile against `defeasibly` in *both* modes: proving
/// `fail [t] w` always means `w` is not defeasibly provable at `t`. Testing
/// failure of the weaker `supported` relation instead would make support
/// conclusions demand *more* of a fail premise than defeasible conclusions
/// do, inverting the relative strength of the two relations and breaking
/// the inference-strength ordering wherever a failed premise is refuted but
/// still supported.
#[derive(Clone, Copy, PartialEq, Eq)]
enum BodyMode {
    Defeasibly,
    Supported,
}

fn compile_body(
    program: &mut GroundProgram<GroundAtom>,
    body: &[crate::theory::BodyExpr],
    context: ProofTag,
    mode: BodyMode,
) -> (Vec<AtomId>, Vec<AtomId>) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for e in body {
        let t = e.tag.resolve(context);
        let atom = if e.failed {
            GroundAtom::Defeasibly(context, t, e.literal)
        } else {
            match mode {
                BodyMode::Defeasibly => GroundAtom::Defeasibly(context, t, e.literal),
                BodyMode::Supported => GroundAtom::Supported(context, t, e.literal),
            }
        };
        let id = program.add_atom(atom);
        let side = if e.failed { &mut neg } else { &mut pos };
        if !side.contains(&id) {
            side.push(id);
        }
    }
    (pos, neg)
}

/// Ground the tagged meta-program for a theory. The atom universe covers
/// `definitely` for every literal, `defeasibly`/`supported` for every
/// (context, annotation) tag pair and literal, and the attack bookkeeping
/// atoms (`overruled`, `defeated`, `beaten`) for every context tag and
/// consulted rule combination.
pub fn ground(t: &DefeasibleTheory) -> GroundProgram<GroundAtom> {
    let facts = translate(t);
    let mut theory_facts: Vec<Literal> = Vec::new();
    let mut rules: Vec<(Label, RuleKind, &[crate::theory::BodyExpr], Literal)> = Vec::new();
    let mut sup: std::collections::HashSet<(Label, Label)> = std::collections::HashSet::new();
    for f in &facts {
        match f {
            TheoryFact::Fact(q) => theory_facts.push(*q),
            TheoryFact::Strict(l, h, b) => rules.push((*l, RuleKind::Strict, b, *h)),
            TheoryFact::Defeasible(l, h, b) => rules.push((*l, RuleKind::Defeasible, b, *h)),
            TheoryFact::Defeater(l, h, b) => rules.push((*l, RuleKind::Defeater, b, *h)),
            TheoryFact::Sup(a, b) => {
                sup.insert((*a, *b));
            }
            _ => {}
        }
    }

    let literals: Vec<Literal> = t.literals().into_iter().collect();
    let mut program = GroundProgram::new(literals.clone());

    let mut for_head: HashMap<Literal, Vec<usize>> = HashMap::new();
    let mut supportive_for_head: HashMap<Literal, Vec<usize>> = HashMap::new();
    for (i, &(_, kind, _, head)) in rules.iter().enumerate() {
        for_head.entry(head).or_default().push(i);
        if kind.supportive() {
            supportive_for_head.entry(head).or_default().push(i);
        }
    }
    let attackers = |q: Literal| -> &[usize] {
        for_head.get(&q.complement()).map(Vec::as_slice).unwrap_or(&[])
    };

    // Universe. Registration order is fixed so atom ids are deterministic.
    for &q in &literals {
        program.add_atom(GroundAtom::Definitely(q));
    }
    for z in ProofTag::ALL {
        for t in ProofTag::ALL {
            for &q in &literals {
                program.add_atom(GroundAtom::Defeasibly(z, t, q));
                program.add_atom(GroundAtom::Supported(z, t, q));
            }
        }
    }
    for z in ProofTag::ALL {
        for &(label, kind, _, head) in &rules {
            if !kind.supportive() {
                continue;
            }
            program.add_atom(GroundAtom::Overruled(z, label, head));
            program.add_atom(GroundAtom::Beaten(z, label, head));
            for &s in attackers(head) {
                program.add_atom(GroundAtom::Defeated(z, label, rules[s].0, head.complement()));
            }
        }
    }

    // definitely: facts and strict-rule closure.
    for &q in &theory_facts {
        let head = program.add_atom(GroundAtom::Definitely(q));
        program.add_clause(head, vec![], vec![]);
    }
    for &(_, kind, body, head) in &rules {
        if kind != RuleKind::Strict {
            continue;
        }
        let head = program.add_atom(GroundAtom::Definitely(head));
        let mut pos = Vec::new();
        for e in body {
            let id = program.add_atom(GroundAtom::Definitely(e.literal));
            if !pos.contains(&id) {
                pos.push(id);
            }
        }
        program.add_clause(head, pos, vec![]);
    }

    for z in ProofTag::ALL {
        for y in ProofTag::ALL {
            for &q in &literals {
                // Definite knowledge is accepted under every regime.
                let definitely = program.add_atom(GroundAtom::Definitely(q));
                let defeasibly = program.add_atom(GroundAtom::Defeasibly(z, y, q));
                program.add_clause(defeasibly, vec![definitely], vec![]);
                let supported = program.add_atom(GroundAtom::Supported(z, y, q));
                program.add_clause(supported, vec![definitely], vec![]);
            }
            // Supportive rules derive their heads under the annotation's
            // regime: the body is compiled under context `y`, and the
            // attack bookkeeping is `y`'s as well.
            for &(label, kind, body, head) in &rules {
                if !kind.supportive() {
                    continue;
                }
                let not_definite = program.add_atom(GroundAtom::Definitely(head.complement()));

                let (pos, mut neg) = compile_body(&mut program, body, y, BodyMode::Defeasibly);
                let overruled = program.add_atom(GroundAtom::Overruled(y, label, head));
                neg.extend([not_definite, overruled]);
                let defeasibly = program.add_atom(GroundAtom::Defeasibly(z, y, head));
                program.add_clause(defeasibly, pos, neg);

                let (pos, mut neg) = compile_body(&mut program, body, y, BodyMode::Supported);
                let beaten = program.add_atom(GroundAtom::Beaten(y, label, head));
                neg.push(beaten);
                let supported = program.add_atom(GroundAtom::Supported(z, y, head));
                program.add_clause(supported, pos, neg);
            }
        }
    }

    for z in ProofTag::ALL {
        for &(label, kind, _, head) in &rules {
            if !kind.supportive() {
                continue;
            }
            let overruled = program.add_atom(GroundAtom::Overruled(z, label, head));
            let beaten = program.add_atom(GroundAtom::Beaten(z, label, head));
            for &s in attackers(head) {
                let (s_label, _, s_body, _) = rules[s];

                // overruled: attacker fires and is not defeated. Blocking
                // regimes demand a defeasibly provable attacker body,
                // propagating ones settle for a supported body.
                let mode = if z.blocking() { BodyMode::Defeasibly } else { BodyMode::Supported };
                let (pos, mut neg) = compile_body(&mut program, s_body, z, mode);
                let defeated =
                    program.add_atom(GroundAtom::Defeated(z, label, s_label, head.complement()));
                neg.push(defeated);
                program.add_clause(overruled, pos, neg);

                // defeated: team defeat lets any superior supportive rule
                // for the head repel the attacker; individual defeat only
                // the attacked rule itself.
                if z.team() {
                    for &t_idx in supportive_for_head.get(&head).map(Vec::as_slice).unwrap_or(&[]) {
                        let (t_label, _, t_body, _) = rules[t_idx];
                        if !sup.contains(&(t_label, s_label)) {
                            continue;
                        }
                        let (pos, neg) =
                            compile_body(&mut program, t_body, z, BodyMode::Defeasibly);
                        program.add_clause(defeated, pos, neg);
                    }
                } else if sup.contains(&(label, s_label)) {
                    program.add_clause(defeated, vec![], vec![]);
                }

                // beaten: an attacker superior to this rule fires
                // defeasibly.
                if sup.contains(&(s_label, label)) {
                    let (pos, neg) = compile_body(&mut program, s_body, z, BodyMode::Defeasibly);
                    program.add_clause(beaten, pos, neg);
                }
            }
        }
    }

    program
}

/// Which clause families the single-logic program for a tag contains.
/// Blocking tags judge attackers by defeasible provability and need no
/// support machinery; propagating tags judge them by support. Team tags
/// consult `defeated`; individual tags test superiority of the attacked
/// rule directly at grounding time.
fn compile_ref_body(
    program: &mut GroundProgram<RefAtom>,
    body: &[crate::theory::BodyExpr],
    mode: BodyMode,
) -> Vec<AtomId> {
    let mut pos = Vec::new();
    for e in body {
        let atom = match mode {
            BodyMode::Defeasibly => RefAtom::Defeasibly(e.literal),
            BodyMode::Supported => RefAtom::Supported(e.literal),
        };
        let id = program.add_atom(atom);
        if !pos.contains(&id) {
            pos.push(id);
        }
    }
    pos
}

/// Ground the single-logic program for one proof tag over a plain theory.
pub fn ground_reference(
    t: &DefeasibleTheory,
    d: ProofTag,
) -> Result<GroundProgram<RefAtom>, AnnotatedInputError> {
    if !t.is_plain() {
        return Err(AnnotatedInputError);
    }

    let literals: Vec<Literal> = t.literals().into_iter().collect();
    let mut program = GroundProgram::new(literals.clone());
    let index = RuleIndex::build(t);

    for &q in &literals {
        program.add_atom(RefAtom::Definitely(q));
        program.add_atom(RefAtom::Defeasibly(q));
        if d.propagating() {
            program.add_atom(RefAtom::Supported(q));
        }
    }
    for &(label, r) in &index.rules {
        if r.kind.supportive() {
            program.add_atom(RefAtom::Overruled(*label, r.head));
            if d.propagating() {
                program.add_atom(RefAtom::Beaten(*label, r.head));
            }
        }
        if d.team() {
            program.add_atom(RefAtom::Defeated(*label, r.head));
        }
    }

    for &q in &t.facts {
        let head = program.add_atom(RefAtom::Definitely(q));
        program.add_clause(head, vec![], vec![]);
    }
    for &(_, r) in &index.rules {
        if r.kind != RuleKind::Strict {
            continue;
        }
        let head = program.add_atom(RefAtom::Definitely(r.head));
        let mut pos = Vec::new();
        for e in &r.body {
            let id = program.add_atom(RefAtom::Definitely(e.literal));
            if !pos.contains(&id) {
                pos.push(id);
            }
        }
        program.add_clause(head, pos, vec![]);
    }

    for &q in &literals {
        let definitely = program.add_atom(RefAtom::Definitely(q));
        let defeasibly = program.add_atom(RefAtom::Defeasibly(q));
        program.add_clause(defeasibly, vec![definitely], vec![]);
        if d.propagating() {
            let supported = program.add_atom(RefAtom::Supported(q));
            program.add_clause(supported, vec![definitely], vec![]);
        }
    }

    for &(label, r) in &index.rules {
        if !r.kind.supportive() {
            continue;
        }
        let not_definite = program.add_atom(RefAtom::Definitely(r.head.complement()));

        let pos = compile_ref_body(&mut program, &r.body, BodyMode::Defeasibly);
        let overruled = program.add_atom(RefAtom::Overruled(*label, r.head));
        let defeasibly = program.add_atom(RefAtom::Defeasibly(r.head));
        program.add_clause(defeasibly, pos, vec![not_definite, overruled]);

        if d.propagating() {
            let pos = compile_ref_body(&mut program, &r.body, BodyMode::Supported);
            let beaten = program.add_atom(RefAtom::Beaten(*label, r.head));
            let supported = program.add_atom(RefAtom::Supported(r.head));
            program.add_clause(supported, pos, vec![beaten]);
        }

        for &s in index.attackers(r.head) {
            let (s_label, s_rule) = index.rules[s];
            let mode = if d.blocking() { BodyMode::Defeasibly } else { BodyMode::Supported };
            let pos = compile_ref_body(&mut program, &s_rule.body, mode);
            if d.team() {
                let defeated = program.add_atom(RefAtom::Defeated(*s_label, s_rule.head));
                program.add_clause(overruled, pos, vec![defeated]);
            } else if !index.superior(*label, *s_label) {
                // Under individual defeat the superiority test is static:
                // when the attacked rule wins, the attack clause is
                // simply absent.
                program.add_clause(overruled, pos, vec![]);
            }

            if d.propagating() {
                // beaten: attackers superior to this rule, judged
                // defeasibly.
                if index.superior(*s_label, *label) {
                    let pos = compile_ref_body(&mut program, &s_rule.body, BodyMode::Defeasibly);
                    let beaten = program.add_atom(RefAtom::Beaten(*label, r.head));
                    program.add_clause(beaten, pos, vec![]);
                }
            }
        }
    }

    // defeated: any superior supportive rule for the attacked literal
    // repels the attacker (team defeat only).
    if d.team() {
        for &(s_label, s_rule) in &index.rules {
            let defeated = program.add_atom(RefAtom::Defeated(*s_label, s_rule.head));
            for &t_idx in index.supportive(s_rule.head.complement()) {
                let (t_label, t_rule) = index.rules[t_idx];
                if !index.superior(*t_label, *s_label) {
                    continue;
                }
                let pos = compile_ref_body(&mut program, &t_rule.body, BodyMode::Defeasibly);
                program.add_clause(defeated, pos, vec![]);
            }
        }
    }

    Ok(program)
}
