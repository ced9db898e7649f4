//! Abstract syntax and well-formedness of annotated defeasible theories.
//!
//! A theory consists of facts (indisputable literals), labelled rules of
//! three kinds (strict `->`, defeasible `=>`, defeater `~>`), and an acyclic
//! superiority relation over rule labels. Every body literal occurrence
//! carries a tag selecting the proof regime under which it must be
//! established — one of the four proof tags, or `free`, which defers to the
//! enclosing proof context — and may additionally be wrapped in a
//! fail-expression, which asks for demonstrable failure to prove instead of
//! proof. Strict rule bodies are plain: no fail-expressions, no tags other
//! than `free`.
//!
//! Atom and label names are interned process-wide, so [`Literal`] and
//! [`Label`] are small `Copy` values. Orderings on interned names compare
//! the underlying strings, which keeps every derived ordering (and thus all
//! printed output) independent of interning history.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::RwLock;

use once_cell::sync::Lazy;

static INTERNER: Lazy<RwLock<Interner>> = Lazy::new(|| RwLock::new(Interner::default()));

#[derive(Default)]
struct Interner {
    ids: HashMap<&'static str, u32>,
    names: Vec<&'static str>,
}

/// An interned identifier (atom or rule label name).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Symbol(u32);

impl Symbol {
    pub fn intern(name: &str) -> Symbol {
        if let Some(&id) = INTERNER.read().unwrap().ids.get(name) {
            return Symbol(id);
        }
        let mut interner = INTERNER.write().unwrap();
        if let Some(&id) = interner.ids.get(name) {
            return Symbol(id);
        }
        let name: &'static str = Box::leak(name.to_owned().into_boxed_str());
        let id = u32::try_from(interner.names.len()).expect("interner overflow");
        interner.names.push(name);
        interner.ids.insert(name, id);
        Symbol(id)
    }

    pub fn as_str(self) -> &'static str {
        INTERNER.read().unwrap().names[self.0 as usize]
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Symbol) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Symbol) -> Ordering {
        if self.0 == other.0 {
            Ordering::Equal
        } else {
            self.as_str().cmp(other.as_str())
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A propositional literal: an atom or its classical negation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Literal {
    pub atom: Symbol,
    pub positive: bool,
}

impl Literal {
    pub fn new(atom: Symbol, positive: bool) -> Literal {
        Literal { atom, positive }
    }

    pub fn positive(name: &str) -> Literal {
        Literal::new(Symbol::intern(name), true)
    }

    pub fn negative(name: &str) -> Literal {
        Literal::new(Symbol::intern(name), false)
    }

    /// The complementary literal: `p <-> ~p`. An involution.
    pub fn complement(self) -> Literal {
        Literal { atom: self.atom, positive: !self.positive }
    }
}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Literal) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Literal {
    fn cmp(&self, other: &Literal) -> Ordering {
        // Positive before negative within one atom.
        self.atom
            .cmp(&other.atom)
            .then_with(|| other.positive.cmp(&self.positive))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// The four proof tags. `Pa`/`PaStar` block ambiguity, `De`/`DeStar`
/// propagate it; `Pa`/`De` resolve attacks by team defeat, `PaStar`/`DeStar`
/// require the attacked rule itself to beat each attacker.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum ProofTag {
    /// Ambiguity blocking, team defeat (`pa`).
    Pa,
    /// Ambiguity blocking, individual defeat (`pa*`).
    PaStar,
    /// Ambiguity propagating, team defeat (`de`).
    De,
    /// Ambiguity propagating, individual defeat (`de*`).
    DeStar,
}

impl ProofTag {
    pub const ALL: [ProofTag; 4] = [ProofTag::Pa, ProofTag::PaStar, ProofTag::De, ProofTag::DeStar];

    /// Team defeat: an attack may be repelled by any supportive rule for
    /// the attacked literal.
    pub fn team(self) -> bool {
        matches!(self, ProofTag::Pa | ProofTag::De)
    }

    /// Individual defeat: the rule under consideration must itself repel
    /// every attack.
    pub fn individual(self) -> bool {
        !self.team()
    }

    /// Ambiguity blocking: attackers only need defeasibly provable bodies.
    pub fn blocking(self) -> bool {
        matches!(self, ProofTag::Pa | ProofTag::PaStar)
    }

    /// Ambiguity propagating: attackers need merely supported bodies, so
    /// ambiguity of an attacker still undercuts the attacked literal.
    pub fn propagating(self) -> bool {
        !self.blocking()
    }

    pub fn name(self) -> &'static str {
        match self {
            ProofTag::Pa => "pa",
            ProofTag::PaStar => "pa*",
            ProofTag::De => "de",
            ProofTag::DeStar => "de*",
        }
    }
}

impl fmt::Display for ProofTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Annotation on a body literal occurrence. `Free` defers to the proof
/// context in which the enclosing rule is used; it is never itself a proof
/// tag.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Tag {
    Free,
    Proof(ProofTag),
}

impl Tag {
    pub fn is_free(self) -> bool {
        matches!(self, Tag::Free)
    }

    /// The proof tag to evaluate under, given the enclosing context.
    pub fn resolve(self, context: ProofTag) -> ProofTag {
        match self {
            Tag::Free => context,
            Tag::Proof(d) => d,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Tag::Free => "free",
            Tag::Proof(d) => d.name(),
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A rule label.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Label(pub Symbol);

impl Label {
    pub fn new(name: &str) -> Label {
        Label(Symbol::intern(name))
    }

    pub fn as_str(self) -> &'static str {
        self.0.as_str()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One body element: a literal under an annotation, optionally wrapped in a
/// fail-expression (`failed == true` asks for demonstrable failure).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct BodyExpr {
    pub failed: bool,
    pub tag: Tag,
    pub literal: Literal,
}

impl BodyExpr {
    /// A plain occurrence: no fail wrapper, `free` tag.
    pub fn plain(literal: Literal) -> BodyExpr {
        BodyExpr { failed: false, tag: Tag::Free, literal }
    }
}

impl fmt::Display for BodyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failed {
            f.write_str("fail ")?;
        }
        if let Tag::Proof(d) = self.tag {
            write!(f, "[{}] ", d)?;
        }
        write!(f, "{}", self.literal)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum RuleKind {
    Strict,
    Defeasible,
    Defeater,
}

impl RuleKind {
    /// Strict and defeasible rules support their head; defeaters only
    /// attack the opposite conclusion.
    pub fn supportive(self) -> bool {
        !matches!(self, RuleKind::Defeater)
    }

    pub fn arrow(self) -> &'static str {
        match self {
            RuleKind::Strict => "->",
            RuleKind::Defeasible => "=>",
            RuleKind::Defeater => "~>",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rule {
    pub label: Label,
    pub kind: RuleKind,
    pub body: Vec<BodyExpr>,
    pub head: Literal,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.label)?;
        for (i, e) in self.body.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { " " } else { ", " }, e)?;
        }
        write!(f, " {} {}", self.kind.arrow(), self.head)
    }
}

/// A well-formedness defect found by [`DefeasibleTheory::validate`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    DuplicateLabel { label: Label },
    UnknownSupLabel { pair: (Label, Label), missing: Label },
    CyclicSuperiority { cycle: Vec<Label> },
    AnnotatedStrictBody { rule: Label },
    FailInStrictBody { rule: Label },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateLabel { label } => {
                write!(f, "rule label `{}` is declared more than once", label)
            }
            Violation::UnknownSupLabel { pair, missing } => write!(
                f,
                "superiority `{} > {}` mentions `{}`, which labels no rule",
                pair.0, pair.1, missing
            ),
            Violation::CyclicSuperiority { cycle } => {
                write!(f, "superiority relation is cyclic: ")?;
                for l in cycle {
                    write!(f, "{} > ", l)?;
                }
                write!(f, "{}", cycle[0])
            }
            Violation::AnnotatedStrictBody { rule } => {
                write!(f, "strict rule `{}` carries a tag annotation in its body", rule)
            }
            Violation::FailInStrictBody { rule } => {
                write!(f, "strict rule `{}` contains a fail-expression in its body", rule)
            }
        }
    }
}

/// An annotated defeasible theory `(F, R, >)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DefeasibleTheory {
    pub facts: BTreeSet<Literal>,
    pub rules: Vec<Rule>,
    pub sup: BTreeSet<(Label, Label)>,
}

impl DefeasibleTheory {
    pub fn new() -> DefeasibleTheory {
        DefeasibleTheory::default()
    }

    pub fn rule(&self, label: Label) -> Option<&Rule> {
        self.rules.iter().find(|r| r.label == label)
    }

    /// True when no body literal carries a fail wrapper or a non-`free`
    /// tag. The single-logic translations and the proof oracle are defined
    /// only for plain theories.
    pub fn is_plain(&self) -> bool {
        self.rules
            .iter()
            .flat_map(|r| &r.body)
            .all(|e| !e.failed && e.tag.is_free())
    }

    /// All literals occurring in the theory, closed under complement.
    pub fn literals(&self) -> BTreeSet<Literal> {
        let mut out = BTreeSet::new();
        let mut add = |q: Literal| {
            out.insert(q);
            out.insert(q.complement());
        };
        for &q in &self.facts {
            add(q);
        }
        for r in &self.rules {
            add(r.head);
            for e in &r.body {
                add(e.literal);
            }
        }
        out
    }

    /// Size of the theory counted in symbols: one per fact, one per rule
    /// label and head, one per body literal plus one for an explicit tag
    /// and one for a fail wrapper, and two per superiority pair.
    pub fn symbol_count(&self) -> usize {
        let mut n = self.facts.len();
        for r in &self.rules {
            n += 2;
            for e in &r.body {
                n += 1;
                if !e.tag.is_free() {
                    n += 1;
                }
                if e.failed {
                    n += 1;
                }
            }
        }
        n + 2 * self.sup.len()
    }

    /// Check well-formedness: unique labels, superiority endpoints naming
    /// declared rules, acyclic superiority, and plain strict-rule bodies.
    /// Violations are collected, not short-circuited.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();

        let mut seen = HashSet::new();
        let mut duplicated = BTreeSet::new();
        for r in &self.rules {
            if !seen.insert(r.label) {
                duplicated.insert(r.label);
            }
        }
        out.extend(duplicated.into_iter().map(|label| Violation::DuplicateLabel { label }));

        for r in &self.rules {
            if r.kind != RuleKind::Strict {
                continue;
            }
            if r.body.iter().any(|e| e.failed) {
                out.push(Violation::FailInStrictBody { rule: r.label });
            }
            if r.body.iter().any(|e| !e.tag.is_free()) {
                out.push(Violation::AnnotatedStrictBody { rule: r.label });
            }
        }

        let declared: HashSet<Label> = self.rules.iter().map(|r| r.label).collect();
        for &pair in &self.sup {
            for missing in [pair.0, pair.1] {
                if !declared.contains(&missing) {
                    out.push(Violation::UnknownSupLabel { pair, missing });
                }
            }
        }

        if let Some(cycle) = self.find_sup_cycle() {
            out.push(Violation::CyclicSuperiority { cycle });
        }

        out
    }

    /// Depth-first search for a cycle in the superiority graph; returns the
    /// first cycle found, as the list of labels along it.
    fn find_sup_cycle(&self) -> Option<Vec<Label>> {
        let mut adjacency: HashMap<Label, Vec<Label>> = HashMap::new();
        let mut nodes = BTreeSet::new();
        for &(a, b) in &self.sup {
            adjacency.entry(a).or_default().push(b);
            nodes.insert(a);
            nodes.insert(b);
        }

        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            OnPath,
            Done,
        }

        fn visit(
            node: Label,
            adjacency: &HashMap<Label, Vec<Label>>,
            marks: &mut HashMap<Label, Mark>,
            path: &mut Vec<Label>,
        ) -> Option<Vec<Label>> {
            marks.insert(node, Mark::OnPath);
            path.push(node);
            for &next in adjacency.get(&node).map(Vec::as_slice).unwrap_or(&[]) {
                match marks.get(&next) {
                    Some(Mark::OnPath) => {
                        let start = path.iter().position(|&l| l == next).unwrap();
                        return Some(path[start..].to_vec());
                    }
                    Some(Mark::Done) => {}
                    None => {
                        if let Some(cycle) = visit(next, adjacency, marks, path) {
                            return Some(cycle);
                        }
                    }
                }
            }
            path.pop();
            marks.insert(node, Mark::Done);
            None
        }

        let mut marks = HashMap::new();
        for &node in &nodes {
            if !marks.contains_key(&node) {
                if let Some(cycle) = visit(node, &adjacency, &mut marks, &mut Vec::new()) {
                    return Some(cycle);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lit(name: &str) -> Literal {
        if let Some(stripped) = name.strip_prefix('~') {
            Literal::negative(stripped)
        } else {
            Literal::positive(name)
        }
    }

    fn rule(label: &str, kind: RuleKind, body: &[&str], head: &str) -> Rule {
        Rule {
            label: Label::new(label),
            kind,
            body: body.iter().map(|b| BodyExpr::plain(lit(b))).collect(),
            head: lit(head),
        }
    }

    #[test]
    fn complement_flips_sign_only() {
        let p = lit("p");
        assert_eq!(p.complement(), lit("~p"));
        assert_eq!(lit("~p").complement(), p);
    }

    #[test]
    fn literal_order_is_by_name_then_sign() {
        let mut v = vec![lit("~b"), lit("b"), lit("~a"), lit("a")];
        v.sort();
        assert_eq!(v, vec![lit("a"), lit("~a"), lit("b"), lit("~b")]);
    }

    #[test]
    fn literals_close_under_complement() {
        let mut t = DefeasibleTheory::new();
        assert!(t.literals().is_empty());
        t.facts.insert(lit("p"));
        let lits = t.literals();
        assert_eq!(lits.len(), 2);
        assert!(lits.contains(&lit("p")) && lits.contains(&lit("~p")));
    }

    #[test]
    fn literals_cover_facts_heads_and_bodies() {
        let mut t = DefeasibleTheory::new();
        t.facts.insert(lit("evidence_a"));
        t.facts.insert(lit("evidence_b"));
        t.rules.push(rule("r1", RuleKind::Defeasible, &["evidence_a"], "~responsible"));
        t.rules.push(rule("r2", RuleKind::Defeasible, &["evidence_b"], "responsible"));
        t.rules.push(rule("r3", RuleKind::Defeasible, &["responsible"], "guilty"));
        t.rules.push(rule("r4", RuleKind::Defeasible, &[], "~guilty"));
        // Four atoms, both signs each.
        assert_eq!(t.literals().len(), 8);
    }

    #[test]
    fn validate_accepts_well_formed_theory() {
        let mut t = DefeasibleTheory::new();
        t.rules.push(rule("r1", RuleKind::Defeasible, &[], "p"));
        t.rules.push(rule("r2", RuleKind::Defeasible, &[], "~p"));
        t.sup.insert((Label::new("r1"), Label::new("r2")));
        assert!(t.validate().is_empty());
    }

    #[test]
    fn validate_reports_duplicate_labels() {
        let mut t = DefeasibleTheory::new();
        t.rules.push(rule("r1", RuleKind::Defeasible, &[], "p"));
        t.rules.push(rule("r1", RuleKind::Defeasible, &[], "q"));
        let violations = t.validate();
        assert_eq!(violations, vec![Violation::DuplicateLabel { label: Label::new("r1") }]);
    }

    #[test]
    fn validate_reports_two_cycle() {
        let mut t = DefeasibleTheory::new();
        t.rules.push(rule("r1", RuleKind::Defeasible, &[], "p"));
        t.rules.push(rule("r2", RuleKind::Defeasible, &[], "~p"));
        t.sup.insert((Label::new("r1"), Label::new("r2")));
        t.sup.insert((Label::new("r2"), Label::new("r1")));
        let violations = t.validate();
        assert_eq!(violations.len(), 1);
        match &violations[0] {
            Violation::CyclicSuperiority { cycle } => assert_eq!(cycle.len(), 2),
            other => panic!("expected cycle, got {other:?}"),
        }
    }

    #[test]
    fn validate_reports_self_superiority_as_cycle() {
        let mut t = DefeasibleTheory::new();
        t.rules.push(rule("r1", RuleKind::Defeasible, &[], "p"));
        t.sup.insert((Label::new("r1"), Label::new("r1")));
        let violations = t.validate();
        assert!(matches!(violations[0], Violation::CyclicSuperiority { .. }));
    }

    #[test]
    fn validate_reports_unknown_sup_endpoint() {
        let mut t = DefeasibleTheory::new();
        t.rules.push(rule("r1", RuleKind::Defeasible, &[], "p"));
        t.sup.insert((Label::new("r1"), Label::new("zzz")));
        let violations = t.validate();
        assert_eq!(
            violations,
            vec![Violation::UnknownSupLabel {
                pair: (Label::new("r1"), Label::new("zzz")),
                missing: Label::new("zzz"),
            }]
        );
    }

    #[test]
    fn validate_rejects_annotated_or_failed_strict_bodies() {
        let mut t = DefeasibleTheory::new();
        t.rules.push(Rule {
            label: Label::new("r1"),
            kind: RuleKind::Strict,
            body: vec![BodyExpr { failed: false, tag: Tag::Proof(ProofTag::Pa), literal: lit("p") }],
            head: lit("q"),
        });
        t.rules.push(Rule {
            label: Label::new("r2"),
            kind: RuleKind::Strict,
            body: vec![BodyExpr { failed: true, tag: Tag::Free, literal: lit("p") }],
            head: lit("q"),
        });
        let violations = t.validate();
        assert!(violations.contains(&Violation::AnnotatedStrictBody { rule: Label::new("r1") }));
        assert!(violations.contains(&Violation::FailInStrictBody { rule: Label::new("r2") }));
    }

    #[test]
    fn sup_between_non_conflicting_rules_is_not_an_error() {
        // The relation is only consulted for rules with complementary
        // heads; stray pairs are stored and ignored, not rejected.
        let mut t = DefeasibleTheory::new();
        t.rules.push(rule("r1", RuleKind::Defeasible, &[], "p"));
        t.rules.push(rule("r2", RuleKind::Defeasible, &[], "q"));
        t.sup.insert((Label::new("r1"), Label::new("r2")));
        assert!(t.validate().is_empty());
    }

    #[test]
    fn tag_classification_is_total_and_disjoint() {
        for d in ProofTag::ALL {
            assert_ne!(d.team(), d.individual());
            assert_ne!(d.blocking(), d.propagating());
        }
        assert!(ProofTag::Pa.team() && ProofTag::Pa.blocking());
        assert!(ProofTag::De.team() && ProofTag::De.propagating());
        assert!(ProofTag::PaStar.individual() && ProofTag::PaStar.blocking());
        assert!(ProofTag::DeStar.individual() && ProofTag::DeStar.propagating());
    }

    #[test]
    fn symbol_count_counts_tags_and_fail_wrappers() {
        let mut t = DefeasibleTheory::new();
        t.facts.insert(lit("p"));
        t.rules.push(Rule {
            label: Label::new("r1"),
            kind: RuleKind::Defeasible,
            body: vec![
                BodyExpr { failed: true, tag: Tag::Proof(ProofTag::De), literal: lit("p") },
                BodyExpr::plain(lit("q")),
            ],
            head: lit("r"),
        });
        t.sup.insert((Label::new("r1"), Label::new("r1")));
        // 1 fact + (label, head) + (1+1+1) + (1) + 2 sup symbols.
        assert_eq!(t.symbol_count(), 1 + 2 + 3 + 1 + 2);
    }

    proptest! {
        #[test]
        fn complement_is_an_involution(name in "[a-z][a-z0-9_]{0,8}", positive: bool) {
            let q = Literal::new(Symbol::intern(&name), positive);
            prop_assert_eq!(q.complement().complement(), q);
            prop_assert_ne!(q.complement(), q);
        }
    }
}
