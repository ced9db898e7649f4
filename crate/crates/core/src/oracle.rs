//! Proof-theoretic reference implementation for plain theories.
//!
//! For each of the four proof tags this module derives the positive and
//! negative conclusions directly from the inference conditions of the
//! corresponding logic — "there is a supportive rule whose body is proved
//! and every attacker fails or is defeated", and the strong-negation dual
//! — by saturating them to a fixpoint. The conditions only ever consult
//! conclusions already derived (never their absence), so saturation is
//! monotone and the result is independent of the work order; a test
//! drives the loop in two opposite literal orders to keep that honest.
//!
//! This is deliberately naive code, structured clause-for-clause after the
//! inference conditions, and shares nothing with the grounder or the
//! fixpoint engines beyond the theory types. [`crosscheck`] runs both this
//! oracle and the engine pipeline over one theory and reports any verdict
//! on which they disagree; agreement over large random batches is the
//! acceptance evidence that the tagged translation conservatively extends
//! the four plain logics.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::conclusions::{self, ConclusionTag, Sign};
use crate::engine::Semantics;
use crate::ground::AnnotatedInputError;
use crate::theory::{DefeasibleTheory, Label, Literal, ProofTag, Rule};

/// Positive and negative conclusions for one notion of provability.
/// Coherence (never both signs on one literal) is asserted on insertion.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TaggedSet {
    pub plus: BTreeSet<Literal>,
    pub minus: BTreeSet<Literal>,
}

impl TaggedSet {
    fn insert_plus(&mut self, q: Literal) -> bool {
        assert!(!self.minus.contains(&q), "coherence violated: +/- {q}");
        self.plus.insert(q)
    }

    fn insert_minus(&mut self, q: Literal) -> bool {
        assert!(!self.plus.contains(&q), "coherence violated: +/- {q}");
        self.minus.insert(q)
    }

    pub fn sign(&self, q: Literal) -> Option<Sign> {
        if self.plus.contains(&q) {
            Some(Sign::Plus)
        } else if self.minus.contains(&q) {
            Some(Sign::Minus)
        } else {
            None
        }
    }
}

/// Everything one logic derives: definite provability, defeasible
/// provability under its tag, and — for the ambiguity-propagating logics,
/// which are the only ones defining it — support.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OracleConclusions {
    pub definite: TaggedSet,
    pub defeasible: TaggedSet,
    pub support: Option<TaggedSet>,
}

struct Index<'a> {
    literals: Vec<Literal>,
    supportive: HashMap<Literal, Vec<&'a Rule>>,
    all: HashMap<Literal, Vec<&'a Rule>>,
    strict: HashMap<Literal, Vec<&'a Rule>>,
    sup: HashSet<(Label, Label)>,
}

impl<'a> Index<'a> {
    fn build(t: &'a DefeasibleTheory) -> Index<'a> {
        let mut supportive: HashMap<Literal, Vec<&Rule>> = HashMap::new();
        let mut all: HashMap<Literal, Vec<&Rule>> = HashMap::new();
        let mut strict: HashMap<Literal, Vec<&Rule>> = HashMap::new();
        for r in &t.rules {
            all.entry(r.head).or_default().push(r);
            if r.kind.supportive() {
                supportive.entry(r.head).or_default().push(r);
            }
            if r.kind == crate::theory::RuleKind::Strict {
                strict.entry(r.head).or_default().push(r);
            }
        }
        Index {
            literals: t.literals().into_iter().collect(),
            supportive,
            all,
            strict,
            sup: t.sup.iter().copied().collect(),
        }
    }

    fn supportive(&self, q: Literal) -> &[&'a Rule] {
        self.supportive.get(&q).map(Vec::as_slice).unwrap_or(&[])
    }

    fn attackers(&self, q: Literal) -> &[&'a Rule] {
        self.all.get(&q.complement()).map(Vec::as_slice).unwrap_or(&[])
    }

    fn strict(&self, q: Literal) -> &[&'a Rule] {
        self.strict.get(&q).map(Vec::as_slice).unwrap_or(&[])
    }

    fn superior(&self, a: Label, b: Label) -> bool {
        self.sup.contains(&(a, b))
    }
}

fn body_all(r: &Rule, proved: &BTreeSet<Literal>) -> bool {
    r.body.iter().all(|e| proved.contains(&e.literal))
}

fn body_some(r: &Rule, refuted: &BTreeSet<Literal>) -> bool {
    r.body.iter().any(|e| refuted.contains(&e.literal))
}

/// Definite provability: facts plus strict-rule closure, with the
/// strong-negation dual for the negative side.
pub fn derive_definite(t: &DefeasibleTheory) -> TaggedSet {
    let index = Index::build(t);
    let mut definite = TaggedSet::default();
    let mut changed = true;
    while changed {
        changed = false;
        for &q in &index.literals {
            if !definite.plus.contains(&q)
                && (t.facts.contains(&q)
                    || index.strict(q).iter().any(|r| body_all(r, &definite.plus)))
            {
                definite.insert_plus(q);
                changed = true;
            }
            if !definite.minus.contains(&q)
                && !t.facts.contains(&q)
                && index.strict(q).iter().all(|r| body_some(r, &definite.minus))
            {
                definite.insert_minus(q);
                changed = true;
            }
        }
    }
    definite
}

/// Saturate the inference conditions of the logic for tag `d` over a plain
/// theory. `reverse_order` only changes the literal work order, for the
/// order-independence test.
fn derive_in_order(
    t: &DefeasibleTheory,
    d: ProofTag,
    reverse_order: bool,
) -> Result<OracleConclusions, AnnotatedInputError> {
    if !t.is_plain() {
        return Err(AnnotatedInputError);
    }
    let index = Index::build(t);
    let mut literals = index.literals.clone();
    if reverse_order {
        literals.reverse();
    }
    let definite = derive_definite(t);

    let mut main = TaggedSet::default();
    // The blocking logics never mention support; leave it out entirely so
    // their conclusions cannot accidentally depend on it.
    let mut support = if d.propagating() { Some(TaggedSet::default()) } else { None };

    let mut changed = true;
    while changed {
        changed = false;
        for &q in &literals {
            let qc = q.complement();

            // Attacker failure inside the positive conditions: blocking
            // logics ask the attacker's body to fail defeasibly,
            // propagating ones ask it to fail even as support. Attacker
            // success inside the negative conditions is the mirror image.
            let attacker_fail_set = support.as_ref().map_or(&main.minus, |s| &s.minus);
            let attacker_fire_set = support.as_ref().map_or(&main.plus, |s| &s.plus);

            let plus = definite.plus.contains(&q)
                || (definite.minus.contains(&qc)
                    && match d.team() {
                        true => {
                            index.supportive(q).iter().any(|r| body_all(r, &main.plus))
                                && index.attackers(q).iter().all(|s| {
                                    body_some(s, attacker_fail_set)
                                        || index.supportive(q).iter().any(|t| {
                                            body_all(t, &main.plus)
                                                && index.superior(t.label, s.label)
                                        })
                                })
                        }
                        false => index.supportive(q).iter().any(|r| {
                            body_all(r, &main.plus)
                                && index.attackers(q).iter().all(|s| {
                                    body_some(s, attacker_fail_set)
                                        || index.superior(r.label, s.label)
                                })
                        }),
                    });

            let minus = definite.minus.contains(&q)
                && match d.team() {
                    true => {
                        index.supportive(q).iter().all(|r| body_some(r, &main.minus))
                            || definite.plus.contains(&qc)
                            || index.attackers(q).iter().any(|s| {
                                body_all(s, attacker_fire_set)
                                    && index.supportive(q).iter().all(|t| {
                                        body_some(t, &main.minus)
                                            || !index.superior(t.label, s.label)
                                    })
                            })
                    }
                    false => index.supportive(q).iter().all(|r| {
                        body_some(r, &main.minus)
                            || definite.plus.contains(&qc)
                            || index.attackers(q).iter().any(|s| {
                                body_all(s, attacker_fire_set)
                                    && !index.superior(r.label, s.label)
                            })
                    }),
                };

            // Support: a supportive rule fires on supported premises and
            // no strictly superior attacker fires defeasibly; dually for
            // the negative side.
            let support_verdicts = support.as_ref().map(|sup| {
                let plus = definite.plus.contains(&q)
                    || index.supportive(q).iter().any(|r| {
                        body_all(r, &sup.plus)
                            && index.attackers(q).iter().all(|s| {
                                body_some(s, &main.minus) || !index.superior(s.label, r.label)
                            })
                    });
                let minus = definite.minus.contains(&q)
                    && index.supportive(q).iter().all(|r| {
                        body_some(r, &sup.minus)
                            || index.attackers(q).iter().any(|s| {
                                body_all(s, &main.plus) && index.superior(s.label, r.label)
                            })
                    });
                (plus, minus)
            });

            if plus && !main.plus.contains(&q) {
                main.insert_plus(q);
                changed = true;
            }
            if minus && !main.minus.contains(&q) {
                main.insert_minus(q);
                changed = true;
            }
            if let (Some(sup), Some((sup_plus, sup_minus))) = (support.as_mut(), support_verdicts)
            {
                if sup_plus && !sup.plus.contains(&q) {
                    sup.insert_plus(q);
                    changed = true;
                }
                if sup_minus && !sup.minus.contains(&q) {
                    sup.insert_minus(q);
                    changed = true;
                }
            }
        }
    }

    Ok(OracleConclusions { definite, defeasible: main, support })
}

/// Derive all conclusions of the logic for tag `d`.
pub fn derive(t: &DefeasibleTheory, d: ProofTag) -> Result<OracleConclusions, AnnotatedInputError> {
    derive_in_order(t, d, false)
}

/// One disagreement between oracle and engine.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Mismatch {
    pub tag: ConclusionTag,
    pub literal: Literal,
    pub engine: Option<Sign>,
    pub oracle: Option<Sign>,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |s: Option<Sign>| match s {
            Some(Sign::Plus) => "+",
            Some(Sign::Minus) => "-",
            None => "?",
        };
        write!(
            f,
            "{} {}: engine {} vs oracle {}",
            self.tag,
            self.literal,
            show(self.engine),
            show(self.oracle)
        )
    }
}

/// Run the full engine pipeline and the oracle over a plain theory and
/// compare every verdict both sides define: definite provability, the four
/// defeasible notions, and support for the two propagating tags.
pub fn crosscheck(t: &DefeasibleTheory) -> Result<Vec<Mismatch>, AnnotatedInputError> {
    if !t.is_plain() {
        return Err(AnnotatedInputError);
    }
    let engine_side = conclusions::solve(t, Semantics::Kunen);
    let mut mismatches = Vec::new();
    let mut compare = |tag: ConclusionTag, q: Literal, oracle: Option<Sign>| {
        let engine = engine_side.verdict(q, tag).unwrap();
        if engine != oracle {
            mismatches.push(Mismatch { tag, literal: q, engine, oracle });
        }
    };

    let definite = derive_definite(t);
    for &q in engine_side.literals() {
        compare(ConclusionTag::Definite, q, definite.sign(q));
    }
    for d in ProofTag::ALL {
        let derived = derive(t, d)?;
        for &q in engine_side.literals() {
            compare(ConclusionTag::Defeasible(d), q, derived.defeasible.sign(q));
            if let Some(support) = &derived.support {
                compare(ConclusionTag::Support(d), q, support.sign(q));
            }
        }
    }
    Ok(mismatches)
}
