//! Three-valued evaluation of ground normal logic programs.
//!
//! An interpretation assigns each atom `true`, `false`, or `undefined`.
//! [`fitting_step`] is the one-step consequence operator: an atom becomes
//! true when some clause for it has all positive body atoms true and all
//! negative ones false, and false when *every* clause for it is already
//! refuted (some positive body atom false or negative one true) — in
//! particular, atoms with no clauses are false. The operator is monotone in
//! the information order, so iterating it from the all-undefined
//! interpretation climbs to a least fixpoint; [`kunen_fixpoint`] computes
//! that fixpoint with semi-naive evaluation (only newly decided atoms are
//! propagated, through per-clause counters), reaching it in at most one
//! round per atom.
//!
//! [`wellfounded_fixpoint`] computes the well-founded model by the
//! alternating fixpoint: `gamma(S)` is the minimal model of the program
//! with negative bodies pre-evaluated against `S`; `gamma²` is monotone,
//! its least fixpoint is the set of well-founded-true atoms, and the
//! complement of `gamma` of that fixpoint is the false set. Every
//! Kunen-decided atom is decided identically there, never the other way
//! around — the well-founded model only adds decisions (it also falsifies
//! unfounded positive loops the fixpoint above leaves undefined).

use crate::ground::{AtomId, GroundClause, GroundProgram};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TruthValue {
    True,
    False,
    Undefined,
}

/// A consistent three-valued assignment, dense over a program's atom ids.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Interpretation {
    values: Vec<TruthValue>,
}

impl Interpretation {
    pub fn all_undefined(atom_count: usize) -> Interpretation {
        Interpretation { values: vec![TruthValue::Undefined; atom_count] }
    }

    pub fn value(&self, atom: AtomId) -> TruthValue {
        self.values[atom as usize]
    }

    pub fn atom_count(&self) -> usize {
        self.values.len()
    }

    /// Set an atom's value. An atom is decided at most once; deciding it
    /// twice (in particular with conflicting values) is a bug in the
    /// caller, so this asserts rather than overwrites.
    fn decide(&mut self, atom: AtomId, value: TruthValue) {
        let slot = &mut self.values[atom as usize];
        assert!(
            *slot == TruthValue::Undefined,
            "atom {atom} decided twice: {slot:?} then {value:?}"
        );
        *slot = value;
    }

    pub fn decided_count(&self) -> usize {
        self.values.iter().filter(|v| **v != TruthValue::Undefined).count()
    }

    /// Information order: everything decided here is decided identically in
    /// `other`.
    pub fn leq(&self, other: &Interpretation) -> bool {
        self.values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| *a == TruthValue::Undefined || a == b)
    }
}

fn clause_status(clause: &GroundClause, i: &Interpretation) -> TruthValue {
    let mut fired = true;
    for &a in &clause.pos {
        match i.value(a) {
            TruthValue::False => return TruthValue::False,
            TruthValue::Undefined => fired = false,
            TruthValue::True => {}
        }
    }
    for &a in &clause.neg {
        match i.value(a) {
            TruthValue::True => return TruthValue::False,
            TruthValue::Undefined => fired = false,
            TruthValue::False => {}
        }
    }
    if fired {
        TruthValue::True
    } else {
        TruthValue::Undefined
    }
}

/// One application of the three-valued consequence operator. Pure and
/// naive: used as the reference definition and for monotonicity checks;
/// the fixpoint computations below use incremental equivalents.
pub fn fitting_step<A: Copy + Eq + std::hash::Hash>(
    program: &GroundProgram<A>,
    i: &Interpretation,
) -> Interpretation {
    let mut next = Interpretation::all_undefined(program.atom_count());
    for atom in 0..program.atom_count() as AtomId {
        let mut all_refuted = true;
        let mut some_fired = false;
        for &c in program.clauses_for(atom) {
            match clause_status(&program.clauses()[c as usize], i) {
                TruthValue::True => {
                    some_fired = true;
                    all_refuted = false;
                }
                TruthValue::Undefined => all_refuted = false,
                TruthValue::False => {}
            }
        }
        if some_fired {
            next.values[atom as usize] = TruthValue::True;
        } else if all_refuted {
            next.values[atom as usize] = TruthValue::False;
        }
    }
    next
}

/// A fixpoint together with the number of operator iterations it took.
#[derive(Clone, Debug)]
pub struct Fixpoint {
    pub interpretation: Interpretation,
    pub iterations: usize,
}

/// Least fixpoint of the three-valued consequence operator, computed
/// semi-naively: each round applies only the atoms decided in the previous
/// round to per-clause counters. `iterations` equals the number of naive
/// operator applications needed to reach the fixpoint and is asserted to
/// be at most the atom count.
pub fn kunen_fixpoint<A: Copy + Eq + std::hash::Hash>(program: &GroundProgram<A>) -> Fixpoint {
    kunen_fixpoint_traced(program, |_, _| {})
}

/// [`kunen_fixpoint`] with a trace hook receiving each round number
/// (from 1) and the atoms decided in that round.
pub fn kunen_fixpoint_traced<A: Copy + Eq + std::hash::Hash>(
    program: &GroundProgram<A>,
    mut trace: impl FnMut(usize, &[AtomId]),
) -> Fixpoint {
    let atom_count = program.atom_count();
    let clauses = program.clauses();

    // Occurrence lists, clause counters, and per-atom live-clause counts.
    let mut pos_occ: Vec<Vec<u32>> = vec![Vec::new(); atom_count];
    let mut neg_occ: Vec<Vec<u32>> = vec![Vec::new(); atom_count];
    let mut pending_pos: Vec<u32> = Vec::with_capacity(clauses.len());
    let mut pending_neg: Vec<u32> = Vec::with_capacity(clauses.len());
    let mut refuted: Vec<bool> = vec![false; clauses.len()];
    let mut live_clauses: Vec<u32> = vec![0; atom_count];

    for (ci, c) in clauses.iter().enumerate() {
        pending_pos.push(c.pos.len() as u32);
        pending_neg.push(c.neg.len() as u32);
        live_clauses[c.head as usize] += 1;
        for &a in &c.pos {
            pos_occ[a as usize].push(ci as u32);
        }
        for &a in &c.neg {
            neg_occ[a as usize].push(ci as u32);
        }
    }

    let mut i = Interpretation::all_undefined(atom_count);
    let mut round: Vec<(AtomId, TruthValue)> = Vec::new();

    // Round 1: clause-free atoms are false, body-free clauses fire.
    for atom in 0..atom_count as AtomId {
        if live_clauses[atom as usize] == 0 {
            i.decide(atom, TruthValue::False);
            round.push((atom, TruthValue::False));
        }
    }
    for (ci, c) in clauses.iter().enumerate() {
        if pending_pos[ci] == 0 && pending_neg[ci] == 0 && i.value(c.head) == TruthValue::Undefined
        {
            i.decide(c.head, TruthValue::True);
            round.push((c.head, TruthValue::True));
        }
    }

    let mut iterations = 0;
    let mut flipped: Vec<AtomId> = Vec::new();
    while !round.is_empty() {
        iterations += 1;
        flipped.clear();
        flipped.extend(round.iter().map(|(a, _)| *a));
        trace(iterations, &flipped);

        let mut next: Vec<(AtomId, TruthValue)> = Vec::new();
        let refute = |ci: u32,
                          refuted: &mut Vec<bool>,
                          live_clauses: &mut Vec<u32>,
                          i: &mut Interpretation,
                          next: &mut Vec<(AtomId, TruthValue)>| {
            if refuted[ci as usize] {
                return;
            }
            refuted[ci as usize] = true;
            let head = clauses[ci as usize].head;
            live_clauses[head as usize] -= 1;
            if live_clauses[head as usize] == 0 && i.value(head) == TruthValue::Undefined {
                i.decide(head, TruthValue::False);
                next.push((head, TruthValue::False));
            }
        };
        for &(atom, value) in &round {
            match value {
                TruthValue::True => {
                    for &ci in &pos_occ[atom as usize] {
                        pending_pos[ci as usize] -= 1;
                        let c = &clauses[ci as usize];
                        if pending_pos[ci as usize] == 0
                            && pending_neg[ci as usize] == 0
                            && !refuted[ci as usize]
                            && i.value(c.head) == TruthValue::Undefined
                        {
                            i.decide(c.head, TruthValue::True);
                            next.push((c.head, TruthValue::True));
                        }
                    }
                    for &ci in &neg_occ[atom as usize] {
                        refute(ci, &mut refuted, &mut live_clauses, &mut i, &mut next);
                    }
                }
                TruthValue::False => {
                    for &ci in &pos_occ[atom as usize] {
                        refute(ci, &mut refuted, &mut live_clauses, &mut i, &mut next);
                    }
                    for &ci in &neg_occ[atom as usize] {
                        pending_neg[ci as usize] -= 1;
                        let c = &clauses[ci as usize];
                        if pending_pos[ci as usize] == 0
                            && pending_neg[ci as usize] == 0
                            && !refuted[ci as usize]
                            && i.value(c.head) == TruthValue::Undefined
                        {
                            i.decide(c.head, TruthValue::True);
                            next.push((c.head, TruthValue::True));
                        }
                    }
                }
                TruthValue::Undefined => unreachable!(),
            }
        }
        round = next;
    }

    assert!(
        iterations <= atom_count.max(1),
        "fixpoint took {iterations} rounds for {atom_count} atoms"
    );
    Fixpoint { interpretation: i, iterations }
}

/// Minimal model of the program with negative bodies evaluated against the
/// assumed true set: a clause survives when none of its negative atoms is
/// assumed, after which truth propagates through positive bodies only.
fn gamma<A: Copy + Eq + std::hash::Hash>(
    program: &GroundProgram<A>,
    assumed: &[bool],
) -> Vec<bool> {
    let clauses = program.clauses();
    let mut pending_pos: Vec<u32> = Vec::with_capacity(clauses.len());
    let mut pos_occ: Vec<Vec<u32>> = vec![Vec::new(); program.atom_count()];
    let mut truth = vec![false; program.atom_count()];
    let mut queue: Vec<AtomId> = Vec::new();

    for (ci, c) in clauses.iter().enumerate() {
        if c.neg.iter().any(|&a| assumed[a as usize]) {
            pending_pos.push(u32::MAX); // blocked for good
            continue;
        }
        pending_pos.push(c.pos.len() as u32);
        if c.pos.is_empty() {
            if !truth[c.head as usize] {
                truth[c.head as usize] = true;
                queue.push(c.head);
            }
        } else {
            for &a in &c.pos {
                pos_occ[a as usize].push(ci as u32);
            }
        }
    }

    while let Some(atom) = queue.pop() {
        for &ci in &pos_occ[atom as usize] {
            pending_pos[ci as usize] -= 1;
            if pending_pos[ci as usize] == 0 {
                let head = clauses[ci as usize].head;
                if !truth[head as usize] {
                    truth[head as usize] = true;
                    queue.push(head);
                }
            }
        }
    }
    truth
}

/// The well-founded model via the alternating fixpoint. `iterations`
/// counts the outer `gamma²` rounds.
pub fn wellfounded_fixpoint<A: Copy + Eq + std::hash::Hash>(
    program: &GroundProgram<A>,
) -> Fixpoint {
    let mut true_set = vec![false; program.atom_count()];
    let mut iterations = 0;
    loop {
        iterations += 1;
        let upper = gamma(program, &true_set);
        let next = gamma(program, &upper);
        if next == true_set {
            let mut i = Interpretation::all_undefined(program.atom_count());
            for (atom, value) in i.values.iter_mut().enumerate() {
                if true_set[atom] {
                    *value = TruthValue::True;
                } else if !upper[atom] {
                    *value = TruthValue::False;
                }
            }
            return Fixpoint { interpretation: i, iterations };
        }
        true_set = next;
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Semantics {
    Kunen,
    WellFounded,
}

/// Evaluate a program under the chosen semantics.
pub fn evaluate<A: Copy + Eq + std::hash::Hash>(
    program: &GroundProgram<A>,
    semantics: Semantics,
) -> Fixpoint {
    match semantics {
        Semantics::Kunen => kunen_fixpoint(program),
        Semantics::WellFounded => wellfounded_fixpoint(program),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// A tiny program builder over `u32` pseudo-atoms for direct tests.
    fn program(atom_count: u32, clauses: &[(u32, &[u32], &[u32])]) -> GroundProgram<u32> {
        let mut p = GroundProgram::<u32>::new(Vec::new());
        for a in 0..atom_count {
            p.add_atom(a);
        }
        for &(head, pos, neg) in clauses {
            p.add_clause(head, pos.to_vec(), neg.to_vec());
        }
        p
    }

    fn naive_fixpoint<A: Copy + Eq + std::hash::Hash>(p: &GroundProgram<A>) -> (Interpretation, usize) {
        let mut i = Interpretation::all_undefined(p.atom_count());
        let mut n = 0;
        loop {
            let next = fitting_step(p, &i);
            if next == i {
                return (i, n);
            }
            i = next;
            n += 1;
        }
    }

    #[test]
    fn facts_fire_and_clause_free_atoms_are_false() {
        // 0. ; 1 :- 0. ; atom 2 has no clauses.
        let p = program(3, &[(0, &[], &[]), (1, &[0], &[])]);
        let i = Interpretation::all_undefined(3);
        let one = fitting_step(&p, &i);
        assert_eq!(one.value(0), TruthValue::True);
        assert_eq!(one.value(1), TruthValue::Undefined);
        assert_eq!(one.value(2), TruthValue::False);
        let two = fitting_step(&p, &one);
        assert_eq!(two.value(1), TruthValue::True);
    }

    #[test]
    fn falsity_needs_all_clauses_refuted() {
        // 0 :- 1. ; 0 :- not 2. ; 2. ; atom 1 clause-free.
        let p = program(3, &[(0, &[1], &[]), (0, &[], &[2]), (2, &[], &[])]);
        let fx = kunen_fixpoint(&p);
        assert_eq!(fx.interpretation.value(1), TruthValue::False);
        assert_eq!(fx.interpretation.value(2), TruthValue::True);
        // Both clauses for 0 are refuted: pos 1 false, neg 2 true.
        assert_eq!(fx.interpretation.value(0), TruthValue::False);
    }

    #[test]
    fn negative_self_loop_stays_undefined() {
        // 0 :- not 0.
        let p = program(1, &[(0, &[], &[0])]);
        let fx = kunen_fixpoint(&p);
        assert_eq!(fx.interpretation.value(0), TruthValue::Undefined);
        // ... under both semantics.
        let wf = wellfounded_fixpoint(&p);
        assert_eq!(wf.interpretation.value(0), TruthValue::Undefined);
    }

    #[test]
    fn positive_loop_is_undefined_under_kunen_but_false_under_wf() {
        // 0 :- 1. ; 1 :- 0.
        let p = program(2, &[(0, &[1], &[]), (1, &[0], &[])]);
        let kunen = kunen_fixpoint(&p);
        assert_eq!(kunen.interpretation.value(0), TruthValue::Undefined);
        assert_eq!(kunen.interpretation.value(1), TruthValue::Undefined);
        let wf = wellfounded_fixpoint(&p);
        assert_eq!(wf.interpretation.value(0), TruthValue::False);
        assert_eq!(wf.interpretation.value(1), TruthValue::False);
        assert!(kunen.interpretation.leq(&wf.interpretation));
    }

    #[test]
    fn even_negation_cycle_is_undefined_under_both() {
        // 0 :- not 1. ; 1 :- not 0.
        let p = program(2, &[(0, &[], &[1]), (1, &[], &[0])]);
        for fx in [kunen_fixpoint(&p), wellfounded_fixpoint(&p)] {
            assert_eq!(fx.interpretation.value(0), TruthValue::Undefined);
            assert_eq!(fx.interpretation.value(1), TruthValue::Undefined);
        }
    }

    #[test]
    fn iteration_count_matches_naive_evaluation() {
        // A chain 0 <- 1 <- ... <- 9 driven from a fact takes one round
        // per link.
        let clauses: Vec<(u32, Vec<u32>, Vec<u32>)> = (1..10u32)
            .map(|a| (a, vec![a - 1], vec![]))
            .chain(std::iter::once((0, vec![], vec![])))
            .collect();
        let refs: Vec<(u32, &[u32], &[u32])> =
            clauses.iter().map(|(h, p, n)| (*h, p.as_slice(), n.as_slice())).collect();
        let p = program(10, &refs);
        let fx = kunen_fixpoint(&p);
        let (naive, naive_rounds) = naive_fixpoint(&p);
        assert_eq!(fx.interpretation, naive);
        assert_eq!(fx.iterations, naive_rounds);
        assert_eq!(fx.iterations, 10);
        assert!(fx.iterations <= p.atom_count());
    }

    #[test]
    fn trace_reports_each_round() {
        let p = program(3, &[(0, &[], &[]), (1, &[0], &[]), (2, &[1], &[])]);
        let mut rounds = Vec::new();
        let fx = kunen_fixpoint_traced(&p, |n, atoms| rounds.push((n, atoms.to_vec())));
        assert_eq!(fx.iterations, 3);
        assert_eq!(rounds, vec![(1, vec![0]), (2, vec![1]), (3, vec![2])]);
    }

    fn random_program(rng: &mut StdRng, atoms: u32, clause_count: usize) -> GroundProgram<u32> {
        let mut p = GroundProgram::<u32>::new(Vec::new());
        for a in 0..atoms {
            p.add_atom(a);
        }
        for _ in 0..clause_count {
            let head = rng.gen_range(0..atoms);
            let n_pos = rng.gen_range(0..3);
            let n_neg = rng.gen_range(0..3);
            let pos: Vec<u32> = (0..n_pos).map(|_| rng.gen_range(0..atoms)).collect();
            let neg: Vec<u32> = (0..n_neg).map(|_| rng.gen_range(0..atoms)).collect();
            p.add_clause(head, pos, neg);
        }
        p
    }

    #[test]
    fn seminaive_fixpoint_equals_naive_iteration_on_random_programs() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..300 {
            let p = random_program(&mut rng, 12, 20);
            let fx = kunen_fixpoint(&p);
            let (naive, rounds) = naive_fixpoint(&p);
            assert_eq!(fx.interpretation, naive);
            assert_eq!(fx.iterations, rounds);
        }
    }

    #[test]
    fn fitting_step_is_monotone_in_the_information_order() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..300 {
            let p = random_program(&mut rng, 10, 16);
            // Build i <= j by eroding a fixpoint-bound interpretation.
            let j = kunen_fixpoint(&p).interpretation;
            let mut i = j.clone();
            for v in i.values.iter_mut() {
                if rng.gen_bool(0.4) {
                    *v = TruthValue::Undefined;
                }
            }
            assert!(i.leq(&j));
            assert!(fitting_step(&p, &i).leq(&fitting_step(&p, &j)));
        }
    }

    #[test]
    fn wellfounded_extends_kunen_on_random_programs() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..300 {
            let p = random_program(&mut rng, 12, 20);
            let kunen = kunen_fixpoint(&p).interpretation;
            let wf = wellfounded_fixpoint(&p).interpretation;
            assert!(kunen.leq(&wf), "kunen decisions must survive in the well-founded model");
        }
    }
}
