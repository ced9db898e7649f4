//! Pseudo-random theory generation and shrinking for property tests.
//!
//! [`generate`] produces a valid theory deterministically from a seed, with
//! knobs for the atom pool, rule count, body width, superiority density, and
//! annotation style. Superiority pairs are drawn only between rules with
//! complementary heads — the engine never consults priorities elsewhere, so
//! anything wider would be dead weight — and are oriented along a random
//! total order over the rules, which makes the relation acyclic by
//! construction.
//!
//! [`shrink`] enumerates strictly smaller valid variants of a theory (drop a
//! rule, fact, priority pair, or body element; erase a fail wrapper or an
//! annotation), and [`shrink_to_minimal`] drives it to a local minimum while
//! a predicate keeps holding, which is how failing property counterexamples
//! are reduced to something readable.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::theory::{
    BodyExpr, DefeasibleTheory, Label, Literal, ProofTag, Rule, RuleKind, Symbol, Tag,
};

/// How body elements of generated rules are annotated.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AnnotationMode {
    /// Plain bodies: every tag `free`, no fail-expressions.
    None,
    /// Tags drawn uniformly from {free, pa, pa*, de, de*}; no fails.
    TagsOnly,
    /// Tags as above, plus a fail wrapper with probability 0.15. Failed
    /// premises always carry an explicit proof tag: a `fail` over a
    /// context-dependent (`free`) premise can invert relative strength
    /// between regimes, which would defeat the corpus's purpose of
    /// exercising the inclusion chains (see
    /// [`crate::conclusions::check_inclusions`]).
    TagsAndFail,
}

/// Size and shape controls for [`generate`]. Ratios are probabilities in
/// [0, 1]; counts may be zero.
#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    pub seed: u64,
    /// Size of the atom pool (`a0`, `a1`, ...).
    pub atoms: usize,
    pub rules: usize,
    /// Bodies draw a length uniformly from `0..=max_body`.
    pub max_body: usize,
    /// Upper bound on superiority pairs; fewer are emitted when the rules
    /// offer fewer complementary-head pairs.
    pub sup_pairs: usize,
    pub annotation_mode: AnnotationMode,
    /// Chance that each atom contributes a fact (of random polarity).
    pub fact_probability: f64,
    /// Chance that a rule is strict; defeaters are drawn from the remainder.
    pub strict_ratio: f64,
    pub defeater_ratio: f64,
}

fn random_literal(rng: &mut ChaCha8Rng, pool: &[Symbol]) -> Literal {
    Literal::new(*pool.choose(rng).expect("non-empty atom pool"), rng.gen_bool(0.5))
}

fn random_tag(rng: &mut ChaCha8Rng) -> Tag {
    match rng.gen_range(0..5) {
        0 => Tag::Free,
        1 => Tag::Proof(ProofTag::Pa),
        2 => Tag::Proof(ProofTag::PaStar),
        3 => Tag::Proof(ProofTag::De),
        _ => Tag::Proof(ProofTag::DeStar),
    }
}

fn random_proof_tag(rng: &mut ChaCha8Rng) -> Tag {
    Tag::Proof(*ProofTag::ALL.choose(rng).expect("non-empty"))
}

/// Generates a valid theory, deterministically in `c.seed`.
pub fn generate(c: &GenConfig) -> DefeasibleTheory {
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut t = DefeasibleTheory::new();
    if c.atoms == 0 {
        return t;
    }
    let pool: Vec<Symbol> =
        (0..c.atoms).map(|i| Symbol::intern(&format!("a{i}"))).collect();

    for &atom in &pool {
        if rng.gen_bool(c.fact_probability) {
            t.facts.insert(Literal::new(atom, rng.gen_bool(0.5)));
        }
    }

    for i in 0..c.rules {
        let roll: f64 = rng.gen();
        let kind = if roll < c.strict_ratio {
            RuleKind::Strict
        } else if roll < c.strict_ratio + c.defeater_ratio {
            RuleKind::Defeater
        } else {
            RuleKind::Defeasible
        };
        let len = rng.gen_range(0..=c.max_body);
        let body = (0..len)
            .map(|_| {
                let literal = random_literal(&mut rng, &pool);
                // Strict bodies stay plain whatever the mode: annotations
                // and fails are rejected there by validation.
                if kind == RuleKind::Strict {
                    return BodyExpr::plain(literal);
                }
                let failed = c.annotation_mode == AnnotationMode::TagsAndFail
                    && rng.gen_bool(0.15);
                let tag = match (c.annotation_mode, failed) {
                    (AnnotationMode::None, _) => Tag::Free,
                    (_, true) => random_proof_tag(&mut rng),
                    (_, false) => random_tag(&mut rng),
                };
                BodyExpr { failed, tag, literal }
            })
            .collect();
        t.rules.push(Rule {
            label: Label::new(&format!("r{i}")),
            kind,
            body,
            head: random_literal(&mut rng, &pool),
        });
    }

    // Candidate priority pairs: unordered pairs of rules whose heads
    // conflict. A random permutation of the rules serves as the total order
    // that orients each chosen pair, so no cycle can arise.
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for i in 0..t.rules.len() {
        for j in i + 1..t.rules.len() {
            if t.rules[i].head == t.rules[j].head.complement() {
                candidates.push((i, j));
            }
        }
    }
    candidates.shuffle(&mut rng);
    let mut rank: Vec<usize> = (0..t.rules.len()).collect();
    rank.shuffle(&mut rng);
    for &(i, j) in candidates.iter().take(c.sup_pairs) {
        let (hi, lo) = if rank[i] < rank[j] { (i, j) } else { (j, i) };
        t.sup.insert((t.rules[hi].label, t.rules[lo].label));
    }

    debug_assert!(t.validate().is_empty());
    t
}

/// Generates a plain theory whose [`DefeasibleTheory::symbol_count`] comes
/// out at (or just past) `size`, deterministically in `seed`: the atom pool
/// scales with the square root of the target and the rule count is found by
/// doubling-plus-bisection. Used for size-scaling measurements.
pub fn generate_sized(size: usize, seed: u64) -> DefeasibleTheory {
    let base = GenConfig {
        seed,
        atoms: ((size as f64).sqrt().ceil() as usize).max(4),
        rules: 0,
        max_body: 3,
        sup_pairs: size / 20,
        annotation_mode: AnnotationMode::None,
        fact_probability: 0.1,
        strict_ratio: 0.15,
        defeater_ratio: 0.1,
    };
    let count = |rules: usize| generate(&GenConfig { rules, ..base }).symbol_count();
    let mut hi = 1;
    while count(hi) < size && hi < 4 * size.max(1) {
        hi *= 2;
    }
    let (mut lo, mut hi) = (0, hi);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if count(mid) < size {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    generate(&GenConfig { rules: lo, ..base })
}

/// Rewrites every annotated body element to carry `tag` instead, leaving
/// `free` ones (and everything else) untouched. With input from
/// [`generate`] under [`AnnotationMode::None`] plus a sprinkle applied here,
/// the result is annotated only with {free, `tag`} — the fragment whose
/// conclusions under context `tag` must agree with the plain theory's.
pub fn restrict_tags(t: &DefeasibleTheory, tag: ProofTag, seed: u64) -> DefeasibleTheory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = t.clone();
    for rule in &mut out.rules {
        if rule.kind == RuleKind::Strict {
            continue;
        }
        for expr in &mut rule.body {
            expr.tag = if rng.gen_bool(0.5) { Tag::Proof(tag) } else { Tag::Free };
        }
    }
    out
}

/// Yields every one-step reduction of `t`: drop a rule (with its priority
/// pairs), a fact, a priority pair, or a body element; unwrap a fail; turn
/// an annotation back into `free`. Candidates come largest-cut-first, are
/// all valid, and are all strictly smaller by symbol count.
pub fn shrink(t: &DefeasibleTheory) -> Vec<DefeasibleTheory> {
    let mut out = Vec::new();

    for i in 0..t.rules.len() {
        let mut c = t.clone();
        let label = c.rules.remove(i).label;
        c.sup.retain(|&(a, b)| a != label && b != label);
        out.push(c);
    }
    for fact in &t.facts {
        let mut c = t.clone();
        c.facts.remove(fact);
        out.push(c);
    }
    for pair in &t.sup {
        let mut c = t.clone();
        c.sup.remove(pair);
        out.push(c);
    }
    for i in 0..t.rules.len() {
        for j in 0..t.rules[i].body.len() {
            let mut c = t.clone();
            c.rules[i].body.remove(j);
            out.push(c);
            if t.rules[i].body[j].failed {
                let mut c = t.clone();
                c.rules[i].body[j].failed = false;
                out.push(c);
            }
            if !t.rules[i].body[j].tag.is_free() {
                let mut c = t.clone();
                c.rules[i].body[j].tag = Tag::Free;
                out.push(c);
            }
        }
    }

    debug_assert!(out.iter().all(|c| c.validate().is_empty()));
    debug_assert!(out.iter().all(|c| c.symbol_count() < t.symbol_count()));
    out
}

/// Greedily applies [`shrink`] while `keep` holds, returning a theory that
/// still satisfies `keep` but none of whose one-step reductions do.
pub fn shrink_to_minimal(
    t: &DefeasibleTheory,
    keep: impl Fn(&DefeasibleTheory) -> bool,
) -> DefeasibleTheory {
    let mut cur = t.clone();
    loop {
        match shrink(&cur).into_iter().find(&keep) {
            Some(smaller) => cur = smaller,
            None => return cur,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(seed: u64) -> GenConfig {
        GenConfig {
            seed,
            atoms: 8,
            rules: 14,
            max_body: 3,
            sup_pairs: 5,
            annotation_mode: AnnotationMode::TagsAndFail,
            fact_probability: 0.2,
            strict_ratio: 0.2,
            defeater_ratio: 0.15,
        }
    }

    #[test]
    fn same_seed_same_theory() {
        assert_eq!(generate(&config(42)), generate(&config(42)));
        assert_ne!(generate(&config(42)), generate(&config(43)));
    }

    #[test]
    fn generated_theories_are_valid() {
        for seed in 0..200 {
            let t = generate(&config(seed));
            assert!(t.validate().is_empty(), "seed {seed}: {:?}", t.validate());
        }
    }

    #[test]
    fn priorities_connect_conflicting_heads() {
        for seed in 0..50 {
            let t = generate(&config(seed));
            for &(a, b) in &t.sup {
                let (ra, rb) = (t.rule(a).unwrap(), t.rule(b).unwrap());
                assert_eq!(ra.head, rb.head.complement(), "seed {seed}: {a} > {b}");
            }
        }
    }

    #[test]
    fn no_rules_means_facts_only() {
        let t = generate(&GenConfig {
            rules: 0,
            atoms: 3,
            fact_probability: 1.0,
            ..config(7)
        });
        assert_eq!(t.facts.len(), 3);
        assert!(t.rules.is_empty());
        assert!(t.sup.is_empty());
    }

    #[test]
    fn failed_premises_always_carry_explicit_tags() {
        let mut fails = 0;
        for seed in 0..100 {
            let t = generate(&config(seed));
            for rule in &t.rules {
                for expr in &rule.body {
                    if expr.failed {
                        fails += 1;
                        assert!(!expr.tag.is_free(), "seed {seed}: {rule}");
                    }
                }
            }
        }
        assert!(fails > 100, "fail wrappers too rare to matter: {fails}");
    }

    #[test]
    fn mode_none_yields_plain_theories() {
        for seed in 0..50 {
            let t = generate(&GenConfig {
                annotation_mode: AnnotationMode::None,
                ..config(seed)
            });
            assert!(t.is_plain(), "seed {seed}");
        }
    }

    #[test]
    fn restrict_tags_uses_only_free_and_the_given_tag() {
        let plain = generate(&GenConfig {
            annotation_mode: AnnotationMode::None,
            ..config(11)
        });
        let t = restrict_tags(&plain, ProofTag::DeStar, 99);
        assert!(t.validate().is_empty());
        assert_eq!(t.facts, plain.facts);
        assert_eq!(t.sup, plain.sup);
        let mut annotated = 0;
        for (rule, orig) in t.rules.iter().zip(&plain.rules) {
            assert_eq!(rule.head, orig.head);
            for (expr, oexpr) in rule.body.iter().zip(&orig.body) {
                assert_eq!(expr.literal, oexpr.literal);
                match expr.tag {
                    Tag::Free => {}
                    Tag::Proof(d) => {
                        assert_eq!(d, ProofTag::DeStar);
                        annotated += 1;
                    }
                }
            }
        }
        assert!(annotated > 0, "sprinkle left everything free");
    }

    #[test]
    fn sized_generation_lands_near_the_target() {
        for (size, seed) in [(100, 1), (400, 2), (1000, 3)] {
            let t = generate_sized(size, seed);
            assert!(t.validate().is_empty());
            let got = t.symbol_count();
            assert!(
                got >= size && got <= size + size / 5 + 20,
                "target {size}, got {got}"
            );
            assert_eq!(t, generate_sized(size, seed));
        }
    }

    #[test]
    fn shrink_candidates_are_smaller_and_valid() {
        for seed in [3, 17, 29] {
            let t = generate(&config(seed));
            let candidates = shrink(&t);
            assert!(!candidates.is_empty());
            for c in &candidates {
                assert!(c.symbol_count() < t.symbol_count());
                assert!(c.validate().is_empty());
            }
        }
    }

    #[test]
    fn single_fact_theory_shrinks_to_empty() {
        let mut t = DefeasibleTheory::new();
        t.facts.insert(Literal::positive("p"));
        let candidates = shrink(&t);
        assert_eq!(candidates.len(), 1);
        assert_eq!(candidates[0], DefeasibleTheory::new());
        assert!(shrink(&candidates[0]).is_empty());
    }

    #[test]
    fn dropping_a_rule_drops_its_priorities() {
        let t = crate::syntax::parse_theory("r1: => p. r2: => ~p. r1 > r2.").unwrap();
        let without_r1 = &shrink(&t)[0];
        assert_eq!(without_r1.rules.len(), 1);
        assert!(without_r1.sup.is_empty());
    }

    #[test]
    fn minimization_reaches_a_local_minimum() {
        let t = generate(&config(23));
        let keep = |t: &DefeasibleTheory| t.rules.iter().any(|r| r.body.len() >= 2);
        assert!(keep(&t), "fixture needs a wide-bodied rule");
        let min = shrink_to_minimal(&t, keep);
        assert!(keep(&min));
        assert!(shrink(&min).iter().all(|c| !keep(c)));
        // Exactly one rule with exactly two plain body elements survives.
        assert_eq!(min.rules.len(), 1);
        assert_eq!(min.rules[0].body.len(), 2);
        assert!(min.facts.is_empty() && min.sup.is_empty());
    }
}
