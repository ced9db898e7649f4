//! Reasoner for annotated defeasible theories.
//!
//! A theory is a set of facts, labelled rules (strict `->`, defeasible `=>`,
//! defeater `~>`), and an acyclic superiority relation between rules. Body
//! literals of non-strict rules may be annotated with a proof tag choosing
//! the regime under which that premise must be established — `pa` / `de`
//! (team defeat, ambiguity blocking / propagating) or `pa*` / `de*` (their
//! individual-defeat variants) — or wrapped in `fail`, which asks for
//! demonstrable non-provability. Untagged premises follow the proof context
//! in which the rule is used.
//!
//! The pipeline: [`syntax`] parses the surface language into a
//! [`theory::DefeasibleTheory`]; [`ground`] compiles the theory into a
//! propositional program whose atoms track every (context, annotation) pair
//! a premise can be consumed under; [`engine`] evaluates that program under
//! Kunen or well-founded three-valued semantics; [`conclusions`] extracts
//! signed, tagged conclusions, answers queries, and checks the inclusion
//! lattice between regimes. [`oracle`] derives the same conclusions for
//! annotation-free theories directly from the inference conditions, as an
//! independent cross-check of the compilation route, and [`generate`]
//! produces random theories to drive that comparison.
//!
//! ```
//! use adl::conclusions::{solve, ConclusionTag, Sign};
//! use adl::engine::Semantics;
//! use adl::syntax::parse_theory;
//! use adl::theory::{Literal, ProofTag};
//!
//! let t = parse_theory(
//!     "fact evidence.
//!      r1: evidence => guilty.
//!      r2: [de] guilty => convict.
//!      r3: ~evidence ~> ~convict.",
//! )
//! .unwrap();
//! let c = solve(&t, Semantics::Kunen);
//! assert_eq!(
//!     c.verdict(Literal::positive("convict"), ConclusionTag::Defeasible(ProofTag::De)),
//!     Some(Some(Sign::Plus)),
//! );
//! ```

pub mod conclusions;
pub mod engine;
pub mod generate;
pub mod ground;
pub mod oracle;
pub mod syntax;
pub mod theory;
