//! Conclusions: reading tagged verdicts out of a fixpoint, querying single
//! expressions, and the built-in consistency checks.
//!
//! For each literal `q` the reasoner reports nine verdicts: definite
//! provability `D`, defeasible provability under each of the four proof
//! tags, and support under each tag (written `sigma_<tag>`). A verdict is
//! `+` when the corresponding ground atom is true in the fixpoint, `-`
//! when it is false, and undecided when the fixpoint leaves it undefined —
//! under the Kunen semantics that third case is genuinely possible (e.g.
//! self-attacking rules), which is why verdicts are three-valued.
//!
//! [`check_inclusions`] verifies the relative-strength lattice of the nine
//! tags on an extracted conclusion set: definite provability is the
//! strongest positive notion and ambiguity-propagating individual support
//! the weakest, with the mirror-image ordering on negative verdicts. The
//! inclusions hold for every theory whose fail-expressions carry explicit
//! tags (in particular for every fail-free theory), so on such inputs any
//! violation indicates an implementation bug; the checker is run over
//! large random batches in the acceptance suite and by `compare` on the
//! command line. Theories that `fail` a context-dependent premise sit
//! outside the guarantee — see [`check_inclusions`] for why.

use serde::Serialize;
use std::collections::HashMap;
use std::fmt;

use crate::engine::{evaluate, Interpretation, Semantics, TruthValue};
use crate::ground::{ground, GroundAtom, GroundProgram};
use crate::theory::{BodyExpr, DefeasibleTheory, Literal, ProofTag};

/// Sign of a decided verdict.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// The nine conclusion tags.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ConclusionTag {
    /// Definite (monotonic) provability, written `D`.
    Definite,
    /// Defeasible provability under a proof tag.
    Defeasible(ProofTag),
    /// Support under a proof tag, written `sigma_<tag>`.
    Support(ProofTag),
}

impl ConclusionTag {
    /// All nine tags in reporting order.
    pub const ALL: [ConclusionTag; 9] = [
        ConclusionTag::Definite,
        ConclusionTag::Defeasible(ProofTag::Pa),
        ConclusionTag::Defeasible(ProofTag::PaStar),
        ConclusionTag::Defeasible(ProofTag::De),
        ConclusionTag::Defeasible(ProofTag::DeStar),
        ConclusionTag::Support(ProofTag::Pa),
        ConclusionTag::Support(ProofTag::PaStar),
        ConclusionTag::Support(ProofTag::De),
        ConclusionTag::Support(ProofTag::DeStar),
    ];

    fn index(self) -> usize {
        ConclusionTag::ALL.iter().position(|t| *t == self).unwrap()
    }
}

impl fmt::Display for ConclusionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConclusionTag::Definite => f.write_str("D"),
            ConclusionTag::Defeasible(d) => f.write_str(d.name()),
            ConclusionTag::Support(d) => write!(f, "sigma_{}", d.name()),
        }
    }
}

/// A single decided conclusion.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Conclusion {
    pub sign: Sign,
    pub tag: ConclusionTag,
    pub literal: Literal,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{} {}", self.sign, self.tag, self.literal)
    }
}

/// One verdict per (literal, tag) pair over a theory's literal universe.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConclusionSet {
    literals: Vec<Literal>,
    index: HashMap<Literal, usize>,
    cells: Vec<Option<Sign>>,
}

impl ConclusionSet {
    fn new(literals: Vec<Literal>) -> ConclusionSet {
        let index = literals.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let cells = vec![None; literals.len() * ConclusionTag::ALL.len()];
        ConclusionSet { literals, index, cells }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    fn cell(&self, lit_idx: usize, tag: ConclusionTag) -> usize {
        lit_idx * ConclusionTag::ALL.len() + tag.index()
    }

    /// The verdict for a literal in the universe; `None` if the literal
    /// does not occur in the theory at all.
    pub fn verdict(&self, literal: Literal, tag: ConclusionTag) -> Option<Option<Sign>> {
        self.index.get(&literal).map(|&i| self.cells[self.cell(i, tag)])
    }

    pub fn contains(&self, sign: Sign, tag: ConclusionTag, literal: Literal) -> bool {
        self.verdict(literal, tag) == Some(Some(sign))
    }

    fn set(&mut self, literal: Literal, tag: ConclusionTag, sign: Option<Sign>) {
        let i = self.index[&literal];
        let cell = self.cell(i, tag);
        self.cells[cell] = sign;
    }

    /// All decided conclusions, literal-major in universe order.
    pub fn decided(&self) -> impl Iterator<Item = Conclusion> + '_ {
        self.literals.iter().enumerate().flat_map(move |(i, &literal)| {
            ConclusionTag::ALL.iter().filter_map(move |&tag| {
                self.cells[self.cell(i, tag)].map(|sign| Conclusion { sign, tag, literal })
            })
        })
    }

    /// Flat records for presentation, ordered by rendered literal then tag
    /// order; undecided verdicts appear as `?` when requested.
    pub fn records(&self, include_undecided: bool) -> Vec<ConclusionRecord> {
        let mut literals: Vec<Literal> = self.literals.clone();
        literals.sort_by_key(|q| q.to_string());
        let mut out = Vec::new();
        for q in literals {
            for tag in ConclusionTag::ALL {
                let verdict = self.verdict(q, tag).unwrap();
                if verdict.is_none() && !include_undecided {
                    continue;
                }
                out.push(ConclusionRecord {
                    literal: q.to_string(),
                    tag: tag.to_string(),
                    verdict: match verdict {
                        Some(Sign::Plus) => "+",
                        Some(Sign::Minus) => "-",
                        None => "?",
                    }
                    .into(),
                });
            }
        }
        out
    }
}

/// JSON-facing form of one verdict.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ConclusionRecord {
    pub literal: String,
    pub tag: String,
    pub verdict: String,
}

fn sign_of(value: TruthValue) -> Option<Sign> {
    match value {
        TruthValue::True => Some(Sign::Plus),
        TruthValue::False => Some(Sign::Minus),
        TruthValue::Undefined => None,
    }
}

/// Read the nine verdicts per literal out of a fixpoint of the tagged
/// program: `D` from `definitely`, and for each proof tag `d` the
/// defeasible verdict from `defeasibly[d][d]` and the support verdict from
/// `supported[d][d]` (context and annotation agree at the top level of a
/// derivation).
pub fn extract(program: &GroundProgram<GroundAtom>, i: &Interpretation) -> ConclusionSet {
    let mut out = ConclusionSet::new(program.literals().to_vec());
    for &q in program.literals() {
        let definite = program.atom_id(&GroundAtom::Definitely(q)).unwrap();
        out.set(q, ConclusionTag::Definite, sign_of(i.value(definite)));
        for d in ProofTag::ALL {
            let defeasible = program.atom_id(&GroundAtom::Defeasibly(d, d, q)).unwrap();
            out.set(q, ConclusionTag::Defeasible(d), sign_of(i.value(defeasible)));
            let support = program.atom_id(&GroundAtom::Supported(d, d, q)).unwrap();
            out.set(q, ConclusionTag::Support(d), sign_of(i.value(support)));
        }
    }
    out
}

/// Ground, evaluate, and extract in one step.
pub fn solve(t: &DefeasibleTheory, semantics: Semantics) -> ConclusionSet {
    let program = ground(t);
    let fx = evaluate(&program, semantics);
    extract(&program, &fx.interpretation)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Proved,
    Refuted,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Proved => "proved",
            Verdict::Refuted => "refuted",
            Verdict::Undecided => "undecided",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QueryMode {
    Defeasibly,
    Supported,
}

/// Result of a single-expression query. `unknown_literal` flags a literal
/// that does not occur in the theory: such a literal is unprovable by
/// construction, so the query is refuted (proved, for its fail form) but
/// the caller probably wants to warn about a misspelling.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct QueryOutcome {
    pub verdict: Verdict,
    pub unknown_literal: bool,
}

/// Evaluate one body expression against a theory under a proof context,
/// exactly as the grounder would compile it inside a rule body: the tag
/// resolves against the context, and a fail wrapper inverts decided
/// verdicts (undecided stays undecided). Fail queries test defeasible
/// provability in both modes, matching the grounder's compilation of fail
/// premises inside support clauses.
pub fn query(
    t: &DefeasibleTheory,
    context: ProofTag,
    expr: &BodyExpr,
    mode: QueryMode,
    semantics: Semantics,
) -> QueryOutcome {
    let program = ground(t);
    let fx = evaluate(&program, semantics);
    let tag = expr.tag.resolve(context);
    let atom = if expr.failed {
        GroundAtom::Defeasibly(context, tag, expr.literal)
    } else {
        match mode {
            QueryMode::Defeasibly => GroundAtom::Defeasibly(context, tag, expr.literal),
            QueryMode::Supported => GroundAtom::Supported(context, tag, expr.literal),
        }
    };
    let (base, unknown_literal) = match program.atom_id(&atom) {
        Some(id) => match fx.interpretation.value(id) {
            TruthValue::True => (Verdict::Proved, false),
            TruthValue::False => (Verdict::Refuted, false),
            TruthValue::Undefined => (Verdict::Undecided, false),
        },
        None => (Verdict::Refuted, true),
    };
    let verdict = if expr.failed {
        match base {
            Verdict::Proved => Verdict::Refuted,
            Verdict::Refuted => Verdict::Proved,
            Verdict::Undecided => Verdict::Undecided,
        }
    } else {
        base
    };
    QueryOutcome { verdict, unknown_literal }
}

/// The six relative-strength chains. Within each, every verdict of the
/// chain's sign at one tag must persist at the next tag.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Chain {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chain::A => "a",
            Chain::B => "b",
            Chain::C => "c",
            Chain::D => "d",
            Chain::E => "e",
            Chain::F => "f",
        })
    }
}

const fn defeasible(d: ProofTag) -> ConclusionTag {
    ConclusionTag::Defeasible(d)
}

const fn support(d: ProofTag) -> ConclusionTag {
    ConclusionTag::Support(d)
}

/// One implication link: a verdict at the first tag must persist at the
/// second.
type Link = (ConclusionTag, ConclusionTag);

/// `(chain, sign, links)`: each link `(s, w)` asserts that a `sign`
/// verdict at tag `s` implies the same verdict at tag `w`.
const CHAINS: [(Chain, Sign, &[Link]); 6] = [
    (
        Chain::A,
        Sign::Plus,
        &[
            (ConclusionTag::Definite, defeasible(ProofTag::DeStar)),
            (defeasible(ProofTag::DeStar), defeasible(ProofTag::De)),
            (defeasible(ProofTag::De), defeasible(ProofTag::Pa)),
            (defeasible(ProofTag::Pa), support(ProofTag::De)),
            (support(ProofTag::De), support(ProofTag::DeStar)),
        ],
    ),
    (
        Chain::B,
        Sign::Minus,
        &[
            (support(ProofTag::DeStar), support(ProofTag::De)),
            (support(ProofTag::De), defeasible(ProofTag::Pa)),
            (defeasible(ProofTag::Pa), defeasible(ProofTag::De)),
            (defeasible(ProofTag::De), defeasible(ProofTag::DeStar)),
            (defeasible(ProofTag::DeStar), ConclusionTag::Definite),
        ],
    ),
    (
        Chain::C,
        Sign::Plus,
        &[
            (defeasible(ProofTag::Pa), support(ProofTag::Pa)),
            (support(ProofTag::Pa), support(ProofTag::De)),
        ],
    ),
    (
        Chain::D,
        Sign::Minus,
        &[
            (support(ProofTag::De), support(ProofTag::Pa)),
            (support(ProofTag::Pa), defeasible(ProofTag::Pa)),
        ],
    ),
    (
        Chain::E,
        Sign::Plus,
        &[
            (defeasible(ProofTag::DeStar), defeasible(ProofTag::PaStar)),
            (defeasible(ProofTag::PaStar), support(ProofTag::PaStar)),
            (support(ProofTag::PaStar), support(ProofTag::DeStar)),
        ],
    ),
    (
        Chain::F,
        Sign::Minus,
        &[
            (support(ProofTag::DeStar), support(ProofTag::PaStar)),
            (support(ProofTag::PaStar), defeasible(ProofTag::PaStar)),
            (defeasible(ProofTag::PaStar), defeasible(ProofTag::DeStar)),
        ],
    ),
];

/// A broken inclusion: `sign stronger literal` holds but `sign weaker
/// literal` does not.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct InclusionViolation {
    pub chain: Chain,
    pub sign: Sign,
    pub stronger: ConclusionTag,
    pub weaker: ConclusionTag,
    pub literal: Literal,
}

impl fmt::Display for InclusionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "chain ({}): {}{} {} holds but {}{} {} does not",
            self.chain, self.sign, self.stronger, self.literal, self.sign, self.weaker, self.literal
        )
    }
}

/// Check every link of every chain for every literal of the universe.
///
/// The chain property holds for theories whose fail-expressions (if any)
/// wrap explicitly tagged premises. A `fail` over a context-dependent
/// (`free`) premise is satisfied exactly where the premise is refuted, and
/// refutation runs *against* the chains — a regime that proves more fails
/// less — so such theories can legitimately report violations.
pub fn check_inclusions(cs: &ConclusionSet) -> Vec<InclusionViolation> {
    let mut out = Vec::new();
    for &q in cs.literals() {
        for (chain, sign, links) in CHAINS {
            for &(stronger, weaker) in links {
                if cs.contains(sign, stronger, q) && !cs.contains(sign, weaker, q) {
                    out.push(InclusionViolation { chain, sign, stronger, weaker, literal: q });
                }
            }
        }
    }
    out
}

/// Side-by-side evaluation of one theory under both semantics. The
/// well-founded model may decide strictly more (`wf_only`); a decision
/// flipping between the two is impossible and lands in `conflicts`.
#[derive(Clone, Debug)]
pub struct SemanticsComparison {
    pub kunen: ConclusionSet,
    pub wellfounded: ConclusionSet,
    pub wf_only: Vec<Conclusion>,
    pub conflicts: Vec<Conclusion>,
}

pub fn compare_semantics(t: &DefeasibleTheory) -> SemanticsComparison {
    let program = ground(t);
    let kunen = extract(&program, &evaluate(&program, Semantics::Kunen).interpretation);
    let wellfounded =
        extract(&program, &evaluate(&program, Semantics::WellFounded).interpretation);
    let mut wf_only = Vec::new();
    let mut conflicts = Vec::new();
    for c in wellfounded.decided() {
        match kunen.verdict(c.literal, c.tag).unwrap() {
            None => wf_only.push(c),
            Some(sign) if sign != c.sign => conflicts.push(c),
            Some(_) => {}
        }
    }
    // The other direction — Kunen decided, well-founded undecided — cannot
    // happen; surface it as a conflict if it ever does.
    for c in kunen.decided() {
        if wellfounded.verdict(c.literal, c.tag).unwrap().is_none() {
            conflicts.push(c);
        }
    }
    SemanticsComparison { kunen, wellfounded, wf_only, conflicts }
}
