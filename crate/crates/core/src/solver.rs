//! The online-solver contract and reduction chains.

use std::fmt;
use std::str::FromStr;

use crate::config::ReductionConfig;
use crate::counters::{CounterReport, Counters};
use crate::error::{OmvError, Result};
use crate::matrix::SquareMatrix;
use crate::oracle::NaiveSolver;
use crate::problem::{Family, MonotonicityCase, ProblemKind};
use crate::reduce;
use crate::value::Value;

/// A preprocessed matrix answering product queries one at a time.
///
/// Construction is the preprocessing phase. Each call to [`query`] sees only
/// the vector it is given and must return the full answer before the caller
/// can produce the next vector.
///
/// [`query`]: OnlineSolver::query
pub trait OnlineSolver: Send {
    fn kind(&self) -> ProblemKind;

    fn n(&self) -> usize;

    fn query(&mut self, v: &[Value]) -> Result<Vec<Value>>;

    fn counters(&self) -> &Counters;

    fn report(&self) -> CounterReport;

    /// 1-based index of the next query.
    fn query_index(&self) -> u64 {
        self.counters().queries + 1
    }

    /// For existence products: one 0-based witness column per output 1 of
    /// the last answer, when the solver tracks them.
    fn witnesses(&self) -> Option<&[Option<usize>]> {
        None
    }
}

/// One reduction edge: solves `outer()` using instances of `inner()`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Link {
    EqFromBool,
    DomFromEq,
    MinMaxFromDom,
    MinWitFromMinMax,
    BoolFromBmmp,
    BmmpFromEq,
    /// Boolean answers read off a min-witness answer (`witness != inf`).
    BoolFromMinWit,
}

impl Link {
    pub const ALL: [Link; 7] = [
        Link::EqFromBool,
        Link::DomFromEq,
        Link::MinMaxFromDom,
        Link::MinWitFromMinMax,
        Link::BoolFromBmmp,
        Link::BmmpFromEq,
        Link::BoolFromMinWit,
    ];

    pub fn outer(self) -> Family {
        match self {
            Link::EqFromBool => Family::Eq,
            Link::DomFromEq => Family::Dom,
            Link::MinMaxFromDom => Family::MinMax,
            Link::MinWitFromMinMax => Family::MinWit,
            Link::BoolFromBmmp | Link::BoolFromMinWit => Family::Bool,
            Link::BmmpFromEq => Family::Bmmp,
        }
    }

    /// The kind of the inner instances this link creates.
    pub fn inner_kind(self) -> ProblemKind {
        match self {
            Link::EqFromBool => ProblemKind::Boolean,
            Link::DomFromEq | Link::BmmpFromEq => ProblemKind::ExistsEquality,
            Link::MinMaxFromDom => ProblemKind::ExistsDominance,
            Link::MinWitFromMinMax => ProblemKind::MinMax,
            Link::BoolFromBmmp => {
                ProblemKind::BoundedMonotoneMinPlus(MonotonicityCase::AcrossQueries)
            }
            Link::BoolFromMinWit => ProblemKind::MinWitness,
        }
    }

    pub fn inner(self) -> Family {
        self.inner_kind().family()
    }

    pub fn name(self) -> String {
        format!("{}<-{}", self.outer(), self.inner())
    }
}

impl FromStr for Link {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        Link::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| format!("unknown reduction `{s}`"))
    }
}

/// A sequence of reductions ending in the naive solver, written
/// `minmax<-dom,dom<-eq,eq<-bool,naive`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Chain {
    links: Vec<Link>,
}

impl Chain {
    pub fn naive() -> Self {
        Chain { links: Vec::new() }
    }

    /// Builds a chain, checking that adjacent links agree on the problem
    /// passed between them.
    pub fn new(links: Vec<Link>) -> Result<Self> {
        for pair in links.windows(2) {
            if pair[0].inner() != pair[1].outer() {
                return Err(OmvError::Chain(format!(
                    "{} produces {} instances but {} solves {}",
                    pair[0].name(),
                    pair[0].inner(),
                    pair[1].name(),
                    pair[1].outer()
                )));
            }
        }
        Ok(Chain { links })
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn head(&self) -> Option<Link> {
        self.links.first().copied()
    }

    pub fn tail(&self) -> Chain {
        Chain {
            links: self.links.get(1..).unwrap_or_default().to_vec(),
        }
    }

    /// The problem family this chain solves, if it is not the bare naive solver.
    pub fn solves(&self) -> Option<Family> {
        self.head().map(Link::outer)
    }

    pub fn check_solves(&self, family: Family) -> Result<()> {
        match self.solves() {
            Some(f) if f != family => Err(OmvError::Chain(format!(
                "chain `{self}` solves {f}, not {family}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn is_deterministic(&self, cfg: &ReductionConfig) -> bool {
        !self.links.contains(&Link::BmmpFromEq) || cfg.hitting == crate::HittingSize::Full
    }
}

impl FromStr for Chain {
    type Err = OmvError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let (last, links) = parts.split_last().expect("split yields at least one part");
        if *last != "naive" {
            return Err(OmvError::Chain(format!(
                "chain `{s}` must end with `naive`"
            )));
        }
        let links = links
            .iter()
            .map(|p| p.parse::<Link>().map_err(OmvError::Chain))
            .collect::<Result<Vec<_>>>()?;
        Chain::new(links)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.links {
            write!(f, "{},", l.name())?;
        }
        f.write_str("naive")
    }
}

/// Preprocesses `m` as an instance of `kind`, solved by `chain`.
pub fn build_solver(
    kind: ProblemKind,
    m: &SquareMatrix,
    chain: &Chain,
    cfg: &ReductionConfig,
) -> Result<Box<dyn OnlineSolver>> {
    chain.check_solves(kind.family())?;
    cfg.check_matrix(m, kind)?;
    let Some(link) = chain.head() else {
        return Ok(Box::new(NaiveSolver::new(kind, m.clone(), cfg)));
    };
    let tail = chain.tail();
    Ok(match link {
        Link::EqFromBool => Box::new(reduce::EqFromBool::new(m, &tail, cfg)?),
        Link::MinMaxFromDom => Box::new(reduce::MinMaxFromDom::new(m, &tail, cfg)?),
        Link::DomFromEq => Box::new(reduce::DomFromEq::new(m, &tail, cfg)?),
        Link::MinWitFromMinMax => Box::new(reduce::MinWitFromMinMax::new(m, &tail, cfg)?),
        Link::BoolFromBmmp => Box::new(reduce::BoolFromBmmp::new(m, &tail, cfg)?),
        Link::BoolFromMinWit => Box::new(reduce::BoolFromMinWit::new(m, &tail, cfg)?),
        Link::BmmpFromEq => {
            let case = kind.monotonicity().expect("bmmp kind carries a case");
            reduce::bmmp::build(m, case, &tail, cfg)?
        }
    })
}
