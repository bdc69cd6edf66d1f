//! Exact branch-and-bound for 0-1 models.
//!
//! Each node propagates its fixings, solves the LP relaxation warm-started
//! from its parent's tableau, and branches on the most fractional variable.
//! Objectives are integer, so a node is dropped once its bound falls below
//! `incumbent + 1`.

mod cuts;
mod dfs;
mod propagate;
mod search;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ilp::{Assignment, AssignmentJson, IlpModel};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branching {
    /// Value closest to 1/2, ties to the lowest index.
    #[default]
    MostFractional,
    /// Lowest-index fractional variable.
    FirstFractional,
}

/// Whether nodes below the root solve an LP.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeSearch {
    /// Propagation-only when the root LP bound is no better than the
    /// clique-cover bound; otherwise depth-first with LP when symmetries are
    /// given, best-first without.
    #[default]
    Auto,
    /// Best-first with an LP at every node.
    Lp,
    /// Depth-first with an LP at every node; uses the symmetries.
    LpDepthFirst,
    /// Depth-first on propagation alone; uses the symmetries.
    Propagation,
}

impl FromStr for NodeSearch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(NodeSearch::Auto),
            "lp" => Ok(NodeSearch::Lp),
            "lp-depth-first" => Ok(NodeSearch::LpDepthFirst),
            "propagation" => Ok(NodeSearch::Propagation),
            _ => Err(Error::Config(format!("unknown node search {s:?}"))),
        }
    }
}

impl FromStr for Branching {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "most-fractional" => Ok(Branching::MostFractional),
            "first-fractional" => Ok(Branching::FirstFractional),
            _ => Err(Error::Config(format!("unknown branching rule {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    pub threads: usize,
    pub branching: Branching,
    /// A known feasible point used as the starting incumbent.
    pub warm_start: Option<Assignment>,
    /// Separate clique inequalities from pairwise conflicts at the root.
    pub cuts: bool,
    pub node_search: NodeSearch,
    /// Variable permutations mapping the model onto itself; the
    /// propagation search uses them for orbital fixing.
    pub symmetries: Vec<Vec<usize>>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            time_limit: None,
            node_limit: None,
            threads: 1,
            branching: Branching::MostFractional,
            warm_start: None,
            cuts: true,
            node_search: NodeSearch::Auto,
            symmetries: Vec::new(),
        }
    }
}

impl SolveConfig {
    fn validate(&self, model: &IlpModel) -> Result<()> {
        if self.threads == 0 {
            return Err(Error::Config("thread count must be positive".into()));
        }
        if self.node_limit == Some(0) {
            return Err(Error::Config("node limit must be positive".into()));
        }
        if self.time_limit == Some(Duration::ZERO) {
            return Err(Error::Config("time limit must be positive".into()));
        }
        if self.symmetries.iter().any(|g| !model.is_automorphism(g)) {
            return Err(Error::Config("a symmetry does not preserve the model".into()));
        }
        if let Some(a) = &self.warm_start {
            let report = model.check_assignment(a)?;
            if !report.feasible || !model.respects_fixings(a) {
                return Err(Error::Config("warm start is not feasible".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IpStatus {
    Optimal,
    /// Stopped early with a point meeting the requested target.
    Feasible,
    Infeasible,
    NodeLimit,
    TimeLimit,
}

impl fmt::Display for IpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IpStatus::Optimal => "OPTIMAL",
            IpStatus::Feasible => "FEASIBLE",
            IpStatus::Infeasible => "INFEASIBLE",
            IpStatus::NodeLimit => "NODE_LIMIT",
            IpStatus::TimeLimit => "TIME_LIMIT",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct IpOutcome {
    pub status: IpStatus,
    /// The model pinned variables, so the value only bounds the unrestricted
    /// optimum (from below when maximizing).
    pub restricted: bool,
    pub assignment: Option<Assignment>,
    pub objective: Option<i64>,
    /// Best proven bound in the model's sense.
    pub dual_bound: f64,
    pub nodes: u64,
    pub lp_iterations: u64,
    pub cuts: usize,
    pub root_bound: f64,
    pub elapsed: Duration,
}

impl IpOutcome {
    /// Status label, `RESTRICTED_` prefixed when variables were pinned.
    pub fn label(&self) -> String {
        if self.restricted {
            format!("RESTRICTED_{}", self.status)
        } else {
            self.status.to_string()
        }
    }

    pub fn to_json(&self, model: &IlpModel) -> OutcomeJson {
        OutcomeJson {
            status: self.status,
            restricted: self.restricted,
            objective: self.objective,
            dual_bound: self.dual_bound,
            nodes: self.nodes,
            lp_iterations: self.lp_iterations,
            cuts: self.cuts,
            root_bound: self.root_bound,
            seconds: self.elapsed.as_secs_f64(),
            solution: self.assignment.as_ref().map(|a| a.to_json(model, &self.label())),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OutcomeJson {
    pub status: IpStatus,
    pub restricted: bool,
    pub objective: Option<i64>,
    pub dual_bound: f64,
    pub nodes: u64,
    pub lp_iterations: u64,
    pub cuts: usize,
    pub root_bound: f64,
    pub seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<AssignmentJson>,
}

/// Optimizes `model` exactly (up to the configured limits).
pub fn solve_ip(model: &IlpModel, cfg: &SolveConfig) -> Result<IpOutcome> {
    cfg.validate(model)?;
    Ok(search::run(model, cfg, None))
}

#[derive(Clone, Debug)]
pub struct Feasibility {
    /// `None` when a limit stopped the search first.
    pub achievable: Option<bool>,
    pub witness: Option<Assignment>,
    pub outcome: IpOutcome,
}

/// Decides whether some feasible point reaches `target` (at least `target`
/// when maximizing, at most when minimizing), stopping at the first one.
pub fn solve_feasibility(model: &IlpModel, target: i64, cfg: &SolveConfig) -> Result<Feasibility> {
    cfg.validate(model)?;
    let internal = match model.sense() {
        crate::ilp::Sense::Maximize => target,
        crate::ilp::Sense::Minimize => -target,
    };
    let outcome = search::run(model, cfg, Some(internal));
    let reached = |o: &IpOutcome| {
        o.objective.is_some_and(|v| match model.sense() {
            crate::ilp::Sense::Maximize => v >= target,
            crate::ilp::Sense::Minimize => v <= target,
        })
    };
    let achievable = if reached(&outcome) {
        Some(true)
    } else {
        match outcome.status {
            IpStatus::Optimal | IpStatus::Infeasible | IpStatus::Feasible => Some(false),
            IpStatus::NodeLimit | IpStatus::TimeLimit => None,
        }
    };
    let witness = if achievable == Some(true) { outcome.assignment.clone() } else { None };
    Ok(Feasibility { achievable, witness, outcome })
}
