//! Exact 0-1 integer programming for extremal set theory.
//!
//! The crate is organised bottom-up:
//!
//! * [`setfam`]: bitset set families and the combinatorial predicates used to
//!   check solver output and published families.
//! * [`ilp`]: binary linear models, exact feasibility checks, LP-file I/O.
//! * [`lprelax`]: bounded dual simplex for the continuous relaxation.
//! * [`bnb`]: branch-and-bound on top of the relaxation.
//! * [`encoders`]: one model builder per extremal problem.
//! * [`constructions`]: parametric families with closed-form sizes.
//! * [`certificates`]: stored counterexample families and their verifier.

pub mod bnb;
pub mod certificates;
pub mod constructions;
pub mod encoders;
pub mod error;
pub mod ilp;
pub mod lprelax;
pub mod setfam;

pub use bnb::{solve_feasibility, solve_ip, Feasibility, IpOutcome, IpStatus, NodeSearch, SolveConfig};
pub use certificates::{bound_formula, verify_certificate, verify_id, verify_json, Certificate, Report};
pub use encoders::{encode, EncodeOptions, EncodedModel, ProblemSpec};
pub use error::{Error, Result};
pub use ilp::{export_lp, parse_lp, Assignment, IlpModel};
pub use lprelax::{solve_relaxation, LpOutcome, LpStatus};
pub use setfam::{Family, GraphJson, LabeledGraph, PatternMatrix, SetCode};
