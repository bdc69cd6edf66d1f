//! Binary linear programs with integer coefficients.

mod lpfile;

pub use lpfile::{export_lp, parse_lp};

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

impl Cmp {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Cmp::Le => lhs <= rhs,
            Cmp::Ge => lhs >= rhs,
            Cmp::Eq => lhs == rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Le => "<=",
            Cmp::Ge => ">=",
            Cmp::Eq => "=",
        }
    }
}

/// `sum(coef * x) <cmp> rhs` with terms sorted by variable index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinConstraint {
    terms: Vec<(usize, i64)>,
    cmp: Cmp,
    rhs: i64,
}

impl LinConstraint {
    /// Merges repeated variables and drops zero coefficients.
    pub fn new(terms: impl IntoIterator<Item = (usize, i64)>, cmp: Cmp, rhs: i64) -> Result<Self> {
        let terms = canonical_terms(terms);
        if terms.is_empty() {
            return Err(Error::EmptyConstraint);
        }
        Ok(LinConstraint { terms, cmp, rhs })
    }

    pub fn terms(&self) -> &[(usize, i64)] {
        &self.terms
    }

    pub fn cmp(&self) -> Cmp {
        self.cmp
    }

    pub fn rhs(&self) -> i64 {
        self.rhs
    }

    pub fn activity(&self, values: &[bool]) -> i64 {
        self.terms.iter().filter(|&&(v, _)| values[v]).map(|&(_, c)| c).sum()
    }

    /// All coefficients are 1 and the sense is `<=`.
    pub fn is_packing(&self) -> bool {
        self.cmp == Cmp::Le && self.terms.iter().all(|&(_, c)| c == 1)
    }
}

fn canonical_terms(terms: impl IntoIterator<Item = (usize, i64)>) -> Vec<(usize, i64)> {
    let mut t: Vec<(usize, i64)> = terms.into_iter().collect();
    t.sort_unstable_by_key(|&(v, _)| v);
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(t.len());
    for (v, c) in t {
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 += c,
            _ => out.push((v, c)),
        }
    }
    out.retain(|&(_, c)| c != 0);
    out
}

pub(crate) fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A 0-1 program: binary variables, integer objective, linear constraints.
///
/// Identical constraints are stored once. Variables may additionally be
/// pinned to 0 or 1 as a search restriction; pinned variables make solver
/// results lower bounds (for maximization) rather than optima.
#[derive(Clone, Debug)]
pub struct IlpModel {
    name: String,
    sense: Sense,
    vars: Vec<String>,
    index: HashMap<String, usize>,
    objective: Vec<(usize, i64)>,
    constraints: Vec<LinConstraint>,
    seen: HashSet<LinConstraint>,
    fixed: BTreeMap<usize, bool>,
    comments: Vec<String>,
}

impl PartialEq for IlpModel {
    fn eq(&self, other: &Self) -> bool {
        self.sense == other.sense
            && self.vars == other.vars
            && self.objective == other.objective
            && self.constraints == other.constraints
            && self.fixed == other.fixed
    }
}

impl IlpModel {
    pub fn new(name: impl Into<String>, sense: Sense) -> Self {
        IlpModel {
            name: name.into(),
            sense,
            vars: Vec::new(),
            index: HashMap::new(),
            objective: Vec::new(),
            constraints: Vec::new(),
            seen: HashSet::new(),
            fixed: BTreeMap::new(),
            comments: Vec::new(),
        }
    }

    pub fn add_binary_var(&mut self, name: impl Into<String>) -> Result<usize> {
        let name = name.into();
        if !valid_name(&name) {
            return Err(Error::InvalidVariableName(name));
        }
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateVariable(name));
        }
        let idx = self.vars.len();
        self.index.insert(name.clone(), idx);
        self.vars.push(name);
        Ok(idx)
    }

    fn check_index(&self, v: usize) -> Result<()> {
        if v >= self.vars.len() {
            return Err(Error::VariableIndex { index: v, len: self.vars.len() });
        }
        Ok(())
    }

    pub fn set_objective(&mut self, terms: impl IntoIterator<Item = (usize, i64)>) -> Result<()> {
        let terms = canonical_terms(terms);
        for &(v, _) in &terms {
            self.check_index(v)?;
        }
        self.objective = terms;
        Ok(())
    }

    /// Adds a constraint; returns `None` when an identical one already exists.
    pub fn add_constraint(
        &mut self,
        terms: impl IntoIterator<Item = (usize, i64)>,
        cmp: Cmp,
        rhs: i64,
    ) -> Result<Option<usize>> {
        let c = LinConstraint::new(terms, cmp, rhs)?;
        for &(v, _) in c.terms() {
            self.check_index(v)?;
        }
        if self.seen.contains(&c) {
            return Ok(None);
        }
        self.seen.insert(c.clone());
        self.constraints.push(c);
        Ok(Some(self.constraints.len() - 1))
    }

    /// Pins a variable for the search (restriction hook).
    pub fn fix_var(&mut self, v: usize, value: bool) -> Result<()> {
        self.check_index(v)?;
        if let Some(&old) = self.fixed.get(&v) {
            if old != value {
                return Err(crate::error::invalid(format!("variable {} pinned to both 0 and 1", self.vars[v])));
            }
        }
        self.fixed.insert(v, value);
        Ok(())
    }

    pub fn add_comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn var_name(&self, v: usize) -> &str {
        &self.vars[v]
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn objective(&self) -> &[(usize, i64)] {
        &self.objective
    }

    pub fn constraints(&self) -> &[LinConstraint] {
        &self.constraints
    }

    pub fn fixed(&self) -> &BTreeMap<usize, bool> {
        &self.fixed
    }

    pub fn is_restricted(&self) -> bool {
        !self.fixed.is_empty()
    }

    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    pub fn objective_value(&self, values: &[bool]) -> i64 {
        self.objective.iter().filter(|&&(v, _)| values[v]).map(|&(_, c)| c).sum()
    }

    /// Exact feasibility check of a 0-1 point.
    pub fn check_assignment(&self, a: &Assignment) -> Result<CheckReport> {
        if a.len() != self.num_vars() {
            return Err(Error::LengthMismatch { expected: self.num_vars(), got: a.len() });
        }
        let values = a.values();
        let violated: Vec<usize> = self
            .constraints
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.cmp.holds(c.activity(values), c.rhs))
            .map(|(i, _)| i)
            .collect();
        Ok(CheckReport { feasible: violated.is_empty(), objective: self.objective_value(values), violated })
    }

    /// Whether `a` honours every pinned variable.
    pub fn respects_fixings(&self, a: &Assignment) -> bool {
        self.fixed.iter().all(|(&v, &b)| a.values().get(v) == Some(&b))
    }

    /// Whether relabeling variable `v` as `perm[v]` maps the objective, the
    /// pins and the constraint set onto themselves.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        let rows: HashSet<&LinConstraint> = self.constraints.iter().collect();
        self.is_automorphism_with(perm, &rows)
    }

    pub(crate) fn is_automorphism_with(&self, perm: &[usize], rows: &HashSet<&LinConstraint>) -> bool {
        let n = self.num_vars();
        if perm.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return false;
            }
        }
        let mut obj: Vec<(usize, i64)> = self.objective.iter().map(|&(v, c)| (perm[v], c)).collect();
        obj.sort_unstable();
        if obj != self.objective {
            return false;
        }
        if self.fixed.iter().any(|(&v, &b)| self.fixed.get(&perm[v]) != Some(&b)) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let mapped = LinConstraint::new(c.terms.iter().map(|&(v, a)| (perm[v], a)), c.cmp, c.rhs);
            mapped.is_ok_and(|r| rows.contains(&r))
        })
    }
}

impl fmt::Display for IlpModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({:?}): {} binaries, {} constraints",
            self.name,
            self.sense,
            self.num_vars(),
            self.num_constraints()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub feasible: bool,
    pub objective: i64,
    pub violated: Vec<usize>,
}

/// A 0/1 value for every variable of a model.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment(values)
    }

    pub fn zeros(n: usize) -> Self {
        Assignment(vec![false; n])
    }

    pub fn from_ones(n: usize, ones: &[usize]) -> Self {
        let mut v = vec![false; n];
        for &i in ones {
            v[i] = true;
        }
        Assignment(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, v: usize) -> bool {
        self.0[v]
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn to_json(&self, model: &IlpModel, status: &str) -> AssignmentJson {
        AssignmentJson {
            status: status.to_string(),
            objective: model.objective_value(&self.0),
            values: model.var_names().iter().zip(&self.0).map(|(n, &b)| (n.clone(), b as u8)).collect(),
        }
    }

    /// Reads values by variable name; every model variable must be present.
    pub fn from_json(model: &IlpModel, j: &AssignmentJson) -> Result<Self> {
        let mut values = vec![false; model.num_vars()];
        let mut seen = 0;
        for (name, &val) in &j.values {
            let v = model.var_index(name).ok_or_else(|| Error::Unknown { kind: "variable", name: name.clone() })?;
            if val > 1 {
                return Err(crate::error::invalid(format!("value {val} for binary {name}")));
            }
            values[v] = val == 1;
            seen += 1;
        }
        if seen != model.num_vars() {
            return Err(Error::LengthMismatch { expected: model.num_vars(), got: seen });
        }
        Ok(Assignment(values))
    }
}

/// `{"status": "OPTIMAL", "objective": 6, "values": {"x_1": 0, ...}}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentJson {
    pub status: String,
    pub objective: i64,
    pub values: BTreeMap<String, u8>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sperner2() -> IlpModel {
        // x_empty, x_1, x_2, x_1_2 with all strict containments
        let mut m = IlpModel::new("sperner2", Sense::Maximize);
        for n in ["x_empty", "x_1", "x_2", "x_1_2"] {
            m.add_binary_var(n).unwrap();
        }
        m.set_objective((0..4).map(|v| (v, 1))).unwrap();
        for (a, b) in [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)] {
            m.add_constraint([(a, 1), (b, 1)], Cmp::Le, 1).unwrap();
        }
        m
    }

    #[test]
    fn var_indices_and_names() {
        let mut m = IlpModel::new("t", Sense::Maximize);
        assert_eq!(m.add_binary_var("x").unwrap(), 0);
        assert!(matches!(m.add_binary_var("x"), Err(Error::DuplicateVariable(_))));
        assert!(matches!(m.add_binary_var("1x"), Err(Error::InvalidVariableName(_))));
        assert!(matches!(m.add_binary_var("x-y"), Err(Error::InvalidVariableName(_))));
        for i in 1..1024 {
            assert_eq!(m.add_binary_var(format!("y{i}")).unwrap(), i);
        }
    }

    #[test]
    fn constraints_are_canonical_and_deduplicated() {
        let mut m = IlpModel::new("t", Sense::Maximize);
        m.add_binary_var("a").unwrap();
        m.add_binary_var("b").unwrap();
        assert_eq!(m.add_constraint([(1, 1), (0, 1)], Cmp::Le, 1).unwrap(), Some(0));
        assert_eq!(m.add_constraint([(0, 1), (1, 1)], Cmp::Le, 1).unwrap(), None);
        assert_eq!(m.num_constraints(), 1);
        assert!(matches!(m.add_constraint([(0, 1), (0, -1)], Cmp::Le, 1), Err(Error::EmptyConstraint)));
        assert!(m.add_constraint([(5, 1)], Cmp::Le, 1).is_err());
        assert_eq!(m.constraints()[0].terms(), &[(0, 1), (1, 1)]);
    }

    #[test]
    fn check_assignment_examples() {
        let m = sperner2();
        let zero = m.check_assignment(&Assignment::zeros(4)).unwrap();
        assert!(zero.feasible);
        assert_eq!(zero.objective, 0);
        let good = m.check_assignment(&Assignment::from_ones(4, &[1, 2])).unwrap();
        assert!(good.feasible);
        assert_eq!(good.objective, 2);
        let bad = m.check_assignment(&Assignment::from_ones(4, &[0, 1])).unwrap();
        assert!(!bad.feasible);
        assert_eq!(bad.violated, vec![0]);
        assert!(matches!(
            m.check_assignment(&Assignment::zeros(3)),
            Err(Error::LengthMismatch { expected: 4, got: 3 })
        ));
    }

    #[test]
    fn assignment_json_round_trip() {
        let m = sperner2();
        let a = Assignment::from_ones(4, &[1, 2]);
        let j = a.to_json(&m, "OPTIMAL");
        assert_eq!(j.objective, 2);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains(r#""x_1":1"#));
        let back: AssignmentJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Assignment::from_json(&m, &back).unwrap(), a);
    }

    #[test]
    fn pinning() {
        let mut m = sperner2();
        m.fix_var(3, true).unwrap();
        assert!(m.fix_var(3, false).is_err());
        assert!(m.is_restricted());
        assert!(m.respects_fixings(&Assignment::from_ones(4, &[3])));
        assert!(!m.respects_fixings(&Assignment::zeros(4)));
    }
}
