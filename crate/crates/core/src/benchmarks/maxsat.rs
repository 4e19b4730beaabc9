use std::fmt::Write as _;
use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Problem;
use crate::combinatorics::{Point, SearchSpace};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub weight: u64,
    pub literals: Vec<i64>,
}

/// A weighted CNF formula in the classic `p wcnf` dialect.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WcnfInstance {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
    pub top: Option<u64>,
    pub total_weight: u64,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

impl WcnfInstance {
    pub fn new(num_vars: usize, clauses: Vec<Clause>, top: Option<u64>) -> Result<Self> {
        for (i, c) in clauses.iter().enumerate() {
            if c.literals.is_empty() {
                return Err(Error::InvalidParameter(format!("clause {i} is empty")));
            }
            if c.weight == 0 {
                return Err(Error::InvalidParameter(format!("clause {i} has zero weight")));
            }
            if let Some(l) = c.literals.iter().find(|l| **l == 0 || l.unsigned_abs() as usize > num_vars) {
                return Err(Error::InvalidParameter(format!("clause {i} has literal {l} outside 1..={num_vars}")));
            }
        }
        let total_weight = clauses.iter().map(|c| c.weight).sum();
        Ok(Self { num_vars, clauses, top, total_weight })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        parse_wcnf(&std::fs::read_to_string(path)?)
    }

    /// Writes the instance back in the dialect [`parse_wcnf`] reads.
    pub fn to_wcnf_string(&self) -> String {
        let mut s = String::new();
        match self.top {
            Some(t) => writeln!(s, "p wcnf {} {} {}", self.num_vars, self.clauses.len(), t).unwrap(),
            None => writeln!(s, "p wcnf {} {}", self.num_vars, self.clauses.len()).unwrap(),
        }
        for c in &self.clauses {
            write!(s, "{}", c.weight).unwrap();
            for l in &c.literals {
                write!(s, " {l}").unwrap();
            }
            s.push_str(" 0\n");
        }
        s
    }

    fn satisfied(clause: &Clause, assignment: &[usize]) -> bool {
        clause.literals.iter().any(|&l| {
            let v = assignment[l.unsigned_abs() as usize - 1];
            if l > 0 {
                v == 1
            } else {
                v == 0
            }
        })
    }

    fn check(&self, assignment: &[usize]) -> Result<()> {
        if assignment.len() != self.num_vars {
            return Err(Error::Dimension { expected: self.num_vars, got: assignment.len() });
        }
        Ok(())
    }

    fn counted<'a>(&'a self, exclude_top: bool) -> impl Iterator<Item = &'a Clause> + 'a {
        self.clauses.iter().filter(move |c| !(exclude_top && Some(c.weight) == self.top))
    }

    /// Total weight of satisfied clauses; top-weight clauses are skipped when
    /// `exclude_top` is set.
    pub fn satisfied_weight(&self, assignment: &[usize], exclude_top: bool) -> Result<u64> {
        self.check(assignment)?;
        Ok(self.counted(exclude_top).filter(|c| Self::satisfied(c, assignment)).map(|c| c.weight).sum())
    }

    pub fn unsatisfied_weight(&self, assignment: &[usize], exclude_top: bool) -> Result<u64> {
        self.check(assignment)?;
        Ok(self.counted(exclude_top).filter(|c| !Self::satisfied(c, assignment)).map(|c| c.weight).sum())
    }
}

/// Parses the classic WCNF dialect: `c` comment lines, one
/// `p wcnf <nvars> <nclauses> [<top>]` header, then `<weight> <lit>… 0` lines.
pub fn parse_wcnf(text: &str) -> Result<WcnfInstance> {
    let mut header: Option<(usize, usize, Option<u64>, usize)> = None;
    let mut clauses = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if let Some((.., first)) = header {
                return Err(parse_err(line_no, format!("duplicate header (first on line {first})")));
            }
            let tok: Vec<&str> = line.split_whitespace().collect();
            if tok.len() < 4 || tok.len() > 5 || tok[0] != "p" || tok[1] != "wcnf" {
                return Err(parse_err(line_no, "expected 'p wcnf <nvars> <nclauses> [<top>]'"));
            }
            let nv = tok[2].parse().map_err(|_| parse_err(line_no, format!("bad variable count '{}'", tok[2])))?;
            let nc = tok[3].parse().map_err(|_| parse_err(line_no, format!("bad clause count '{}'", tok[3])))?;
            let top = match tok.get(4) {
                Some(t) => Some(t.parse().map_err(|_| parse_err(line_no, format!("bad top weight '{t}'")))?),
                None => None,
            };
            header = Some((nv, nc, top, line_no));
            continue;
        }
        let Some((nv, ..)) = header else {
            return Err(parse_err(line_no, "clause before 'p wcnf' header"));
        };
        let mut tok = line.split_whitespace();
        let w = tok.next().unwrap();
        let weight: u64 = w.parse().map_err(|_| parse_err(line_no, format!("bad weight '{w}'")))?;
        if weight == 0 {
            return Err(parse_err(line_no, "clause weight must be positive"));
        }
        let mut literals = Vec::new();
        let mut terminated = false;
        for t in tok {
            if terminated {
                return Err(parse_err(line_no, format!("token '{t}' after terminating 0")));
            }
            let l: i64 = t.parse().map_err(|_| parse_err(line_no, format!("bad literal '{t}'")))?;
            if l == 0 {
                terminated = true;
            } else if l.unsigned_abs() as usize > nv {
                return Err(parse_err(line_no, format!("literal {l} out of range 1..={nv}")));
            } else {
                literals.push(l);
            }
        }
        if !terminated {
            return Err(parse_err(line_no, "clause is missing its terminating 0"));
        }
        if literals.is_empty() {
            return Err(parse_err(line_no, "empty clause"));
        }
        clauses.push(Clause { weight, literals });
    }
    let Some((nv, nc, top, hline)) = header else {
        return Err(parse_err(0, "missing 'p wcnf' header"));
    };
    if clauses.len() != nc {
        return Err(parse_err(hline, format!("header declares {nc} clauses but {} were found", clauses.len())));
    }
    WcnfInstance::new(nv, clauses, top)
}

/// Sum of weights of satisfied clauses.
pub fn maxsat_value(inst: &WcnfInstance, assignment: &[usize]) -> Result<u64> {
    inst.satisfied_weight(assignment, false)
}

/// Sum of weights of unsatisfied clauses.
pub fn maxsat_value_unsat(inst: &WcnfInstance, assignment: &[usize]) -> Result<u64> {
    inst.unsatisfied_weight(assignment, false)
}

/// A seeded random weighted formula in the style of the forced-satisfiable
/// RB model: `groups` CSP variables with `domain` values each, one boolean
/// per (variable, value). Clauses are at-least-one per group, pairwise
/// at-most-one, and binary conflicts between random group pairs; weights are
/// uniform in `1..=max_weight`.
pub fn synthetic_rb_wcnf(groups: usize, domain: usize, constraints: usize, conflicts: usize, max_weight: u64, seed: u64) -> Result<WcnfInstance> {
    if groups < 2 || domain < 2 || max_weight == 0 {
        return Err(Error::InvalidParameter("need at least 2 groups, 2 values and positive weights".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let var = |g: usize, v: usize| (g * domain + v + 1) as i64;
    let mut clauses = Vec::new();
    for g in 0..groups {
        clauses.push(Clause { weight: rng.gen_range(1..=max_weight), literals: (0..domain).map(|v| var(g, v)).collect() });
        for a in 0..domain {
            for b in a + 1..domain {
                clauses.push(Clause { weight: rng.gen_range(1..=max_weight), literals: vec![-var(g, a), -var(g, b)] });
            }
        }
    }
    let conflicts = conflicts.min(domain * domain);
    for _ in 0..constraints {
        let pair = sample(&mut rng, groups, 2);
        let (g1, g2) = (pair.index(0).min(pair.index(1)), pair.index(0).max(pair.index(1)));
        let mut forbidden: Vec<usize> = sample(&mut rng, domain * domain, conflicts).into_vec();
        forbidden.sort_unstable();
        for f in forbidden {
            clauses.push(Clause {
                weight: rng.gen_range(1..=max_weight),
                literals: vec![-var(g1, f / domain), -var(g2, f % domain)],
            });
        }
    }
    WcnfInstance::new(groups * domain, clauses, None)
}

/// The 60-variable synthetic stand-in used for MaxSAT experiments:
/// 10 groups of 6 values.
pub fn synthetic_maxsat60(seed: u64) -> WcnfInstance {
    synthetic_rb_wcnf(10, 6, 20, 9, 100, seed).expect("valid parameters")
}

/// Weighted MaxSAT as minimisation of the negated satisfied weight.
#[derive(Clone, Debug)]
pub struct MaxSat {
    name: String,
    instance: WcnfInstance,
    space: SearchSpace,
    exclude_top: bool,
}

impl MaxSat {
    pub fn new(name: impl Into<String>, instance: WcnfInstance, exclude_top: bool) -> Result<Self> {
        let space = SearchSpace::binary(instance.num_vars)?;
        Ok(Self { name: name.into(), instance, space, exclude_top })
    }

    pub fn instance(&self) -> &WcnfInstance {
        &self.instance
    }
}

impl Problem for MaxSat {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn evaluate(&self, point: &Point) -> Result<f64> {
        self.space.validate(point)?;
        Ok(-(self.instance.satisfied_weight(&point.discrete, self.exclude_top)? as f64))
    }

    fn report(&self, value: f64) -> f64 {
        -value
    }

    fn maximize(&self) -> bool {
        true
    }

    fn metadata(&self) -> serde_json::Value {
        serde_json::json!({
            "objective": "satisfied_weight",
            "num_vars": self.instance.num_vars,
            "num_clauses": self.instance.clauses.len(),
            "total_weight": self.instance.total_weight,
            "exclude_top": self.exclude_top,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small() -> WcnfInstance {
        parse_wcnf("p wcnf 3 3\n5 1 -2 0\n3 2 3 0\n100 -1 0\n").unwrap()
    }

    #[test]
    fn header_and_clause() {
        let inst = parse_wcnf("p wcnf 2 1 10\n3 1 -2 0\n").unwrap();
        assert_eq!(inst.clauses, vec![Clause { weight: 3, literals: vec![1, -2] }]);
        assert_eq!(inst.top, Some(10));
        assert_eq!(inst.total_weight, 3);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("p wcnf 2 2\n3 1 -2 0\n", 1, "declares 2"),
            ("3 1 0\n", 1, "before"),
            ("p wcnf 2 1\np wcnf 2 1\n1 1 0\n", 2, "duplicate"),
            ("p wcnf 2 1\n1 3 0\n", 2, "out of range"),
            ("p wcnf 2 1\n1 1 2\n", 2, "terminating"),
            ("p wcnf 2 1\n1 x 0\n", 2, "bad literal"),
            ("p wcnf 2 1\n0 1 0\n", 2, "positive"),
            ("p wcnf 2 1\n4 0\n", 2, "empty"),
            ("p wcnf 2 1\n4 1 0 2\n", 2, "after"),
            ("c nothing\n", 0, "missing"),
        ];
        for (text, line, needle) in cases {
            match parse_wcnf(text) {
                Err(Error::Parse { line: l, msg }) => {
                    assert_eq!(l, line, "{text:?}: {msg}");
                    assert!(msg.contains(needle), "{text:?}: {msg}");
                }
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn comments_are_ignored() {
        let plain = "p wcnf 3 2 9\n1 1 2 0\n9 -3 0\n";
        let commented = "c generated\nc   by hand\np wcnf 3 2 9\nc mid\n1 1 2 0   \n\n9 -3 0\n";
        assert_eq!(parse_wcnf(plain).unwrap(), parse_wcnf(commented).unwrap());
    }

    #[test]
    fn hand_evaluation() {
        let inst = small();
        assert_eq!(maxsat_value(&inst, &[1, 0, 1]).unwrap(), 8);
        assert_eq!(maxsat_value(&inst, &[0, 0, 1]).unwrap(), 108);
        assert_eq!(maxsat_value(&inst, &[0, 0, 1]).unwrap(), inst.total_weight);
        let one = parse_wcnf("p wcnf 1 1\n7 1 0\n").unwrap();
        assert_eq!(maxsat_value(&one, &[0]).unwrap(), 0);
        assert!(maxsat_value(&one, &[0, 1]).is_err());
    }

    #[test]
    fn exclude_top() {
        let inst = parse_wcnf("p wcnf 2 2 50\n50 1 0\n4 2 0\n").unwrap();
        assert_eq!(inst.satisfied_weight(&[1, 1], true).unwrap(), 4);
        assert_eq!(inst.satisfied_weight(&[1, 1], false).unwrap(), 54);
    }

    #[test]
    fn synthetic_instance_shape() {
        let a = synthetic_maxsat60(0);
        assert_eq!(a.num_vars, 60);
        assert_eq!(a.clauses.len(), 10 + 10 * 15 + 20 * 9);
        assert_eq!(a, synthetic_maxsat60(0));
        assert_ne!(a, synthetic_maxsat60(1));
        assert_eq!(parse_wcnf(&a.to_wcnf_string()).unwrap(), a);
    }

    proptest! {
        #[test]
        fn complementarity(seed in 0u64..200, bits in proptest::collection::vec(0usize..2, 60)) {
            let inst = synthetic_maxsat60(seed);
            prop_assert_eq!(
                maxsat_value(&inst, &bits).unwrap() + maxsat_value_unsat(&inst, &bits).unwrap(),
                inst.total_weight
            );
        }
    }
}
