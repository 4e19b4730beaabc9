//! Benchmark objectives. All problems are minimised; maximisation problems
//! negate their objective and undo it in [`Problem::report`].

mod ackley;
mod labs;
mod maxsat;
mod random;

use std::path::Path;

pub use ackley::{ackley_mixed, AckleyMixed};
pub use labs::{bits_to_sequence, labs_energy, labs_merit, Labs, LabsSpec, MeritConvention, LABS_N50_BEST_MERIT};
pub use maxsat::{
    maxsat_value, maxsat_value_unsat, parse_wcnf, synthetic_maxsat60, synthetic_rb_wcnf, Clause, MaxSat, WcnfInstance,
};
pub use random::random_search;

use crate::combinatorics::{Point, SearchSpace};
use crate::error::{Error, Result};

pub trait Problem: Send + Sync {
    fn name(&self) -> String;

    fn space(&self) -> &SearchSpace;

    /// Objective value to minimise.
    fn evaluate(&self, point: &Point) -> Result<f64>;

    /// Minimum of [`Problem::evaluate`] when known.
    fn optimum(&self) -> Option<f64> {
        None
    }

    /// Converts an objective value to the problem's natural scale.
    fn report(&self, value: f64) -> f64 {
        value
    }

    /// Whether the natural scale is maximised.
    fn maximize(&self) -> bool {
        false
    }

    fn metadata(&self) -> serde_json::Value {
        serde_json::Value::Null
    }
}

/// Options that affect how a problem name is resolved.
#[derive(Clone, Copy, Debug, Default)]
pub struct ProblemOptions {
    pub merit_convention: MeritConvention,
    pub exclude_top: bool,
}

/// Resolves `labs:<n>`, `maxsat:<path>`, `maxsat-synthetic:<seed>` or
/// `ackley-mixed:<d_b>:<d_c>`.
pub fn problem_from_name(name: &str, opts: ProblemOptions) -> Result<Box<dyn Problem>> {
    let bad = || Error::InvalidParameter(format!("unrecognised problem '{name}'"));
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    let (kind, rest) = name.split_once(':').ok_or_else(bad)?;
    match kind {
        "labs" => Ok(Box::new(Labs::new(num(rest)?, opts.merit_convention)?)),
        "maxsat" => {
            let inst = WcnfInstance::from_file(Path::new(rest))?;
            Ok(Box::new(MaxSat::new(name, inst, opts.exclude_top)?))
        }
        "maxsat-synthetic" => {
            let seed = rest.parse::<u64>().map_err(|_| bad())?;
            Ok(Box::new(MaxSat::new(name, synthetic_maxsat60(seed), opts.exclude_top)?))
        }
        "ackley-mixed" => {
            let (b, c) = rest.split_once(':').ok_or_else(bad)?;
            Ok(Box::new(AckleyMixed::new(num(b)?, num(c)?)?))
        }
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        let o = ProblemOptions::default();
        assert_eq!(problem_from_name("labs:12", o).unwrap().space().dim(), 12);
        let a = problem_from_name("ackley-mixed:20:3", o).unwrap();
        assert_eq!(a.space().continuous_dim(), 3);
        assert_eq!(a.name(), "ackley-mixed:20:3");
        assert_eq!(problem_from_name("maxsat-synthetic:4", o).unwrap().space().dim(), 60);
        assert!(problem_from_name("labs", o).is_err());
        assert!(problem_from_name("labs:x", o).is_err());
        assert!(problem_from_name("tsp:5", o).is_err());
        assert!(matches!(problem_from_name("maxsat:/nonexistent/file.wcnf", o), Err(Error::Io(_))));
    }
}
