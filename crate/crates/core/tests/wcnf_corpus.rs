use std::path::{Path, PathBuf};

use bodi_kit::benchmarks::{maxsat_value, maxsat_value_unsat, parse_wcnf, WcnfInstance};
use bodi_kit::Error;

fn corpus(kind: &str) -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/wcnf").join(kind);
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
}

// Weight of satisfied clauses computed straight from the text, independent
// of the parser's data structures.
fn satisfied_from_text(text: &str, assignment: &[usize]) -> u64 {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('c') && !l.starts_with('p'))
        .map(|l| {
            let nums: Vec<i64> = l.split_whitespace().map(|t| t.parse().unwrap()).collect();
            let sat = nums[1..nums.len() - 1].iter().any(|&lit| {
                let v = assignment[lit.unsigned_abs() as usize - 1];
                (lit > 0) == (v == 1)
            });
            if sat {
                nums[0] as u64
            } else {
                0
            }
        })
        .sum()
}

#[test]
fn valid_instances_round_trip() {
    let files = corpus("valid");
    assert!(files.len() >= 10);
    for path in files {
        let inst = WcnfInstance::from_file(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let again = parse_wcnf(&inst.to_wcnf_string()).unwrap();
        assert_eq!(inst, again, "{}", path.display());
        assert_eq!(inst.total_weight, inst.clauses.iter().map(|c| c.weight).sum::<u64>());
    }
}

#[test]
fn valid_instances_match_text_oracle_exhaustively() {
    for path in corpus("valid") {
        let text = std::fs::read_to_string(&path).unwrap();
        let inst = parse_wcnf(&text).unwrap();
        let n = inst.num_vars;
        assert!(n <= 12, "corpus instances are small enough to enumerate");
        for code in 0u32..1 << n {
            let a: Vec<usize> = (0..n).map(|j| ((code >> j) & 1) as usize).collect();
            let sat = maxsat_value(&inst, &a).unwrap();
            assert_eq!(sat, satisfied_from_text(&text, &a), "{} at {a:?}", path.display());
            assert_eq!(sat + maxsat_value_unsat(&inst, &a).unwrap(), inst.total_weight);
        }
    }
}

#[test]
fn invalid_instances_report_the_offending_line() {
    let files = corpus("invalid");
    assert!(files.len() >= 10);
    for path in files {
        let text = std::fs::read_to_string(&path).unwrap();
        let expected: usize = text
            .lines()
            .find_map(|l| l.strip_prefix("c expect-line "))
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or_else(|| panic!("{} lacks an expect-line comment", path.display()));
        match parse_wcnf(&text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, expected, "{}", path.display()),
            other => panic!("{}: expected a parse error, got {other:?}", path.display()),
        }
    }
}

#[test]
fn top_weight_clauses_can_be_excluded() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/wcnf/valid/with_top.wcnf");
    let inst = WcnfInstance::from_file(&path).unwrap();
    assert_eq!(inst.top, Some(100));
    let a = [1, 0, 1, 1];
    assert_eq!(inst.satisfied_weight(&a, false).unwrap(), 207);
    assert_eq!(inst.satisfied_weight(&a, true).unwrap(), 7);
    assert_eq!(inst.unsatisfied_weight(&a, true).unwrap(), 2);
}
