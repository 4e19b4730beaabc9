use std::path::Path;

use crate::engine::RunRecord;

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Writes `iteration,value,best_so_far,elapsed_s,dict_seed`; `elapsed_s` is
/// left empty unless `record_timing` is set.
pub fn write_csv(record: &RunRecord, path: &Path, record_timing: bool) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["iteration", "value", "best_so_far", "elapsed_s", "dict_seed"])?;
    for r in &record.rows {
        w.write_record([
            r.iteration.to_string(),
            fmt_f64(r.value),
            fmt_f64(r.best_so_far),
            if record_timing { fmt_f64(r.elapsed_s) } else { String::new() },
            r.dict_seed.map(|s| s.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn environment_stamp() -> serde_json::Value {
    let now = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    serde_json::json!({
        "crate_version": env!("CARGO_PKG_VERSION"),
        "os": std::env::consts::OS,
        "arch": std::env::consts::ARCH,
        "unix_time": now,
        "threads": rayon::current_num_threads(),
    })
}
