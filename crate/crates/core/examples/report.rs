//! Running a verification suite from code and rendering its report, as the
//! command-line driver does.

use superjordan::cli::{run, RunConfig, Task};

fn main() {
    let mut cfg = RunConfig::new(Task::CupTable);
    cfg.max_index = 2;
    cfg.max_pq = 1;
    let report = run(&cfg).expect("valid configuration");
    println!("{}", report.to_markdown().lines().take(16).collect::<Vec<_>>().join("\n"));
    println!("…\n{} of {} checks pass", report.summary.passed, report.summary.total);
}
