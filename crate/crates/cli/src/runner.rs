//! Suite execution: a small worker pool over the suite list with
//! per-suite result slots, so output order never depends on scheduling.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use sklyanin_core::suites::{suites, SuiteParams};
use sklyanin_core::IdentityReport;

use crate::config::SuiteConfig;

pub struct RunOutcome {
    pub reports: Vec<IdentityReport>,
    pub all_pass: bool,
}

/// Run the selected suites with up to `jobs` worker threads.
pub fn run(cfg: &SuiteConfig, selected: &[String]) -> sklyanin_core::Result<RunOutcome> {
    let ctx = cfg.context()?;
    let jobs = cfg.jobs.max(1);

    // materialize one params struct per suite, in registry order
    let plan: Vec<(&'static str, SuiteParams)> = suites()
        .iter()
        .filter(|s| selected.iter().any(|n| n == s.name))
        .map(|s| {
            let mut params = SuiteParams::new(ctx.clone());
            if let Some(ov) = cfg.overrides.get(s.name) {
                params.tolerance = ov.tol;
                params.samples = ov.samples;
                params.truncation = ov.truncation;
                params.spins = ov.spins.clone();
            }
            (s.name, params)
        })
        .collect();

    let slots: Vec<Mutex<Option<Vec<IdentityReport>>>> =
        plan.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);

    std::thread::scope(|scope| {
        for _ in 0..jobs.min(plan.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= plan.len() {
                    break;
                }
                let (name, params) = &plan[i];
                let result = catch_unwind(AssertUnwindSafe(|| {
                    sklyanin_core::suites::run_suite(name, params).unwrap_or_default()
                }))
                .unwrap_or_else(|panic| {
                    let msg = panic
                        .downcast_ref::<&str>()
                        .map(|s| s.to_string())
                        .or_else(|| panic.downcast_ref::<String>().cloned())
                        .unwrap_or_else(|| "suite panicked".to_string());
                    vec![IdentityReport::failed(name, "suite", "-", 0.0, msg, 0.0)]
                });
                *slots[i].lock().unwrap() = Some(result);
            });
        }
    });

    let mut reports = Vec::new();
    for slot in slots {
        if let Some(batch) = slot.into_inner().unwrap() {
            reports.extend(batch);
        }
    }
    let all_pass = reports.iter().all(|r| r.pass);
    Ok(RunOutcome { reports, all_pass })
}
