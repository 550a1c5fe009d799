use std::io::Write;

use berryquench_core::dynamics::{audit_closed_forms, AuditRecord};
use serde::Serialize;

use super::chain;
use crate::args::AuditArgs;
use crate::output::{emit, to_json};
use crate::{CliResult, EXIT_OK, SCHEMA_VERSION};

#[derive(Debug, Serialize)]
pub struct Skipped {
    pub n_sites: usize,
    pub defect_pairs: usize,
    pub reason: String,
}

#[derive(Debug, Serialize)]
pub struct AuditReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub alpha: f64,
    pub records: Vec<AuditRecord>,
    pub skipped: Vec<Skipped>,
}

pub fn build_report(args: &AuditArgs) -> CliResult<AuditReport> {
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for &n in &args.n {
        let spec = chain(n, 1.0)?;
        let defects: Vec<usize> = if args.defects.is_empty() {
            (0..=spec.pair_count()).collect()
        } else {
            args.defects.clone()
        };
        for d in defects {
            if d > spec.pair_count() {
                skipped.push(Skipped {
                    n_sites: n,
                    defect_pairs: d,
                    reason: format!("more defect pairs than the {} pairs available", spec.pair_count()),
                });
                continue;
            }
            records.push(audit_closed_forms(n, d)?);
        }
    }
    Ok(AuditReport {
        schema_version: SCHEMA_VERSION,
        command: "audit",
        alpha: 1.0,
        records,
        skipped,
    })
}

pub fn run(args: &AuditArgs, out: &mut dyn Write, _err: &mut dyn Write) -> CliResult<i32> {
    let report = build_report(args)?;
    emit(args.common.out.as_deref(), &to_json(&report)?, out)?;
    Ok(EXIT_OK)
}
