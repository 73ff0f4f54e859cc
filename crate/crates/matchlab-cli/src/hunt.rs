//! Counterexample hunting: scan for unmatched pairs on both the group and
//! the linear side, recording whether each find is also locally unmatched.

use crate::campaign::abelian_groups_up_to;
use crate::io::{field_instance_value, group_instance_value};
use crate::store::CertStore;
use crate::{CliError, CliResult};
use matchlab_core::cert::Certificate;
use matchlab_core::field::{
    enumerate_subspaces, gaussian_binomial, is_matched, linear_locally_matched, BasisMode,
    FieldCtx, LocalSearchConfig, Subspace,
};
use matchlab_core::group::{
    construct_counterexample, find_matching, is_locally_matched_with, subgroups, GroupElement,
    GroupSubset, MatchOutcome,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[clap(rename_all = "snake_case")]
pub enum HuntDomain {
    Group,
    Linear,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HuntConfig {
    pub domain: HuntDomain,
    /// Group side: scan all abelian groups up to this order.
    pub max_order: u64,
    /// Linear side: fields to scan.
    pub fields: Vec<(u64, usize)>,
    /// Linear side: scan subspace pairs up to this dimension.
    pub max_dim: usize,
    /// Stop collecting after this many unmatched pairs per group/field.
    pub max_findings_each: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

impl Default for HuntConfig {
    fn default() -> Self {
        HuntConfig {
            domain: HuntDomain::Group,
            max_order: 8,
            fields: vec![(2, 4)],
            max_dim: 2,
            max_findings_each: 5,
            out_dir: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HuntFinding {
    pub label: String,
    pub instance: Value,
    /// Whether the unmatched pair is also locally unmatched.
    pub locally_matched: bool,
}

#[derive(Debug, Serialize)]
pub struct HuntReport {
    pub config: HuntConfig,
    pub scanned: u64,
    pub findings: Vec<HuntFinding>,
    pub certificates: Vec<String>,
}

const PAIR_SCAN_BUDGET: u64 = 2_000_000;

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn hunt_group(
    config: &HuntConfig,
    report: &mut HuntReport,
    store: &Option<CertStore>,
) -> CliResult<()> {
    for g in abelian_groups_up_to(config.max_order) {
        if g.is_trivial() {
            continue;
        }
        // Closed-form construction first.
        if let Some(ce) = construct_counterexample(&g).map_err(CliError::from)? {
            let local = is_locally_matched_with(
                &ce.a,
                &ce.b,
                &subgroups(&g, Some(ce.a.len() as u64)).map_err(CliError::from)?,
            )
            .map_err(CliError::from)?;
            report.findings.push(HuntFinding {
                label: "closed_form_counterexample".into(),
                instance: group_instance_value(&ce.a, &ce.b),
                locally_matched: local.locally_matched,
            });
            if let Some(store) = store {
                let name =
                    store.put(&Certificate::from_hall_violator(&ce.a, &ce.b, &ce.violator))?;
                if !report.certificates.contains(&name) {
                    report.certificates.push(name);
                }
            }
        }

        // Exhaustive scan in canonical order.
        let elems = g.elements().map_err(CliError::from)?;
        let nonzero: Vec<GroupElement> =
            elems.iter().filter(|e| **e != g.zero()).cloned().collect();
        let subs = subgroups(&g, None).map_err(CliError::from)?;
        let mut found_here = 0usize;
        'scan: for k in 1..=nonzero.len() {
            for ai in combinations(elems.len(), k) {
                for bi in combinations(nonzero.len(), k) {
                    if report.scanned >= PAIR_SCAN_BUDGET {
                        break 'scan;
                    }
                    report.scanned += 1;
                    let a =
                        GroupSubset::new(g.clone(), ai.iter().map(|&i| elems[i].clone()).collect())
                            .map_err(CliError::from)?;
                    let b = GroupSubset::new(
                        g.clone(),
                        bi.iter().map(|&i| nonzero[i].clone()).collect(),
                    )
                    .map_err(CliError::from)?;
                    if let MatchOutcome::Unmatched(v) =
                        find_matching(&a, &b).map_err(CliError::from)?
                    {
                        let local =
                            is_locally_matched_with(&a, &b, &subs).map_err(CliError::from)?;
                        report.findings.push(HuntFinding {
                            label: "unmatched_pair".into(),
                            instance: group_instance_value(&a, &b),
                            locally_matched: local.locally_matched,
                        });
                        if let Some(store) = store {
                            let name = store.put(&Certificate::from_hall_violator(&a, &b, &v))?;
                            if !report.certificates.contains(&name) {
                                report.certificates.push(name);
                            }
                        }
                        found_here += 1;
                        if found_here >= config.max_findings_each {
                            break 'scan;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn hunt_linear(
    config: &HuntConfig,
    report: &mut HuntReport,
    store: &Option<CertStore>,
) -> CliResult<()> {
    for &(p, n) in &config.fields {
        let ctx = FieldCtx::new(p, n, None).map_err(CliError::from)?;
        let full = Subspace::full(p, n);
        let one = ctx.one();
        let mut found_here = 0usize;
        'field: for m in 1..=config.max_dim.min(n) {
            let count = gaussian_binomial(n, m, p);
            if count * count > PAIR_SCAN_BUDGET as u128 {
                break;
            }
            let spaces = enumerate_subspaces(&full, m);
            for a in &spaces {
                for b in &spaces {
                    if b.contains_element(&one) {
                        continue;
                    }
                    report.scanned += 1;
                    let decision =
                        is_matched(&ctx, a, b, BasisMode::Exhaustive).map_err(CliError::from)?;
                    if decision.matched {
                        continue;
                    }
                    let local = linear_locally_matched(&ctx, a, b, &LocalSearchConfig::default())
                        .map_err(CliError::from)?;
                    report.findings.push(HuntFinding {
                        label: "unmatched_subspace_pair".into(),
                        instance: field_instance_value(&ctx, a, b),
                        locally_matched: local.locally_matched,
                    });
                    if let Some(store) = store {
                        if let Some((basis, v)) = decision.counterexample {
                            let name = store.put(&Certificate::from_criterion_violator(
                                &ctx, a, b, basis, v.indices, v.witness, v.deficit,
                            ))?;
                            if !report.certificates.contains(&name) {
                                report.certificates.push(name);
                            }
                        }
                    }
                    found_here += 1;
                    if found_here >= config.max_findings_each {
                        break 'field;
                    }
                }
            }
        }
    }
    Ok(())
}

/// Search for unmatched pairs and report whether each is locally unmatched
/// as well (data bearing on the contrapositive of the local-to-global
/// theorems).
pub fn hunt_counterexample(config: &HuntConfig) -> CliResult<HuntReport> {
    let store = match &config.out_dir {
        Some(dir) => Some(CertStore::open(dir)?),
        None => None,
    };
    let mut report = HuntReport {
        config: config.clone(),
        scanned: 0,
        findings: Vec::new(),
        certificates: Vec::new(),
    };
    match config.domain {
        HuntDomain::Group => hunt_group(config, &mut report, &store)?,
        HuntDomain::Linear => hunt_linear(config, &mut report, &store)?,
    }
    if let Some(dir) = &config.out_dir {
        std::fs::write(
            dir.join("hunt_report.json"),
            serde_json::to_string_pretty(&report).unwrap(),
        )?;
    }
    Ok(report)
}
