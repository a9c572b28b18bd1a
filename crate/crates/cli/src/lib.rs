//! Library half of the verification harness: the on-disk operator cache,
//! the report writers, and the command implementations the binary calls.

pub mod cache;
pub mod report;

use cache::FileCache;
use eisver_core::arith;
use eisver_core::cuspidal;
use eisver_core::eisenstein;
use eisver_core::hecke::{HeckeCache, MemoCache, NoCache};
use eisver_core::torsion::{self, ScanConfig};
use eisver_core::Level;
use report::Report;
use std::collections::BTreeMap;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_TIGHT: i32 = 3;
pub const EXIT_REFUTED: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            "text" => Some(Format::Text),
            _ => None,
        }
    }
}

/// Validated run configuration shared by the commands.
pub struct RunConfig {
    pub cache_dir: Option<PathBuf>,
    pub format: Format,
    pub verbose: bool,
    pub r_budget: usize,
}

impl RunConfig {
    /// The environment variable wins over the flag, as documented.
    pub fn resolve_cache_dir(flag: Option<PathBuf>) -> Option<PathBuf> {
        std::env::var_os("EISVER_CACHE_DIR")
            .map(PathBuf::from)
            .or(flag)
    }

    fn open_cache(&self) -> Result<Box<dyn HeckeCache>, String> {
        match &self.cache_dir {
            Some(dir) => FileCache::new(dir)
                .map(|c| Box::new(c) as Box<dyn HeckeCache>)
                .map_err(|e| format!("cannot open cache directory: {e}")),
            None => Ok(Box::new(NoCache)),
        }
    }
}

fn render(report: &Report, format: Format, verbose: bool) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(verbose),
    }
}

fn require_prime(name: &str, value: u64) -> Result<(), String> {
    if arith::is_prime(value) {
        Ok(())
    } else {
        Err(format!("{name} = {value} is not prime"))
    }
}

/// `verify --p --q --ell`: the full pipeline for one triple.
pub fn cmd_verify(
    cfg: &RunConfig,
    p: u64,
    q: u64,
    ell: u64,
) -> Result<(String, i32), String> {
    require_prime("p", p)?;
    require_prime("q", q)?;
    require_prime("ell", ell)?;
    if p == q {
        return Err("p and q must be distinct".into());
    }
    let cache = cfg.open_cache()?;
    let memo = MemoCache::new(Some(cache.as_ref()));
    let level = Level::compute(p * q, &memo).map_err(|e| e.to_string())?;
    let eta = cuspidal::eta_lattice(p * q).map_err(|e| e.to_string())?;
    let verdicts = torsion::verify_triple(&level, &eta, p, q, ell, cfg.r_budget, &memo)
        .map_err(|e| e.to_string())?;
    let mut params = BTreeMap::new();
    params.insert("command".into(), "verify".into());
    params.insert("p".into(), p.to_string());
    params.insert("q".into(), q.to_string());
    params.insert("ell".into(), ell.to_string());
    params.insert("r_budget".into(), cfg.r_budget.to_string());
    let report = Report::new(params, &verdicts);
    let code = match report.worst_status() {
        Some(torsion::Status::RefutedFlag) => EXIT_REFUTED,
        Some(torsion::Status::UpperBoundNotTight) => EXIT_NOT_TIGHT,
        _ => EXIT_OK,
    };
    Ok((render(&report, cfg.format, cfg.verbose), code))
}

/// `scan --pq-max --ell-max`: the full grid.
pub fn cmd_scan(
    cfg: &RunConfig,
    pq_max: u64,
    ell_max: u64,
    out: Option<&PathBuf>,
) -> Result<(String, i32), String> {
    let cache = cfg.open_cache()?;
    let scan_cfg = ScanConfig {
        pq_max,
        ell_max,
        r_budget: cfg.r_budget,
    };
    let outcome = torsion::scan(&scan_cfg, cache.as_ref());
    let mut params = BTreeMap::new();
    params.insert("command".into(), "scan".into());
    params.insert("pq_max".into(), pq_max.to_string());
    params.insert("ell_max".into(), ell_max.to_string());
    params.insert("r_budget".into(), cfg.r_budget.to_string());
    let report = Report::from_scan(params, &outcome);
    let rendered = render(&report, cfg.format, cfg.verbose);
    if let Some(path) = out {
        std::fs::write(path, &rendered)
            .map_err(|e| format!("cannot write report to {}: {e}", path.display()))?;
    }
    let code = if report.worst_status() == Some(torsion::Status::RefutedFlag) {
        EXIT_REFUTED
    } else {
        EXIT_OK
    };
    let emitted = if out.is_some() {
        format!(
            "wrote {} verdicts ({} errors)\n",
            report.verdicts.len(),
            report.errors.len()
        )
    } else {
        rendered
    };
    Ok((emitted, code))
}

/// `inspect --N`: dump of the level data. Accepts any squarefree level for
/// the geometric and cuspidal data; the Eisenstein-ideal block needs a
/// semiprime.
pub fn cmd_inspect(cfg: &RunConfig, n: u64) -> Result<(String, i32), String> {
    if n < 2 || !arith::is_squarefree(n) {
        return Err(format!("N = {n} is not a squarefree level >= 2"));
    }
    let cache = cfg.open_cache()?;
    let memo = MemoCache::new(Some(cache.as_ref()));
    let semiprime = arith::semiprime_factors(n);
    let space = eisver_core::modsym::ManinSpace::build(n).map_err(|e| e.to_string())?;
    let eta = cuspidal::eta_lattice(n).map_err(|e| e.to_string())?;
    let bound = eisver_core::hecke::sturm_bound(n);
    let mut out = String::new();
    match semiprime {
        Some((p, q)) => out.push_str(&format!("level N = {n} = {p} * {q}\n")),
        None => out.push_str(&format!("level N = {n}\n")),
    }
    out.push_str(&format!("genus g = {}\n", space.genus()));
    out.push_str(&format!(
        "cusps ({}): {}\n",
        space.cusp_count(),
        space
            .cusps
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    ));
    out.push_str(&format!("sturm bound B = {bound}\n"));
    let structure = eta.group_structure().map_err(|e| e.to_string())?;
    out.push_str(&format!("cuspidal class group = {structure}"));
    if let Some(order) = structure.order() {
        out.push_str(&format!(" (order {order})\n"));
    } else {
        out.push('\n');
    }

    let algebra = match semiprime {
        Some((p, q)) => {
            let alg = eisver_core::hecke::HeckeAlgebra::build(&space, &memo)
                .map_err(|e| e.to_string())?;
            out.push_str(&format!(
                "hecke algebra rank = {} (saturation index {})\n",
                alg.rank(),
                alg.saturation_index
            ));
            for (x, y) in [(p, q), (q, p)] {
                let quotients =
                    eisenstein::orientation_quotients(&alg, x, y).map_err(|e| e.to_string())?;
                let fmt_index = |rep: &eisenstein::QuotientReport| match &rep.index {
                    Some(i) => i.to_string(),
                    None => "infinite".to_string(),
                };
                out.push_str(&format!(
                    "orientation (p, q) = ({x}, {y}): [T:I0] = {}, [T:I1] = {}, [T:I2] = {}, [T:I3] = {}\n",
                    fmt_index(&quotients.q0),
                    fmt_index(&quotients.q1),
                    fmt_index(&quotients.q2),
                    fmt_index(&quotients.q3),
                ));
                let profile = torsion::evaluate_conditions(x, y, x);
                out.push_str(&format!(
                    "  conditions: P = {}, q ≡ 1 mod p: {}, q ≡ 1 mod P: {}, power residue: {}, p-primary case: {}\n",
                    profile
                        .cap_p
                        .map(|v| v.to_string())
                        .unwrap_or_else(|| "-".into()),
                    profile.q_is_1_mod_p,
                    profile.q_is_1_mod_cap,
                    profile
                        .power_residue
                        .map(|v| v.to_string())
                        .unwrap_or_else(|| "-".into()),
                    profile
                        .p_primary_case
                        .map(|v| v.to_string())
                        .unwrap_or_else(|| "-".into()),
                ));
            }
            Some(alg)
        }
        None => None,
    };

    out.push_str("hecke matrices on the cuspidal subspace:\n");
    for idx in 1..=bound {
        let m = match &algebra {
            Some(alg) => alg.operator_matrices[&idx].clone(),
            None => eisver_core::hecke::hecke_matrix_cached(&space, idx, &memo),
        };
        let name = if n % idx == 0 && arith::is_prime(idx) {
            format!("U_{idx}")
        } else {
            format!("T_{idx}")
        };
        if cfg.verbose || space.genus() <= 3 {
            out.push_str(&format!("{name} =\n"));
            for r in 0..m.rows() {
                out.push_str("  [");
                let row: Vec<String> = m.row(r).iter().map(|e| e.to_string()).collect();
                out.push_str(&row.join(", "));
                out.push_str("]\n");
            }
        } else {
            out.push_str(&format!("{name}: trace {}\n", m.trace()));
        }
    }
    Ok((out, EXIT_OK))
}
