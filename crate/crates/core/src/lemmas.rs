//! Checks behind the `verify-lemmas` command: norm coverage in `P`, absence
//! of the norms −1, −2, −4, the slice maximum table, and the minor gcd /
//! Smith invariant agreement for random embedding matrices.

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::lattice::IntegralLattice;
use crate::matrix::IntMatrix;
use crate::vinberg::{self, FamilyTable, SLICE_CAP};

/// Norms that no vector of `P` attains.
pub const ABSENT_NORMS: [i64; 3] = [1, 2, 4];

#[derive(Clone, Debug)]
pub struct LemmaConfig {
    pub n_max: i64,
    pub slice_max: i128,
    pub table: FamilyTable,
    pub random_matrices: usize,
    pub seed: u64,
}

impl Default for LemmaConfig {
    fn default() -> Self {
        Self { n_max: 200, slice_max: 14, table: FamilyTable::standard(), random_matrices: 200, seed: 7 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &str, failures: Vec<String>, ok_detail: String) -> Check {
    let passed = failures.is_empty();
    let detail = if passed {
        ok_detail
    } else {
        let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
        format!("{} failure(s): {}", failures.len(), shown.join("; "))
    };
    Check { name: name.into(), passed, detail }
}

pub fn run(cfg: &LemmaConfig) -> Result<Report> {
    if cfg.n_max < 1 {
        return Err(Error::OutOfRange { what: "n_max".into(), param: cfg.n_max });
    }
    if !(4..=SLICE_CAP).contains(&cfg.slice_max) {
        return Err(Error::OutOfRange { what: format!("slice_max (allowed 4..={SLICE_CAP})"), param: cfg.slice_max as i64 });
    }
    Ok(Report {
        checks: vec![
            family_table(cfg),
            coverage(cfg),
            absence(cfg),
            slice_table(cfg)?,
            tail_bound(cfg),
            minor_gcd_vs_smith(cfg),
        ],
    })
}

/// Every family instance with norm down to `-n_max` lies in `P` with its
/// advertised norm.
fn family_table(cfg: &LemmaConfig) -> Check {
    let mut failures = Vec::new();
    let mut count = 0;
    for f in &cfg.table.families {
        let mut k = f.param_min;
        while f.in_range(k) && -f.advertised_norm(k) <= cfg.n_max as i128 {
            count += 1;
            if let Err(e) = f.vector(k) {
                failures.push(e.to_string());
            }
            if f.norm.0 == 0 {
                break;
            }
            k += 1;
        }
    }
    check("family table", failures, format!("{count} instances verified"))
}

fn coverage(cfg: &LemmaConfig) -> Check {
    let norms: Vec<i64> = (3..=cfg.n_max).filter(|n| !ABSENT_NORMS.contains(n)).collect();
    let results: Vec<(i64, std::result::Result<bool, String>)> = norms
        .par_iter()
        .map(|&n| {
            let r = match vinberg::search_norm_with(&cfg.table, n, vinberg::default_x0_cap(n)) {
                Some(w) => w.verify(n).map(|()| w.source == vinberg::WitnessSource::Exhaustive).map_err(|e| e.to_string()),
                None => Err("no witness".into()),
            };
            (n, r)
        })
        .collect();
    let mut failures = Vec::new();
    let mut fallback = Vec::new();
    for (n, r) in results {
        match r {
            Ok(true) => fallback.push(n.to_string()),
            Ok(false) => {}
            Err(e) => failures.push(format!("N={n}: {e}")),
        }
    }
    let note = if fallback.is_empty() { String::new() } else { format!(", exhaustive for N={}", fallback.join(",")) };
    check("norm coverage", failures, format!("N in 3..={} except 4{note}", cfg.n_max))
}

fn absence(cfg: &LemmaConfig) -> Check {
    let failures = ABSENT_NORMS
        .iter()
        .filter_map(|&n| vinberg::exhaustive_search(n, cfg.slice_max).map(|v| format!("{v} has norm -{n}")))
        .collect();
    check("absent norms", failures, format!("-1, -2, -4 not attained for x0 <= {}", cfg.slice_max))
}

fn slice_table(cfg: &LemmaConfig) -> Result<Check> {
    let mut failures = Vec::new();
    for m in 4..=cfg.slice_max {
        let got = vinberg::max_norm_in_slice(m)?;
        let want = vinberg::slice_max_formula(m);
        if got != want {
            failures.push(format!("slice {m}: max {got:?}, expected {want:?}"));
            continue;
        }
        let Some(x) = vinberg::slice_maximizer(m) else { continue };
        if !vinberg::enumerate_cone_slice(m)?.contains(&x) || x.norm() != BigInt::from(want.unwrap_or_default()) {
            failures.push(format!("slice {m}: maximizer {x} does not attain {want:?}"));
        }
        if want.is_some_and(|w| w >= -4 && w != -3) {
            failures.push(format!("slice {m}: maximum {want:?} leaves room for small norms"));
        }
    }
    Ok(check("slice maxima", failures, format!("slices 4..={} match", cfg.slice_max)))
}

/// Past the table, each residue class of the closed form decreases, so the
/// first slice past the table bounds the rest.
fn tail_bound(cfg: &LemmaConfig) -> Check {
    let mut failures = Vec::new();
    for m in cfg.slice_max + 1..=cfg.slice_max + 3 {
        match (vinberg::slice_max_formula(m), vinberg::slice_max_formula(m + 3)) {
            (Some(v), Some(next)) if v <= -5 && next < v => {}
            other => failures.push(format!("slice {m}: {other:?}")),
        }
    }
    check("tail bound", failures, format!("maxima <= -5 and decreasing beyond slice {}", cfg.slice_max))
}

fn minor_gcd_vs_smith(cfg: &LemmaConfig) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut failures = Vec::new();
    let mut witnesses = 0;
    for _ in 0..cfg.random_matrices {
        let a = random_full_rank(&mut rng, 4, 8, 5);
        let e = Embedding::induced(IntegralLattice::diagonal(&vec![1; a.ncols()]), a.clone()).expect("shapes agree");
        let d = e.maximal_minor_gcd();
        let product: BigInt = a.smith_invariants().iter().product();
        if d != product {
            failures.push(format!("{a:?}: minor gcd {d}, invariant product {product}"));
        }
        if !d.is_one() {
            witnesses += 1;
            if let Err(err) = e.torsion_witness() {
                failures.push(format!("{a:?}: {err}"));
            }
        }
    }
    check(
        "minor gcd vs Smith",
        failures,
        format!("{} matrices, {witnesses} torsion witnesses replayed", cfg.random_matrices),
    )
}

/// A random `n x m` integer matrix of full row rank with `n <= n_max`,
/// `n <= m <= m_max` and entries in `[-bound, bound]`.
pub fn random_full_rank(rng: &mut impl Rng, n_max: usize, m_max: usize, bound: i64) -> IntMatrix {
    loop {
        let n = rng.gen_range(1..=n_max);
        let m = rng.gen_range(n..=m_max);
        let a = IntMatrix::from_fn(n, m, |_, _| rng.gen_range(-bound..=bound).into());
        if a.rank() == n {
            return a;
        }
    }
}
