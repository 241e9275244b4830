//! Serializable outputs of each subcommand.

use std::collections::{BTreeMap, BTreeSet};

use rotbent::bentlab::{
    corner_probe, jset_bound, sign_corner_pair, structure_report, CornerSums, StructureReport,
};
use rotbent::rotsym::{orbit_counts_by_size, orbit_representatives, orbit_size};
use rotbent::search::{
    brute_force_bent_census, mrs_census, search_degree2, search_homogeneous,
    search_short_cycle_sums, BentCensus, CensusRow, Coverage, Limits, SearchResult,
    VerificationReport,
};
use rotbent::{Result, RotSymSpec};
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// Largest `n` for which `orbits` lists every representative.
pub const MAX_ORBIT_LISTING: usize = 16;

#[derive(Debug, Serialize)]
pub struct Corner {
    pub folded: i64,
    pub reduced: Option<i64>,
    pub sums: Option<CornerSums>,
}

#[derive(Debug, Serialize)]
pub struct JsetReport {
    pub j: Vec<usize>,
    pub bound: u64,
}

#[derive(Debug, Serialize)]
pub struct Analysis {
    pub schema: u32,
    pub command: &'static str,
    pub n: usize,
    pub spec: String,
    pub hex: String,
    pub degree: usize,
    pub affine: bool,
    pub weight: u64,
    pub nonlinearity: u64,
    pub bent: bool,
    pub sign_corners: [i32; 2],
    pub corner: Corner,
    pub jset: Option<JsetReport>,
    pub structure: StructureReport,
}

pub fn analyze(spec: &RotSymSpec) -> Result<Analysis> {
    let n = spec.n();
    let f = spec.build();
    let probe = corner_probe(&f);
    let (a, b) = sign_corner_pair(&f);
    let jset = if n.is_multiple_of(2) {
        let j: BTreeSet<usize> = (n / 2 - 1..n).collect();
        jset_bound(&f, &j)?.map(|bound| JsetReport {
            j: j.into_iter().collect(),
            bound,
        })
    } else {
        None
    };
    let degree = f.degree();
    Ok(Analysis {
        schema: SCHEMA_VERSION,
        command: "analyze",
        n,
        spec: spec.to_string(),
        hex: f.to_hex(),
        degree,
        affine: degree <= 1,
        weight: f.weight(),
        nonlinearity: f.nonlinearity(),
        bent: f.is_bent(),
        sign_corners: [a, b],
        corner: Corner {
            folded: probe.folded,
            reduced: probe.reduced,
            sums: probe.sums,
        },
        jset,
        structure: structure_report(spec),
    })
}

#[derive(Debug, Serialize)]
pub struct OrbitRow {
    pub representative: usize,
    pub size: usize,
    /// `a_0 a_1 … a_{n-1}`.
    pub vector: String,
}

#[derive(Debug, Serialize)]
pub struct Orbits {
    pub schema: u32,
    pub command: &'static str,
    pub n: usize,
    pub total: u64,
    pub counts_by_size: BTreeMap<usize, u64>,
    /// Absent with `--count-only`.
    pub orbits: Option<Vec<OrbitRow>>,
}

pub fn orbits(n: usize, count_only: bool) -> Result<Orbits> {
    let counts_by_size = orbit_counts_by_size(n)?;
    let orbits = if count_only {
        None
    } else {
        if n > MAX_ORBIT_LISTING {
            return Err(rotbent::Error::Config(format!(
                "listing needs n ≤ {MAX_ORBIT_LISTING}; use --count-only"
            )));
        }
        Some(
            orbit_representatives(n)?
                .iter()
                .map(|&r| OrbitRow {
                    representative: r,
                    size: orbit_size(r, n),
                    vector: format!("{r:0n$b}"),
                })
                .collect(),
        )
    };
    Ok(Orbits {
        schema: SCHEMA_VERSION,
        command: "orbits",
        n,
        total: counts_by_size.values().sum(),
        counts_by_size,
        orbits,
    })
}

#[derive(Debug, Serialize)]
pub struct Expansion {
    pub schema: u32,
    pub command: &'static str,
    pub n: usize,
    pub spec: String,
    pub monomials: Vec<Vec<usize>>,
    pub hex: String,
}

pub fn expand(spec: &RotSymSpec) -> Expansion {
    Expansion {
        schema: SCHEMA_VERSION,
        command: "expand",
        n: spec.n(),
        spec: spec.to_string(),
        monomials: spec.expand().monomials().iter().cloned().collect(),
        hex: spec.build().to_hex(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SearchKind {
    /// Sums of distinct terms of one degree.
    Homogeneous,
    /// Sums of short-cycle terms of any degree.
    ShortCycle,
    /// Sums of quadratic terms.
    Degree2,
}

#[derive(Debug, Serialize)]
pub struct Search {
    pub schema: u32,
    pub command: &'static str,
    pub n: usize,
    pub kind: SearchKind,
    pub degree: Option<usize>,
    pub instances: u64,
    pub coverage: Coverage,
    pub bent: Vec<String>,
}

pub fn search(
    n: usize,
    kind: SearchKind,
    degree: Option<usize>,
    limits: &Limits,
) -> Result<Search> {
    let result: SearchResult = match kind {
        SearchKind::Homogeneous => {
            let d = degree.ok_or_else(|| {
                rotbent::Error::Config("homogeneous search needs --degree".into())
            })?;
            search_homogeneous(n, d, limits)?
        }
        SearchKind::ShortCycle => search_short_cycle_sums(n, limits)?,
        SearchKind::Degree2 => search_degree2(n, limits)?,
    };
    Ok(Search {
        schema: SCHEMA_VERSION,
        command: "search",
        n,
        kind,
        degree: degree.filter(|_| kind == SearchKind::Homogeneous),
        instances: result.instances,
        coverage: result.coverage,
        bent: result.bent.iter().map(ToString::to_string).collect(),
    })
}

#[derive(Debug, Serialize)]
pub struct Verification {
    pub command: &'static str,
    #[serde(flatten)]
    pub report: VerificationReport,
}

#[derive(Debug, Serialize)]
pub struct Census {
    pub schema: u32,
    pub command: &'static str,
    pub n: usize,
    pub rows: Vec<CensusRow>,
    pub brute_force: Option<BentCensus>,
}

pub fn census(n: usize, brute_force: bool) -> Result<Census> {
    Ok(Census {
        schema: SCHEMA_VERSION,
        command: "census",
        n,
        rows: mrs_census(n)?,
        brute_force: if brute_force {
            Some(brute_force_bent_census(n)?)
        } else {
            None
        },
    })
}
