//! Cost-model bookkeeping for the spike-based routines.
//!
//! Each routine reports its maximum clock time (MCT, counted in fire-to-
//! arrival propagation rounds rather than raw engine ticks), the threshold/
//! weight ratios it configured per phase, and how many times a network was
//! written (instantiated or reconfigured) and read (weight state extracted).
//! `expected_costs` produces the reference bounds for a routine instance and
//! `check_report` compares an actual report against them: MCT may come in
//! under its bound, reads/writes/ratios must match exactly.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AccountingError {
    #[error("unknown routine `{0}`")]
    UnknownRoutine(String),
    #[error("routine `{routine}` needs the `{param}` parameter")]
    MissingParameter {
        routine: Routine,
        param: &'static str,
    },
}

/// Every costed routine in the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Routine {
    NearestNeighbors,
    FirstFireTimes,
    ShortestPathUpperBound,
    Eccentricity,
    SubgraphIterative,
    SubgraphParallel,
    Neighborhood,
    TriangleEdge,
    TriangleVertexIterative,
    TriangleVertexClique,
    CliqueVerify,
    CliqueVerifyPlastic,
    CliqueExpand,
}

impl Routine {
    pub const ALL: [Routine; 13] = [
        Routine::NearestNeighbors,
        Routine::FirstFireTimes,
        Routine::ShortestPathUpperBound,
        Routine::Eccentricity,
        Routine::SubgraphIterative,
        Routine::SubgraphParallel,
        Routine::Neighborhood,
        Routine::TriangleEdge,
        Routine::TriangleVertexIterative,
        Routine::TriangleVertexClique,
        Routine::CliqueVerify,
        Routine::CliqueVerifyPlastic,
        Routine::CliqueExpand,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Routine::NearestNeighbors => "nearest-neighbors",
            Routine::FirstFireTimes => "first-fire-times",
            Routine::ShortestPathUpperBound => "shortest-path-upper-bound",
            Routine::Eccentricity => "eccentricity",
            Routine::SubgraphIterative => "subgraph-iterative",
            Routine::SubgraphParallel => "subgraph-parallel",
            Routine::Neighborhood => "neighborhood",
            Routine::TriangleEdge => "triangle-edge",
            Routine::TriangleVertexIterative => "triangle-vertex-iterative",
            Routine::TriangleVertexClique => "triangle-vertex-clique",
            Routine::CliqueVerify => "clique-verify",
            Routine::CliqueVerifyPlastic => "clique-verify-plastic",
            Routine::CliqueExpand => "clique-expand",
        }
    }
}

impl fmt::Display for Routine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Routine {
    type Err = AccountingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Routine::ALL
            .iter()
            .copied()
            .find(|r| r.name() == s)
            .ok_or_else(|| AccountingError::UnknownRoutine(s.to_string()))
    }
}

/// Cost report emitted by every routine invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub routine: Routine,
    /// Propagation rounds (the routine-level clock measure).
    pub mct: u64,
    /// Operative threshold/weight ratio per phase.
    pub threshold_weight_ratios: Vec<f64>,
    /// Weight/state readouts performed.
    pub reads: u32,
    /// Network instantiations/configurations performed.
    pub writes: u32,
    /// Firings observed across all of the routine's runs.
    pub spike_total: u64,
    /// Raw engine ticks executed across all of the routine's runs; reported
    /// alongside MCT because the two clocks differ by convention.
    pub engine_ticks: u64,
}

/// Instance parameters a cost bound can depend on.
#[derive(Debug, Clone, Copy, Default)]
pub struct CostParams {
    pub vertex_count: usize,
    pub edge_count: usize,
    /// Degree of the queried vertex (triangle routines).
    pub degree: Option<usize>,
    /// Size of the queried subset (clique and subgraph routines).
    pub subset_size: Option<usize>,
}

/// Reference cost bounds for one routine instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostBounds {
    pub routine: Routine,
    pub mct_bound: u64,
    pub threshold_weight_ratios: Vec<f64>,
    pub reads: u32,
    pub writes: u32,
}

fn pairs_of(d: usize) -> u64 {
    (d as u64) * (d as u64).saturating_sub(1) / 2
}

/// Instantiates the reference cost row for a routine.
pub fn expected_costs(
    routine: Routine,
    params: &CostParams,
) -> Result<CostBounds, AccountingError> {
    let n = params.vertex_count as u64;
    let degree = || {
        params.degree.ok_or(AccountingError::MissingParameter {
            routine,
            param: "degree",
        })
    };
    let subset = || {
        params.subset_size.ok_or(AccountingError::MissingParameter {
            routine,
            param: "subset-size",
        })
    };
    let bounds = match routine {
        Routine::NearestNeighbors => CostBounds {
            routine,
            mct_bound: 1,
            threshold_weight_ratios: vec![1.0],
            reads: 0,
            writes: 1,
        },
        Routine::FirstFireTimes | Routine::ShortestPathUpperBound | Routine::Eccentricity => {
            CostBounds {
                routine,
                mct_bound: n,
                threshold_weight_ratios: vec![1.0],
                reads: 0,
                writes: 1,
            }
        }
        Routine::SubgraphIterative => CostBounds {
            routine,
            mct_bound: n + 1,
            threshold_weight_ratios: vec![1.0],
            reads: 0,
            writes: 2,
        },
        Routine::SubgraphParallel => CostBounds {
            routine,
            mct_bound: 2,
            threshold_weight_ratios: vec![1.0],
            reads: 1,
            writes: 2,
        },
        Routine::Neighborhood => CostBounds {
            routine,
            mct_bound: 3,
            threshold_weight_ratios: vec![1.0, 1.0],
            reads: 1,
            writes: 2,
        },
        Routine::TriangleEdge => CostBounds {
            routine,
            mct_bound: 1,
            threshold_weight_ratios: vec![2.0],
            reads: 0,
            writes: 1,
        },
        Routine::TriangleVertexIterative => {
            let d = degree()? as u64;
            CostBounds {
                routine,
                mct_bound: d + 1,
                threshold_weight_ratios: vec![1.0, 2.0],
                reads: 0,
                writes: (d + 1) as u32,
            }
        }
        Routine::TriangleVertexClique => {
            let d = degree()?;
            CostBounds {
                routine,
                mct_bound: pairs_of(d) + 1,
                threshold_weight_ratios: vec![1.0, 2.0],
                reads: 0,
                writes: (pairs_of(d) + 1) as u32,
            }
        }
        Routine::CliqueVerify => {
            let k = subset()? as u64;
            CostBounds {
                routine,
                mct_bound: 1,
                threshold_weight_ratios: vec![k.saturating_sub(1) as f64],
                reads: 0,
                writes: 1,
            }
        }
        Routine::CliqueVerifyPlastic => {
            let k = subset()? as u64;
            CostBounds {
                routine,
                mct_bound: 1,
                threshold_weight_ratios: vec![k.saturating_sub(1) as f64],
                reads: 1,
                writes: 1,
            }
        }
        Routine::CliqueExpand => {
            let k = subset()? as u64;
            // The detection threshold: outsiders fire on k coincident spikes.
            CostBounds {
                routine,
                mct_bound: 1,
                threshold_weight_ratios: vec![k as f64],
                reads: 0,
                writes: 1,
            }
        }
    };
    Ok(bounds)
}

/// One field-level discrepancy between a report and its bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostDiff {
    pub field: &'static str,
    pub actual: String,
    pub expected: String,
}

/// Outcome of checking a report against reference bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostCheck {
    pub passed: bool,
    pub diffs: Vec<CostDiff>,
}

/// MCT must not exceed its bound; reads, writes, and ratios must match.
pub fn check_report(actual: &RunReport, bounds: &CostBounds) -> CostCheck {
    let mut diffs = Vec::new();
    if actual.routine != bounds.routine {
        diffs.push(CostDiff {
            field: "routine",
            actual: actual.routine.to_string(),
            expected: bounds.routine.to_string(),
        });
    }
    if actual.mct > bounds.mct_bound {
        diffs.push(CostDiff {
            field: "mct",
            actual: actual.mct.to_string(),
            expected: format!("<= {}", bounds.mct_bound),
        });
    }
    if actual.reads != bounds.reads {
        diffs.push(CostDiff {
            field: "reads",
            actual: actual.reads.to_string(),
            expected: bounds.reads.to_string(),
        });
    }
    if actual.writes != bounds.writes {
        diffs.push(CostDiff {
            field: "writes",
            actual: actual.writes.to_string(),
            expected: bounds.writes.to_string(),
        });
    }
    if actual.threshold_weight_ratios != bounds.threshold_weight_ratios {
        diffs.push(CostDiff {
            field: "threshold_weight_ratios",
            actual: format!("{:?}", actual.threshold_weight_ratios),
            expected: format!("{:?}", bounds.threshold_weight_ratios),
        });
    }
    CostCheck {
        passed: diffs.is_empty(),
        diffs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, e: usize) -> CostParams {
        CostParams {
            vertex_count: n,
            edge_count: e,
            degree: None,
            subset_size: None,
        }
    }

    #[test]
    fn nearest_neighbor_row() {
        let b = expected_costs(Routine::NearestNeighbors, &params(10, 20)).unwrap();
        assert_eq!(b.mct_bound, 1);
        assert_eq!(b.threshold_weight_ratios, vec![1.0]);
        assert_eq!(b.reads, 0);
        assert_eq!(b.writes, 1);
    }

    #[test]
    fn triangle_vertex_rows_scale_with_degree() {
        let mut p = params(10, 20);
        p.degree = Some(4);
        let it = expected_costs(Routine::TriangleVertexIterative, &p).unwrap();
        assert_eq!(it.mct_bound, 5);
        assert_eq!(it.writes, 5);
        assert_eq!(it.threshold_weight_ratios, vec![1.0, 2.0]);
        let cl = expected_costs(Routine::TriangleVertexClique, &p).unwrap();
        assert_eq!(cl.mct_bound, 7);
        assert_eq!(cl.writes, 7);
    }

    #[test]
    fn clique_rows_use_subset_size() {
        let mut p = params(10, 20);
        p.subset_size = Some(5);
        let v = expected_costs(Routine::CliqueVerify, &p).unwrap();
        assert_eq!(v.threshold_weight_ratios, vec![4.0]);
        assert_eq!(v.mct_bound, 1);
        assert_eq!(v.writes, 1);
        assert_eq!(v.reads, 0);
        let vp = expected_costs(Routine::CliqueVerifyPlastic, &p).unwrap();
        assert_eq!(vp.reads, 1);
    }

    #[test]
    fn parallel_subgraph_row() {
        let b = expected_costs(Routine::SubgraphParallel, &params(8, 12)).unwrap();
        assert_eq!((b.mct_bound, b.reads, b.writes), (2, 1, 2));
    }

    #[test]
    fn eccentricity_bound_is_vertex_count() {
        let b = expected_costs(Routine::Eccentricity, &params(7, 10)).unwrap();
        assert_eq!(b.mct_bound, 7);
    }

    #[test]
    fn missing_parameters_are_reported() {
        let err = expected_costs(Routine::TriangleVertexIterative, &params(5, 5));
        assert_eq!(
            err,
            Err(AccountingError::MissingParameter {
                routine: Routine::TriangleVertexIterative,
                param: "degree"
            })
        );
    }

    #[test]
    fn routine_names_round_trip() {
        for r in Routine::ALL {
            assert_eq!(r.name().parse::<Routine>().unwrap(), r);
        }
        assert!(matches!(
            "no-such-routine".parse::<Routine>(),
            Err(AccountingError::UnknownRoutine(_))
        ));
    }

    #[test]
    fn report_checking_flags_each_field() {
        let bounds = expected_costs(Routine::NearestNeighbors, &params(4, 6)).unwrap();
        let good = RunReport {
            routine: Routine::NearestNeighbors,
            mct: 1,
            threshold_weight_ratios: vec![1.0],
            reads: 0,
            writes: 1,
            spike_total: 4,
            engine_ticks: 2,
        };
        assert!(check_report(&good, &bounds).passed);

        let mut bad = good.clone();
        bad.mct = 3;
        bad.writes = 2;
        let check = check_report(&bad, &bounds);
        assert!(!check.passed);
        let fields: Vec<&str> = check.diffs.iter().map(|d| d.field).collect();
        assert_eq!(fields, vec!["mct", "writes"]);
    }

    #[test]
    fn mct_under_bound_passes() {
        let bounds = expected_costs(Routine::Eccentricity, &params(9, 12)).unwrap();
        let report = RunReport {
            routine: Routine::Eccentricity,
            mct: 4,
            threshold_weight_ratios: vec![1.0],
            reads: 0,
            writes: 1,
            spike_total: 9,
            engine_ticks: 6,
        };
        assert!(check_report(&report, &bounds).passed);
    }
}
