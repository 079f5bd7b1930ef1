//! Acceptance run: fifteen criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary (`harness = false`) so that the output is the
//! report itself. Exits non-zero when any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use gapkdv::band_geometry::{BandSet, Divisor};
use gapkdv::cli::battery::{self, CheckRecord};
use gapkdv::tolerances::Tolerances;

const SEED: u64 = 20_241;

struct Reference {
    bands: BandSet,
    divisor: Divisor,
}

fn reference(gaps: &[(f64, f64)], points: &[(f64, f64)]) -> Reference {
    let bands = BandSet::new(gaps).expect("reference gaps are valid");
    let divisor = Divisor::from_pairs(&bands, points).expect("reference divisor is valid");
    Reference { bands, divisor }
}

struct Criterion {
    number: usize,
    title: &'static str,
    records: Vec<CheckRecord>,
}

impl Criterion {
    fn pass(&self) -> bool {
        !self.records.is_empty() && self.records.iter().all(|r| r.pass)
    }

    fn summary(&self) -> String {
        self.records
            .iter()
            .map(|r| format!("{}{} {:.2e}/{:.0e}", if r.pass { "" } else { "!" }, r.name, r.residual, r.tolerance))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

fn pick(records: &[CheckRecord], names: &[&str]) -> Vec<CheckRecord> {
    records.iter().filter(|r| names.contains(&r.name.as_str())).cloned().collect()
}

fn main() -> ExitCode {
    let start = Instant::now();
    let tol = Tolerances::default();
    let n1 = reference(&[(1.0, 2.0)], &[(1.3, 1.0)]);
    let n2 = reference(&[(1.0, 2.0), (3.0, 4.5)], &[(1.3, 1.0), (3.9, -1.0)]);
    let n3 = reference(&[(0.5, 1.0), (2.0, 3.0), (4.0, 4.6)], &[(0.7, -1.0), (2.5, 1.0), (4.3, 1.0)]);
    let n12 = [&n1, &n2];
    let n123 = [&n1, &n2, &n3];

    let identities: Vec<CheckRecord> = n12
        .iter()
        .enumerate()
        .flat_map(|(i, r)| battery::spectral_identities(&r.bands, &r.divisor, SEED + i as u64, tol, i == 0))
        .collect();
    let per_set =
        |f: &dyn Fn(&Reference) -> Vec<CheckRecord>, sets: &[&Reference]| -> Vec<CheckRecord> { sets.iter().flat_map(|r| f(r)).collect() };

    let criteria = vec![
        Criterion {
            number: 1,
            title: "free operator is exact",
            records: vec![battery::free_case()],
        },
        Criterion {
            number: 2,
            title: "differentials satisfy their gap conditions",
            records: per_set(&|r| vec![battery::differential_normalization(&r.bands, &r.divisor, tol)], &n123),
        },
        Criterion {
            number: 3,
            title: "harmonic measures are consistent",
            records: {
                let mut v = per_set(&|r| vec![battery::harmonic_measure_total(&r.bands, tol)], &n123);
                v.push(battery::harmonic_measure_oracle(&n1.bands, tol));
                v.push(battery::harmonic_measure_oracle(&BandSet::new(&[(0.2, 3.0)]).unwrap(), tol));
                v
            },
        },
        Criterion {
            number: 4,
            title: "Abel map round trip",
            records: vec![battery::abel_round_trip(
                &[n1.bands.clone(), n2.bands.clone(), n3.bands.clone()],
                50,
                SEED,
                tol,
            )],
        },
        Criterion {
            number: 5,
            title: "Wronskian identity",
            records: pick(&identities, &["wronskian"]),
        },
        Criterion {
            number: 6,
            title: "m-function routes and resolvent diagonal",
            records: pick(&identities, &["m_plus_routes", "resolvent_diagonal"]),
        },
        Criterion {
            number: 7,
            title: "reflectionless and pseudocontinuation boundary values",
            records: pick(&identities, &["reflectionless", "pseudocontinuation"]),
        },
        Criterion {
            number: 8,
            title: "Fourier-integral identity",
            records: pick(&identities, &["fourier_integral"]),
        },
        Criterion {
            number: 9,
            title: "chi_1 three ways and the Riccati equation",
            records: per_set(&|r| battery::chi1_and_riccati(&r.bands, &r.divisor, tol), &n12),
        },
        Criterion {
            number: 10,
            title: "KdV residual converges at second order",
            records: vec![battery::kdv_order(&n1.bands, &n1.divisor, tol)],
        },
        Criterion {
            number: 11,
            title: "hierarchy eigenfunction relation and B from A",
            records: per_set(&|r| battery::hierarchy_relations(&r.bands, &r.divisor, tol), &n12),
        },
        Criterion {
            number: 12,
            title: "B-periods of the k = 1 integral",
            records: per_set(&|r| vec![battery::b_periods(&r.bands, 1, tol)], &n12),
        },
        Criterion {
            number: 13,
            title: "asymptotic limits along the negative axis",
            records: per_set(&|r| battery::asymptotic_limits(&r.bands, &r.divisor, tol), &n12),
        },
        Criterion {
            number: 14,
            title: "Widom-Martin sum equals the entropy integral",
            records: vec![battery::entropy_identity(&n2.bands, tol)],
        },
        Criterion {
            number: 15,
            title: "convergence under truncation",
            records: vec![battery::truncation_convergence(5, tol)],
        },
    ];

    let mut failed = 0;
    for c in &criteria {
        let status = if c.pass() { "PASS" } else { "FAIL" };
        if !c.pass() {
            failed += 1;
        }
        println!("[{status}] {:>2} {}: {}", c.number, c.title, c.summary());
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1} s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
