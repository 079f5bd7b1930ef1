//! The verification battery: one function per check, each returning
//! [`CheckRecord`]s. The `verify` command runs them on the configured band
//! set; the acceptance target runs them on fixed reference sets.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::abel_flow::{AbelMap, FlowState};
use crate::abelian::{b_period_check, green_ratio_limit, theta_decay, widom_sum_and_entropy, Domain, GreenPole, ThetaK};
use crate::band_geometry::{BandSet, Divisor};
use crate::error::Result;
use crate::kdv::{
    b_from_a_identity_check, chi1_three_way, eigenfunction_relation_check, kdv_convergence, kdv_residual, linspace, potential_grid,
    riccati_check,
};
use crate::numerics::quadrature::gauss_legendre;
use crate::spectral::identities::{
    fourier_residuals, m_route_residual, pseudocontinuation_residual, reflectionless_residual, wronskian_residual,
};
use crate::spectral::{default_samples, geometric_family, truncation_study, IdentitySamples, SpectralContext, WeylFunctions};
use crate::tolerances::Tolerances;

/// One named check: its largest residual against a tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// The mathematical statement the check tests.
    pub anchor: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub detail: Value,
}

/// Residual recorded for a check whose computation itself failed.
pub const FAILED_RESIDUAL: f64 = f64::MAX;

impl CheckRecord {
    fn new(name: &str, anchor: &str, residual: f64, tolerance: f64, detail: Value) -> Self {
        let finite = if residual.is_finite() { residual } else { FAILED_RESIDUAL };
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            residual: finite,
            tolerance,
            pass: residual.is_finite() && residual < tolerance,
            detail,
        }
    }

    /// Same, with an extra condition that must also hold.
    fn with_condition(mut self, ok: bool) -> Self {
        self.pass &= ok;
        self
    }

    fn failed(name: &str, anchor: &str, tolerance: f64, err: &crate::Error) -> Self {
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            residual: FAILED_RESIDUAL,
            tolerance,
            pass: false,
            detail: json!({ "error": err.to_string() }),
        }
    }
}

/// Runs `f`, turning an error into a failed record.
fn guarded(name: &str, anchor: &str, tolerance: f64, f: impl FnOnce() -> Result<CheckRecord>) -> CheckRecord {
    f().unwrap_or_else(|e| CheckRecord::failed(name, anchor, tolerance, &e))
}

/// Sample points of the eigenfunction relation.
pub const RELATION_SAMPLES: [C64; 5] = [
    C64 { re: -1.5, im: 0.5 },
    C64 { re: 0.4, im: 0.8 },
    C64 { re: 2.5, im: 1.0 },
    C64 { re: -4.0, im: 0.1 },
    C64 { re: 1.2, im: 0.3 },
];

/// Accepted window for an empirical second-order convergence rate.
pub const ORDER_WINDOW: f64 = 0.2;

/// Below this the finite-difference residuals are at rounding level and an
/// observed order carries no information.
const ROUNDING_FLOOR: f64 = 1e-10;

fn domain(bands: &BandSet, tol: Tolerances) -> Result<Domain> {
    Domain::with_tolerances(bands.clone(), tol)
}

/// N = 0: V ≡ 0 on a 32×32 lattice, m₊(−1) = −1, Θ(−1) = i.
pub fn free_case() -> CheckRecord {
    let (name, anchor) = ("free_case", "free operator: V ≡ 0, m₊(−1) = −1 and Θ(−1) = i");
    guarded(name, anchor, 1e-10, || {
        let d = Domain::new(BandSet::free())?;
        let martin = ThetaK::build(&d, 0)?;
        let t1 = ThetaK::build(&d, 1)?;
        let map = AbelMap::build(&d, &martin)?;
        let flow = FlowState::new(&map, &Divisor::empty(), &martin, &t1)?;
        let grid = potential_grid(&map, &flow, &linspace(-2.0, 2.0, 32), &linspace(-1.0, 1.0, 32));
        let v_max = grid.v.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        let m = WeylFunctions::new(&d, &Divisor::empty()).m_plus(C64::new(-1.0, 0.0))?;
        let theta = martin.eval(&d, C64::new(-1.0, 0.0))?;
        let m_err = (m + 1.0).norm();
        let theta_err = (theta - C64::new(0.0, 1.0)).norm();
        let worst = v_max.max(m_err).max(theta_err);
        Ok(CheckRecord::new(
            name,
            anchor,
            worst,
            1e-10,
            json!({ "max_abs_v": v_max, "m_plus_error": m_err, "theta_error": theta_err }),
        )
        .with_condition(grid.is_complete() && m_err < 1e-12 && theta_err < 1e-12))
    })
}

/// Gap conditions of dΘ⁽⁰⁾, dΘ⁽¹⁾ and of d log Φ for poles at −1 and at the
/// divisor points, re-evaluated after construction.
pub fn differential_normalization(bands: &BandSet, d: &Divisor, tol: Tolerances) -> CheckRecord {
    let (name, anchor) = (
        "differential_normalization",
        "every gap integral of dΘ⁽ᵏ⁾ (k = 0, 1) and of Re d log Φ vanishes",
    );
    guarded(name, anchor, 1e-10, || {
        let dom = domain(bands, tol)?;
        let mut theta = Vec::new();
        for k in 0..=1 {
            theta.push(ThetaK::build(&dom, k)?.gap_residuals.iter().fold(0.0f64, |m, r| m.max(*r)));
        }
        let mut green: f64 = 0.0;
        for pole in std::iter::once(-1.0).chain(d.lambdas()) {
            let g = GreenPole::build(&dom, pole)?;
            green = green.max(g.gap_residuals().iter().fold(0.0f64, |m, r| m.max(*r)));
        }
        let worst = theta.iter().fold(green, |m, r| m.max(*r));
        Ok(CheckRecord::new(
            name,
            anchor,
            worst,
            1e-10,
            json!({ "theta0": theta[0], "theta1": theta[1], "green": green }),
        ))
    })
}

/// ω(λ₀, E₁) for one gap (a, b) and λ₀ < 0, as a ratio of elliptic
/// integrals: ω is the normalised imaginary part of ∫₀^λ dξ/√s, which is 0
/// on [0, a] and constant on [b, ∞). With ξ = −u² the numerator is a
/// smooth integral; the denominator is the complete integral 2K/√b,
/// evaluated by the arithmetic–geometric mean.
pub fn one_gap_harmonic_measure(a: f64, b: f64, lambda0: f64) -> f64 {
    assert!(lambda0 < 0.0 && 0.0 < a && a < b);
    let top = (-lambda0).sqrt();
    let (x, w) = gauss_legendre(32);
    let panels = 16;
    let h = top / panels as f64;
    let mut num = 0.0;
    for p in 0..panels {
        let c = (p as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            let u = c + 0.5 * h * xi;
            num += wi * 0.5 * h * 2.0 / ((u * u + a) * (u * u + b)).sqrt();
        }
    }
    let (mut p, mut q) = (1.0f64, (a / b).sqrt());
    // Quadratic convergence: a handful of steps reach the last ulp, after
    // which p and q may oscillate, so the loop is bounded.
    for _ in 0..40 {
        if (p - q).abs() <= 4.0 * f64::EPSILON * p {
            break;
        }
        (p, q) = (0.5 * (p + q), (p * q).sqrt());
    }
    let k = PI / (2.0 * p);
    num / (2.0 * k / b.sqrt())
}

/// ω(−1, E₀) = 1 and ω(−1, E_k) strictly decreasing in k.
pub fn harmonic_measure_total(bands: &BandSet, tol: Tolerances) -> CheckRecord {
    let (name, anchor) = ("harmonic_measure_total", "ω(λ₀, E) = 1 and ω(λ₀, E_k) decreases strictly in k");
    guarded(name, anchor, 1e-10, || {
        let dom = domain(bands, tol)?;
        let w = GreenPole::harmonic_measures(&dom, -1.0)?;
        let decreasing = w.windows(2).all(|p| p[1] < p[0]) && w.last().is_some_and(|v| *v > 0.0);
        Ok(CheckRecord::new(
            name,
            anchor,
            (w[0] - 1.0).abs(),
            1e-10,
            json!({ "measures": w, "strictly_decreasing": decreasing }),
        )
        .with_condition(decreasing))
    })
}

/// One-gap harmonic measure against the elliptic-integral oracle, on the
/// first gap of the band set.
pub fn harmonic_measure_oracle(bands: &BandSet, tol: Tolerances) -> CheckRecord {
    let (name, anchor) = (
        "harmonic_measure_oracle",
        "one-gap ω(−1, E₁) equals the elliptic-integral Dirichlet solution",
    );
    guarded(name, anchor, 1e-6, || {
        if bands.is_empty() {
            return Ok(CheckRecord::new(name, anchor, 0.0, 1e-6, json!({ "skipped": "no gaps" })));
        }
        let one = bands.truncate(1)?;
        let dom = domain(&one, tol)?;
        let g = one.gap(0);
        let computed = GreenPole::harmonic_measures(&dom, -1.0)?[1];
        let oracle = one_gap_harmonic_measure(g.a, g.b, -1.0);
        Ok(CheckRecord::new(
            name,
            anchor,
            (computed - oracle).abs(),
            1e-6,
            json!({ "computed": computed, "oracle": oracle }),
        ))
    })
}

/// Random divisors mapped to characters and inverted back.
pub fn abel_round_trip(sets: &[BandSet], count: usize, seed: u64, tol: Tolerances) -> CheckRecord {
    let (name, anchor) = ("abel_round_trip", "the Abel map is inverted by Jacobi inversion");
    guarded(name, anchor, 1e-8, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        let mut sign_mismatches = 0usize;
        let mut done = 0usize;
        let usable: Vec<&BandSet> = sets.iter().filter(|b| !b.is_empty()).collect();
        if usable.is_empty() {
            return Ok(CheckRecord::new(name, anchor, 0.0, 1e-8, json!({ "skipped": "no gaps" })));
        }
        for (i, bands) in usable.iter().enumerate() {
            let share = count / usable.len() + usize::from(i < count % usable.len());
            let dom = domain(bands, tol)?;
            let martin = ThetaK::build(&dom, 0)?;
            let map = AbelMap::build(&dom, &martin)?;
            for _ in 0..share {
                let pairs: Vec<(f64, f64)> = bands
                    .gaps()
                    .iter()
                    .map(|g| {
                        (
                            g.a + g.width() * rng.gen_range(0.0..1.0),
                            if rng.gen::<bool>() { 1.0 } else { -1.0 },
                        )
                    })
                    .collect();
                let div = Divisor::from_pairs(bands, &pairs)?;
                let back = map.invert(&map.character(&div)?, &map.base_divisor())?;
                let err = back
                    .lambdas()
                    .iter()
                    .zip(div.lambdas())
                    .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
                // At a band edge the two sheets meet and the sign carries no information.
                let sign_ok = back
                    .points()
                    .iter()
                    .zip(div.points())
                    .all(|(p, q)| p.eps == q.eps || is_endpoint(bands, q.lambda));
                if !sign_ok {
                    sign_mismatches += 1;
                }
                worst = worst.max(err);
                done += 1;
            }
        }
        Ok(CheckRecord::new(
            name,
            anchor,
            worst,
            1e-8,
            json!({ "divisors": done, "sheet_mismatches": sign_mismatches }),
        )
        .with_condition(sign_mismatches == 0))
    })
}

fn is_endpoint(bands: &BandSet, x: f64) -> bool {
    bands.gaps().iter().any(|g| x == g.a || x == g.b)
}

/// The spectral identities for one divisor: Wronskian, the two m₊ routes,
/// the resolvent diagonal, reflectionlessness, pseudocontinuation and the
/// Fourier-integral identity (the last only when `fourier` is set).
pub fn spectral_identities(bands: &BandSet, d: &Divisor, seed: u64, tol: Tolerances, fourier: bool) -> Vec<CheckRecord> {
    const NAMES: [(&str, &str, f64); 6] = [
        ("wronskian", "e_{α+𝔧}ẽ_α + e_αẽ_{α+𝔧} = 𝒲/(√λ·Θ′) in the upper half-plane", 1e-8),
        ("m_plus_routes", "m₊ from the resolvent poles equals m₊(0) + i√λ·e_{α+𝔧}/e_α", 1e-8),
        ("resolvent_diagonal", "m₊ + m₋ = −1/R", 1e-9),
        ("reflectionless", "m₊(ξ+i0) + conj m₋(ξ+i0) = 0 on the bands", 1e-4),
        ("pseudocontinuation", "𝒲(ξ)·conj e_α(ξ) = ẽ_α(ξ) on the bands", 1e-4),
        (
            "fourier_integral",
            "k^α − E(x)k^{α(x)} equals the integral of E·e·conj e along the flow",
            1e-6,
        ),
    ];
    let run = || -> Result<Vec<CheckRecord>> {
        let dom = domain(bands, tol)?;
        let ctx = SpectralContext::build(&dom)?;
        let bundle = ctx.bundle(d)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = IdentitySamples::random(bands, &mut rng, 20, 10);
        let w = wronskian_residual(&bundle, &samples.interior)?;
        let (routes, diag) = m_route_residual(&bundle, &samples.interior)?;
        let refl = reflectionless_residual(&bundle, &samples.band)?;
        let pseudo = pseudocontinuation_residual(&bundle, &samples.band)?;
        let mut out = vec![
            CheckRecord::new(NAMES[0].0, NAMES[0].1, w, NAMES[0].2, json!({ "samples": samples.interior.len() })),
            CheckRecord::new(
                NAMES[1].0,
                NAMES[1].1,
                routes,
                NAMES[1].2,
                json!({ "samples": samples.interior.len() }),
            ),
            CheckRecord::new(
                NAMES[2].0,
                NAMES[2].1,
                diag,
                NAMES[2].2,
                json!({ "samples": samples.interior.len() }),
            ),
            CheckRecord::new(
                NAMES[3].0,
                NAMES[3].1,
                refl,
                NAMES[3].2,
                json!({ "band_samples": samples.band.len() }),
            ),
            CheckRecord::new(
                NAMES[4].0,
                NAMES[4].1,
                pseudo,
                NAMES[4].2,
                json!({ "band_samples": samples.band.len() }),
            ),
        ];
        if fourier {
            let f = fourier_residuals(&bundle, &samples.lengths, samples.kernel_pair)?;
            let worst = f.iter().fold(0.0f64, |m, r| m.max(*r));
            out.push(CheckRecord::new(
                NAMES[5].0,
                NAMES[5].1,
                worst,
                NAMES[5].2,
                json!({ "lengths": samples.lengths, "residuals": f }),
            ));
        }
        Ok(out)
    };
    run().unwrap_or_else(|e| {
        let n = if fourier { 6 } else { 5 };
        NAMES[..n]
            .iter()
            .map(|(name, anchor, tol)| CheckRecord::failed(name, anchor, *tol, &e))
            .collect()
    })
}

fn flow_setup<'d>(dom: &'d Domain, d: &Divisor, k: usize) -> Result<(AbelMap<'d>, FlowState, ThetaK)> {
    let martin = ThetaK::build(dom, 0)?;
    let tk = ThetaK::build(dom, k)?;
    let map = AbelMap::build(dom, &martin)?;
    let flow = FlowState::new(&map, d, &martin, &tk)?;
    Ok((map, flow, tk))
}

fn order_record(name: &str, anchor: &str, coarse: f64, fine: f64, detail: Value) -> CheckRecord {
    let settled = coarse < ROUNDING_FLOOR && fine < ROUNDING_FLOOR;
    let order = if coarse > 0.0 && fine > 0.0 { (coarse / fine).log2() } else { 0.0 };
    let residual = if settled { 0.0 } else { (order - 2.0).abs() };
    CheckRecord::new(name, anchor, residual, ORDER_WINDOW, detail)
}

/// χ₁ by the flow derivative of χ₀, by the moment expansion and by the
/// trace formula; and the Riccati equation for m₊ along the x-flow.
pub fn chi1_and_riccati(bands: &BandSet, d: &Divisor, tol: Tolerances) -> Vec<CheckRecord> {
    let a = ("chi1_three_way", "χ₁ = ½(χ₀² − i∂_ηχ₀) = moment expansion = −V/2");
    let b = ("riccati_order", "d/dx m₊ = V − λ − m₊² holds with second-order finite differences");
    let run = || -> Result<Vec<CheckRecord>> {
        let dom = domain(bands, tol)?;
        let (map, flow, _) = flow_setup(&dom, d, 1)?;
        let chi = chi1_three_way(&map, &flow, 1e-2)?;
        let r = riccati_check(&map, &flow, C64::new(-2.0, 0.0), 1e-2)?;
        Ok(vec![
            CheckRecord::new(a.0, a.1, chi.max_relative, 1e-6, serde_json::to_value(&chi).unwrap_or(Value::Null)),
            order_record(b.0, b.1, r.coarse, r.fine, serde_json::to_value(&r).unwrap_or(Value::Null)),
        ])
    };
    run().unwrap_or_else(|e| {
        vec![
            CheckRecord::failed(a.0, a.1, 1e-6, &e),
            CheckRecord::failed(b.0, b.1, ORDER_WINDOW, &e),
        ]
    })
}

/// Empirical order of the KdV residual over h, h/2, h/4 on the configured
/// flow, plus the exact vanishing of the residual for N = 0.
pub fn kdv_order(bands: &BandSet, d: &Divisor, tol: Tolerances) -> CheckRecord {
    let (name, anchor) = ("kdv_convergence", "V(x, t) solves ∂ₜV = −¼V_xxx + (3/2)VV_x (KdV in reversed time)");
    guarded(name, anchor, ORDER_WINDOW, || {
        let free = Domain::new(BandSet::free())?;
        let (fmap, fflow, _) = flow_setup(&free, &Divisor::empty(), 1)?;
        let axis = linspace(-1.0, 1.0, 9);
        let free_residual = kdv_residual(&potential_grid(&fmap, &fflow, &axis, &axis))?;

        let dom = domain(bands, tol)?;
        let (map, flow, _) = flow_setup(&dom, d, 1)?;
        let conv = kdv_convergence(&map, &flow, (0.3, 0.1), 0.1, 3, 9)?;
        let settled = conv.residuals.iter().all(|r| *r < ROUNDING_FLOOR);
        let residual = if settled {
            0.0
        } else {
            conv.orders.iter().fold(0.0f64, |m, p| m.max((p - 2.0).abs()))
        };
        Ok(CheckRecord::new(
            name,
            anchor,
            residual,
            ORDER_WINDOW,
            json!({ "steps": conv.steps, "residuals": conv.residuals, "orders": conv.orders, "free_residual": free_residual }),
        )
        .with_condition(free_residual == 0.0))
    })
}

/// The k = 1 eigenfunction relation (order of the t-derivative) and the
/// identity ℬₙ = (i∂_η/2 + χ₀)𝒜ₙ.
pub fn hierarchy_relations(bands: &BandSet, d: &Divisor, tol: Tolerances) -> Vec<CheckRecord> {
    let a = (
        "eigenfunction_relation",
        "(Θ⁽¹⁾ + i∂_{η⁽¹⁾})e_α = A₁√λ·e_{α+𝔧} − B₁e_α, second order in the t-step",
    );
    let b = ("b_from_a_identity", "ℬₙ = (i∂_η/2 + χ₀)𝒜ₙ for n ≤ 1");
    let run = || -> Result<Vec<CheckRecord>> {
        let dom = domain(bands, tol)?;
        let (map, flow, t1) = flow_setup(&dom, d, 1)?;
        let ctx = SpectralContext::build(&dom)?;
        let rel = eigenfunction_relation_check(&ctx, &flow, &t1, &RELATION_SAMPLES, 1e-2)?;
        let ba = b_from_a_identity_check(&map, &flow, 1, 1e-2)?;
        Ok(vec![
            order_record(a.0, a.1, rel.coarse, rel.fine, serde_json::to_value(&rel).unwrap_or(Value::Null)),
            CheckRecord::new(b.0, b.1, ba.extrapolated, 1e-5, serde_json::to_value(&ba).unwrap_or(Value::Null)),
        ])
    };
    run().unwrap_or_else(|e| {
        vec![
            CheckRecord::failed(a.0, a.1, ORDER_WINDOW, &e),
            CheckRecord::failed(b.0, b.1, 1e-5, &e),
        ]
    })
}

/// B-periods of dΘ⁽ᵏ⁾ against the first-kind expansion coefficients.
pub fn b_periods(bands: &BandSet, k: usize, tol: Tolerances) -> CheckRecord {
    let (name, anchor) = ("b_periods", "∫_{B_j} dΘ⁽ᵏ⁾ = −2πi/(2k)!·∂^{2k+1}ω_j at ∞");
    guarded(name, anchor, 1e-6, || {
        let dom = domain(bands, tol)?;
        let theta = ThetaK::build(&dom, k)?;
        let rows = b_period_check(&dom, &theta)?;
        let worst = rows.iter().fold(0.0f64, |m, r| m.max(r.relative_error));
        Ok(CheckRecord::new(name, anchor, worst, 1e-6, json!({ "k": k, "rows": rows })))
    })
}

/// The Green-function ratio limit and the decay of Θ⁽¹⁾ − λ^{3/2}.
pub fn asymptotic_limits(bands: &BandSet, d: &Divisor, tol: Tolerances) -> Vec<CheckRecord> {
    let a = ("green_ratio_limit", "M(−1)·log(1/Φ_D(λ))/G(λ, −1) → Σ((1+εⱼ)/2)M(λⱼ) as λ → −∞");
    let b = ("theta_decay", "|Θ⁽¹⁾(λ) − λ^{3/2}| decreases along λ = −10^m");
    let exps = [2, 3, 4, 5, 6];
    let run = || -> Result<Vec<CheckRecord>> {
        let dom = domain(bands, tol)?;
        let martin = ThetaK::build(&dom, 0)?;
        let lim = green_ratio_limit(&dom, &martin, d, &exps)?;
        let residual = if lim.martin_sum == 0.0 {
            lim.extrapolated.abs()
        } else {
            lim.relative_error
        };
        let t1 = ThetaK::build(&dom, 1)?;
        let decay = theta_decay(&dom, &t1, &exps)?;
        let worst_ratio = decay
            .remainders
            .windows(2)
            .fold(0.0f64, |m, w| m.max(if w[0] == 0.0 { 0.0 } else { w[1] / w[0] }));
        let all_zero = decay.remainders.iter().all(|r| *r < 1e-12);
        Ok(vec![
            CheckRecord::new(a.0, a.1, residual, 1e-3, serde_json::to_value(&lim).unwrap_or(Value::Null)),
            CheckRecord::new(
                b.0,
                b.1,
                if all_zero { 0.0 } else { worst_ratio },
                1.0,
                serde_json::to_value(&decay).unwrap_or(Value::Null),
            ),
        ])
    };
    run().unwrap_or_else(|e| vec![CheckRecord::failed(a.0, a.1, 1e-3, &e), CheckRecord::failed(b.0, b.1, 1.0, &e)])
}

/// Σ M(cⱼ) against the entropy integral of the density of states.
pub fn entropy_identity(bands: &BandSet, tol: Tolerances) -> CheckRecord {
    let (name, anchor) = ("entropy_identity", "Σⱼ M(cⱼ) equals the entropy integral of the density of states");
    guarded(name, anchor, 1e-6, || {
        let dom = domain(bands, tol)?;
        let martin = ThetaK::build(&dom, 0)?;
        let w = widom_sum_and_entropy(&dom, &martin)?;
        let residual = w.difference.abs() / w.widom_sum.abs().max(1.0);
        Ok(CheckRecord::new(
            name,
            anchor,
            residual,
            1e-6,
            serde_json::to_value(w).unwrap_or(Value::Null),
        ))
    })
}

/// |e_{α_N} − e_{α_{N+1}}| on a compact set shrinks for the nested family
/// of gaps (j, j + 4^{−j}).
pub fn truncation_convergence(levels: usize, tol: Tolerances) -> CheckRecord {
    let (name, anchor) = ("truncation_convergence", "e_{α_N} converges on compact sets as gaps are added");
    guarded(name, anchor, 1.0, || {
        let (gaps, divisor) = geometric_family(levels + 1);
        let study = truncation_study(&gaps, &divisor, &default_samples(), tol)?;
        let worst = study.ratios.iter().fold(0.0f64, |m, r| m.max(*r));
        Ok(CheckRecord::new(
            name,
            anchor,
            worst,
            1.0,
            json!({ "differences": study.differences, "ratios": study.ratios }),
        ))
    })
}

/// The whole battery on one configured band set and divisor.
pub fn full_battery(bands: &BandSet, d: &Divisor, seed: u64, tol: Tolerances) -> Vec<CheckRecord> {
    let mut out = vec![
        free_case(),
        differential_normalization(bands, d, tol),
        harmonic_measure_total(bands, tol),
        harmonic_measure_oracle(bands, tol),
        abel_round_trip(std::slice::from_ref(bands), 20, seed, tol),
    ];
    out.extend(spectral_identities(bands, d, seed, tol, !bands.is_empty()));
    out.extend(chi1_and_riccati(bands, d, tol));
    out.push(kdv_order(bands, d, tol));
    out.extend(hierarchy_relations(bands, d, tol));
    out.push(b_periods(bands, 1, tol));
    out.extend(asymptotic_limits(bands, d, tol));
    out.push(entropy_identity(bands, tol));
    out.push(truncation_convergence(5, tol));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elliptic_oracle_limits() {
        // As λ₀ → 0⁻ the point approaches [0, a] where ω vanishes.
        assert!(one_gap_harmonic_measure(1.0, 2.0, -1e-10) < 1e-4);
        // A wide gap close to zero leaves little of E₀ to see.
        let w = one_gap_harmonic_measure(1e-3, 50.0, -1.0);
        assert!(w > 0.5 && w < 1.0);
    }

    #[test]
    fn record_pass_needs_finite_residual() {
        let r = CheckRecord::new("x", "y", f64::NAN, 1.0, Value::Null);
        assert!(!r.pass);
        assert_eq!(r.residual, FAILED_RESIDUAL);
        assert!(CheckRecord::new("x", "y", 0.5, 1.0, Value::Null).pass);
        assert!(!CheckRecord::new("x", "y", 0.5, 1.0, Value::Null).with_condition(false).pass);
    }

    #[test]
    fn order_record_accepts_second_order() {
        assert!(order_record("o", "a", 4e-4, 1e-4, Value::Null).pass);
        assert!(!order_record("o", "a", 2e-4, 1e-4, Value::Null).pass);
        assert!(order_record("o", "a", 1e-13, 1e-13, Value::Null).pass);
    }
}
