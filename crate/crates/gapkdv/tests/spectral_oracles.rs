//! Spectral objects against independent closed forms and differential
//! equations.

use gapkdv::abel_flow::FlowState;
use gapkdv::abelian::{Domain, ThetaK};
use gapkdv::band_geometry::{BandSet, Divisor};
use gapkdv::spectral::{weyl_solution, SpectralContext};
use num_complex::Complex64 as C64;

fn one_gap() -> (Domain, Divisor) {
    let bands = BandSet::new(&[(1.0, 2.0)]).unwrap();
    let d = Divisor::from_pairs(&bands, &[(1.3, 1.0)]).unwrap();
    (Domain::new(bands).unwrap(), d)
}

fn two_gaps() -> (Domain, Divisor) {
    let bands = BandSet::new(&[(1.0, 2.0), (3.0, 4.5)]).unwrap();
    let d = Divisor::from_pairs(&bands, &[(1.3, 1.0), (3.9, -1.0)]).unwrap();
    (Domain::new(bands).unwrap(), d)
}

#[test]
fn free_kernel_matches_closed_form() {
    // Without gaps e ≡ 1 and the kernel is i/(√λ − conj √λ₀).
    let domain = Domain::new(BandSet::free()).unwrap();
    let ctx = SpectralContext::build(&domain).unwrap();
    let b = ctx.bundle(&Divisor::empty()).unwrap();
    for (l, l0) in [
        (C64::new(-1.0, 0.5), C64::new(0.3, 0.2)),
        (C64::new(2.0, 1.0), C64::new(-3.0, 0.7)),
        (C64::new(0.5, 2.5), C64::new(0.5, 2.5)),
    ] {
        let expected = C64::i() / (l.sqrt() - l0.sqrt().conj());
        let got = b.kernel(l, l0).unwrap();
        assert!((got - expected).norm() < 1e-13 * expected.norm(), "{got} vs {expected}");
    }
}

#[test]
fn one_gap_shift_reflects_the_dirichlet_point() {
    // For one gap, multiplying by √λ moves the divisor point λ to ab/λ, the
    // reflection of the gap onto itself that swaps its ends.
    let bands = BandSet::new(&[(1.0, 2.0)]).unwrap();
    let domain = Domain::new(bands.clone()).unwrap();
    let ctx = SpectralContext::build(&domain).unwrap();
    for (lambda, eps) in [(1.1, 1.0), (1.3, -1.0), (1.5, 1.0), (1.9, -1.0)] {
        let d = Divisor::from_pairs(&bands, &[(lambda, eps)]).unwrap();
        let b = ctx.bundle(&d).unwrap();
        let shifted = b.shifted.lambdas()[0];
        assert!((shifted - 2.0 / lambda).abs() < 1e-9, "λ = {lambda}: shifted to {shifted}");
    }
}

#[test]
fn diagonal_resolvent_vanishes_only_on_the_divisor() {
    // R = iP/(2S) with P = ∏(λ − λⱼ): R is analytic off the spectrum and its
    // zeros are exactly the Dirichlet points. Check that |R| at λⱼ + iδ is
    // O(δ) while it stays bounded away from zero elsewhere in the gap.
    let (domain, d) = two_gaps();
    let ctx = SpectralContext::build(&domain).unwrap();
    let b = ctx.bundle(&d).unwrap();
    for &l in &d.lambdas() {
        let near = b.resolvent(C64::new(l, 1e-7)).unwrap().norm();
        let away = b.resolvent(C64::new(l + 0.05, 1e-7)).unwrap().norm();
        assert!(near < 1e-5 && away > 1e-3, "λⱼ = {l}: |R| {near} near, {away} away");
    }
}

/// Weyl solutions u₊(x) at x = −2h, …, 2h for the x-flow through `d`.
fn weyl_samples(domain: &Domain, d: &Divisor, lambda: C64, h: f64) -> Vec<C64> {
    let ctx = SpectralContext::build(domain).unwrap();
    let t1 = ThetaK::build(domain, 1).unwrap();
    let flow = FlowState::new(&ctx.abel, d, &ctx.martin, &t1).unwrap();
    let base = ctx.flowed(&flow, 0.0, 0.0, None).unwrap();
    [-2.0, -1.0, 0.0, 1.0, 2.0]
        .iter()
        .map(|s| {
            let at = ctx.flowed(&flow, s * h, 0.0, Some(&base)).unwrap();
            weyl_solution(&base, &at, s * h, lambda).unwrap()
        })
        .collect()
}

#[test]
fn weyl_solution_solves_the_schrodinger_equation() {
    // −u″ + Vu = λu, with V(0) given by the trace formula Σ(aⱼ + bⱼ − 2λⱼ)
    // and u′(0)/u(0) = m₊(λ).
    for (domain, d) in [one_gap(), two_gaps()] {
        let bands = domain.bands();
        let v0: f64 = bands.gaps().iter().zip(d.lambdas()).map(|(g, l)| g.a + g.b - 2.0 * l).sum();
        let ctx = SpectralContext::build(&domain).unwrap();
        let m = ctx.bundle(&d).unwrap();
        for lambda in [C64::new(-1.5, 0.5), C64::new(0.7, 0.3), C64::new(2.6, 1.0)] {
            let h = 1e-3;
            let u = weyl_samples(&domain, &d, lambda, h);
            let second = (u[1] - u[2] * 2.0 + u[3]) / (h * h);
            let residual = (-second + (v0 - lambda) * u[2]).norm() / u[2].norm();
            assert!(residual < 1e-4, "λ = {lambda}: ODE residual {residual}");
            let first = (u[0] - u[1] * 8.0 + u[3] * 8.0 - u[4]) / (12.0 * h);
            let m_plus = m.m_plus(lambda).unwrap();
            let err = (first / u[2] - m_plus).norm() / m_plus.norm();
            assert!(err < 1e-8, "λ = {lambda}: u′/u = {} vs m₊ = {m_plus}", first / u[2]);
        }
    }
}

#[test]
fn herglotz_property_of_m_functions() {
    let (domain, d) = two_gaps();
    let ctx = SpectralContext::build(&domain).unwrap();
    let b = ctx.bundle(&d).unwrap();
    for l in [C64::new(-4.0, 0.1), C64::new(1.5, 0.01), C64::new(3.2, 2.0), C64::new(40.0, 1.0)] {
        // Both half-line m-functions map the upper half-plane into itself, and
        // so do R and −1/R = m₊ + m₋.
        assert!(b.m_plus(l).unwrap().im > 0.0);
        assert!(b.m_minus(l).unwrap().im > 0.0);
        assert!(b.resolvent(l).unwrap().im > 0.0);
    }
}
