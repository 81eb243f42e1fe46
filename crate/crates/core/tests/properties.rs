use gapcert_core::applications::{dirac3d_coulomb, two_channel_bound, CoulombSpec, TwoChannelSpec};
use gapcert_core::enclosures::*;
use gapcert_core::sequences::*;
use gapcert_core::structured::*;
use gapcert_core::{ComplexPoint, Gap, LinBound, QuadBound, RelativeBound};
use proptest::prelude::*;

fn gap() -> impl Strategy<Value = Gap> {
    (-20.0..20.0f64, 0.01..30.0f64).prop_map(|(a, l)| Gap::new(a, a + l).unwrap())
}

fn quad() -> impl Strategy<Value = QuadBound> {
    (0.0..5.0f64, 0.0..0.99f64).prop_map(|(a, b)| QuadBound { a, b })
}

fn rel_close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn strip_shrinks_as_constants_grow(q in quad(), g in gap(), da in 0.0..2.0f64, db in 0.0..0.5f64) {
        let small = perturbed_strip(q, g).unwrap();
        let big_a = perturbed_strip(QuadBound { a: q.a + da, b: q.b }, g).unwrap();
        let b2 = (q.b + db).min(0.999);
        let big_b = perturbed_strip(QuadBound { a: q.a, b: b2 }, g).unwrap();
        for s in [big_a, big_b] {
            prop_assert!(s.lo >= small.lo);
            prop_assert!(s.hi <= small.hi);
        }
    }

    #[test]
    fn linear_and_quadratic_strips_agree_without_relative_part(a in 0.0..5.0f64, g in gap()) {
        let lin = perturbed_strip_linear(LinBound { a, b: 0.0 }, g);
        let quad = perturbed_strip(QuadBound { a, b: 0.0 }, g).unwrap();
        prop_assert_eq!(lin, quad);
    }

    #[test]
    fn conversion_is_optimal(a in 0.01..5.0f64, b in 0.01..0.99f64, x in prop_oneof![-50.0..-0.01f64, 0.01..50.0f64]) {
        let lin = LinBound { a, b };
        let best = optimal_shift_linear(lin, x);
        let eps_star = optimal_conversion_eps(lin, x).unwrap();
        prop_assert!(rel_close(eps_star, b * x.abs() / a, 1e-14));
        let at_star = quad_from_linear(lin, eps_star).unwrap().shift(x);
        prop_assert!(rel_close(at_star, best, 1e-10));
        for k in -60..=60 {
            let eps = 10f64.powf(k as f64 / 10.0);
            let s = quad_from_linear(lin, eps).unwrap().shift(x);
            prop_assert!(s >= best - 1e-10);
        }
    }

    #[test]
    fn bounded_perturbation_excludes_beyond_a(a in 0.0..5.0f64, re in -50.0..50.0f64, im in -10.0..10.0f64) {
        let z = ComplexPoint::new(re, im);
        prop_assert_eq!(hyperbola_excluded(QuadBound { a, b: 0.0 }, z).unwrap(), im.abs() > a);
    }

    #[test]
    fn refined_resolvent_never_exceeds_plain(q in quad(), g in gap(), t in 0.0..1.0f64, im in -5.0..5.0f64) {
        let strip = perturbed_strip(q, g).unwrap();
        prop_assume!(strip.open);
        let re = strip.lo + t * strip.width();
        prop_assume!(strip.contains_re(re));
        let z = ComplexPoint::new(re, im);
        let plain = resolvent_bound_strip(q, g, z).unwrap();
        let refined = resolvent_bound_strip_refined(q, g, z).unwrap();
        prop_assert!(refined <= plain * (1.0 + 1e-12));
    }

    #[test]
    fn even_bound_forms_agree(
        a12 in 0.0..5.0f64, a21 in 0.0..5.0f64, b12 in 0.0..2.0f64, b21 in 0.0..0.49f64,
        beta1 in 0.0..20.0f64, beta2 in 0.0..20.0f64,
    ) {
        let bb = OffDiagBounds { a12, a21, b12, b21 };
        let mins = BlockMinima { beta1, beta2 };
        let closed = even_lowerbound(bb, mins).unwrap().lower_bound;
        let root = even_lowerbound_root_form(bb, mins).unwrap();
        prop_assert!(rel_close(closed, root, 1e-10), "{closed} vs {root}");
    }

    #[test]
    fn symmetric_constants_reduce_to_unstructured_bounds(a in 0.0..5.0f64, b in 0.0..0.99f64, beta in 0.01..20.0f64) {
        let q = QuadBound { a, b };
        let even = even_lowerbound(OffDiagBounds::uniform(a, b), BlockMinima { beta1: beta, beta2: beta }).unwrap();
        let semi = semibounded_lower_bound(RelativeBound::Quad(q), beta).unwrap();
        prop_assert!(rel_close(even.lower_bound, semi, 1e-12));

        let sym = symmetric_gap_strip(q, beta).unwrap();
        if let Ok(odd) = odd_symmetric_gap(DiagBounds::uniform(a, b), beta) {
            prop_assert!(rel_close(odd.beta_plus, sym.beta_perturbed, 1e-12));
        }
    }

    #[test]
    fn offdiagonal_structure_widens_the_strip(q in quad(), alpha in -20.0..-0.01f64, beta in 0.01..20.0f64) {
        let g = Gap::new(alpha, beta).unwrap();
        let plain = perturbed_strip(q, g).unwrap();
        prop_assume!(plain.open);
        let structured = offdiag_gap(OffDiagBounds::uniform(q.a, q.b), g).unwrap().strip;
        prop_assert!(structured.lo <= plain.lo * (1.0 + 1e-12) + 1e-12);
        prop_assert!(structured.hi >= plain.hi * (1.0 - 1e-12) - 1e-12);
    }

    #[test]
    fn partial_sums_telescope(alpha0 in -5.0..5.0f64, parts in prop::collection::vec((0.01..3.0f64, 0.0..3.0f64), 2..40)) {
        let mut alphas = Vec::new();
        let mut betas = Vec::new();
        let mut x = alpha0;
        for (l, w) in &parts {
            alphas.push(x);
            betas.push(x + l);
            x += l + w;
        }
        let seq = GapSequence::new(alphas.clone(), betas).unwrap();
        let sums = BandProfile::from_sequence(&seq).partial_sums();
        for n in 0..alphas.len() {
            prop_assert!(rel_close(sums[n], alphas[n] - alphas[0], 1e-12));
        }
    }

    #[test]
    fn small_kappa_certifies_per_gap_limsup(
        parts in prop::collection::vec((0.5..5.0f64, 0.0..2.0f64, 0.0..0.3f64, 0.0..0.05f64), 4..40),
    ) {
        // α_1 = 0 so that |α_n| equals the partial sum
        let mut alphas = Vec::new();
        let mut betas = Vec::new();
        let (mut x, mut a, mut b) = (0.0, Vec::new(), Vec::new());
        for (l, w, an, bn) in &parts {
            alphas.push(x);
            betas.push(x + l);
            a.push(*an);
            b.push(*bn);
            x += l + w;
        }
        let seq = GapSequence::new(alphas, betas).unwrap();
        let consts = PerGapConstants::new(a, b).unwrap();
        let kappa = kappa_s(&BandProfile::from_sequence(&seq), &consts, None).unwrap();
        let per_gap = per_gap_criterion(&seq, &consts, None).unwrap();
        if kappa.below_one {
            prop_assert_eq!(per_gap.verdict, Verdict::CofinitelyMany);
            prop_assert!(per_gap.limsup <= kappa.kappa * (1.0 + 1e-12));
        }
    }

    #[test]
    fn slow_growth_rules_out_cofinitely_many(
        delta in 0.01..0.9f64,
        steps in prop::collection::vec((1.0..4.0f64, 0.05..1.0f64), 4..30),
        extra in prop::collection::vec((0.0..2.0f64, 0.0..3.0f64), 30),
    ) {
        let mut alphas = Vec::new();
        let mut betas = Vec::new();
        let mut x = 1.0;
        for (ratio, theta) in &steps {
            let next = x * ratio;
            alphas.push(x);
            betas.push(x + theta * (next - x));
            x = next;
        }
        let model = TailModel::FiniteData { alphas: alphas.clone(), betas: betas.clone(), window: None };
        let diag = necessary_growth_check(&model, delta, None).unwrap();
        prop_assume!(!diag.passed());
        let seq = GapSequence::new(alphas, betas).unwrap();
        let n = seq.len();
        let a: Vec<f64> = extra.iter().take(n).map(|e| e.1).collect();
        let b: Vec<f64> = extra.iter().take(n).map(|e| (delta + e.0 * (1.0 - delta) / 2.0).min(0.999)).collect();
        let consts = PerGapConstants::new(a, b).unwrap();
        let report = per_gap_criterion(&seq, &consts, None).unwrap();
        prop_assert_ne!(report.verdict, Verdict::CofinitelyMany);
    }

    #[test]
    fn two_channel_bound_is_monotone(
        d in 1u32..4, extra_p in 0.1..4.0f64, v in 0.0..3.0f64, dv in 0.0..1.0f64,
        p0 in 0.0..2.0f64, p1 in prop::collection::vec(0.0..2.0f64, 1), p2 in prop::collection::vec(0.0..2.0f64, 1),
        which in 0usize..4, bump in 0.0..1.0f64,
    ) {
        let p = (0.5 * d as f64).max(2.0) + extra_p;
        let base = TwoChannelSpec { d, p, v12_norm: v, p0, p1, p2 };
        let mut more = base.clone();
        match which {
            0 => more.v12_norm += dv,
            1 => more.p0 += bump,
            2 => more.p1[0] += bump,
            _ => more.p2[0] += bump,
        }
        let lo = two_channel_bound(&base).unwrap().lower_bound;
        let hi = two_channel_bound(&more).unwrap().lower_bound;
        prop_assert!(hi <= lo + 1e-12 * lo.abs().max(1.0), "{hi} > {lo}");
    }

    #[test]
    fn coulomb_without_singular_part_is_the_symmetric_gap(c1 in 0.0..0.99f64, m in 0.01..10.0f64) {
        let c1 = c1 * m;
        let region = dirac3d_coulomb(CoulombSpec { c1, c2: 0.0, m }).unwrap();
        let direct = symmetric_gap_strip(QuadBound { a: c1, b: 0.0 }, m).unwrap();
        prop_assert_eq!(region.symmetric_gap, direct);
    }
}
