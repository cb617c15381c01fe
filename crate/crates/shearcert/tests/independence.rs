use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shearcert::dyadic::Exact;
use shearcert::independence::{
    frame_bounds_from_gram, gram, prefix_nesting, staggered_support_certificate, Family1D,
    InnerProductFamily, ShearletFamily, Verdict, DEFAULT_SEED,
};
use shearcert::mra1d::{cascade, daubechies_filter, wavelet_from_filter, SampledFunction1D};
use shearcert::shearlet2d::{
    DomainRule, Rect, SampledFunction2D, ShearletSystem, ShearletSystemSpec,
};

fn third() -> (Exact, Exact) {
    (Exact::ratio(1, 3).unwrap(), Exact::ratio(1, 3).unwrap())
}

fn grid_offset(f: &SampledFunction2D) -> (i64, i64) {
    let to_i = |e: Exact| {
        assert!(e.is_integer());
        e.floor().try_into().unwrap()
    };
    (
        to_i(f.origin.0.mul_pow2(f.level_x1 as i64)),
        to_i(f.origin.1.mul_pow2(f.level_x2 as i64)),
    )
}

/// Pairwise dot products of full 2D grids, one element at a time.
fn naive_gram(fs: &[SampledFunction2D], level: u32) -> DMatrix<f64> {
    let h2 = (-2.0 * level as f64).exp2();
    DMatrix::from_fn(fs.len(), fs.len(), |a, b| {
        let (fa, fb) = (&fs[a], &fs[b]);
        let ((ax, ay), (bx, by)) = (grid_offset(fa), grid_offset(fb));
        let mut sum = 0.0;
        for y in ay.max(by)..(ay + fa.nx2 as i64).min(by + fb.nx2 as i64) {
            for x in ax.max(bx)..(ax + fa.nx1 as i64).min(bx + fb.nx1 as i64) {
                sum += fa.at((x - ax) as usize, (y - ay) as usize)
                    * fb.at((x - bx) as usize, (y - by) as usize);
            }
        }
        sum * h2
    })
}

#[test]
fn row_assembly_matches_naive_gram() {
    let spec = ShearletSystemSpec::new(2, third(), 1, Rect::square(3).unwrap())
        .unwrap()
        .with_rule(DomainRule::Contained);
    let system = ShearletSystem::build(spec, 9).unwrap();
    let indices = system.enumerate();
    let level = 6;
    let fs: Vec<_> = indices
        .iter()
        .map(|i| system.evaluate(i, level).unwrap())
        .collect();
    let fast = ShearletFamily::new(&system, indices)
        .gram_matrix(level)
        .unwrap();
    let slow = naive_gram(&fs, level);
    assert!((&fast - &slow).amax() < 1e-12, "{}", (&fast - &slow).amax());
}

fn random_family(seed: u64, n: usize) -> Family1D {
    let f = daubechies_filter(2).unwrap();
    let phi = cascade(&f, 9).unwrap();
    let psi = wavelet_from_filter(&f, 9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fam = Family1D::default();
    for i in 0..n {
        let t = Exact::ratio(rng.random_range(-12..12), 3).unwrap();
        let g = if rng.random_bool(0.5) {
            phi.translate(&t)
        } else {
            psi.dilate_translate(rng.random_range(0..3), &t)
        };
        fam.push(format!("f{i}"), g);
    }
    fam
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gram_is_symmetric_psd(seed in any::<u64>(), n in 1usize..12) {
        let fam = random_family(seed, n);
        let g = fam.gram_matrix(8).unwrap();
        prop_assert!((&g - g.transpose()).amax() < 1e-12);
        let sym = (&g + g.transpose()) * 0.5;
        let min = SymmetricEigen::new(sym).eigenvalues.min();
        prop_assert!(min >= -1e-10, "{}", min);
    }

    #[test]
    fn verdicts_respect_tolerances(seed in any::<u64>(), n in 1usize..10) {
        let fam = random_family(seed, n);
        let r = gram(&fam, 6, 8, 1e-6).unwrap();
        if r.verdict == Verdict::Independent {
            prop_assert!(r.relative_sigma_min > r.tolerance);
            prop_assert!(r.sigma_tail < r.relative_sigma_min / 10.0);
        }
    }

    #[test]
    fn interlacing(seed in any::<u64>(), n in 2usize..14) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DMatrix::from_fn(n + 3, n, |_, _| rng.random_range(-1.0..1.0));
        let g = a.transpose() * a;
        let sizes: Vec<usize> = (1..=n).collect();
        let b = frame_bounds_from_gram(&g, &prefix_nesting(&sizes)).unwrap();
        for w in b.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
        // an arbitrary nesting order, not just prefixes
        let mut perm: Vec<usize> = (0..n).collect();
        perm.reverse();
        let nesting: Vec<Vec<usize>> = (1..=n).map(|s| perm[..s].to_vec()).collect();
        let b = frame_bounds_from_gram(&g, &nesting).unwrap();
        prop_assert!(b.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn orthonormal_nestings_have_unit_bounds(n in 1usize..20) {
        let g = DMatrix::<f64>::identity(n, n);
        let b = frame_bounds_from_gram(&g, &prefix_nesting(&(1..=n).collect::<Vec<_>>())).unwrap();
        prop_assert!(b.iter().all(|v| (v - 1.0).abs() < 1e-8));
    }
}

#[test]
fn duplicate_flips_verdict() {
    for seed in 0..6 {
        let mut fam = random_family(seed, 6);
        let base = gram(&fam, 6, 8, 1e-6).unwrap();
        if base.verdict != Verdict::Independent {
            continue;
        }
        let dup = fam.functions[seed as usize % 6].clone();
        fam.functions.push(dup);
        let r = gram(&fam, 6, 8, 1e-6).unwrap();
        assert_eq!(r.verdict, Verdict::Dependent);
        assert!(r.sigma_min < 1e-10);
    }
}

#[test]
fn staggered_certificates_are_sound() {
    let phi = cascade(&daubechies_filter(2).unwrap(), 9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut passed = 0;
    for _ in 0..50 {
        let n = rng.random_range(2..7);
        let mut shifts: Vec<i64> = (0..n).map(|_| rng.random_range(-9..9)).collect();
        shifts.sort();
        shifts.dedup();
        let fs: Vec<SampledFunction1D> = shifts
            .iter()
            .map(|&t| phi.translate(&Exact::ratio(t, 3).unwrap()))
            .collect();
        let cert = staggered_support_certificate(&fs, 20, DEFAULT_SEED);
        let fam = Family1D::new(
            fs.into_iter()
                .enumerate()
                .map(|(i, f)| (format!("{i}"), f))
                .collect(),
        );
        let r = gram(&fam, 6, 8, 1e-6).unwrap();
        if cert.passed {
            passed += 1;
            assert_ne!(r.verdict, Verdict::Dependent);
        }
    }
    assert!(passed >= 45, "{passed}");
}

#[test]
fn haar_translates_have_closed_form_gram() {
    // <1_[a,a+1], 1_[b,b+1]> = max(0, 1 - |a - b|)
    let phi = cascade(&shearcert::mra1d::FilterCoefficients::haar(), 8).unwrap();
    let shifts = [0i64, 1, 3, 6, 10];
    let fam = Family1D::new(
        shifts
            .iter()
            .map(|&t| (format!("{t}"), phi.translate(&Exact::dyadic(t, 2))))
            .collect(),
    );
    let g = fam.gram_matrix(8).unwrap();
    for (a, &ta) in shifts.iter().enumerate() {
        for (b, &tb) in shifts.iter().enumerate() {
            let want = (1.0 - (ta - tb).abs() as f64 / 4.0).max(0.0);
            assert!((g[(a, b)] - want).abs() < 1e-12);
        }
    }
}
