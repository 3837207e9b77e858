use liedolb::algebra::{binomial, Factor, SubsetIndex};
use liedolb::calculus::{wedge, SparseForm};
use liedolb::par::Exec;
use liedolb::spectral::{penrose_residuals, pinv_weighted};
use liedolb::{FormSpace, ModuleSpec, Monomial, PolyForm, PolyScalar, C64};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

const NVARS: usize = 3;

fn c64() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0u16..3, NVARS).prop_map(Monomial)
}

fn poly() -> impl Strategy<Value = PolyScalar> {
    prop::collection::vec((monomial(), c64()), 0..6).prop_map(|terms| {
        let mut p = PolyScalar::zero(NVARS);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    })
}

fn point() -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec(c64(), NVARS)
}

fn factor() -> impl Strategy<Value = Factor> {
    prop_oneof![Just(Factor::T), Just(Factor::TDual), (0usize..4).prop_map(Factor::Wedge)]
}

fn module() -> impl Strategy<Value = ModuleSpec> {
    prop::collection::vec(factor(), 0..4).prop_map(ModuleSpec::new)
}

fn matrix(max: usize) -> impl Strategy<Value = DMatrix<C64>> {
    (1..=max, 1..=max, 0..=max).prop_flat_map(|(m, n, k)| {
        // Product of an m×k and a k×n factor, so ranks below min(m, n) occur.
        (prop::collection::vec(c64(), m * k), prop::collection::vec(c64(), k * n))
            .prop_map(move |(a, b)| DMatrix::from_vec(m, k, a) * DMatrix::from_vec(k, n, b))
    })
}

fn sparse(dim: u32) -> impl Strategy<Value = SparseForm> {
    prop::collection::vec((0u32..(1 << dim), c64()), 0..5).prop_map(|terms| {
        let mut f = SparseForm::new();
        for (mask, c) in terms {
            f.add(mask, 0, c);
        }
        f
    })
}

fn graded_swap(a: &SparseForm, b: &SparseForm) -> SparseForm {
    let mut out = SparseForm::new();
    for (&(ma, _), &ca) in a.terms.iter() {
        for (&(mb, _), &cb) in b.terms.iter() {
            let sign = if (ma.count_ones() * mb.count_ones()) % 2 == 0 { 1.0 } else { -1.0 };
            out.add_form(&wedge(&SparseForm::scalar(mb, cb), &SparseForm::scalar(ma, ca)), C64::new(sign, 0.0));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_is_a_ring_homomorphism(p in poly(), q in poly(), t in point()) {
        let sum = p.add(&q).eval(&t);
        prop_assert!((sum - p.eval(&t) - q.eval(&t)).norm() < 1e-12);
        let prod = p.mul(&q).eval(&t);
        prop_assert!((prod - p.eval(&t) * q.eval(&t)).norm() < 1e-10);
        prop_assert!(p.add(&p.neg()).eval(&t).norm() < 1e-12);
    }

    #[test]
    fn multiplication_distributes(p in poly(), q in poly(), s in poly(), t in point()) {
        let lhs = p.mul(&q.add(&s)).eval(&t);
        let rhs = p.mul(&q).add(&p.mul(&s)).eval(&t);
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn product_degree_adds(p in poly(), q in poly()) {
        if let (Some(a), Some(b)) = (p.degree(), q.degree()) {
            if let Some(d) = p.mul(&q).degree() {
                prop_assert!(d <= a + b);
            }
        }
    }

    #[test]
    fn truncated_arithmetic_respects_the_order(
        order in 1usize..5,
        a in prop::collection::vec((monomial(), c64()), 0..6),
        b in prop::collection::vec((monomial(), c64()), 0..6),
    ) {
        let lift = |terms: &[(Monomial, C64)]| {
            let mut f = PolyForm::zero(NVARS, order, 2);
            for (m, c) in terms {
                f.add_term(m.clone(), &DVector::from_vec(vec![*c, -c]));
            }
            f
        };
        let (fa, fb) = (lift(&a), lift(&b));
        prop_assert!(fa.terms.keys().all(|m| m.degree() <= order));
        let sum = fa.add(&fb).unwrap();
        prop_assert!(sum.terms.keys().all(|m| m.degree() <= order));
        prop_assert!(fa.scale(C64::new(2.0, 1.0)).terms.keys().all(|m| m.degree() <= order));
        for k in 0..=order {
            let part = PolyForm::bilinear_degree(&fa, &fb, k, 2, Exec::Sequential, |u, v| u.component_mul(v));
            prop_assert!(part.keys().all(|m| m.degree() == k));
        }
    }

    #[test]
    fn subset_rank_is_a_bijection(n in 0usize..8, k in 0usize..8) {
        prop_assume!(k <= n);
        let count = binomial(n, k);
        let mut prev = None;
        for r in 0..count {
            let mask = SubsetIndex::unrank(n, k, r);
            prop_assert_eq!(mask.count_ones() as usize, k);
            prop_assert_eq!(SubsetIndex::rank(n, mask), r);
            if let Some(p) = prev {
                prop_assert!(p != mask);
            }
            prev = Some(mask);
        }
    }

    #[test]
    fn basis_labels_are_a_bijection(n in 1usize..5, p in 0usize..5, q in 0usize..5, m in module()) {
        prop_assume!(p <= n && q <= n && m.check(n).is_ok());
        let sp = FormSpace::new(n, p, q, m.clone()).unwrap();
        prop_assert_eq!(sp.dim(), binomial(n, p) * binomial(n, q) * m.dim(n));
        for i in 0..sp.dim() {
            prop_assert_eq!(sp.index_of(&sp.label(i)), Some(i));
            let (jm, im, slot) = sp.parts(i);
            prop_assert_eq!(sp.index_of_parts(jm, im, slot), Some(i));
        }
    }

    #[test]
    fn module_expressions_round_trip(m in module()) {
        let text = m.to_string();
        prop_assert_eq!(ModuleSpec::parse(&text).unwrap(), m.clone());
        let spaced: String = text.chars().flat_map(|c| [c, ' ']).collect();
        prop_assert_eq!(ModuleSpec::parse(&spaced).unwrap(), m);
    }

    #[test]
    fn module_index_split_round_trips(n in 1usize..5, m in module()) {
        prop_assume!(m.check(n).is_ok());
        for idx in 0..m.dim(n) {
            prop_assert_eq!(m.join_index(n, &m.split_index(n, idx)), idx);
        }
    }

    #[test]
    fn wedge_is_associative_and_graded_commutative(a in sparse(5), b in sparse(5), c in sparse(5)) {
        let left = wedge(&wedge(&a, &b), &c);
        let right = wedge(&a, &wedge(&b, &c));
        prop_assert!(left.sub(&right).max_abs() < 1e-12);
        prop_assert!(wedge(&a, &b).sub(&graded_swap(&a, &b)).max_abs() < 1e-12);
    }

    #[test]
    fn penrose_conditions_hold(a in matrix(10)) {
        let p = pinv_weighted(&a, None, None, None).unwrap();
        for r in penrose_residuals(&a, &p.pinv, None, None) {
            prop_assert!(r <= 1e-10, "residual {r}");
        }
        prop_assert!(p.rank <= a.nrows().min(a.ncols()));
        let ap = &a * &p.pinv;
        prop_assert!((&ap * &ap - &ap).norm() <= 1e-9 * (1.0 + ap.norm()));
    }

    #[test]
    fn weighted_penrose_conditions_hold(a in matrix(6), seed in prop::collection::vec(c64(), 72)) {
        let (m, n) = a.shape();
        let gram = |k: usize, off: usize| {
            let b = DMatrix::from_fn(k, k, |i, j| seed[off + i * 6 + j]);
            &b * b.adjoint() + DMatrix::identity(k, k)
        };
        let (gd, gc) = (gram(n, 0), gram(m, 36));
        let p = pinv_weighted(&a, Some(&gd), Some(&gc), None).unwrap();
        for r in penrose_residuals(&a, &p.pinv, Some(&gd), Some(&gc)) {
            prop_assert!(r <= 1e-10, "residual {r}");
        }
    }
}
