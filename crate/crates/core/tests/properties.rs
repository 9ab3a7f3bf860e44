use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use jacplane::atlas::{intersection_lattice, lattice_isomorphic};
use jacplane::classify::theorem_checks;
use jacplane::graded::{ideal_piece_matrix, jacobian_relation_map};
use jacplane::jacobian::check_invariants;
use jacplane::{
    analyze, graded_dim, parse_poly, AnalysisConfig, Arrangement, Error, ExactMatrix, HomogPoly,
    Monomial, PrimeField,
};

const P1: u64 = 2_147_483_629;
const P2: u64 = 2_147_483_587;

fn matrix_strategy() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..9, 1usize..9).prop_flat_map(|(r, c)| {
        (Just(r), Just(c), prop::collection::vec(-3i64..=3, r * c))
    })
}

fn build(field: PrimeField, r: usize, c: usize, data: &[i64]) -> ExactMatrix {
    let rows: Vec<Vec<i64>> = data.chunks(c).map(<[i64]>::to_vec).collect();
    ExactMatrix::from_i64_rows(field, c, &rows[..r])
}

fn poly_strategy(degrees: std::ops::RangeInclusive<u32>) -> impl Strategy<Value = HomogPoly> {
    degrees.prop_flat_map(|d| {
        let n = graded_dim(i64::from(d));
        prop::collection::vec((0..n, -4i64..=4), 1..8).prop_map(move |terms| {
            HomogPoly::from_terms(
                d,
                terms.into_iter().map(|(i, c)| (Monomial::from_index(d, i), c)),
            )
            .unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity((r, c, data) in matrix_strategy()) {
        let f = PrimeField::new(P1).unwrap();
        let m = build(f, r, c, &data);
        let ker = m.kernel_basis();
        prop_assert_eq!(m.rank() + ker.len(), c);
        for v in &ker {
            prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(m.row_space_basis().rows(), m.rank());
    }

    #[test]
    fn rank_invariant_under_permutation((r, c, data) in matrix_strategy(), seed in any::<u64>()) {
        let f = PrimeField::new(P1).unwrap();
        let m = build(f, r, c, &data);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows: Vec<usize> = (0..r).collect();
        let mut cols: Vec<usize> = (0..c).collect();
        use rand::seq::SliceRandom;
        rows.shuffle(&mut rng);
        cols.shuffle(&mut rng);
        let mut p = ExactMatrix::zeros(f, r, c);
        for (i, &ri) in rows.iter().enumerate() {
            for (j, &cj) in cols.iter().enumerate() {
                p.set(i, j, m.get(ri, cj));
            }
        }
        prop_assert_eq!(p.rank(), m.rank());
    }

    #[test]
    fn small_integer_ranks_agree_across_primes((r, c, data) in matrix_strategy()) {
        let a = build(PrimeField::new(P1).unwrap(), r, c, &data);
        let b = build(PrimeField::new(P2).unwrap(), r, c, &data);
        prop_assert_eq!(a.rank(), b.rank());
    }

    #[test]
    fn relation_ranks_agree_across_primes(f in poly_strategy(2..=6), m in 0i64..6) {
        let r1 = jacobian_relation_map(&f, m, PrimeField::new(P1).unwrap()).unwrap().rank();
        let r2 = jacobian_relation_map(&f, m, PrimeField::new(P2).unwrap()).unwrap().rank();
        prop_assert_eq!(r1, r2);
    }

    #[test]
    fn euler_relation(f in poly_strategy(1..=7)) {
        let [fx, fy, fz] = f.partials().unwrap();
        let var = |i| HomogPoly::monomial(1, Monomial::var(i));
        let lhs = var(0).multiply(&fx)
            .add(&var(1).multiply(&fy)).unwrap()
            .add(&var(2).multiply(&fz)).unwrap();
        prop_assert_eq!(lhs, f.scale(&f.degree().into()));
    }

    #[test]
    fn parse_print_round_trip(f in poly_strategy(1..=7)) {
        prop_assume!(!f.is_zero());
        let text = f.to_string();
        prop_assert_eq!(parse_poly(&text).unwrap(), f);
    }

    #[test]
    fn jacobian_pieces_form_an_ideal(f in poly_strategy(2..=5), k in 0i64..6, seed in any::<u64>()) {
        prop_assume!(!f.is_zero());
        let field = PrimeField::new(P1).unwrap();
        let d = i64::from(f.degree());
        let k = k + d - 1;
        let here = ideal_piece_matrix(&f, k, field).unwrap().matrix;
        let next = ideal_piece_matrix(&f, k + 1, field).unwrap().matrix;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // random element of (J_f)_k
        let mut g = vec![0u64; here.rows()];
        for c in 0..here.cols() {
            let s: u64 = rand::Rng::gen_range(&mut rng, 0..P1);
            for (r, slot) in g.iter_mut().enumerate() {
                *slot = field.mul_add(*slot, s, here.get(r, c));
            }
        }
        for v in 0..3 {
            let mut h = vec![0u64; next.rows()];
            for (i, &c) in g.iter().enumerate() {
                let m = Monomial::from_index(k as u32, i).mul(&Monomial::var(v));
                h[m.index()] = c;
            }
            prop_assert!(next.in_column_span(&h).unwrap());
        }
    }

    #[test]
    fn analysis_invariants_on_random_curves(f in poly_strategy(3..=6)) {
        prop_assume!(!f.is_zero());
        let cfg = AnalysisConfig { verify: Some(true), ..AnalysisConfig::default() };
        match analyze(&f, &cfg) {
            Ok(a) => {
                prop_assert!(a.verified);
                prop_assert_eq!(a.escalations, 0);
                check_invariants(&a).unwrap();
                for c in theorem_checks(&a) {
                    prop_assert!(c.passed, "{}: {} {}", f, c.name, c.detail);
                }
            }
            Err(Error::NotReduced) => {}
            Err(e) => prop_assert!(false, "{}: {}", f, e),
        }
    }

    #[test]
    fn lattice_isomorphism_is_invariant_under_relabeling(n in 3usize..8, seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Arrangement::random(n, 2, &mut rng);
        let mut lines = a.lines().to_vec();
        lines.shuffle(&mut rng);
        let b = Arrangement::new(lines.iter().map(|l| l.map(|v| -v)).collect()).unwrap();
        let (la, lb) = (intersection_lattice(&a).unwrap(), intersection_lattice(&b).unwrap());
        prop_assert!(la.is_consistent());
        prop_assert!(lattice_isomorphic(&la, &la));
        prop_assert!(lattice_isomorphic(&la, &lb));
        prop_assert!(lattice_isomorphic(&lb, &la));
    }
}
