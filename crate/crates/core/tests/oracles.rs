//! Independent reference computations over the rationals, at small scale.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use jacplane::graded::ideal_piece_matrix;
use jacplane::jacobian::{milnor_hilbert, n_dims_saturation};
use jacplane::{analyze, graded_dim, parse_poly, AnalysisConfig, HomogPoly, PrimeField};

type Poly = BTreeMap<[u32; 3], BigInt>;

fn to_map(f: &HomogPoly) -> Poly {
    f.terms().map(|(m, c)| (m.0, c.clone())).collect()
}

fn diff(f: &Poly, v: usize) -> Poly {
    let mut out = Poly::new();
    for (e, c) in f {
        if e[v] > 0 {
            let mut e2 = *e;
            e2[v] -= 1;
            *out.entry(e2).or_insert_with(BigInt::zero) += c * BigInt::from(e[v]);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn monomials(k: i64) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    if k < 0 {
        return out;
    }
    let k = k as u32;
    for a in 0..=k {
        for b in 0..=(k - a) {
            out.push([a, b, k - a - b]);
        }
    }
    out
}

fn times(u: &[u32; 3], g: &Poly) -> Poly {
    g.iter()
        .map(|(e, c)| ([e[0] + u[0], e[1] + u[1], e[2] + u[2]], c.clone()))
        .collect()
}

fn coords(p: &Poly, basis: &[[u32; 3]]) -> Vec<BigRational> {
    basis
        .iter()
        .map(|m| BigRational::from_integer(p.get(m).cloned().unwrap_or_default()))
        .collect()
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(rows: &mut Vec<Vec<BigRational>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = BigRational::one() / rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &factor * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    rref(&mut rows).len()
}

/// Basis of `{w : w · row = 0 for every row}`.
fn left_annihilator(mut rows: Vec<Vec<BigRational>>, ncols: usize) -> Vec<Vec<BigRational>> {
    let pivots = rref(&mut rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut w = vec![BigRational::zero(); ncols];
            w[fc] = BigRational::one();
            for (row, &pc) in rows.iter().zip(&pivots) {
                w[pc] = -row[fc].clone();
            }
            w
        })
        .collect()
}

struct Oracle {
    d: i64,
    partials: [Poly; 3],
}

impl Oracle {
    fn new(text: &str) -> Self {
        let f = to_map(&parse_poly(text).unwrap());
        let d = f.keys().next().unwrap().iter().sum::<u32>() as i64;
        Self {
            d,
            partials: [diff(&f, 0), diff(&f, 1), diff(&f, 2)],
        }
    }

    fn jacobian_rows(&self, k: i64) -> Vec<Vec<BigRational>> {
        let basis = monomials(k);
        let mut rows = Vec::new();
        for g in &self.partials {
            for u in monomials(k - self.d + 1) {
                rows.push(coords(&times(&u, g), &basis));
            }
        }
        rows
    }

    fn milnor(&self, k: i64) -> usize {
        graded_dim(k) - rank(self.jacobian_rows(k))
    }

    fn syzygies(&self, m: i64) -> usize {
        let k = m + self.d - 1;
        3 * graded_dim(m) - rank(self.jacobian_rows(k))
    }

    /// `dim (I_f)_k`: `g` with `u g ∈ J_f` for every monomial `u` of degree
    /// `top - k`, where `top = 3d - 5` lies past the support of `N(f)`.
    fn saturation(&self, k: i64) -> usize {
        let top = 3 * self.d - 5;
        let top_basis = monomials(top);
        let ann = left_annihilator(self.jacobian_rows(top), top_basis.len());
        let src = monomials(k);
        let mut rows = Vec::new();
        for u in monomials(top - k) {
            for w in &ann {
                let row: Vec<BigRational> = src
                    .iter()
                    .map(|s| {
                        let prod = [s[0] + u[0], s[1] + u[1], s[2] + u[2]];
                        let idx = top_basis.iter().position(|m| *m == prod).unwrap();
                        w[idx].clone()
                    })
                    .collect();
                rows.push(row);
            }
        }
        if rows.is_empty() {
            return src.len();
        }
        src.len() - rank(rows)
    }

    fn n_dims(&self) -> Vec<usize> {
        (0..=3 * self.d - 6)
            .map(|k| {
                let jac = graded_dim(k) - self.milnor(k);
                self.saturation(k) - jac
            })
            .collect()
    }
}

/// Coefficients of `((1 - t^(d-1)) / (1 - t))^3`, expanded as a cube of
/// `1 + t + ... + t^(d-2)`.
fn fermat_series(d: usize) -> Vec<usize> {
    let base = vec![1usize; d - 1];
    let mul = |a: &[usize], b: &[usize]| {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    };
    mul(&mul(&base, &base), &base)
}

fn field() -> PrimeField {
    PrimeField::new(2_147_483_629).unwrap()
}

#[test]
fn fermat_series_by_hand() {
    assert_eq!(fermat_series(3), vec![1, 3, 3, 1]);
    assert_eq!(fermat_series(4), vec![1, 3, 6, 7, 6, 3, 1]);
}

#[test]
fn cusp_quartic_milnor_algebra() {
    let f = parse_poly("y^4 - x*z^3").unwrap();
    let oracle = Oracle::new("y^4 - x*z^3");
    let expected: Vec<usize> = (0..=10).map(|k| oracle.milnor(k)).collect();
    assert_eq!(expected, vec![1, 3, 6, 7, 7, 6, 6, 6, 6, 6, 6]);
    for (k, &m) in expected.iter().enumerate() {
        assert_eq!(milnor_hilbert(&f, k as i64, field()).unwrap(), m, "k = {k}");
    }
    let rank6 = ideal_piece_matrix(&f, 6, field()).unwrap().rank();
    assert_eq!(graded_dim(6) - rank6, 6);
}

#[test]
fn fermat_milnor_algebras() {
    for d in [3usize, 4] {
        let text = format!("x^{d} + y^{d} + z^{d}");
        let f = parse_poly(&text).unwrap();
        let series = fermat_series(d);
        let oracle = Oracle::new(&text);
        for k in 0..=(3 * d as i64 - 3) {
            let want = series.get(k as usize).copied().unwrap_or(0);
            assert_eq!(oracle.milnor(k), want, "d = {d}, k = {k}");
            assert_eq!(milnor_hilbert(&f, k, field()).unwrap(), want, "d = {d}, k = {k}");
        }
        // smooth: J_f is primary to the irrelevant ideal, so N(f) = M(f)
        assert_eq!(oracle.n_dims(), series);
        let a = analyze(&f, &AnalysisConfig::default()).unwrap();
        assert_eq!(a.n_dims, series);
        assert_eq!(a.tau, 0);
        assert_eq!(a.nu, *series.iter().max().unwrap());
    }
}

const SMALL_CURVES: [&str; 8] = [
    "y^4 - x*z^3",
    "y^4 - x*z^3 - y^3*z",
    "x^3 + y^3 + z^3",
    "x*y*z",
    "x*y*z*(x + y + z)",
    "y^2*z - x^3 - x^2*z",
    "x*y*(x^2 + y^2 + z^2)",
    "16*x^4*y + 128*x^2*y^2*z - 4*x^3*z^2 + 256*y^3*z^2 - 144*x*y*z^3 + 27*z^5",
];

#[test]
fn library_matches_rational_oracle() {
    let cfg = AnalysisConfig::default();
    for text in SMALL_CURVES {
        let oracle = Oracle::new(text);
        let f = parse_poly(text).unwrap();
        let a = analyze(&f, &cfg).unwrap();
        let d = oracle.d;
        let ar: Vec<usize> = (0..=2 * d - 4).map(|m| oracle.syzygies(m)).collect();
        assert_eq!(a.ar_dims, ar, "{text}");
        let milnor: Vec<usize> = (0..=3 * d - 4).map(|k| oracle.milnor(k)).collect();
        assert_eq!(a.milnor_hilbert, milnor, "{text}");
        assert_eq!(a.tau, oracle.milnor(3 * d) as i64, "{text}");
        assert_eq!(a.n_dims, oracle.n_dims(), "{text}");
        assert_eq!(n_dims_saturation(&f, field()).unwrap(), a.n_dims, "{text}");
    }
}

#[test]
fn oracle_values_frozen() {
    let a = analyze(&parse_poly("y^2*z - x^3 - x^2*z").unwrap(), &AnalysisConfig::default()).unwrap();
    let o = Oracle::new("y^2*z - x^3 - x^2*z");
    assert_eq!(a.tau, o.milnor(9) as i64);
    assert_eq!(o.n_dims(), vec![0, 2, 2, 0]);
    assert_eq!(a.nu, 2);
    let q = Oracle::new("y^4 - x*z^3");
    assert_eq!(q.n_dims(), vec![0, 0, 1, 1, 1, 0, 0]);
}
