//! Matrices of degree-graded linear maps between pieces of `S`.

use crate::field::PrimeField;
use crate::matrix::ExactMatrix;
use crate::poly::{graded_dim, monomial_basis, HomogPoly};
use crate::Error;

/// Matrix of a linear map `⊕ S_{e_i}^{m_i} -> S_c` in the monomial bases.
///
/// Columns are ordered summand by summand, each summand in monomial index
/// order.
#[derive(Debug, Clone)]
pub struct GradedMap {
    pub domain_degrees: Vec<(i64, usize)>,
    pub codomain_degree: i64,
    pub matrix: ExactMatrix,
}

impl GradedMap {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn kernel_dim(&self) -> usize {
        self.matrix.cols() - self.rank()
    }

    fn check_shape(&self) {
        let cols: usize = self
            .domain_degrees
            .iter()
            .map(|&(deg, mult)| mult * graded_dim(deg))
            .sum();
        debug_assert_eq!(self.matrix.cols(), cols);
        debug_assert_eq!(self.matrix.rows(), graded_dim(self.codomain_degree));
    }
}

fn degree_cap(d: u32) -> i64 {
    4 * i64::from(d.max(1))
}

fn check_cap(d: u32, target: i64) -> Result<(), Error> {
    if target > degree_cap(d) {
        return Err(Error::DegreeCap {
            requested: target,
            cap: degree_cap(d),
        });
    }
    Ok(())
}

/// Rows are the products `mono * g_v` for each generator `g_v` and each
/// monomial of degree `j`; columns index `S_{j + deg g}`.
pub(crate) fn product_rows(gens: &[HomogPoly], j: i64, field: PrimeField) -> ExactMatrix {
    let gdeg = gens.first().map_or(0, |g| g.degree());
    let target = j + i64::from(gdeg);
    let dom = graded_dim(j);
    let mut out = ExactMatrix::zeros(field, gens.len() * dom, graded_dim(target));
    if dom == 0 {
        return out;
    }
    let basis = monomial_basis(j as u32);
    for (v, g) in gens.iter().enumerate() {
        debug_assert_eq!(g.degree(), gdeg);
        let terms = g.reduce_mod(&field);
        for (i, mono) in basis.iter().enumerate() {
            let row = v * dom + i;
            for &(m, c) in &terms {
                out.set(row, mono.mul(&m).index(), c);
            }
        }
    }
    out
}

/// The map `S_m^3 -> S_{m+d-1}`, `(a, b, c) -> a f_x + b f_y + c f_z`.
///
/// Its kernel is the space of Jacobian syzygies of degree `m`.
pub fn jacobian_relation_map(f: &HomogPoly, m: i64, field: PrimeField) -> Result<GradedMap, Error> {
    let d = f.degree();
    let partials = f.partials()?;
    let codomain = m + i64::from(d) - 1;
    check_cap(d, codomain)?;
    let map = GradedMap {
        domain_degrees: vec![(m, 3)],
        codomain_degree: codomain,
        matrix: product_rows(&partials, m, field).transpose(),
    };
    map.check_shape();
    Ok(map)
}

/// Multiplication by `g`, `S_j -> S_{j + deg g}`.
pub fn multiplication_map(g: &HomogPoly, j: i64, field: PrimeField) -> Result<GradedMap, Error> {
    if j < 0 {
        return Err(Error::InvalidInput(format!("negative source degree {j}")));
    }
    let map = GradedMap {
        domain_degrees: vec![(j, 1)],
        codomain_degree: j + i64::from(g.degree()),
        matrix: product_rows(std::slice::from_ref(g), j, field).transpose(),
    };
    map.check_shape();
    Ok(map)
}

/// Matrix whose column span is the degree-`k` piece of the Jacobian ideal.
pub fn ideal_piece_matrix(f: &HomogPoly, k: i64, field: PrimeField) -> Result<GradedMap, Error> {
    if k < 0 {
        return Err(Error::InvalidInput(format!("negative degree {k}")));
    }
    jacobian_relation_map(f, k - i64::from(f.degree()) + 1, field)
}
