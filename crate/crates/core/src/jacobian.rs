//! Jacobian syzygies, the Milnor algebra, `τ(C)` and `N(f) = I_f / J_f`.
//!
//! All quantities are graded dimensions read off from one family of matrices:
//! the relation map `S_m^3 -> S_{m+d-1}`. Its kernel gives `ar(f)_m` and its
//! image is `(J_f)_{m+d-1}`. Two independent routes are implemented for both
//! `τ(C)` and the vector `n(f)`:
//!
//! * `τ` from the Euler characteristic of the logarithmic bundle (one kernel
//!   in degree `2d-4`), and from the stabilized Hilbert function of `M(f)`;
//! * `n(f)` by descending colon recursion for the saturation `I_f`, and from
//!   the Euler characteristic identity given `τ` and `ar(f)`.

use std::collections::{BTreeMap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binom2;
use crate::field::PrimeField;
use crate::graded::product_rows;
use crate::matrix::ExactMatrix;
use crate::poly::{graded_dim, monomial_basis, reduced_check, HomogPoly, Monomial};
use crate::Error;

/// Degree-`k` data of one curve over one prime, with a rank cache keyed by
/// the source degree `m` of the relation map.
#[derive(Debug, Clone)]
pub struct Jacobian {
    d: u32,
    partials: [HomogPoly; 3],
    field: PrimeField,
    ranks: BTreeMap<i64, usize>,
}

impl Jacobian {
    pub fn new(f: &HomogPoly, field: PrimeField) -> Result<Self, Error> {
        if f.degree() == 0 {
            return Err(Error::InvalidInput("curve degree must be at least 1".into()));
        }
        Ok(Self {
            d: f.degree(),
            partials: f.partials()?,
            field,
            ranks: BTreeMap::new(),
        })
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    fn d(&self) -> i64 {
        i64::from(self.d)
    }

    fn cap(&self) -> i64 {
        4 * self.d()
    }

    fn compute_rank(&self, m: i64) -> usize {
        if m < 0 {
            return 0;
        }
        product_rows(&self.partials, m, self.field).rank()
    }

    /// Computes the relation-map ranks for all `ms` concurrently.
    pub fn prefetch(&mut self, ms: impl IntoIterator<Item = i64>) -> Result<(), Error> {
        let todo: Vec<i64> = ms
            .into_iter()
            .filter(|m| !self.ranks.contains_key(m))
            .collect();
        for &m in &todo {
            self.check_cap(m)?;
        }
        let done: Vec<(i64, usize)> = todo
            .par_iter()
            .map(|&m| (m, self.compute_rank(m)))
            .collect();
        self.ranks.extend(done);
        Ok(())
    }

    fn check_cap(&self, m: i64) -> Result<(), Error> {
        let target = m + self.d() - 1;
        if target > self.cap() {
            return Err(Error::DegreeCap {
                requested: target,
                cap: self.cap(),
            });
        }
        Ok(())
    }

    /// Rank of `S_m^3 -> S_{m+d-1}`.
    pub fn relation_rank(&mut self, m: i64) -> Result<usize, Error> {
        if m < 0 {
            return Ok(0);
        }
        if let Some(&r) = self.ranks.get(&m) {
            return Ok(r);
        }
        self.check_cap(m)?;
        let r = self.compute_rank(m);
        self.ranks.insert(m, r);
        Ok(r)
    }

    /// `ar(f)_k = dim AR(f)_k`.
    pub fn ar_dim(&mut self, k: i64) -> Result<usize, Error> {
        if k < 0 {
            return Ok(0);
        }
        Ok(3 * graded_dim(k) - self.relation_rank(k)?)
    }

    /// Smallest `m` with a nonzero syzygy of degree `m`; at most `d - 1`.
    pub fn mdr(&mut self) -> Result<u32, Error> {
        for m in 0..self.d() {
            if self.ar_dim(m)? > 0 {
                return Ok(m as u32);
            }
        }
        Err(Error::Internal(format!(
            "no syzygy found below degree {}, but the Koszul syzygies live there",
            self.d
        )))
    }

    /// `dim (J_f)_k`.
    pub fn jacobian_piece_dim(&mut self, k: i64) -> Result<usize, Error> {
        self.relation_rank(k - self.d() + 1)
    }

    /// `dim M(f)_k`.
    pub fn milnor_hilbert(&mut self, k: i64) -> Result<usize, Error> {
        if k < 0 {
            return Ok(0);
        }
        Ok(graded_dim(k) - self.jacobian_piece_dim(k)?)
    }

    /// `τ(C)` from `χ(T⟨C⟩(2d-5))`, where only `h^0 = ar(f)_{2d-4}` survives.
    pub fn tjurina_chi(&mut self) -> Result<i64, Error> {
        let d = self.d();
        if d < 2 {
            return Err(Error::InvalidInput("τ needs degree at least 2".into()));
        }
        let h0 = self.ar_dim(2 * d - 4)? as i64;
        let tau = h0 - 3 * binom2(2 * d - 2) + binom2(3 * d - 3);
        if tau < 0 {
            return Err(Error::Internal(format!(
                "negative Tjurina number {tau} from ar(f)_{} = {h0}",
                2 * d - 4
            )));
        }
        Ok(tau)
    }

    /// `τ(C)` as the stable value of `dim M(f)_k` for `k ≥ 3d-5`.
    pub fn tjurina_stable(&mut self) -> Result<i64, Error> {
        let d = self.d();
        if d < 2 {
            return Err(Error::InvalidInput("τ needs degree at least 2".into()));
        }
        let cap = ((d - 1) * (d - 1) + 1).min(self.cap());
        let mut k = 3 * d - 5;
        let mut prev = self.milnor_hilbert(k)?;
        while k < cap {
            k += 1;
            let cur = self.milnor_hilbert(k)?;
            if cur == prev {
                return Ok(cur as i64);
            }
            prev = cur;
        }
        Err(Error::Internal(format!(
            "dim M(f)_k did not stabilize up to degree {cap} (bad prime or non-reduced input)"
        )))
    }

    /// Echelon basis of the annihilator of `(J_f)_k` in the dual of `S_k`.
    fn jacobian_annihilator(&mut self, k: i64) -> Result<ExactMatrix, Error> {
        let m = k - self.d() + 1;
        self.check_cap(m)?;
        let gens = product_rows(&self.partials, m, self.field);
        let kernel = gens.kernel_basis();
        self.ranks
            .entry(m)
            .or_insert(graded_dim(k) - kernel.len());
        Ok(ExactMatrix::from_rows(self.field, graded_dim(k), &kernel))
    }

    /// `dim (I_f)_k` for `k = 0 ..= 3d-5`, where `I_f` is the saturation of
    /// `J_f`.
    ///
    /// At `k0 = 3d-5` the two ideals agree. Below it, `g ∈ (I_f)_k` iff
    /// `x g, y g, z g ∈ (I_f)_{k+1}`; with `(I_f)_{k+1}` described by the
    /// functionals vanishing on it, the three conditions stack into one
    /// matrix whose kernel is `(I_f)_k` and whose row space is the next
    /// annihilator.
    pub fn saturation_dims(&mut self) -> Result<Vec<usize>, Error> {
        let d = self.d();
        if d < 2 {
            return Ok(Vec::new());
        }
        let top = 3 * d - 5;
        let mut ann = self.jacobian_annihilator(top)?;
        let mut dims = vec![0usize; top as usize + 1];
        dims[top as usize] = graded_dim(top) - ann.rows();
        for k in (0..top).rev() {
            let basis = monomial_basis(k as u32);
            let shifted: Vec<[usize; 3]> = basis
                .iter()
                .map(|m| {
                    [0, 1, 2].map(|v| m.mul(&Monomial::var(v)).index())
                })
                .collect();
            let mut stacked = ExactMatrix::zeros(self.field, 3 * ann.rows(), basis.len());
            for r in 0..ann.rows() {
                let row = ann.row(r);
                for (j, targets) in shifted.iter().enumerate() {
                    for v in 0..3 {
                        let val = row[targets[v]];
                        if val != 0 {
                            stacked.set(3 * r + v, j, val);
                        }
                    }
                }
            }
            ann = stacked.row_space_basis();
            dims[k as usize] = basis.len() - ann.rows();
        }
        Ok(dims)
    }

    /// `n(f)_k = dim (I_f)_k - dim (J_f)_k` for `k = 0 ..= T`.
    pub fn n_dims_saturation(&mut self) -> Result<Vec<usize>, Error> {
        let d = self.d();
        if d < 3 {
            return Ok(Vec::new());
        }
        let t = 3 * d - 6;
        let sat = self.saturation_dims()?;
        self.prefetch((0..=t).map(|k| k - d + 1).filter(|&m| m >= 0))?;
        (0..=t)
            .map(|k| {
                let j = self.jacobian_piece_dim(k)?;
                sat[k as usize].checked_sub(j).ok_or_else(|| {
                    Error::Internal(format!(
                        "saturation smaller than the Jacobian ideal in degree {k}"
                    ))
                })
            })
            .collect()
    }

    /// `n(f)` from the Euler characteristic identity, given `τ`.
    pub fn n_dims_chi(&mut self, tau: i64) -> Result<Vec<usize>, Error> {
        let d = self.d();
        if d < 3 {
            return Ok(Vec::new());
        }
        let ar: Vec<usize> = (0..=2 * d - 4)
            .map(|k| self.ar_dim(k))
            .collect::<Result<_, _>>()?;
        n_dims_from_chi(self.d, &ar, tau)
    }
}

/// `n(f)_{d+k} = h^0 + h^2 - χ(T⟨C⟩(k))` with `h^0 = ar(f)_{k+1}`,
/// `h^2 = ar(f)_{d-5-k}` and `χ = 3 C(k+3,2) - C(d+k+2,2) + τ`.
///
/// `ar` must cover degrees `0 ..= 2d-5`.
pub fn n_dims_from_chi(d: u32, ar: &[usize], tau: i64) -> Result<Vec<usize>, Error> {
    let d = i64::from(d);
    if d < 3 {
        return Ok(Vec::new());
    }
    let ar_at = |k: i64| -> Result<i64, Error> {
        if k < 0 {
            return Ok(0);
        }
        ar.get(k as usize).map(|&v| v as i64).ok_or_else(|| {
            Error::InvalidInput(format!("ar(f)_{k} not supplied"))
        })
    };
    let t = 3 * d - 6;
    (0..=t)
        .map(|j| {
            let k = j - d;
            let chi = 3 * binom2(k + 3) - binom2(d + k + 2) + tau;
            let n = ar_at(k + 1)? + ar_at(d - 5 - k)? - chi;
            usize::try_from(n).map_err(|_| {
                Error::Internal(format!("negative n(f)_{j} = {n} from the χ identity"))
            })
        })
        .collect()
}

/// `ν(C) = max n(f)_k`, checked against the middle degree(s).
pub fn nu(n_dims: &[usize], d: u32) -> Result<usize, Error> {
    let Some(&max) = n_dims.iter().max() else {
        return Ok(0);
    };
    let d = d as usize;
    let middle: Vec<usize> = if d % 2 == 0 {
        vec![3 * (d / 2) - 3]
    } else {
        let m = d / 2;
        vec![3 * m - 2, 3 * m - 1]
    };
    for &k in &middle {
        if n_dims.get(k) != Some(&max) {
            return Err(Error::Internal(format!(
                "n(f)_{k} = {:?} differs from ν = {max}",
                n_dims.get(k)
            )));
        }
    }
    Ok(max)
}

pub fn ar_dim(f: &HomogPoly, k: i64, field: PrimeField) -> Result<usize, Error> {
    Jacobian::new(f, field)?.ar_dim(k)
}

pub fn mdr(f: &HomogPoly, field: PrimeField) -> Result<u32, Error> {
    Jacobian::new(f, field)?.mdr()
}

pub fn milnor_hilbert(f: &HomogPoly, k: i64, field: PrimeField) -> Result<usize, Error> {
    Jacobian::new(f, field)?.milnor_hilbert(k)
}

pub fn tjurina_chi(f: &HomogPoly, field: PrimeField) -> Result<i64, Error> {
    Jacobian::new(f, field)?.tjurina_chi()
}

pub fn tjurina_stable(f: &HomogPoly, field: PrimeField) -> Result<i64, Error> {
    Jacobian::new(f, field)?.tjurina_stable()
}

pub fn n_dims_saturation(f: &HomogPoly, field: PrimeField) -> Result<Vec<usize>, Error> {
    Jacobian::new(f, field)?.n_dims_saturation()
}

pub fn n_dims_chi(f: &HomogPoly, tau: i64, field: PrimeField) -> Result<Vec<usize>, Error> {
    Jacobian::new(f, field)?.n_dims_chi(tau)
}

/// Knobs for [`analyze`].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct AnalysisConfig {
    /// Seed for prime selection and random lines.
    pub seed: u64,
    /// Run both `τ` and both `n(f)` algorithms. `None` means: only for
    /// degree at most 16.
    pub verify: Option<bool>,
    /// Analyze curves that fail the reducedness test anyway, without any
    /// validity claims.
    pub allow_nonreduced: bool,
    pub reduced_trials: usize,
    /// Primes that must agree before a result is accepted.
    pub primes: usize,
    /// Upper bound on primes tried after disagreements.
    pub max_primes: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            seed: 0x6a61_6370,
            verify: None,
            allow_nonreduced: false,
            reduced_trials: 3,
            primes: 2,
            max_primes: 6,
        }
    }
}

impl AnalysisConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn verifies(&self, d: u32) -> bool {
        self.verify.unwrap_or(d <= 16)
    }
}

/// Full invariant record of one curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveAnalysis {
    pub degree: u32,
    pub mdr: u32,
    #[serde(rename = "T")]
    pub t: i64,
    pub tau: i64,
    /// `ar(f)_k` for `k = 0 ..= 2d-4`.
    pub ar_dims: Vec<usize>,
    /// `n(f)_k` for `k = 0 ..= T`.
    pub n_dims: Vec<usize>,
    pub nu: usize,
    /// `dim M(f)_k` for `k = 0 ..= 3d-4`.
    pub milnor_hilbert: Vec<usize>,
    pub primes_used: Vec<u64>,
    /// Number of primes drawn beyond the configured count.
    pub escalations: usize,
    /// Both algorithms for `τ` and `n(f)` were run and agreed.
    pub verified: bool,
    /// False only when the reducedness test failed and was overridden.
    pub reduced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct PrimeProfile {
    mdr: u32,
    tau: i64,
    ar_dims: Vec<usize>,
    n_dims: Vec<usize>,
    milnor_hilbert: Vec<usize>,
}

fn profile_for_prime(
    f: &HomogPoly,
    field: PrimeField,
    verify: bool,
    reduced: bool,
) -> Result<PrimeProfile, Error> {
    let mut jac = Jacobian::new(f, field)?;
    let d = jac.d();
    // relation ranks for k = 0 ..= 3d-4; the anchor degree of the saturation
    // is filled in from its kernel computation
    let anchor = 2 * d - 4;
    jac.prefetch((0..=(2 * d - 3)).filter(|&m| m != anchor || d < 3))?;
    let n_dims = jac.n_dims_saturation()?;
    let ar_dims = (0..=anchor.max(0))
        .map(|k| jac.ar_dim(k))
        .collect::<Result<Vec<_>, _>>()?;
    let milnor_hilbert = (0..=3 * d - 4)
        .map(|k| jac.milnor_hilbert(k))
        .collect::<Result<Vec<_>, _>>()?;
    let mdr = jac.mdr()?;
    if !reduced {
        let tau = 3 * graded_dim(2 * d - 4) as i64 - jac.relation_rank(2 * d - 4)? as i64
            - 3 * binom2(2 * d - 2)
            + binom2(3 * d - 3);
        return Ok(PrimeProfile {
            mdr,
            tau,
            ar_dims,
            n_dims,
            milnor_hilbert,
        });
    }
    let tau = jac.tjurina_chi()?;
    if verify {
        let stable = jac.tjurina_stable()?;
        if stable != tau {
            return Err(Error::Internal(format!(
                "τ disagreement mod {}: χ route {tau}, stabilization {stable}",
                field.modulus()
            )));
        }
        let chi = n_dims_from_chi(jac.d, &ar_dims, tau)?;
        if chi != n_dims {
            return Err(Error::Internal(format!(
                "n(f) disagreement mod {}: saturation {n_dims:?}, χ route {chi:?}",
                field.modulus()
            )));
        }
    }
    Ok(PrimeProfile {
        mdr,
        tau,
        ar_dims,
        n_dims,
        milnor_hilbert,
    })
}

/// Checks the structural invariants every reduced curve must satisfy.
pub fn check_invariants(a: &CurveAnalysis) -> Result<(), Error> {
    let d = i64::from(a.degree);
    if d >= 3 {
        let t = a.t as usize;
        if a.n_dims.len() != t + 1 {
            return Err(Error::Internal(format!(
                "n(f) has {} entries, expected T + 1 = {}",
                a.n_dims.len(),
                t + 1
            )));
        }
        for k in 0..=t {
            if a.n_dims[k] != a.n_dims[t - k] {
                return Err(Error::Internal(format!(
                    "duality fails: n(f)_{k} = {} but n(f)_{} = {}",
                    a.n_dims[k],
                    t - k,
                    a.n_dims[t - k]
                )));
            }
        }
        let half = t / 2;
        let rising = a.n_dims[..=half].windows(2).all(|w| w[0] <= w[1]);
        let falling = a.n_dims[half..].windows(2).all(|w| w[0] >= w[1]);
        if !(rising && falling) {
            return Err(Error::Internal(format!(
                "n(f) is not unimodal: {:?}",
                a.n_dims
            )));
        }
        let nu = nu(&a.n_dims, a.degree)?;
        if nu != a.nu {
            return Err(Error::Internal(format!("ν recorded as {} but max is {nu}", a.nu)));
        }
    }
    if i64::from(a.mdr) > d - 1 {
        return Err(Error::Internal(format!("mdr = {} exceeds d - 1", a.mdr)));
    }
    if a.tau < 0 {
        return Err(Error::Internal(format!("negative τ = {}", a.tau)));
    }
    Ok(())
}

/// Primes accepted for `f`: every nonzero coefficient must survive
/// reduction.
fn prime_is_good(f: &HomogPoly, field: &PrimeField) -> bool {
    f.reduce_mod(field).len() == f.num_terms()
}

fn euler_identity_holds(f: &HomogPoly) -> Result<bool, Error> {
    let [fx, fy, fz] = f.partials()?;
    let lhs = HomogPoly::monomial(1, Monomial::var(0))
        .multiply(&fx)
        .add(&HomogPoly::monomial(1, Monomial::var(1)).multiply(&fy))?
        .add(&HomogPoly::monomial(1, Monomial::var(2)).multiply(&fz))?;
    Ok(lhs == f.scale(&f.degree().into()))
}

/// Computes the full invariant record of the curve `f = 0`.
///
/// Each invariant is computed over `config.primes` random primes; results
/// must agree. Disagreement draws further primes and accepts the majority
/// profile, failing after `config.max_primes`.
pub fn analyze(f: &HomogPoly, config: &AnalysisConfig) -> Result<CurveAnalysis, Error> {
    let d = f.degree();
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if d < 2 {
        return Err(Error::InvalidInput(format!(
            "curve degree must be at least 2, got {d}"
        )));
    }
    if !euler_identity_holds(f)? {
        return Err(Error::Internal("Euler relation fails".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let draw = |rng: &mut ChaCha8Rng| loop {
        let p = PrimeField::random(rng);
        if prime_is_good(f, &p) {
            return p;
        }
    };

    let check_field = draw(&mut rng);
    let reduced = reduced_check(f, config.reduced_trials, &check_field, &mut rng);
    if !reduced && !config.allow_nonreduced {
        return Err(Error::NotReduced);
    }
    let verify = reduced && config.verifies(d);

    let mut fields: Vec<PrimeField> = Vec::new();
    let mut profiles: Vec<Result<PrimeProfile, Error>> = Vec::new();
    let wanted = config.primes.max(1);
    let batch: Vec<PrimeField> = (0..wanted).map(|_| draw(&mut rng)).collect();
    profiles.extend(
        batch
            .par_iter()
            .map(|&p| profile_for_prime(f, p, verify, reduced))
            .collect::<Vec<_>>(),
    );
    fields.extend(batch);

    let chosen = loop {
        let unanimous = profiles.iter().all(|p| p.is_ok())
            && profiles.windows(2).all(|w| w[0].as_ref().ok() == w[1].as_ref().ok());
        if unanimous {
            break profiles[0].as_ref().expect("all profiles are ok").clone();
        }
        let mut votes: HashMap<&PrimeProfile, usize> = HashMap::new();
        for p in profiles.iter().flatten() {
            *votes.entry(p).or_default() += 1;
        }
        let mut ranked: Vec<(&PrimeProfile, usize)> = votes.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1));
        if let Some(&(best, count)) = ranked.first() {
            let runner_up = ranked.get(1).map_or(0, |r| r.1);
            if count >= 2 && count > runner_up {
                break best.clone();
            }
        }
        if fields.len() >= config.max_primes.max(wanted) {
            let detail: Vec<String> = fields
                .iter()
                .zip(&profiles)
                .map(|(p, r)| match r {
                    Ok(pr) => format!("p={}: τ={} n={:?}", p.modulus(), pr.tau, pr.n_dims),
                    Err(e) => format!("p={}: {e}", p.modulus()),
                })
                .collect();
            return Err(Error::Internal(format!(
                "no agreement among {} primes: {}",
                fields.len(),
                detail.join("; ")
            )));
        }
        let p = draw(&mut rng);
        profiles.push(profile_for_prime(f, p, verify, reduced));
        fields.push(p);
    };

    let analysis = CurveAnalysis {
        degree: d,
        mdr: chosen.mdr,
        t: 3 * i64::from(d) - 6,
        tau: chosen.tau,
        nu: if reduced {
            nu(&chosen.n_dims, d)?
        } else {
            chosen.n_dims.iter().copied().max().unwrap_or(0)
        },
        ar_dims: chosen.ar_dims,
        n_dims: chosen.n_dims,
        milnor_hilbert: chosen.milnor_hilbert,
        escalations: fields.len() - wanted,
        primes_used: fields.iter().map(|p| p.modulus()).collect(),
        verified: verify,
        reduced,
    };
    if reduced {
        check_invariants(&analysis)?;
    }
    Ok(analysis)
}
