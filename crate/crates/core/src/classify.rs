//! Closed-form bounds on `τ(C)` in terms of `(d, mdr(f))`, the resulting
//! formulas for `ν(C)`, and checks of all of them against computed
//! invariants.

use serde::{Deserialize, Serialize};

use crate::binom2;
use crate::jacobian::CurveAnalysis;
use crate::poly::graded_dim;
use crate::Error;

/// `(d-1)(d-r-1)`.
pub fn tau_min(d: i64, r: i64) -> i64 {
    (d - 1) * (d - r - 1)
}

/// `(d-1)^2 - r(d-1-r)`.
pub fn tau_max(d: i64, r: i64) -> i64 {
    (d - 1) * (d - 1) - r * (d - 1 - r)
}

/// `⌈3(d-1)^2 / 4⌉`.
pub fn three_quarter_bound(d: i64) -> i64 {
    (3 * (d - 1) * (d - 1) + 3).div_euclid(4)
}

/// du Plessis–Wall bounds for a curve of degree `d` with `mdr(f) = r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DpwReport {
    pub d: i64,
    pub r: i64,
    pub tau_min: i64,
    pub tau_max: i64,
    /// `tau_max - C(2r+2-d, 2)`, only when `r ≥ d/2`.
    pub stronger_max: Option<i64>,
    pub observed_tau: Option<i64>,
    pub within_min: Option<bool>,
    pub within_max: Option<bool>,
    pub within_stronger: Option<bool>,
}

impl DpwReport {
    pub fn with_observed(mut self, tau: i64) -> Self {
        self.observed_tau = Some(tau);
        self.within_min = Some(self.tau_min <= tau);
        self.within_max = Some(tau <= self.tau_max);
        self.within_stronger = self.stronger_max.map(|s| tau <= s);
        self
    }

    /// All evaluated bounds hold.
    pub fn satisfied(&self) -> bool {
        [self.within_min, self.within_max, self.within_stronger]
            .iter()
            .all(|b| b.unwrap_or(true))
    }
}

pub fn tau_bounds(d: i64, r: i64) -> Result<DpwReport, Error> {
    if d < 2 {
        return Err(Error::InvalidInput(format!("degree {d} < 2")));
    }
    if r == 0 {
        return Err(Error::InvalidInput(
            "mdr = 0: lines through one point, no τ bounds apply".into(),
        ));
    }
    if r < 0 || r > d - 1 {
        return Err(Error::InvalidInput(format!("mdr {r} outside 1..={}", d - 1)));
    }
    let max = tau_max(d, r);
    Ok(DpwReport {
        d,
        r,
        tau_min: tau_min(d, r),
        tau_max: max,
        stronger_max: (2 * r >= d).then(|| max - binom2(2 * r + 2 - d)),
        observed_tau: None,
        within_min: None,
        within_max: None,
        within_stronger: None,
    })
}

/// Which closed form produced a predicted `ν`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NuBranch {
    /// `r < d/2`: `ν = τ_max(d, r) - τ`.
    SmallMdr,
    /// `r ≥ (d-2)/2`: `ν = ⌈3(d-1)^2/4⌉ - τ`.
    LargeMdr,
    /// Both apply and agree.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuPrediction {
    pub value: i64,
    pub branch: NuBranch,
}

pub fn predicted_nu(d: i64, r: i64, tau: i64) -> Result<NuPrediction, Error> {
    if d < 3 || r < 1 {
        return Err(Error::InvalidInput(format!(
            "ν formula needs d ≥ 3 and r ≥ 1, got d = {d}, r = {r}"
        )));
    }
    let small = (2 * r < d).then(|| tau_max(d, r) - tau);
    let large = (2 * r >= d - 2).then(|| three_quarter_bound(d) - tau);
    match (small, large) {
        (Some(a), Some(b)) if a == b => Ok(NuPrediction {
            value: a,
            branch: NuBranch::Both,
        }),
        (Some(a), Some(b)) => Err(Error::Internal(format!(
            "the two ν formulas disagree at d = {d}, r = {r}: {a} vs {b}"
        ))),
        (Some(a), None) => Ok(NuPrediction {
            value: a,
            branch: NuBranch::SmallMdr,
        }),
        (None, Some(b)) => Ok(NuPrediction {
            value: b,
            branch: NuBranch::LargeMdr,
        }),
        (None, None) => unreachable!("r < d/2 or r ≥ (d-2)/2 always holds"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassLabel {
    Free,
    NearlyFree,
    Other(usize),
    /// `mdr = 0`: the curve is a pencil of lines.
    LinesThroughPoint,
    /// Degree at most 2.
    LowDegree,
    /// Analyzed with the reducedness check overridden.
    NonReduced,
}

impl ClassLabel {
    pub fn name(&self) -> &'static str {
        match self {
            ClassLabel::Free => "free",
            ClassLabel::NearlyFree => "nearly_free",
            ClassLabel::Other(_) => "other",
            ClassLabel::LinesThroughPoint => "lines_through_point",
            ClassLabel::LowDegree => "low_degree",
            ClassLabel::NonReduced => "non_reduced",
        }
    }

    /// Theorem checks only make sense for these.
    pub fn is_regular(&self) -> bool {
        matches!(
            self,
            ClassLabel::Free | ClassLabel::NearlyFree | ClassLabel::Other(_)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub label: ClassLabel,
    /// `τ = 0`.
    pub smooth: bool,
}

/// Label by `ν` without asserting the characterizations.
pub fn class_label(a: &CurveAnalysis) -> ClassLabel {
    if !a.reduced {
        ClassLabel::NonReduced
    } else if a.degree <= 2 {
        ClassLabel::LowDegree
    } else if a.mdr == 0 {
        ClassLabel::LinesThroughPoint
    } else {
        match a.nu {
            0 => ClassLabel::Free,
            1 => ClassLabel::NearlyFree,
            n => ClassLabel::Other(n),
        }
    }
}

/// Labels the curve by `ν` and asserts the `τ = τ_max` / `τ = τ_max - 1`
/// characterizations of free and nearly free curves.
pub fn classify(a: &CurveAnalysis) -> Result<Classification, Error> {
    let label = class_label(a);
    let out = Classification {
        label,
        smooth: a.reduced && a.tau == 0,
    };
    if !label.is_regular() {
        return Ok(out);
    }
    for check in [free_characterization(a), nearly_free_characterization(a)] {
        if !check.passed {
            return Err(Error::Internal(check.detail));
        }
    }
    Ok(out)
}

/// Generic splitting type `(d1, d2)` of the logarithmic bundle, determined by
/// `(d, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingType {
    pub d1: i64,
    pub d2: i64,
}

impl SplittingType {
    /// `(d-1)^2 - d1 d2 = τ + ν`.
    pub fn accounts_for(&self, d: i64, tau: i64, nu: i64) -> bool {
        (d - 1) * (d - 1) - self.d1 * self.d2 == tau + nu
    }
}

pub fn splitting_type(d: i64, r: i64) -> Result<SplittingType, Error> {
    if r < 1 {
        return Err(Error::InvalidInput(format!("splitting type needs r ≥ 1, got {r}")));
    }
    let d1 = if 2 * r < d - 2 { r } else { (d - 1).div_euclid(2) };
    Ok(SplittingType { d1, d2: d - 1 - d1 })
}

/// `ν` forced by `(d, τ)` alone when `τ` is small enough that
/// `mdr(f) ≥ ⌊(d-1)/2⌋`; `None` when the hypothesis fails.
pub fn prop_terao_nu(d: i64, tau: i64) -> Result<Option<i64>, Error> {
    if d < 4 {
        return Err(Error::InvalidInput(format!("needs degree ≥ 4, got {d}")));
    }
    let m = d / 2;
    let threshold = if d % 2 == 0 {
        (m + 1) * (2 * m - 1)
    } else {
        2 * m * (m + 1)
    };
    Ok((tau < threshold).then(|| three_quarter_bound(d) - tau))
}

/// Consistency of a computed analysis with the characterization of
/// irreducible curves with `mdr(f) = 1` for `d ≥ 6`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RccReport {
    /// The caller asserted irreducibility.
    pub hypothesis_met: bool,
    /// `d^2 - 4d + 8`.
    pub tau_threshold: i64,
    pub tau_meets_threshold: bool,
    pub mdr_is_one: bool,
    /// `τ ≥ d^2 - 4d + 8` iff `r = 1`; absent without the hypothesis.
    pub equivalence_holds: Option<bool>,
    /// With `r = 1`: `τ = d^2 - 3d + 2`.
    pub tau_formula_holds: Option<bool>,
    /// With `r = 1`: the curve is nearly free.
    pub nearly_free: Option<bool>,
    /// Whether a supplied total Milnor number equals `τ`, i.e. all
    /// singularities are weighted homogeneous.
    pub mu_equals_tau: Option<bool>,
    pub note: String,
}

impl RccReport {
    pub fn consistent(&self) -> bool {
        [self.equivalence_holds, self.tau_formula_holds, self.nearly_free]
            .iter()
            .all(|b| b.unwrap_or(true))
    }
}

pub fn prop_rcc_consistency(
    a: &CurveAnalysis,
    mu_hint: Option<i64>,
    irreducible_hint: bool,
) -> Result<RccReport, Error> {
    let d = i64::from(a.degree);
    if d < 6 {
        return Err(Error::InvalidInput(format!("needs degree ≥ 6, got {d}")));
    }
    let threshold = d * d - 4 * d + 8;
    let tau_meets_threshold = a.tau >= threshold;
    let mdr_is_one = a.mdr == 1;
    let mut report = RccReport {
        hypothesis_met: irreducible_hint,
        tau_threshold: threshold,
        tau_meets_threshold,
        mdr_is_one,
        equivalence_holds: None,
        tau_formula_holds: None,
        nearly_free: None,
        mu_equals_tau: mu_hint.map(|mu| mu == a.tau),
        note: String::new(),
    };
    if !irreducible_hint {
        report.note = "irreducibility not asserted; equivalence not checked".into();
        return Ok(report);
    }
    report.equivalence_holds = Some(tau_meets_threshold == mdr_is_one);
    if mdr_is_one {
        report.tau_formula_holds = Some(a.tau == d * d - 3 * d + 2);
        report.nearly_free = Some(a.nu == 1);
    }
    report.note = if report.consistent() {
        "consistent".into()
    } else {
        format!(
            "VIOLATION: τ = {}, threshold {threshold}, mdr = {}, ν = {}",
            a.tau, a.mdr, a.nu
        )
    };
    Ok(report)
}

/// Outcome of one closed-form check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl TheoremCheck {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            passed,
            detail,
        }
    }
}

fn free_characterization(a: &CurveAnalysis) -> TheoremCheck {
    let (d, r) = (i64::from(a.degree), i64::from(a.mdr));
    let at_max = a.tau == tau_max(d, r);
    let free = a.nu == 0;
    let passed = at_max == free && (!free || 2 * r < d);
    TheoremCheck::new(
        "free_iff_tau_max",
        passed,
        format!(
            "τ = {}, τ_max = {}, ν = {}, r = {r}, d = {d}",
            a.tau,
            tau_max(d, r),
            a.nu
        ),
    )
}

fn nearly_free_characterization(a: &CurveAnalysis) -> TheoremCheck {
    let (d, r) = (i64::from(a.degree), i64::from(a.mdr));
    let below_max = a.tau == tau_max(d, r) - 1;
    let nearly_free = a.nu == 1;
    let passed = below_max == nearly_free && (!nearly_free || 2 * r <= d);
    TheoremCheck::new(
        "nearly_free_iff_tau_max_minus_one",
        passed,
        format!(
            "τ = {}, τ_max - 1 = {}, ν = {}, r = {r}, d = {d}",
            a.tau,
            tau_max(d, r) - 1,
            a.nu
        ),
    )
}

/// Every check that applies to the analysis. Degenerate curves get none.
pub fn theorem_checks(a: &CurveAnalysis) -> Vec<TheoremCheck> {
    let mut out = Vec::new();
    if !class_label(a).is_regular() {
        return out;
    }
    let d = i64::from(a.degree);
    let r = i64::from(a.mdr);
    let nu = a.nu as i64;

    match tau_bounds(d, r) {
        Ok(rep) => {
            let rep = rep.with_observed(a.tau);
            out.push(TheoremCheck::new(
                "dpw_bounds",
                rep.satisfied(),
                format!(
                    "{} ≤ τ = {} ≤ {} (stronger: {:?})",
                    rep.tau_min, a.tau, rep.tau_max, rep.stronger_max
                ),
            ));
        }
        Err(e) => out.push(TheoremCheck::new("dpw_bounds", false, e.to_string())),
    }

    match predicted_nu(d, r, a.tau) {
        Ok(p) => out.push(TheoremCheck::new(
            "nu_formula",
            p.value == nu,
            format!("predicted {} ({:?}), computed {nu}", p.value, p.branch),
        )),
        Err(e) => out.push(TheoremCheck::new("nu_formula", false, e.to_string())),
    }

    out.push(free_characterization(a));
    out.push(nearly_free_characterization(a));

    match splitting_type(d, r) {
        Ok(st) => out.push(TheoremCheck::new(
            "splitting_identity",
            st.accounts_for(d, a.tau, nu),
            format!(
                "(d-1)^2 - d1 d2 = {} vs τ + ν = {}",
                (d - 1) * (d - 1) - st.d1 * st.d2,
                a.tau + nu
            ),
        )),
        Err(e) => out.push(TheoremCheck::new("splitting_identity", false, e.to_string())),
    }

    // no two independent syzygies with degree sum below d - 1
    let mut gap_ok = true;
    let mut gap_detail = String::from("ok");
    for k in 0..(d - 1 - r).max(0) {
        let expected = graded_dim(k - r);
        let got = a.ar_dims.get(k as usize).copied();
        if got != Some(expected) {
            gap_ok = false;
            gap_detail = format!("ar(f)_{k} = {got:?}, expected dim S_{} = {expected}", k - r);
            break;
        }
    }
    out.push(TheoremCheck::new("syzygy_gap_count", gap_ok, gap_detail));

    let (ok, detail) = euler_characteristic_identity(a);
    out.push(TheoremCheck::new("euler_characteristic", ok, detail));

    if d >= 4 {
        if let Ok(Some(pred)) = prop_terao_nu(d, a.tau) {
            out.push(TheoremCheck::new(
                "small_tau_nu",
                pred == nu,
                format!("predicted {pred}, computed {nu}"),
            ));
        }
    }
    out
}

/// `ar(f)_{k+1} - n(f)_{d+k} + ar(f)_{d-5-k} = 3 C(k+3,2) - C(d+k+2,2) + τ`
/// at every `k` where all terms are known.
pub fn euler_characteristic_identity(a: &CurveAnalysis) -> (bool, String) {
    let d = i64::from(a.degree);
    let ar = |k: i64| -> Option<i64> {
        if k < 0 {
            Some(0)
        } else {
            a.ar_dims.get(k as usize).map(|&v| v as i64)
        }
    };
    let n = |j: i64| -> i64 {
        if j < 0 || j > a.t {
            0
        } else {
            a.n_dims.get(j as usize).map_or(0, |&v| v as i64)
        }
    };
    let mut checked = 0;
    for k in (-d - 2)..=(2 * d) {
        let (Some(h0), Some(h2)) = (ar(k + 1), ar(d - 5 - k)) else {
            continue;
        };
        let chi = 3 * binom2(k + 3) - binom2(d + k + 2) + a.tau;
        let lhs = h0 - n(d + k) + h2;
        if lhs != chi {
            return (false, format!("k = {k}: h0 - h1 + h2 = {lhs}, χ = {chi}"));
        }
        checked += 1;
    }
    (true, format!("{checked} degrees"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_bounds_examples() {
        let b = tau_bounds(4, 1).unwrap();
        assert_eq!(b.tau_max, 7);
        assert_eq!(b.tau_max - 1, 6);
        assert_eq!(tau_bounds(5, 2).unwrap().tau_max, 12);
        assert_eq!(tau_bounds(6, 2).unwrap().tau_max + 1, 20);
        assert!(tau_bounds(6, 0).is_err());
        assert_eq!(tau_bounds(5, 2).unwrap().stronger_max, None);
        // r = 3 ≥ 6/2: 25 - 3*2 - C(2, 2)
        assert_eq!(tau_bounds(6, 3).unwrap().stronger_max, Some(18));
    }

    #[test]
    fn tau_max_symmetry() {
        for d in 2..30 {
            for r in 0..d {
                assert_eq!(tau_max(d, r), tau_max(d, d - 1 - r));
            }
        }
    }

    #[test]
    fn three_quarter_bound_is_min_of_tau_max() {
        for d in 2..40 {
            let min = (0..=(d - 1) / 2).map(|r| tau_max(d, r)).min().unwrap();
            assert_eq!(three_quarter_bound(d), min, "d = {d}");
        }
    }

    #[test]
    fn predicted_nu_examples() {
        assert_eq!(
            predicted_nu(4, 1, 6).unwrap(),
            NuPrediction { value: 1, branch: NuBranch::Both }
        );
        assert_eq!(predicted_nu(4, 2, 6).unwrap().value, 1);
        assert_eq!(predicted_nu(4, 2, 6).unwrap().branch, NuBranch::LargeMdr);
        assert_eq!(predicted_nu(6, 3, 18).unwrap().value, 1);
        assert_eq!(predicted_nu(7, 1, 30).unwrap().branch, NuBranch::SmallMdr);
        assert!(predicted_nu(2, 1, 0).is_err());
        assert!(predicted_nu(5, 0, 0).is_err());
    }

    #[test]
    fn branches_agree_on_overlap() {
        for m in 2..30 {
            let d = 2 * m;
            for tau in [0, 5, 17] {
                let p = predicted_nu(d, m - 1, tau).unwrap();
                assert_eq!(p.branch, NuBranch::Both);
                assert_eq!(p.value, 3 * m * m - 3 * m + 1 - tau);
            }
            let d = 2 * m + 1;
            let p = predicted_nu(d, m, 4).unwrap();
            assert_eq!(p.branch, NuBranch::Both);
            assert_eq!(p.value, 3 * m * m - 4);
        }
    }

    #[test]
    fn splitting_type_examples() {
        let st = splitting_type(6, 1).unwrap();
        assert_eq!((st.d1, st.d2), (1, 4));
        assert!(st.accounts_for(6, 20, 1));
        let st = splitting_type(5, 2).unwrap();
        assert_eq!((st.d1, st.d2), (2, 2));
        assert!(st.accounts_for(5, 12, 0));
        let st = splitting_type(4, 2).unwrap();
        assert_eq!((st.d1, st.d2), (1, 2));
        assert!(st.accounts_for(4, 6, 1));
        assert!(splitting_type(4, 0).is_err());
    }

    #[test]
    fn prop_terao_examples() {
        assert_eq!(prop_terao_nu(6, 15).unwrap(), Some(4));
        assert_eq!(prop_terao_nu(6, 20).unwrap(), None);
        assert_eq!(prop_terao_nu(6, 19).unwrap(), Some(0));
        assert_eq!(prop_terao_nu(7, 23).unwrap(), Some(4));
        assert_eq!(prop_terao_nu(7, 24).unwrap(), None);
        assert!(prop_terao_nu(3, 0).is_err());
    }

    fn fake(d: u32, mdr: u32, tau: i64, nu: usize) -> CurveAnalysis {
        let t = 3 * i64::from(d) - 6;
        let mut n_dims = vec![0; t as usize + 1];
        if nu > 0 {
            let mid = t as usize / 2;
            n_dims[mid] = nu;
            n_dims[t as usize - mid] = nu;
        }
        CurveAnalysis {
            degree: d,
            mdr,
            t,
            tau,
            ar_dims: Vec::new(),
            n_dims,
            nu,
            milnor_hilbert: Vec::new(),
            primes_used: Vec::new(),
            escalations: 0,
            verified: false,
            reduced: true,
        }
    }

    #[test]
    fn classify_labels_and_characterizations() {
        assert_eq!(classify(&fake(5, 2, 12, 0)).unwrap().label, ClassLabel::Free);
        assert_eq!(classify(&fake(6, 1, 20, 1)).unwrap().label, ClassLabel::NearlyFree);
        let smooth = classify(&fake(3, 2, 0, 3)).unwrap();
        assert_eq!(smooth.label, ClassLabel::Other(3));
        assert!(smooth.smooth);
        assert_eq!(classify(&fake(6, 0, 25, 0)).unwrap().label, ClassLabel::LinesThroughPoint);
        // ν = 0 with τ below τ_max is contradictory
        assert!(matches!(classify(&fake(5, 2, 11, 0)), Err(Error::Internal(_))));
    }

    #[test]
    fn rcc_examples() {
        let c72 = fake(7, 1, 30, 1);
        let rep = prop_rcc_consistency(&c72, None, true).unwrap();
        assert!(rep.consistent());
        assert_eq!(rep.tau_formula_holds, Some(true));

        let b3 = fake(6, 3, 18, 1);
        let rep = prop_rcc_consistency(&b3, Some(18), true).unwrap();
        assert!(rep.consistent());
        assert!(!rep.tau_meets_threshold);
        assert_eq!(rep.tau_threshold, 20);
        assert_eq!(rep.mu_equals_tau, Some(true));

        let rep = prop_rcc_consistency(&fake(6, 4, 15, 4), None, false).unwrap();
        assert_eq!(rep.equivalence_holds, None);
        assert!(!rep.hypothesis_met);

        let bad = prop_rcc_consistency(&fake(6, 1, 18, 1), None, true).unwrap();
        assert!(!bad.consistent());

        assert!(prop_rcc_consistency(&fake(5, 2, 12, 0), None, true).is_err());
    }
}
