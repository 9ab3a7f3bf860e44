//! The per-curve report emitted by every subcommand.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use jacplane::classify::{
    class_label, classify, predicted_nu, prop_rcc_consistency, prop_terao_nu, splitting_type,
    tau_bounds, theorem_checks, ClassLabel, DpwReport, NuPrediction, RccReport, SplittingType,
    TheoremCheck,
};
use jacplane::{analyze, AnalysisConfig, CurveAnalysis, Error, HomogPoly};

/// Extra inputs that only affect reporting.
#[derive(Debug, Clone, Default)]
pub struct ReportOptions {
    /// Total Milnor number, if known.
    pub mu: Option<i64>,
    pub irreducible: bool,
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub polynomial: String,
    #[serde(flatten)]
    pub analysis: CurveAnalysis,
    pub class: String,
    pub smooth: bool,
    pub splitting_type: Option<SplittingType>,
    /// `(r, d-1-r)` for free curves.
    pub exponents: Option<[i64; 2]>,
    pub dpw: Option<DpwReport>,
    pub predicted_nu: Option<NuPrediction>,
    pub small_tau_nu: Option<i64>,
    pub theorem_checks: Vec<TheoremCheck>,
    pub theorem_checks_skipped: bool,
    pub rcc: Option<RccReport>,
    pub violations: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

pub fn build_report(
    f: &HomogPoly,
    config: &AnalysisConfig,
    opts: &ReportOptions,
) -> Result<AnalysisReport, Error> {
    let start = Instant::now();
    let a = analyze(f, config)?;
    let elapsed = start.elapsed();
    let mut report = report_from_analysis(f, a, config.seed, opts);
    if opts.timing {
        report.elapsed_ms = Some(elapsed.as_secs_f64() * 1e3);
    }
    Ok(report)
}

pub fn report_from_analysis(
    f: &HomogPoly,
    a: CurveAnalysis,
    seed: u64,
    opts: &ReportOptions,
) -> AnalysisReport {
    let d = i64::from(a.degree);
    let r = i64::from(a.mdr);
    // a failed characterization shows up again among the theorem checks
    let label = classify(&a).map_or_else(|_| class_label(&a), |c| c.label);
    let regular = label.is_regular();
    let checks = theorem_checks(&a);
    let rcc = (regular && d >= 6)
        .then(|| prop_rcc_consistency(&a, opts.mu, opts.irreducible).ok())
        .flatten();
    let violations = checks.iter().filter(|c| !c.passed).count()
        + usize::from(rcc.as_ref().is_some_and(|r| !r.consistent()));
    AnalysisReport {
        polynomial: f.to_string(),
        class: label.name().to_string(),
        smooth: a.reduced && a.tau == 0,
        splitting_type: regular.then(|| splitting_type(d, r).ok()).flatten(),
        exponents: (label == ClassLabel::Free).then_some([r, d - 1 - r]),
        dpw: regular
            .then(|| tau_bounds(d, r).ok().map(|b| b.with_observed(a.tau)))
            .flatten(),
        predicted_nu: regular.then(|| predicted_nu(d, r, a.tau).ok()).flatten(),
        small_tau_nu: (regular && d >= 4)
            .then(|| prop_terao_nu(d, a.tau).ok().flatten())
            .flatten(),
        theorem_checks_skipped: !regular,
        theorem_checks: checks,
        rcc,
        violations,
        seed,
        elapsed_ms: None,
        analysis: a,
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

impl AnalysisReport {
    pub fn to_table(&self) -> String {
        let a = &self.analysis;
        let mut s = String::new();
        let mut row = |k: &str, v: String| {
            let _ = writeln!(s, "{k:<16}{v}");
        };
        row("polynomial", self.polynomial.clone());
        row("degree", a.degree.to_string());
        row("class", {
            let mut c = self.class.clone();
            if self.smooth {
                c.push_str(" (smooth)");
            }
            c
        });
        row("mdr", a.mdr.to_string());
        row("tau", a.tau.to_string());
        row("nu", a.nu.to_string());
        row("T", a.t.to_string());
        row("n_dims", join(&a.n_dims));
        row("ar_dims", join(&a.ar_dims));
        row("milnor", join(&a.milnor_hilbert));
        if let Some(st) = &self.splitting_type {
            row("splitting_type", format!("({}, {})", st.d1, st.d2));
        }
        if let Some(e) = &self.exponents {
            row("exponents", format!("({}, {})", e[0], e[1]));
        }
        if let Some(b) = &self.dpw {
            let stronger = b.stronger_max.map_or(String::new(), |m| format!(", stronger {m}"));
            row("dpw", format!("{} ≤ τ ≤ {}{stronger}", b.tau_min, b.tau_max));
        }
        if self.theorem_checks_skipped {
            row("checks", "skipped".into());
        } else {
            let passed = self.theorem_checks.iter().filter(|c| c.passed).count();
            row("checks", format!("{passed}/{} passed", self.theorem_checks.len()));
            for c in self.theorem_checks.iter().filter(|c| !c.passed) {
                row("  FAILED", format!("{}: {}", c.name, c.detail));
            }
        }
        if let Some(rcc) = &self.rcc {
            row("rcc", rcc.note.clone());
        }
        row("primes", join(&a.primes_used));
        row("seed", self.seed.to_string());
        if let Some(ms) = self.elapsed_ms {
            row("elapsed_ms", format!("{ms:.3}"));
        }
        s
    }
}
