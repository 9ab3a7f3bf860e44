//! Curve families, named examples, and line arrangements with their
//! intersection lattices.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use num_integer::Integer;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{prop_terao_nu, splitting_type, SplittingType};
use crate::jacobian::{analyze, AnalysisConfig};
use crate::poly::{parse_poly, HomogPoly, Monomial};
use crate::Error;

/// `y^d + x^k z^(d-k)` for `1 ≤ k < d/2`, `gcd(k, d) = 1`.
pub fn binomial_curve(d: u32, k: u32) -> Result<HomogPoly, Error> {
    if d < 3 {
        return Err(Error::InvalidInput(format!("binomial curve needs d ≥ 3, got {d}")));
    }
    if k < 1 || 2 * k >= d {
        return Err(Error::InvalidInput(format!(
            "binomial curve needs 1 ≤ k < d/2, got k = {k}, d = {d}"
        )));
    }
    if k.gcd(&d) != 1 {
        return Err(Error::InvalidInput(format!(
            "binomial curve needs gcd(k, d) = 1, got gcd({k}, {d}) = {}",
            k.gcd(&d)
        )));
    }
    HomogPoly::from_terms(d, [(Monomial::new(0, d, 0), 1), (Monomial::new(k, 0, d - k), 1)])
}

/// The `k` accepted by [`binomial_curve`] for degree `d`.
pub fn admissible_ks(d: u32) -> Vec<u32> {
    (1..d).filter(|&k| 2 * k < d && k.gcd(&d) == 1).collect()
}

pub fn euler_totient(n: u64) -> u64 {
    let mut n = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// `φ(d) / 2`, the number of binomial models in degree `d ≥ 3`.
pub fn model_count(d: u32) -> Result<u64, Error> {
    if d < 3 {
        return Err(Error::InvalidInput(format!("needs d ≥ 3, got {d}")));
    }
    Ok(euler_totient(u64::from(d)) / 2)
}

/// `x^2k + y^2k + z^2k - 2(x^k y^k + x^k z^k + y^k z^k)` for odd `k ≥ 3`.
pub fn b_plus_curve(k: u32) -> Result<HomogPoly, Error> {
    if k < 3 || k % 2 == 0 {
        return Err(Error::InvalidInput(format!("needs odd k ≥ 3, got {k}")));
    }
    let d = 2 * k;
    HomogPoly::from_terms(
        d,
        [
            (Monomial::new(d, 0, 0), 1),
            (Monomial::new(0, d, 0), 1),
            (Monomial::new(0, 0, d), 1),
            (Monomial::new(k, k, 0), -2),
            (Monomial::new(k, 0, k), -2),
            (Monomial::new(0, k, k), -2),
        ],
    )
}

pub const NAMED_EXAMPLES: [(&str, &str); 3] = [
    ("quartic_C", "y^4 - x*z^3"),
    ("quartic_Cprime", "y^4 - x*z^3 - y^3*z"),
    (
        "quintic_4cusp",
        "16*x^4*y + 128*x^2*y^2*z - 4*x^3*z^2 + 256*y^3*z^2 - 144*x*y*z^3 + 27*z^5",
    ),
];

pub fn named_example(name: &str) -> Result<HomogPoly, Error> {
    NAMED_EXAMPLES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_poly(text))
        .unwrap_or_else(|| {
            let names: Vec<&str> = NAMED_EXAMPLES.iter().map(|(n, _)| *n).collect();
            Err(Error::InvalidInput(format!(
                "unknown example {name:?}; valid names: {}",
                names.join(", ")
            )))
        })
}

type Point = [i128; 3];

fn cross(a: &[i64; 3], b: &[i64; 3]) -> Result<Point, Error> {
    let w = |x: i64, y: i64, z: i64, t: i64| -> Option<i128> {
        (i128::from(x).checked_mul(i128::from(y)))?
            .checked_sub(i128::from(z).checked_mul(i128::from(t))?)
    };
    let overflow = || Error::InvalidInput("coordinate overflow in intersection".into());
    Ok([
        w(a[1], b[2], a[2], b[1]).ok_or_else(overflow)?,
        w(a[2], b[0], a[0], b[2]).ok_or_else(overflow)?,
        w(a[0], b[1], a[1], b[0]).ok_or_else(overflow)?,
    ])
}

/// Primitive representative with first nonzero coordinate positive.
fn normalize(p: Point) -> Point {
    let g = p.iter().fold(0i128, |g, &v| g.gcd(&v));
    let mut q = p.map(|v| v / g);
    if q.iter().find(|&&v| v != 0).is_some_and(|&v| v < 0) {
        q = q.map(|v| -v);
    }
    q
}

/// Lines `a x + b y + c z = 0` with integer coefficients, pairwise
/// non-proportional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrangement {
    lines: Vec<[i64; 3]>,
}

impl Arrangement {
    pub fn new(lines: Vec<[i64; 3]>) -> Result<Self, Error> {
        for (i, l) in lines.iter().enumerate() {
            if *l == [0, 0, 0] {
                return Err(Error::InvalidInput(format!("line {i} is the zero form")));
            }
        }
        for i in 0..lines.len() {
            for j in (i + 1)..lines.len() {
                if cross(&lines[i], &lines[j])? == [0, 0, 0] {
                    return Err(Error::InvalidInput(format!(
                        "lines {i} and {j} are proportional ({:?} ~ {:?})",
                        lines[i], lines[j]
                    )));
                }
            }
        }
        Ok(Self { lines })
    }

    /// One linear form per line as three integers; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut lines = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let nums: Vec<i64> = body
                .split_whitespace()
                .map(|t| t.parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|e| Error::InvalidInput(format!("line {}: {e}", no + 1)))?;
            let [a, b, c] = nums[..] else {
                return Err(Error::InvalidInput(format!(
                    "line {}: expected 3 integers, found {}",
                    no + 1,
                    nums.len()
                )));
            };
            lines.push([a, b, c]);
        }
        Self::new(lines)
    }

    pub fn from_file(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// `n` lines with coordinates in `[-range, range]`, rejecting proportional
    /// pairs. Concurrencies are left to chance.
    pub fn random<R: Rng + ?Sized>(n: usize, range: i64, rng: &mut R) -> Self {
        let mut lines: Vec<[i64; 3]> = Vec::with_capacity(n);
        while lines.len() < n {
            let l = [
                rng.gen_range(-range..=range),
                rng.gen_range(-range..=range),
                rng.gen_range(-range..=range),
            ];
            if l == [0, 0, 0] {
                continue;
            }
            if lines.iter().all(|m| cross(m, &l).map_or(false, |c| c != [0, 0, 0])) {
                lines.push(l);
            }
        }
        Self { lines }
    }

    pub fn lines(&self) -> &[[i64; 3]] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn to_text(&self) -> String {
        self.lines
            .iter()
            .map(|[a, b, c]| format!("{a} {b} {c}\n"))
            .collect()
    }
}

/// Product of the linear forms.
pub fn arrangement_poly(a: &Arrangement) -> Result<HomogPoly, Error> {
    if a.is_empty() {
        return Err(Error::InvalidInput("empty arrangement".into()));
    }
    Ok(a.lines
        .iter()
        .map(|&[x, y, z]| HomogPoly::linear_form(x, y, z))
        .reduce(|acc, l| acc.multiply(&l))
        .expect("nonempty"))
}

/// An intersection point and the lines through it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePoint {
    pub coords: [i128; 3],
    pub lines: Vec<usize>,
}

impl LatticePoint {
    pub fn multiplicity(&self) -> usize {
        self.lines.len()
    }
}

/// Incidence structure of the intersection points of an arrangement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionLattice {
    pub n_lines: usize,
    /// Sorted by coordinates.
    pub points: Vec<LatticePoint>,
}

impl IntersectionLattice {
    /// Sorted multiplicities, largest first.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m: Vec<usize> = self.points.iter().map(LatticePoint::multiplicity).collect();
        m.sort_unstable_by(|a, b| b.cmp(a));
        m
    }

    /// Number of points of each multiplicity.
    pub fn multiplicity_counts(&self) -> Vec<(usize, usize)> {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for p in &self.points {
            *counts.entry(p.multiplicity()).or_default() += 1;
        }
        let mut out: Vec<(usize, usize)> = counts.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// `point_of[i][j]` for `i != j`.
    fn pair_table(&self) -> Vec<Vec<usize>> {
        let mut table = vec![vec![usize::MAX; self.n_lines]; self.n_lines];
        for (pi, p) in self.points.iter().enumerate() {
            for &i in &p.lines {
                for &j in &p.lines {
                    if i != j {
                        table[i][j] = pi;
                    }
                }
            }
        }
        table
    }

    /// Every pair of lines meets in exactly one listed point.
    pub fn is_consistent(&self) -> bool {
        let pairs: usize = self
            .points
            .iter()
            .map(|p| p.multiplicity() * (p.multiplicity() - 1) / 2)
            .sum();
        let table = self.pair_table();
        pairs == self.n_lines * self.n_lines.saturating_sub(1) / 2
            && (0..self.n_lines)
                .all(|i| (0..self.n_lines).all(|j| i == j || table[i][j] != usize::MAX))
    }
}

pub fn intersection_lattice(a: &Arrangement) -> Result<IntersectionLattice, Error> {
    let mut by_point: HashMap<Point, BTreeSet<usize>> = HashMap::new();
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            let p = normalize(cross(&a.lines[i], &a.lines[j])?);
            let entry = by_point.entry(p).or_default();
            entry.insert(i);
            entry.insert(j);
        }
    }
    let mut points: Vec<LatticePoint> = by_point
        .into_iter()
        .map(|(coords, lines)| LatticePoint {
            coords,
            lines: lines.into_iter().collect(),
        })
        .collect();
    points.sort_by(|p, q| p.coords.cmp(&q.coords));
    Ok(IntersectionLattice {
        n_lines: a.len(),
        points,
    })
}

/// `Σ_p (m_p - 1)^2`: an ordinary `m`-fold point has Tjurina number
/// `(m-1)^2`.
pub fn combinatorial_tau(l: &IntersectionLattice) -> i64 {
    l.points
        .iter()
        .map(|p| {
            let m = p.multiplicity() as i64;
            (m - 1) * (m - 1)
        })
        .sum()
}

/// Whether some relabeling of the lines carries the incidences of `a` onto
/// those of `b`.
pub fn lattice_isomorphic(a: &IntersectionLattice, b: &IntersectionLattice) -> bool {
    if a.n_lines != b.n_lines || a.multiplicities() != b.multiplicities() {
        return false;
    }
    let n = a.n_lines;
    let signature = |l: &IntersectionLattice| -> Vec<Vec<usize>> {
        let mut sig = vec![Vec::new(); l.n_lines];
        for p in &l.points {
            for &i in &p.lines {
                sig[i].push(p.multiplicity());
            }
        }
        for s in &mut sig {
            s.sort_unstable();
        }
        sig
    };
    let (sig_a, sig_b) = (signature(a), signature(b));
    let mut sorted_a = sig_a.clone();
    let mut sorted_b = sig_b.clone();
    sorted_a.sort();
    sorted_b.sort();
    if sorted_a != sorted_b {
        return false;
    }

    struct Search<'a> {
        a: &'a IntersectionLattice,
        b: &'a IntersectionLattice,
        table_a: Vec<Vec<usize>>,
        table_b: Vec<Vec<usize>>,
        sig_a: Vec<Vec<usize>>,
        sig_b: Vec<Vec<usize>>,
        line_map: Vec<usize>,
        used: Vec<bool>,
        point_map: Vec<usize>,
        point_used: Vec<bool>,
    }

    impl Search<'_> {
        fn extend(&mut self, i: usize) -> bool {
            let n = self.a.n_lines;
            if i == n {
                return true;
            }
            for cand in 0..n {
                if self.used[cand] || self.sig_a[i] != self.sig_b[cand] {
                    continue;
                }
                // map the point through (i, j) to the one through (cand, σ(j))
                let mut assigned = Vec::new();
                let mut ok = true;
                for j in 0..i {
                    let pa = self.table_a[i][j];
                    let pb = self.table_b[cand][self.line_map[j]];
                    if self.a.points[pa].multiplicity() != self.b.points[pb].multiplicity() {
                        ok = false;
                        break;
                    }
                    match self.point_map[pa] {
                        usize::MAX => {
                            if self.point_used[pb] {
                                ok = false;
                                break;
                            }
                            self.point_map[pa] = pb;
                            self.point_used[pb] = true;
                            assigned.push(pa);
                        }
                        mapped if mapped != pb => {
                            ok = false;
                            break;
                        }
                        _ => {}
                    }
                }
                if ok {
                    self.line_map[i] = cand;
                    self.used[cand] = true;
                    if self.extend(i + 1) {
                        return true;
                    }
                    self.used[cand] = false;
                    self.line_map[i] = usize::MAX;
                }
                for pa in assigned {
                    self.point_used[self.point_map[pa]] = false;
                    self.point_map[pa] = usize::MAX;
                }
            }
            false
        }
    }

    let mut search = Search {
        a,
        b,
        table_a: a.pair_table(),
        table_b: b.pair_table(),
        sig_a,
        sig_b,
        line_map: vec![usize::MAX; n],
        used: vec![false; n],
        point_map: vec![usize::MAX; a.points.len()],
        point_used: vec![false; b.points.len()],
    };
    search.extend(0)
}

/// Per-arrangement outcome inside a conjecture group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberReport {
    pub lines: usize,
    pub mdr: u32,
    pub tau: i64,
    pub tau_combinatorial: i64,
    pub nu: usize,
    pub splitting_type: Option<SplittingType>,
    /// `ν` forced by `(d, τ)` when `τ` is small, if applicable.
    pub small_tau_nu: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupReport {
    pub members: Vec<MemberReport>,
    pub nu_constant: bool,
    pub splitting_constant: bool,
    pub mdr_constant: bool,
    pub tau_matches_combinatorics: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessReport {
    pub groups: Vec<GroupReport>,
    /// Groups with non-constant `ν`.
    pub counterexamples: usize,
}

fn all_equal<T: PartialEq>(items: impl IntoIterator<Item = T>) -> bool {
    let mut it = items.into_iter();
    match it.next() {
        None => true,
        Some(first) => it.all(|x| x == first),
    }
}

/// Checks that `ν` and the generic splitting type depend only on the
/// intersection lattice, on groups of arrangements sharing one lattice.
pub fn conjecture_harness(
    groups: &[Vec<Arrangement>],
    config: &AnalysisConfig,
) -> Result<HarnessReport, Error> {
    let mut reports = Vec::with_capacity(groups.len());
    for (gi, group) in groups.iter().enumerate() {
        if group.is_empty() {
            return Err(Error::InvalidInput(format!("group {gi} is empty")));
        }
        let lattices: Vec<IntersectionLattice> = group
            .iter()
            .map(intersection_lattice)
            .collect::<Result<_, _>>()?;
        for (mi, l) in lattices.iter().enumerate().skip(1) {
            if !lattice_isomorphic(&lattices[0], l) {
                return Err(Error::InvalidInput(format!(
                    "group {gi}: member {mi} has a different intersection lattice than member 0"
                )));
            }
        }
        let members: Vec<MemberReport> = group
            .par_iter()
            .zip(lattices.par_iter())
            .map(|(arr, lat)| -> Result<MemberReport, Error> {
                let f = arrangement_poly(arr)?;
                let a = analyze(&f, config)?;
                let d = i64::from(a.degree);
                Ok(MemberReport {
                    lines: arr.len(),
                    mdr: a.mdr,
                    tau: a.tau,
                    tau_combinatorial: combinatorial_tau(lat),
                    nu: a.nu,
                    splitting_type: (a.mdr >= 1)
                        .then(|| splitting_type(d, i64::from(a.mdr)))
                        .transpose()?,
                    small_tau_nu: if d >= 4 && a.mdr >= 1 {
                        prop_terao_nu(d, a.tau)?
                    } else {
                        None
                    },
                })
            })
            .collect::<Result<_, _>>()?;
        reports.push(GroupReport {
            nu_constant: all_equal(members.iter().map(|m| m.nu)),
            splitting_constant: all_equal(members.iter().map(|m| m.splitting_type)),
            mdr_constant: all_equal(members.iter().map(|m| m.mdr)),
            tau_matches_combinatorics: members.iter().all(|m| m.tau == m.tau_combinatorial),
            members,
        });
    }
    let counterexamples = reports.iter().filter(|g| !g.nu_constant).count();
    Ok(HarnessReport {
        groups: reports,
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn arr(lines: &[[i64; 3]]) -> Arrangement {
        Arrangement::new(lines.to_vec()).unwrap()
    }

    pub(crate) const GENERIC_SIX: [[i64; 3]; 6] = [
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [1, 1, 1],
        [1, 2, 3],
        [1, 3, 7],
    ];

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial_curve(6, 1).unwrap(), parse_poly("y^6 + x z^5").unwrap());
        assert_eq!(binomial_curve(7, 3).unwrap(), parse_poly("y^7 + x^3 z^4").unwrap());
        let err = binomial_curve(6, 2).unwrap_err().to_string();
        assert!(err.contains("gcd"), "{err}");
        assert!(binomial_curve(6, 3).is_err());
        assert!(binomial_curve(2, 1).is_err());
        assert_eq!(binomial_curve(7, 2).unwrap().to_string(), "y^7 + x^2*z^5");
    }

    #[test]
    fn model_count_matches_admissible_k() {
        assert_eq!(model_count(6).unwrap(), 1);
        assert_eq!(model_count(7).unwrap(), 3);
        assert_eq!(model_count(12).unwrap(), 2);
        assert_eq!(admissible_ks(12), vec![1, 5]);
        for d in 3..200 {
            assert_eq!(admissible_ks(d).len() as u64, model_count(d).unwrap(), "d = {d}");
        }
    }

    #[test]
    fn b_plus_examples() {
        let c6 = b_plus_curve(3).unwrap();
        assert_eq!(c6.degree(), 6);
        assert_eq!(c6.num_terms(), 6);
        assert_eq!(b_plus_curve(5).unwrap().degree(), 10);
        assert!(b_plus_curve(2).is_err());
        assert!(b_plus_curve(1).is_err());
    }

    #[test]
    fn named_examples() {
        assert_eq!(named_example("quartic_C").unwrap(), parse_poly("y^4 - x z^3").unwrap());
        assert_eq!(
            named_example("quartic_Cprime").unwrap(),
            parse_poly("y^4 - x z^3 - y^3 z").unwrap()
        );
        assert_eq!(named_example("quintic_4cusp").unwrap().num_terms(), 6);
        let err = named_example("sextic").unwrap_err().to_string();
        assert!(err.contains("quintic_4cusp"));
    }

    #[test]
    fn arrangement_poly_examples() {
        let xyz = arrangement_poly(&arr(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]])).unwrap();
        assert_eq!(xyz, parse_poly("xyz").unwrap());
        let pencil = arrangement_poly(&arr(&[[1, 0, 0], [0, 1, 0], [1, 1, 0]])).unwrap();
        assert_eq!(pencil, parse_poly("x^2 y + x y^2").unwrap());
        let four = arrangement_poly(&arr(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]])).unwrap();
        assert_eq!(four.degree(), 4);
        assert!(Arrangement::new(vec![[1, 2, 3], [2, 4, 6]]).is_err());
        assert!(Arrangement::new(vec![[0, 0, 0]]).is_err());
    }

    #[test]
    fn parse_arrangement_file() {
        let a = Arrangement::parse("# three lines\n1 0 0\n0 1 0  # y\n\n0 0 1\n").unwrap();
        assert_eq!(a.len(), 3);
        assert!(Arrangement::parse("1 0\n").is_err());
        assert!(Arrangement::parse("1 0 x\n").is_err());
        assert_eq!(Arrangement::parse(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn lattice_examples() {
        let generic3 = intersection_lattice(&arr(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]])).unwrap();
        assert_eq!(generic3.multiplicities(), vec![2, 2, 2]);
        let concurrent = intersection_lattice(&arr(&[[1, 0, 0], [0, 1, 0], [1, 1, 0]])).unwrap();
        assert_eq!(concurrent.multiplicities(), vec![3]);
        assert_eq!(concurrent.points[0].coords, [0, 0, 1]);
        let six = intersection_lattice(&arr(&GENERIC_SIX)).unwrap();
        assert_eq!(six.points.len(), 15);
        assert!(six.multiplicities().iter().all(|&m| m == 2));
        for l in [&generic3, &concurrent, &six] {
            assert!(l.is_consistent());
        }
    }

    #[test]
    fn combinatorial_tau_examples() {
        let six = intersection_lattice(&arr(&GENERIC_SIX)).unwrap();
        assert_eq!(combinatorial_tau(&six), 15);
        let concurrent = intersection_lattice(&arr(&[[1, 0, 0], [0, 1, 0], [1, 1, 0]])).unwrap();
        assert_eq!(combinatorial_tau(&concurrent), 4);
        // x, y, x+y through [0:0:1] plus z and x+y+z: one triple point, 7 double points
        let mixed = intersection_lattice(&arr(&[
            [1, 0, 0],
            [0, 1, 0],
            [1, 1, 0],
            [0, 0, 1],
            [1, 2, 1],
        ]))
        .unwrap();
        assert_eq!(mixed.multiplicity_counts(), vec![(2, 7), (3, 1)]);
        assert_eq!(combinatorial_tau(&mixed), 4 + 7);
    }

    #[test]
    fn isomorphism_examples() {
        let g3 = intersection_lattice(&arr(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]])).unwrap();
        let c3 = intersection_lattice(&arr(&[[1, 0, 0], [0, 1, 0], [1, 1, 0]])).unwrap();
        assert!(lattice_isomorphic(&g3, &g3));
        assert!(!lattice_isomorphic(&g3, &c3));
        let five_a = intersection_lattice(&arr(&GENERIC_SIX[..5])).unwrap();
        let five_b =
            intersection_lattice(&arr(&[[2, 1, 0], [0, 1, 5], [1, 0, 3], [1, -1, 1], [3, 1, 1]]))
                .unwrap();
        assert_eq!(five_b.points.len(), 10);
        assert!(lattice_isomorphic(&five_a, &five_b));
        assert!(lattice_isomorphic(&five_b, &five_a));
    }

    #[test]
    fn lattice_survives_permutation_and_scaling() {
        let shared = arr(&[
            [1, 0, 0],
            [0, 1, 0],
            [1, 1, 0],
            [0, 0, 1],
            [0, 1, 1],
            [0, 1, -1],
        ]);
        let l = intersection_lattice(&shared).unwrap();
        assert!(l.is_consistent());
        assert!(lattice_isomorphic(&l, &l));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let mut lines = shared.lines().to_vec();
            for i in (1..lines.len()).rev() {
                let j = rng.gen_range(0..=i);
                lines.swap(i, j);
            }
            let scaled: Vec<[i64; 3]> = lines
                .iter()
                .map(|l| {
                    let s = rng.gen_range(1..5);
                    l.map(|v| v * s)
                })
                .collect();
            let l2 = intersection_lattice(&arr(&scaled)).unwrap();
            assert!(lattice_isomorphic(&l, &l2));
        }
    }

    #[test]
    fn random_arrangements_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 1..9 {
            let a = Arrangement::random(n, 3, &mut rng);
            assert_eq!(a.len(), n);
            assert!(Arrangement::new(a.lines().to_vec()).is_ok());
            let l = intersection_lattice(&a).unwrap();
            assert!(l.is_consistent());
        }
    }

    #[test]
    fn harness_on_generic_sextics() {
        let second = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, -1, 2], [2, 1, -3]];
        let g2 = intersection_lattice(&arr(&second)).unwrap();
        assert_eq!(g2.points.len(), 15);
        let report = conjecture_harness(
            &[vec![arr(&GENERIC_SIX), arr(&second)], vec![arr(&GENERIC_SIX)]],
            &AnalysisConfig::with_seed(1),
        )
        .unwrap();
        assert_eq!(report.counterexamples, 0);
        let g = &report.groups[0];
        assert!(g.nu_constant && g.splitting_constant && g.tau_matches_combinatorics);
        assert!(g.members.iter().all(|m| m.nu == 4 && m.tau == 15));
        assert!(g.members.iter().all(|m| m.small_tau_nu == Some(4)));
        assert!(report.groups[1].nu_constant);
    }

    #[test]
    fn harness_rejects_mixed_lattices() {
        let err = conjecture_harness(
            &[vec![
                arr(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
                arr(&[[1, 0, 0], [0, 1, 0], [1, 1, 0]]),
            ]],
            &AnalysisConfig::default(),
        );
        assert!(matches!(err, Err(Error::InvalidInput(_))));
        assert!(conjecture_harness(&[vec![]], &AnalysisConfig::default()).is_err());
    }
}
