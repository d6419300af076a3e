//! Independent reference computations used to check the library.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use torix::divisor::{class_group, DivisorClass};
use torix::fan::{validate_fan, Fan, RawFan, ValidationOptions};
use torix::frobenius::{frobenius_decompose, EnumerationOptions, FrobeniusDecomposition};
use torix::lattice::IntegerMatrix;

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

pub fn raw(rank: usize, rays: &[&[i64]], cones: &[&[usize]]) -> RawFan {
    RawFan {
        rank,
        rays: rays.iter().map(|r| r.to_vec()).collect(),
        max_cones: cones.iter().map(|c| c.to_vec()).collect(),
    }
}

pub fn fan(rank: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
    validate_fan(&raw(rank, rays, cones), ValidationOptions::default()).unwrap()
}

pub fn projective_space(n: usize) -> Fan {
    let mut rays: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    rays.push(vec![-1; n]);
    let cones: Vec<Vec<usize>> = (0..=n)
        .map(|skip| (0..=n).filter(|&i| i != skip).collect())
        .collect();
    validate_fan(
        &RawFan { rank: n, rays, max_cones: cones },
        ValidationOptions::default(),
    )
    .unwrap()
}

pub fn hirzebruch(a: i64) -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[-1, a], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]])
}

pub fn p1xp1() -> Fan {
    hirzebruch(0)
}

pub fn quadric_cone() -> Fan {
    fan(2, &[&[1, 1], &[1, -1]], &[&[0, 1]])
}

pub fn twisted_cubic_cone() -> Fan {
    fan(2, &[&[1, 0], &[-1, 3]], &[&[0, 1]])
}

pub fn a2_cone() -> Fan {
    fan(2, &[&[1, 0], &[1, 3]], &[&[0, 1]])
}

pub fn big(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn matrix(rows: &[Vec<i64>]) -> IntegerMatrix {
    let cols = rows.first().map_or(0, Vec::len);
    IntegerMatrix::from_i64_rows(cols, rows).unwrap()
}

/// Laplace expansion along the first row.
pub fn det_i128(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .filter(|&j| m[0][j] != 0)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det_i128(&minor)
            })
            .sum(),
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Determinant divisors `Δ_k = gcd of k x k minors`, for `k = 1..min(m, n)`.
pub fn determinant_divisors(a: &[Vec<i64>]) -> Vec<i128> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    (1..=m.min(n))
        .map(|k| {
            let mut g = 0i128;
            for rows in subsets(m, k) {
                for cols in subsets(n, k) {
                    let minor: Vec<Vec<i128>> = rows
                        .iter()
                        .map(|&i| cols.iter().map(|&j| a[i][j] as i128).collect())
                        .collect();
                    g = gcd(g, det_i128(&minor));
                }
            }
            g
        })
        .collect()
}

/// Invariant factors `d_k = Δ_k / Δ_{k-1}` up to the rank.
pub fn invariant_factors(a: &[Vec<i64>]) -> Vec<i128> {
    let dd = determinant_divisors(a);
    let mut out = Vec::new();
    let mut prev = 1i128;
    for d in dd {
        if d == 0 {
            break;
        }
        out.push(d / prev);
        prev = d;
    }
    out
}

/// Free rank and torsion factors (those ≥ 2) of `Z^rows / column span`.
pub fn cokernel_oracle(a: &[Vec<i64>]) -> (usize, Vec<i128>) {
    let f = invariant_factors(a);
    let torsion = f.iter().copied().filter(|&d| d > 1).collect();
    (a.len() - f.len(), torsion)
}

/// The `r x n` matrix `m ↦ (<m, ρ_σ>)_σ`.
pub fn div_rows(fan: &Fan) -> Vec<Vec<i64>> {
    fan.rays().to_vec()
}

pub fn class_group_oracle(fan: &Fan) -> (usize, Vec<i128>) {
    cokernel_oracle(&div_rows(fan))
}

pub fn torsion_of(fan: &Fan) -> Vec<i128> {
    class_group(fan)
        .group
        .torsion()
        .iter()
        .map(|t| t.to_string().parse().unwrap())
        .collect()
}

pub fn decompose(fan: &Fan, p: u64, e: u32, source: &DivisorClass) -> FrobeniusDecomposition {
    frobenius_decompose(fan, p, e, source, EnumerationOptions::default()).unwrap()
}

/// `F^{e2}_*` applied summand-wise to a decomposition.
pub fn iterate(fan: &Fan, first: &FrobeniusDecomposition, e2: u32) -> BTreeMap<DivisorClass, u64> {
    let mut out = BTreeMap::new();
    for (c, m) in &first.summands {
        for (c2, m2) in decompose(fan, first.p, e2, c).summands {
            *out.entry(c2).or_insert(0) += m * m2;
        }
    }
    out
}

/// Frobenius decomposition by a different route: for each `a ∈ [0, q)^r`,
/// search `m ∈ [0, q)^n` with `c - a + div(m) ≡ 0 (mod q)` coordinatewise,
/// and take the class of `(c - a + div(m)) / q`.
pub fn frobenius_oracle(fan: &Fan, q: i64, c: &[i64]) -> BTreeMap<DivisorClass, u64> {
    let r = fan.ray_count();
    let n = fan.rank();
    let rays = fan.rays();
    let mut out = BTreeMap::new();
    for a in boxes(r, q) {
        for m in boxes(n, q) {
            let coeffs: Vec<i64> = (0..r)
                .map(|s| {
                    let dm: i64 = (0..n).map(|k| m[k] * rays[s][k]).sum();
                    c[s] - a[s] + dm
                })
                .collect();
            if coeffs.iter().all(|x| x.rem_euclid(q) == 0) {
                let quotient: Vec<i64> = coeffs.iter().map(|x| x / q).collect();
                let class = fan.divisor_i64(&quotient).unwrap().class();
                *out.entry(class).or_insert(0) += 1;
                break;
            }
        }
    }
    out
}

/// All vectors in `[0, q)^len`.
pub fn boxes(len: usize, q: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..q).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Number of characters `k` of `A = ⊕ Z/t_j` (so `k_j ∈ Z/t_j`) with
/// `Σ_j χ_j k_j / t_j ∈ Z` for every weight `χ` in `weights`.
pub fn common_stabilizer_size(factors: &[i64], weights: &[Vec<i64>]) -> usize {
    let lcm = factors.iter().fold(1i64, |l, &t| l / gcd(l as i128, t as i128) as i64 * t);
    let mut count = 0;
    for k in boxes_mixed(factors) {
        let killed = weights.iter().all(|chi| {
            let s: i64 = chi
                .iter()
                .zip(&k)
                .zip(factors)
                .map(|((c, kj), t)| c * kj * (lcm / t))
                .sum();
            s.rem_euclid(lcm) == 0
        });
        if killed {
            count += 1;
        }
    }
    count
}

fn boxes_mixed(factors: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &t in factors {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (0..t).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Codimension of the locus with nontrivial stabilizer, by direct search
/// over supports; `None` when the action is free everywhere.
pub fn non_free_codim_oracle(factors: &[i64], weights: &[Vec<i64>]) -> Option<usize> {
    let n = weights.len();
    (0..1usize << n)
        .filter(|mask| {
            let support: Vec<Vec<i64>> =
                (0..n).filter(|i| mask >> i & 1 == 1).map(|i| weights[i].clone()).collect();
            common_stabilizer_size(factors, &support) > 1
        })
        .map(|mask| n - mask.count_ones() as usize)
        .min()
}

/// Height as `n - dim`, with the dimension of the quotient equal to the
/// largest variable set containing no generator support.
pub fn height_oracle(supports: &[Vec<usize>], n: usize) -> usize {
    let largest_face = (0..1usize << n)
        .filter(|mask| {
            supports
                .iter()
                .all(|s| !s.iter().all(|&i| mask >> i & 1 == 1))
        })
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap_or(0);
    n - largest_face
}

/// Lattice points of the zonotope `{-Σ t_i v_i : t ∈ [0,1]^r}` in the plane,
/// via the convex hull of its vertex sums.
pub fn planar_zonotope_points(generators: &[[i64; 2]]) -> Vec<[i64; 2]> {
    let mut corners: Vec<[i64; 2]> = (0..1usize << generators.len())
        .map(|mask| {
            let mut p = [0i64; 2];
            for (i, g) in generators.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    p[0] -= g[0];
                    p[1] -= g[1];
                }
            }
            p
        })
        .collect();
    corners.sort();
    corners.dedup();
    let hull = convex_hull(&corners);
    let (xmin, xmax) = (corners.iter().map(|p| p[0]).min().unwrap(), corners.iter().map(|p| p[0]).max().unwrap());
    let (ymin, ymax) = (corners.iter().map(|p| p[1]).min().unwrap(), corners.iter().map(|p| p[1]).max().unwrap());
    let mut out = Vec::new();
    for x in xmin..=xmax {
        for y in ymin..=ymax {
            if inside(&hull, [x, y]) {
                out.push([x, y]);
            }
        }
    }
    out
}

fn cross(o: [i64; 2], a: [i64; 2], b: [i64; 2]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Monotone chain, counterclockwise, collinear points dropped.
fn convex_hull(points: &[[i64; 2]]) -> Vec<[i64; 2]> {
    if points.len() < 3 {
        return points.to_vec();
    }
    let mut lower: Vec<[i64; 2]> = Vec::new();
    for &p in points {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[i64; 2]> = Vec::new();
    for &p in points.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn inside(hull: &[[i64; 2]], p: [i64; 2]) -> bool {
    match hull.len() {
        0 => false,
        1 => hull[0] == p,
        2 => {
            cross(hull[0], hull[1], p) == 0
                && (hull[0][0].min(hull[1][0])..=hull[0][0].max(hull[1][0])).contains(&p[0])
                && (hull[0][1].min(hull[1][1])..=hull[0][1].max(hull[1][1])).contains(&p[1])
        }
        n => (0..n).all(|i| cross(hull[i], hull[(i + 1) % n], p) >= 0),
    }
}

/// One golden CLI case: a name and the arguments after the program name.
pub struct GoldenCase {
    pub name: String,
    pub args: Vec<String>,
}

/// Cases listed in `tests/golden/cases.txt`, one per line as
/// `name<TAB>arg arg ...`. Arguments are split on spaces.
pub fn golden_cases() -> Vec<GoldenCase> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/cases.txt");
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, args) = l.split_once('\t').expect("name and arguments separated by a tab");
            GoldenCase {
                name: name.to_owned(),
                args: args.split(' ').map(str::to_owned).collect(),
            }
        })
        .collect()
}

pub fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.out"))
}

/// Output of one run: exit code, standard output, standard error.
pub type RunOutput = (i32, String, String);

/// Transcript of a case in JSON mode followed by text mode.
pub fn golden_transcript(case: &GoldenCase, run: impl Fn(&[String]) -> RunOutput) -> String {
    let mut out = String::new();
    for json in [true, false] {
        let mut args = case.args.clone();
        if json {
            args.push("--json".into());
        }
        let (code, stdout, stderr) = run(&args);
        out.push_str(&format!("$ torix {}\nexit {code}\n{stdout}--- stderr\n{stderr}", args.join(" ")));
    }
    out
}

pub fn run_in_process(args: &[String]) -> RunOutput {
    let o = torix::cli::run(std::iter::once("torix".to_owned()).chain(args.iter().cloned()));
    (o.code, o.stdout, o.stderr)
}
