//! Decomposition of Frobenius pushforwards `F^e_* O_Y(c)` on a toric
//! variety with torsion-free class group into rank-one reflexive summands,
//! and the finite set of classes that can ever occur as summands of
//! `F^e_* O_Y`.
//!
//! For `a ∈ {0, ..., q-1}^{rays}` with `q = p^e`, the vector `a` contributes
//! a summand exactly when `c - Σ a_σ [D_σ]` is divisible by `q` in `Cl(Y)`,
//! and the summand is the quotient. The enumeration is split over prefixes
//! of `a` and reduced with a commutative merge, so the result does not
//! depend on the schedule.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::divisor::{class_group, DivisorClass, TorusDivisor};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::feasibility::LinearSystem;
use crate::lattice::GroupElement;

/// Default bound on the number of enumerated vectors.
pub const DEFAULT_CAP: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub cap: u64,
    /// Spread the enumeration over the current rayon pool.
    pub parallel: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_CAP,
            parallel: true,
        }
    }
}

/// `F^e_* O_Y(c) = ⊕ O_Y(c')^{m(c')}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusDecomposition {
    pub p: u64,
    pub e: u32,
    pub source: DivisorClass,
    /// Summand classes, ordered lexicographically by free coordinates.
    pub summands: BTreeMap<DivisorClass, u64>,
}

impl FrobeniusDecomposition {
    pub fn total_rank(&self) -> u128 {
        self.summands.values().map(|&m| m as u128).sum()
    }

    pub fn multiplicity(&self, class: &DivisorClass) -> u64 {
        self.summands.get(class).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FfrtClassSet {
    pub classes: BTreeSet<DivisorClass>,
}

impl FfrtClassSet {
    pub fn contains(&self, c: &DivisorClass) -> bool {
        self.classes.contains(c)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or(Error::Overflow("class coordinates"))
}

/// Free coordinates of the ray classes, after checking that `Cl(Y)` is torsion-free.
fn ray_class_vectors(fan: &Fan) -> Result<Vec<Vec<i128>>> {
    if !fan.rays_span_dual() {
        return Err(Error::TorsionClassGroup);
    }
    class_group(fan)
        .ray_classes
        .iter()
        .map(|c| c.0.free.iter().map(to_i128).collect())
        .collect()
}

pub fn frobenius_decompose(
    fan: &Fan,
    p: u64,
    e: u32,
    source: &DivisorClass,
    options: EnumerationOptions,
) -> Result<FrobeniusDecomposition> {
    let cg = class_group(fan);
    if !cg.group.contains(&source.0) {
        return Err(Error::InvalidArgument(format!(
            "{source} is not a class of this fan"
        )));
    }
    decompose(fan, p, e, source, options)
}

/// Same as [`frobenius_decompose`] with the source class given by a divisor.
pub fn frobenius_decompose_divisor(
    divisor: &TorusDivisor<'_>,
    p: u64,
    e: u32,
    options: EnumerationOptions,
) -> Result<FrobeniusDecomposition> {
    decompose(divisor.fan(), p, e, &divisor.class(), options)
}

fn decompose(
    fan: &Fan,
    p: u64,
    e: u32,
    source: &DivisorClass,
    options: EnumerationOptions,
) -> Result<FrobeniusDecomposition> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let rays = ray_class_vectors(fan)?;
    let r = rays.len();
    let q = p.checked_pow(e).ok_or(Error::Overflow("p^e"))?;
    let needed = (q as u128).checked_pow(r as u32);
    match needed {
        Some(n) if n <= options.cap as u128 => {}
        _ => {
            return Err(Error::CapExceeded {
                needed: format!("{q}^{r}"),
                cap: options.cap,
            })
        }
    }
    let base: Vec<i128> = source.0.free.iter().map(to_i128).collect::<Result<_>>()?;

    // |base| + r (q-1) max|c| must fit comfortably
    let max_c = rays.iter().flatten().map(|x| x.unsigned_abs()).max().unwrap_or(0);
    let max_b = base.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
    let bound = BigInt::from(max_b) + BigInt::from(r) * BigInt::from(q) * BigInt::from(max_c);
    if bound.to_i128().is_none_or(|b| b > i128::MAX / 4) {
        return Err(Error::Overflow("Frobenius enumeration sums"));
    }

    let q_i = q as i128;
    let mut prefix_len = 0;
    let mut tasks: u64 = 1;
    while prefix_len < r && tasks < 256 && q > 1 {
        tasks *= q;
        prefix_len += 1;
    }

    let run = |task: u64| -> BTreeMap<Vec<i128>, u64> {
        let mut v = base.clone();
        let mut t = task;
        for ray in rays.iter().take(prefix_len) {
            let digit = (t % q) as i128;
            t /= q;
            for (vj, cj) in v.iter_mut().zip(ray) {
                *vj -= digit * cj;
            }
        }
        let rest = &rays[prefix_len..];
        let mut digits = vec![0u64; rest.len()];
        let mut local: HashMap<Vec<i128>, u64> = HashMap::new();
        loop {
            if v.iter().all(|x| x % q_i == 0) {
                let key: Vec<i128> = v.iter().map(|x| x / q_i).collect();
                *local.entry(key).or_insert(0) += 1;
            }
            // odometer step
            let mut i = 0;
            loop {
                if i == rest.len() {
                    return local.into_iter().collect();
                }
                if digits[i] + 1 < q {
                    digits[i] += 1;
                    for (vj, cj) in v.iter_mut().zip(&rest[i]) {
                        *vj -= cj;
                    }
                    break;
                }
                digits[i] = 0;
                let back = (q - 1) as i128;
                for (vj, cj) in v.iter_mut().zip(&rest[i]) {
                    *vj += back * cj;
                }
                i += 1;
            }
        }
    };

    let merge = |mut a: BTreeMap<Vec<i128>, u64>, b: BTreeMap<Vec<i128>, u64>| {
        for (k, m) in b {
            *a.entry(k).or_insert(0) += m;
        }
        a
    };
    let counts = if options.parallel {
        (0..tasks)
            .into_par_iter()
            .map(run)
            .reduce(BTreeMap::new, merge)
    } else {
        (0..tasks).map(run).fold(BTreeMap::new(), merge)
    };

    let summands = counts
        .into_iter()
        .map(|(k, m)| {
            let class = DivisorClass(GroupElement {
                free: k.into_iter().map(BigInt::from).collect(),
                torsion: Vec::new(),
            });
            (class, m)
        })
        .collect();
    Ok(FrobeniusDecomposition {
        p,
        e,
        source: source.clone(),
        summands,
    })
}

/// Lattice points of the zonotope `{-Σ t_σ [D_σ] : t ∈ [0,1]^{rays}}` in
/// `Cl(Y) ≅ Z^s`: every class that can appear in some `F^e_* O_Y`.
pub fn ffrt_class_set(fan: &Fan) -> Result<FfrtClassSet> {
    ffrt_class_set_capped(fan, DEFAULT_CAP)
}

pub fn ffrt_class_set_capped(fan: &Fan, cap: u64) -> Result<FfrtClassSet> {
    let rays = ray_class_vectors(fan)?;
    let s = class_group(fan).group.rank();
    let r = rays.len();
    let mut lo = vec![0i128; s];
    let mut hi = vec![0i128; s];
    for ray in &rays {
        for j in 0..s {
            if ray[j] > 0 {
                lo[j] -= ray[j];
            } else {
                hi[j] -= ray[j];
            }
        }
    }
    let size = lo
        .iter()
        .zip(&hi)
        .try_fold(1u128, |acc, (l, h)| acc.checked_mul((h - l + 1) as u128));
    match size {
        Some(n) if n <= cap as u128 => {}
        _ => {
            return Err(Error::CapExceeded {
                needed: "zonotope bounding box".into(),
                cap,
            })
        }
    }

    let rq = |x: i128| BigRational::from_integer(BigInt::from(x));
    let mut classes = BTreeSet::new();
    let mut point = lo.clone();
    loop {
        let mut sys = LinearSystem::new(r);
        for i in 0..r {
            sys.bound(i, BigRational::zero(), rq(1));
        }
        for j in 0..s {
            sys.equal(rays.iter().map(|c| rq(c[j])).collect(), rq(-point[j]));
        }
        if sys.is_feasible() {
            classes.insert(DivisorClass(GroupElement {
                free: point.iter().map(|&x| BigInt::from(x)).collect(),
                torsion: Vec::new(),
            }));
        }
        let mut j = 0;
        loop {
            if j == s {
                return Ok(FfrtClassSet { classes });
            }
            if point[j] < hi[j] {
                point[j] += 1;
                break;
            }
            point[j] = lo[j];
            j += 1;
        }
    }
}

/// Number of `a ∈ {0, ..., p^e - 1}^{n+1}` with `Σ a_i = k p^e`, i.e. the
/// multiplicity of `O(-k)` in `F^e_* O` on projective n-space, counted by
/// dynamic programming over bounded compositions.
pub fn pn_multiplicity_oracle(n: usize, p: u64, e: u32, k: u64) -> Result<u128> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let q = p.checked_pow(e).ok_or(Error::Overflow("p^e"))? as usize;
    let target = (k as usize)
        .checked_mul(q)
        .ok_or(Error::Overflow("k p^e"))?;
    let parts = n + 1;
    if target > parts * (q - 1) {
        return Ok(0);
    }
    let mut ways = vec![0u128; target + 1];
    ways[0] = 1;
    for _ in 0..parts {
        // prefix sums give the sliding window over one part in [0, q-1]
        let mut prefix = vec![0u128; target + 2];
        for s in 0..=target {
            prefix[s + 1] = prefix[s]
                .checked_add(ways[s])
                .ok_or(Error::Overflow("composition count"))?;
        }
        for s in 0..=target {
            let low = (s + 1).saturating_sub(q);
            ways[s] = prefix[s + 1] - prefix[low];
        }
    }
    Ok(ways[target])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{validate_fan, RawFan, ValidationOptions};

    fn fan(rank: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
        let raw = RawFan {
            rank,
            rays: rays.iter().map(|r| r.to_vec()).collect(),
            max_cones: cones.iter().map(|c| c.to_vec()).collect(),
        };
        validate_fan(&raw, ValidationOptions::default()).unwrap()
    }

    fn cls(xs: &[i64]) -> DivisorClass {
        DivisorClass(GroupElement {
            free: xs.iter().map(|&x| BigInt::from(x)).collect(),
            torsion: vec![],
        })
    }

    fn p1() -> Fan {
        fan(1, &[&[1], &[-1]], &[&[0], &[1]])
    }

    fn p2() -> Fan {
        fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]])
    }

    fn opts() -> EnumerationOptions {
        EnumerationOptions::default()
    }

    #[test]
    fn exponent_zero_is_identity() {
        let f = p2();
        let d = frobenius_decompose(&f, 5, 0, &cls(&[4]), opts()).unwrap();
        assert_eq!(d.summands, BTreeMap::from([(cls(&[4]), 1)]));
    }

    #[test]
    fn projective_line_p2() {
        let d = frobenius_decompose(&p1(), 2, 1, &cls(&[0]), opts()).unwrap();
        assert_eq!(d.summands, BTreeMap::from([(cls(&[-1]), 1), (cls(&[0]), 1)]));
        // F_* O(1) = O + O in characteristic 2
        let d = frobenius_decompose(&p1(), 2, 1, &cls(&[1]), opts()).unwrap();
        assert_eq!(d.summands, BTreeMap::from([(cls(&[0]), 2)]));
    }

    #[test]
    fn projective_plane_p3() {
        let d = frobenius_decompose(&p2(), 3, 1, &cls(&[0]), opts()).unwrap();
        assert_eq!(
            d.summands,
            BTreeMap::from([(cls(&[-2]), 1), (cls(&[-1]), 7), (cls(&[0]), 1)])
        );
        assert_eq!(d.total_rank(), 9);
    }

    #[test]
    fn rejects_bad_input() {
        let f = p1();
        assert_eq!(
            frobenius_decompose(&f, 4, 1, &cls(&[0]), opts()),
            Err(Error::NotPrime(4))
        );
        let small = EnumerationOptions { cap: 10, parallel: false };
        assert!(matches!(
            frobenius_decompose(&f, 5, 1, &cls(&[0]), small),
            Err(Error::CapExceeded { .. })
        ));
        let quadric = fan(2, &[&[1, 1], &[1, -1]], &[&[0, 1]]);
        let zero = class_group(&quadric).group.zero();
        assert_eq!(
            frobenius_decompose(&quadric, 2, 1, &DivisorClass(zero), opts()),
            Err(Error::TorsionClassGroup)
        );
        assert_eq!(ffrt_class_set(&quadric), Err(Error::TorsionClassGroup));
        assert!(frobenius_decompose(&f, 2, 1, &cls(&[0, 0]), opts()).is_err());
    }

    #[test]
    fn ffrt_examples() {
        let set = |f: &Fan| ffrt_class_set(f).unwrap().classes.into_iter().collect::<Vec<_>>();
        assert_eq!(set(&p1()), vec![cls(&[-2]), cls(&[-1]), cls(&[0])]);
        assert_eq!(set(&p2()), vec![cls(&[-3]), cls(&[-2]), cls(&[-1]), cls(&[0])]);
        let plane = fan(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]);
        assert_eq!(set(&plane), vec![cls(&[])]);
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(pn_multiplicity_oracle(1, 2, 1, 0).unwrap(), 1);
        assert_eq!(pn_multiplicity_oracle(1, 2, 1, 1).unwrap(), 1);
        assert_eq!(pn_multiplicity_oracle(2, 3, 1, 1).unwrap(), 7);
        for p in [2, 3, 5, 7] {
            assert_eq!(pn_multiplicity_oracle(2, p, 1, 0).unwrap(), 1);
        }
        assert_eq!(pn_multiplicity_oracle(2, 3, 1, 3).unwrap(), 0);
    }

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
