//! Diagonal actions of finite abelian group schemes on polynomial rings and
//! invariants of weighted-graded polynomial rings.
//!
//! A diagonal action of `N = Spec k[A]` on `k[x_1, ..., x_n]` is a choice of
//! weight `χ_i ∈ A` per variable. The stabilizer of a point whose nonzero
//! coordinates are indexed by `T` is the annihilator of `<χ_i : i ∈ T>`, so
//! the action is free there exactly when those weights generate `A`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::{FgAbelianGroup, GroupElement};

/// Default bound on enumerated items for the bounded checkers.
pub const DEFAULT_CAP: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalAction {
    group: FgAbelianGroup,
    weights: Vec<GroupElement>,
}

impl DiagonalAction {
    pub fn new(group: FgAbelianGroup, weights: Vec<GroupElement>) -> Result<Self> {
        if !group.is_finite() {
            return Err(Error::InfiniteGroup);
        }
        if weights.is_empty() {
            return Err(Error::InvalidArgument("an action needs at least one variable".into()));
        }
        if let Some(w) = weights.iter().find(|w| !group.contains(w)) {
            return Err(Error::InvalidArgument(format!("{w} is not an element of the group")));
        }
        Ok(Self { group, weights })
    }

    /// `A = Z/t_1 + ... + Z/t_k` with each weight given by its coordinates
    /// in that presentation.
    pub fn from_presentation(factors: &[BigInt], weights: &[Vec<BigInt>]) -> Result<Self> {
        let group = FgAbelianGroup::finite(factors)?;
        let weights = weights
            .iter()
            .map(|w| group.element_of(w))
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, weights)
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn weights(&self) -> &[GroupElement] {
        &self.weights
    }

    pub fn variables(&self) -> usize {
        self.weights.len()
    }

    pub fn weight_sum(&self) -> GroupElement {
        self.group.sum(&self.weights).expect("weights are group elements")
    }

    /// All weights together generate `A`.
    pub fn is_faithful(&self) -> bool {
        self.group
            .generates_whole_group(&self.weights)
            .expect("weights are group elements")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smallness {
    /// Codimension of the non-free locus; `None` when the action is free everywhere.
    pub non_free_codim: Option<usize>,
    pub level: usize,
    pub small: bool,
}

/// Whether the action is `level`-small: free outside a closed subset of
/// codimension at least `level + 1`.
pub fn is_n_small(action: &DiagonalAction, level: usize) -> Smallness {
    let n = action.variables();
    let mut non_free_codim = None;
    'search: for codim in 0..=n {
        for support in subsets_of_size(n, n - codim) {
            let gens: Vec<GroupElement> =
                support.iter().map(|&i| action.weights[i].clone()).collect();
            let generates = action
                .group
                .generates_whole_group(&gens)
                .expect("weights are group elements");
            if !generates {
                non_free_codim = Some(codim);
                break 'search;
            }
        }
    }
    Smallness {
        non_free_codim,
        level,
        small: non_free_codim.is_none_or(|c| c > level),
    }
}

/// Smallness of an action inside `SL_n`. Every faithful such action is small;
/// this is checked, not assumed.
pub fn sl_n_smallness_check(action: &DiagonalAction) -> Result<Smallness> {
    if !action.weight_sum().is_zero() {
        return Err(Error::SlConditionViolated);
    }
    Ok(is_n_small(action, 1))
}

fn require_small(action: &DiagonalAction) -> Result<()> {
    let s = is_n_small(action, 1);
    if s.small {
        Ok(())
    } else {
        Err(Error::NotSmall {
            codim: s.non_free_codim.unwrap_or(0),
        })
    }
}

/// Class group of the invariant ring of a small action: the character group `A`.
pub fn invariant_ring_class_group(action: &DiagonalAction) -> Result<FgAbelianGroup> {
    require_small(action)?;
    Ok(action.group.clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiGorenstein {
    pub quasi_gorenstein: bool,
    /// `-n` when quasi-Gorenstein.
    pub a_invariant: Option<i64>,
}

/// The invariant ring of a small action is quasi-Gorenstein iff the action
/// lies in `SL`, i.e. the weights sum to zero.
pub fn quasi_gorenstein_invariants(action: &DiagonalAction) -> Result<QuasiGorenstein> {
    require_small(action)?;
    let qg = action.weight_sum().is_zero();
    Ok(QuasiGorenstein {
        quasi_gorenstein: qg,
        a_invariant: qg.then(|| -(action.variables() as i64)),
    })
}

/// Polynomial ring graded by `Z^s`, one weight vector per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPolyRing {
    grading_rank: usize,
    weights: Vec<Vec<i64>>,
}

impl WeightedPolyRing {
    pub fn new(grading_rank: usize, weights: Vec<Vec<i64>>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| w.len() != grading_rank) {
            return Err(Error::DimensionMismatch(format!(
                "weight {w:?} in a Z^{grading_rank} grading"
            )));
        }
        Ok(Self {
            grading_rank,
            weights,
        })
    }

    /// `k[x_1, ..., x_n]` with every variable of degree one.
    pub fn standard(n: usize) -> Self {
        Self {
            grading_rank: 1,
            weights: vec![vec![1]; n],
        }
    }

    pub fn grading_rank(&self) -> usize {
        self.grading_rank
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn variables(&self) -> usize {
        self.weights.len()
    }

    fn degree_of(&self, exponents: &[u32]) -> Vec<i64> {
        let mut d = vec![0i64; self.grading_rank];
        for (u, w) in exponents.iter().zip(&self.weights) {
            for (dj, wj) in d.iter_mut().zip(w) {
                *dj += *u as i64 * wj;
            }
        }
        d
    }
}

/// `a(B) = -Σ w_i` for a positively `Z`-graded polynomial ring.
pub fn a_invariant(ring: &WeightedPolyRing) -> Result<i64> {
    if ring.grading_rank != 1 {
        return Err(Error::InvalidArgument(format!(
            "a-invariant needs a Z-grading, got Z^{}",
            ring.grading_rank
        )));
    }
    if let Some(w) = ring.weights.iter().find(|w| w[0] <= 0) {
        return Err(Error::InvalidArgument(format!(
            "a-invariant needs positive weights, got {}",
            w[0]
        )));
    }
    ring.weights
        .iter()
        .try_fold(0i64, |acc, w| acc.checked_sub(w[0]))
        .ok_or(Error::Overflow("a-invariant"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VeroneseReport {
    pub n: usize,
    pub d: u64,
    pub class_group: FgAbelianGroup,
    pub quasi_gorenstein: bool,
    /// `-n/d` in the Veronese's own grading, when quasi-Gorenstein.
    pub a_invariant: Option<i64>,
}

/// Class group and quasi-Gorenstein flag of the `d`-th Veronese subring of
/// the standard graded polynomial ring in `n` variables.
pub fn veronese_report(n: usize, d: u64) -> Result<VeroneseReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "Veronese subrings need at least 2 variables, got {n}"
        )));
    }
    if d < 2 {
        return Err(Error::InvalidArgument(format!("Veronese degree must be at least 2, got {d}")));
    }
    let class_group = FgAbelianGroup::finite(&[BigInt::from(d)])?;

    // the same ring is the invariant ring of μ_d acting with all weights 1
    let action = DiagonalAction::from_presentation(
        &[BigInt::from(d)],
        &vec![vec![BigInt::from(1)]; n],
    )?;
    let via_action = invariant_ring_class_group(&action)?;
    assert!(
        via_action.isomorphic(&class_group),
        "Veronese class group disagrees with the invariant-ring route"
    );

    let quasi_gorenstein = (n as u64).is_multiple_of(d);
    Ok(VeroneseReport {
        n,
        d,
        class_group,
        quasi_gorenstein,
        a_invariant: quasi_gorenstein.then(|| -((n as u64 / d) as i64)),
    })
}

/// Squarefree monomial ideal given by the supports of its generators
/// (0-based variable indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdealData {
    pub generators: Vec<BTreeSet<usize>>,
    /// The constant monomial lies in the ideal, so it is the unit ideal.
    /// Constants are never listed among `generators`.
    pub contains_one: bool,
}

impl MonomialIdealData {
    pub fn new(generators: Vec<BTreeSet<usize>>) -> Result<Self> {
        if generators.iter().any(BTreeSet::is_empty) {
            return Err(Error::InvalidArgument("generator supports must be nonempty".into()));
        }
        Ok(Self {
            generators,
            contains_one: false,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealHeight {
    pub height: usize,
    /// No generators: the zero ideal, of height 0.
    pub zero_ideal: bool,
    /// A minimum set of variables meeting every generator support.
    pub hitting_set: Vec<usize>,
}

/// Height of the ideal generated by monomials with the given supports:
/// the minimum number of variables meeting every support, which is the
/// smallest codimension among its minimal primes.
pub fn monomial_ideal_height(ideal: &MonomialIdealData, n_vars: usize) -> Result<IdealHeight> {
    monomial_ideal_height_capped(ideal, n_vars, DEFAULT_CAP)
}

/// As [`monomial_ideal_height`], failing once more than `cap` candidate
/// variable sets have been tried.
pub fn monomial_ideal_height_capped(
    ideal: &MonomialIdealData,
    n_vars: usize,
    cap: u64,
) -> Result<IdealHeight> {
    if ideal.contains_one {
        return Err(Error::UnitIdeal);
    }
    if let Some(&bad) = ideal.generators.iter().flatten().find(|&&i| i >= n_vars) {
        return Err(Error::InvalidArgument(format!(
            "variable {} outside 1..={n_vars}",
            bad + 1
        )));
    }
    if ideal.generators.iter().any(BTreeSet::is_empty) {
        return Err(Error::InvalidArgument("generator supports must be nonempty".into()));
    }
    let mut tried = 0u64;
    for size in 0..=n_vars {
        for candidate in subsets_of_size(n_vars, size) {
            tried += 1;
            if tried > cap {
                return Err(Error::CapExceeded {
                    needed: format!("variable subsets of {n_vars} variables"),
                    cap,
                });
            }
            let hits = ideal
                .generators
                .iter()
                .all(|g| candidate.iter().any(|v| g.contains(v)));
            if hits {
                return Ok(IdealHeight {
                    height: size,
                    zero_ideal: ideal.generators.is_empty(),
                    hitting_set: candidate,
                });
            }
        }
    }
    unreachable!("the full variable set meets every nonempty support")
}

/// Supports of the nonconstant monomials of degree `lambda` and total degree
/// at most `degree_cap`: generators of the ideal `J(λ)` up to the cap.
pub fn degree_ideal(
    ring: &WeightedPolyRing,
    lambda: &[i64],
    degree_cap: u32,
) -> Result<MonomialIdealData> {
    degree_ideal_capped(ring, lambda, degree_cap, DEFAULT_CAP)
}

pub fn degree_ideal_capped(
    ring: &WeightedPolyRing,
    lambda: &[i64],
    degree_cap: u32,
    cap: u64,
) -> Result<MonomialIdealData> {
    if lambda.len() != ring.grading_rank {
        return Err(Error::DimensionMismatch(format!(
            "degree of length {} in a Z^{} grading",
            lambda.len(),
            ring.grading_rank
        )));
    }
    let monomials = monomials_up_to(ring.variables(), degree_cap, cap)?;
    let mut supports = BTreeSet::new();
    let mut contains_one = false;
    for u in &monomials {
        if ring.degree_of(u) != lambda {
            continue;
        }
        let support: BTreeSet<usize> = (0..u.len()).filter(|&i| u[i] > 0).collect();
        if support.is_empty() {
            contains_one = true;
        } else {
            supports.insert(support);
        }
    }
    Ok(MonomialIdealData {
        generators: supports.into_iter().collect(),
        contains_one,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjectivityWitness {
    pub lambda: Vec<i64>,
    pub lambda_prime: Vec<i64>,
    /// Exponent vector of a monomial of degree `lambda + lambda_prime` that
    /// is not a product of monomials of degrees `lambda` and `lambda_prime`.
    pub monomial: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjectivityReport {
    pub surjective: bool,
    pub bound: u32,
    pub degree_cap: u32,
    pub sample_size: usize,
    pub pairs_checked: usize,
    pub witness: Option<SurjectivityWitness>,
}

/// Bounded check that `B_λ ⊗ B_λ' -> B_{λ+λ'}` is onto for all `λ, λ'` in
/// the semigroup generated by `sigma_gens` with coordinates in
/// `[-bound, bound]`. Semigroup elements are reached by adding generators
/// without leaving that box. Only monomials of total degree at most
/// `2 * bound` are considered. A `true` answer is evidence up to the bound,
/// not a proof.
pub fn surjective_grading_check(
    ring: &WeightedPolyRing,
    sigma_gens: &[Vec<i64>],
    bound: u32,
) -> Result<SurjectivityReport> {
    surjective_grading_check_capped(ring, sigma_gens, bound, DEFAULT_CAP)
}

pub fn surjective_grading_check_capped(
    ring: &WeightedPolyRing,
    sigma_gens: &[Vec<i64>],
    bound: u32,
    cap: u64,
) -> Result<SurjectivityReport> {
    if sigma_gens.is_empty() {
        return Err(Error::InvalidArgument("at least one semigroup generator is needed".into()));
    }
    if let Some(g) = sigma_gens.iter().find(|g| g.len() != ring.grading_rank) {
        return Err(Error::DimensionMismatch(format!(
            "generator {g:?} in a Z^{} grading",
            ring.grading_rank
        )));
    }
    let b = bound as i64;
    let side = 2 * bound as u128 + 1;
    let box_size = side
        .checked_pow(ring.grading_rank as u32)
        .filter(|&n| n * n <= cap as u128)
        .ok_or(Error::CapExceeded {
            needed: format!("({side}^{})^2 degree pairs", ring.grading_rank),
            cap,
        })?;
    let _ = box_size;

    // semigroup elements inside the box, breadth first from 0
    let zero = vec![0i64; ring.grading_rank];
    let mut sample = BTreeSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for g in sigma_gens {
            let y: Vec<i64> = x.iter().zip(g).map(|(a, c)| a + c).collect();
            if y.iter().all(|c| c.abs() <= b) && sample.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }

    let degree_cap = 2 * bound;
    let mut by_degree: BTreeMap<Vec<i64>, Vec<Vec<u32>>> = BTreeMap::new();
    for u in monomials_up_to(ring.variables(), degree_cap, cap)? {
        by_degree.entry(ring.degree_of(&u)).or_default().push(u);
    }
    let empty = Vec::new();

    let sample: Vec<Vec<i64>> = sample.into_iter().collect();
    let mut pairs_checked = 0;
    for lambda in &sample {
        for lambda_prime in &sample {
            pairs_checked += 1;
            let target: Vec<i64> = lambda.iter().zip(lambda_prime).map(|(a, c)| a + c).collect();
            let left = by_degree.get(lambda).unwrap_or(&empty);
            for u in by_degree.get(&target).unwrap_or(&empty) {
                let factors = left.iter().any(|v| v.iter().zip(u).all(|(a, c)| a <= c));
                if !factors {
                    return Ok(SurjectivityReport {
                        surjective: false,
                        bound,
                        degree_cap,
                        sample_size: sample.len(),
                        pairs_checked,
                        witness: Some(SurjectivityWitness {
                            lambda: lambda.clone(),
                            lambda_prime: lambda_prime.clone(),
                            monomial: u.clone(),
                        }),
                    });
                }
            }
        }
    }
    Ok(SurjectivityReport {
        surjective: true,
        bound,
        degree_cap,
        sample_size: sample.len(),
        pairs_checked,
        witness: None,
    })
}

/// All exponent vectors in `n` variables of total degree at most `max_degree`,
/// by increasing degree and then lexicographically.
fn monomials_up_to(n: usize, max_degree: u32, cap: u64) -> Result<Vec<Vec<u32>>> {
    // C(n + D, n), computed incrementally to detect blow-up early
    let mut count: u128 = 1;
    for i in 1..=n as u128 {
        count = count * (max_degree as u128 + i) / i;
        if count > cap as u128 {
            return Err(Error::CapExceeded {
                needed: format!("monomials of degree <= {max_degree} in {n} variables"),
                cap,
            });
        }
    }
    let mut out = Vec::with_capacity(count as usize);
    for degree in 0..=max_degree {
        let mut current = vec![0u32; n];
        compositions(n, degree, 0, &mut current, &mut out);
    }
    Ok(out)
}

fn compositions(n: usize, remaining: u32, pos: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if pos + 1 >= n {
        if n > 0 {
            current[n - 1] = remaining;
            out.push(current.clone());
            current[n - 1] = 0;
        } else if remaining == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for k in (0..=remaining).rev() {
        current[pos] = k;
        compositions(n, remaining - k, pos + 1, current, out);
    }
    current[pos] = 0;
}

/// Size-`k` subsets of `0..n` in lexicographic order.
fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut c = current.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                next = Some(c);
                break;
            }
        }
        Some(current)
    })
}
