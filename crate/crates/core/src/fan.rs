//! Fans in the dual lattice `M* = Z^n`: rays and simplicial maximal cones.

use std::collections::HashSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::divisor::ClassGroup;
use crate::error::{Error, Result};
use crate::feasibility::LinearSystem;
use crate::lattice::{cokernel, smith_normal_form, IntegerMatrix};

/// Unvalidated fan data, as read from a fan file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFan {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ValidationOptions {
    /// Reject non-primitive rays instead of dividing out their content.
    pub strict: bool,
    /// Check that every pair of maximal cones meets in a common face.
    pub check_intersections: bool,
}

/// A validated fan. Rays are primitive and pairwise distinct, and every
/// maximal cone is simplicial.
#[derive(Debug)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
    pub(crate) class_group: OnceLock<ClassGroup>,
}

impl Clone for Fan {
    fn clone(&self) -> Self {
        Self {
            rank: self.rank,
            rays: self.rays.clone(),
            max_cones: self.max_cones.clone(),
            class_group: self.class_group.clone(),
        }
    }
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.rays == other.rays && self.max_cones == other.max_cones
    }
}

impl Eq for Fan {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smoothness {
    pub per_cone: Vec<bool>,
    pub smooth: bool,
}

pub fn validate_fan(raw: &RawFan, options: ValidationOptions) -> Result<Fan> {
    let n = raw.rank;
    let mut rays = Vec::with_capacity(raw.rays.len());
    for (i, ray) in raw.rays.iter().enumerate() {
        if ray.len() != n {
            return Err(Error::InvalidFan(format!(
                "ray {i} has {} coordinates in rank {n}",
                ray.len()
            )));
        }
        let content = ray
            .iter()
            .fold(BigInt::zero(), |g, &x| g.gcd(&BigInt::from(x)));
        if content.is_zero() {
            return Err(Error::InvalidFan(format!("ray {i} is zero")));
        }
        if !content.is_one() {
            if options.strict {
                return Err(Error::InvalidFan(format!(
                    "ray {i} = {ray:?} is not primitive (content {content})"
                )));
            }
            let reduced: Vec<i64> = ray
                .iter()
                .map(|&x| (BigInt::from(x) / &content).to_i64().expect("quotient fits"))
                .collect();
            rays.push(reduced);
        } else {
            rays.push(ray.clone());
        }
    }
    let mut seen = HashSet::new();
    for (i, r) in rays.iter().enumerate() {
        if !seen.insert(r) {
            return Err(Error::InvalidFan(format!("ray {i} = {r:?} is a duplicate")));
        }
    }

    let mut seen_cones = HashSet::new();
    for (c, cone) in raw.max_cones.iter().enumerate() {
        if let Some(&bad) = cone.iter().find(|&&i| i >= rays.len()) {
            return Err(Error::InvalidFan(format!(
                "cone {c} refers to ray {bad}, but there are only {} rays",
                rays.len()
            )));
        }
        let mut sorted = cone.clone();
        sorted.sort_unstable();
        if !seen_cones.insert(sorted) {
            return Err(Error::InvalidFan(format!("cone {c} is listed twice")));
        }
        let m = ray_rows(&rays, n, cone);
        if smith_normal_form(&m).rank() != cone.len() {
            return Err(Error::InvalidFan(format!(
                "cone {c} has linearly dependent rays"
            )));
        }
    }

    let fan = Fan {
        rank: n,
        rays,
        max_cones: raw.max_cones.clone(),
        class_group: OnceLock::new(),
    };
    if options.check_intersections {
        fan.check_intersections()?;
    }
    Ok(fan)
}

fn ray_rows(rays: &[Vec<i64>], n: usize, indices: &[usize]) -> IntegerMatrix {
    let rows: Vec<Vec<i64>> = indices.iter().map(|&i| rays[i].clone()).collect();
    IntegerMatrix::from_i64_rows(n, &rows).expect("validated ray lengths")
}

impl Fan {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn to_raw(&self) -> RawFan {
        RawFan {
            rank: self.rank,
            rays: self.rays.clone(),
            max_cones: self.max_cones.clone(),
        }
    }

    /// Matrix whose rows are the given rays.
    pub fn ray_matrix(&self, indices: &[usize]) -> IntegerMatrix {
        ray_rows(&self.rays, self.rank, indices)
    }

    /// A cone is smooth iff its rays extend to a basis of `M*`.
    pub fn is_smooth(&self) -> Smoothness {
        let per_cone: Vec<bool> = self
            .max_cones
            .iter()
            .map(|cone| {
                let snf = smith_normal_form(&self.ray_matrix(cone));
                snf.rank() == cone.len() && snf.diagonal.iter().all(One::is_one)
            })
            .collect();
        let smooth = per_cone.iter().all(|&s| s);
        Smoothness { per_cone, smooth }
    }

    /// Whether the rays generate `M*` as a group.
    pub fn rays_span_dual(&self) -> bool {
        let all: Vec<usize> = (0..self.rays.len()).collect();
        cokernel(&self.ray_matrix(&all).transpose()).is_trivial()
    }

    /// Rays that lie in no maximal cone.
    pub fn coneless_rays(&self) -> Vec<usize> {
        let mut covered = vec![false; self.rays.len()];
        for cone in &self.max_cones {
            for &i in cone {
                covered[i] = true;
            }
        }
        (0..self.rays.len()).filter(|&i| !covered[i]).collect()
    }

    /// Exhaustive pairwise test that two simplicial cones meet in the cone
    /// spanned by their shared rays. Some point of the intersection with a
    /// positive coefficient on a non-shared ray exists iff they do not.
    pub fn check_intersections(&self) -> Result<()> {
        for (a, sa) in self.max_cones.iter().enumerate() {
            for (b, sb) in self.max_cones.iter().enumerate().skip(a + 1) {
                let vars = sa.len() + sb.len();
                let mut sys = LinearSystem::new(vars);
                for coord in 0..self.rank {
                    let mut coeffs = Vec::with_capacity(vars);
                    coeffs.extend(sa.iter().map(|&i| q(self.rays[i][coord])));
                    coeffs.extend(sb.iter().map(|&j| -q(self.rays[j][coord])));
                    sys.equal(coeffs, BigRational::zero());
                }
                let mut outside = vec![BigRational::zero(); vars];
                for (k, i) in sa.iter().chain(sb).enumerate() {
                    let mut e = vec![BigRational::zero(); vars];
                    e[k] = BigRational::one();
                    sys.at_least(e, BigRational::zero());
                    let shared = if k < sa.len() { sb.contains(i) } else { sa.contains(i) };
                    if !shared {
                        outside[k] = BigRational::one();
                    }
                }
                sys.at_least(outside, BigRational::one());
                if sys.is_feasible() {
                    return Err(Error::InvalidFan(format!(
                        "cones {a} and {b} do not meet along a common face"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}
