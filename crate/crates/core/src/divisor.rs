//! Torus-invariant divisors, the class group `Cl(Y) = W / div(M)`, and the
//! principality, Cartier and Gorenstein tests built on it.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{cokernel, solve_integral, FgAbelianGroup, GroupElement, IntegerMatrix};

/// The class group of a fan together with the classes `[D_σ]` of its rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassGroup {
    pub group: FgAbelianGroup,
    pub ray_classes: Vec<DivisorClass>,
}

/// Element of `W = Z^{rays}`, one coefficient per ray in fan order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusDivisor<'f> {
    fan: &'f Fan,
    coeffs: Vec<BigInt>,
}

/// Image of a divisor in `Cl(Y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass(pub GroupElement);

impl DivisorClass {
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn element(&self) -> &GroupElement {
        &self.0
    }
}

impl std::fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Matrix of `div: M -> W`; row σ is the ray `m*_σ`, so entry `(σ, j)` is
/// `<e_j, m*_σ>`.
pub fn div_matrix(fan: &Fan) -> IntegerMatrix {
    let all: Vec<usize> = (0..fan.ray_count()).collect();
    fan.ray_matrix(&all)
}

/// `Cl(Y)` as the cokernel of [`div_matrix`], computed once per fan.
pub fn class_group(fan: &Fan) -> &ClassGroup {
    fan.class_group.get_or_init(|| {
        let group = cokernel(&div_matrix(fan));
        let r = fan.ray_count();
        let ray_classes = (0..r)
            .map(|i| {
                let mut e = vec![BigInt::zero(); r];
                e[i] = BigInt::from(1);
                DivisorClass(group.element_of(&e).expect("ambient dimension is the ray count"))
            })
            .collect();
        ClassGroup { group, ray_classes }
    })
}

/// Principality witness: `m` with `div m = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Principality {
    pub principal: bool,
    pub witness: Option<Vec<BigInt>>,
}

/// Per-cone local equations of a Cartier divisor: for each maximal cone a
/// character `m` with `<m, m*_σ> = -a_σ` on the cone's rays, if one exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierData {
    pub cartier: bool,
    pub per_cone: Vec<Option<Vec<BigInt>>>,
}

impl Fan {
    pub fn divisor(&self, coeffs: Vec<BigInt>) -> Result<TorusDivisor<'_>> {
        if coeffs.len() != self.ray_count() {
            return Err(Error::DimensionMismatch(format!(
                "divisor with {} coefficients on a fan with {} rays",
                coeffs.len(),
                self.ray_count()
            )));
        }
        Ok(TorusDivisor { fan: self, coeffs })
    }

    pub fn divisor_i64(&self, coeffs: &[i64]) -> Result<TorusDivisor<'_>> {
        self.divisor(coeffs.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// The prime divisor `D_σ` of ray `index`.
    pub fn ray_divisor(&self, index: usize) -> TorusDivisor<'_> {
        let mut coeffs = vec![BigInt::zero(); self.ray_count()];
        coeffs[index] = BigInt::from(1);
        TorusDivisor { fan: self, coeffs }
    }

    /// `div m` for a character `m ∈ M`.
    pub fn principal_divisor(&self, m: &[BigInt]) -> Result<TorusDivisor<'_>> {
        let coeffs = div_matrix(self).mul_vec(m)?;
        Ok(TorusDivisor { fan: self, coeffs })
    }
}

impl<'f> TorusDivisor<'f> {
    pub fn fan(&self) -> &'f Fan {
        self.fan
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn add(&self, other: &TorusDivisor<'_>) -> Result<TorusDivisor<'f>> {
        if self.fan != other.fan {
            return Err(Error::InvalidArgument("divisors live on different fans".into()));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(TorusDivisor { fan: self.fan, coeffs })
    }

    pub fn scaled(&self, k: &BigInt) -> TorusDivisor<'f> {
        TorusDivisor {
            fan: self.fan,
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }

    pub fn class(&self) -> DivisorClass {
        let cg = class_group(self.fan);
        DivisorClass(cg.group.element_of(&self.coeffs).expect("length checked on construction"))
    }

    pub fn is_principal(&self) -> Principality {
        let witness = solve_integral(&div_matrix(self.fan), &self.coeffs)
            .expect("length checked on construction");
        Principality {
            principal: witness.is_some(),
            witness,
        }
    }

    fn local_equation(&self, cone: &[usize]) -> Option<Vec<BigInt>> {
        let rhs: Vec<BigInt> = cone.iter().map(|&i| -&self.coeffs[i]).collect();
        solve_integral(&self.fan.ray_matrix(cone), &rhs).expect("cone rows match rhs")
    }

    /// Cartier test, one integral solve per maximal cone. Fails when a ray
    /// lies in no maximal cone, since the local test would say nothing there.
    pub fn cartier(&self) -> Result<CartierData> {
        if let Some(&i) = self.fan.coneless_rays().first() {
            return Err(Error::ConelessRay(i));
        }
        let per_cone: Vec<Option<Vec<BigInt>>> = self
            .fan
            .max_cones()
            .iter()
            .map(|cone| self.local_equation(cone))
            .collect();
        Ok(CartierData {
            cartier: per_cone.iter().all(Option::is_some),
            per_cone,
        })
    }

    pub fn is_cartier(&self) -> Result<bool> {
        Ok(self.cartier()?.cartier)
    }
}

/// `K_Y = -Σ D_σ`.
pub fn canonical_divisor(fan: &Fan) -> TorusDivisor<'_> {
    TorusDivisor {
        fan,
        coeffs: vec![BigInt::from(-1); fan.ray_count()],
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GorensteinReport {
    pub canonical_class: DivisorClass,
    pub canonical_is_principal: bool,
    pub principal_witness: Option<Vec<BigInt>>,
    /// `None` when some ray lies in no maximal cone.
    pub canonical_is_cartier: Option<bool>,
    /// Per maximal cone: is `K` principal on the affine chart of that cone.
    pub quasi_gorenstein_affine_charts: Vec<bool>,
}

pub fn gorenstein_report(fan: &Fan) -> GorensteinReport {
    let k = canonical_divisor(fan);
    let principality = k.is_principal();
    let charts: Vec<bool> = fan
        .max_cones()
        .iter()
        .map(|cone| k.local_equation(cone).is_some())
        .collect();
    let canonical_is_cartier = match k.cartier() {
        Ok(c) => Some(c.cartier),
        Err(_) => None,
    };
    GorensteinReport {
        canonical_class: k.class(),
        canonical_is_principal: principality.principal,
        principal_witness: principality.witness,
        canonical_is_cartier,
        quasi_gorenstein_affine_charts: charts,
    }
}

/// Kernel and cokernel of `β: Z^s -> Cl(Y)`, `ε_i ↦ [D_i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultisectionClassGroup {
    /// Characters of `G` that are units on `X`; free, with basis below.
    pub kernel: FgAbelianGroup,
    /// Basis of `ker β ⊂ Z^s` as columns.
    pub kernel_basis: IntegerMatrix,
    /// Class group of the multisection ring.
    pub cl_x: FgAbelianGroup,
    pub images: Vec<DivisorClass>,
}

pub fn multisection_class_group(
    fan: &Fan,
    divisors: &[TorusDivisor<'_>],
) -> Result<MultisectionClassGroup> {
    if divisors.is_empty() {
        return Err(Error::InvalidArgument(
            "multisection ring needs at least one divisor".into(),
        ));
    }
    if divisors.iter().any(|d| d.fan != fan) {
        return Err(Error::InvalidArgument("divisor from a different fan".into()));
    }
    let cg = class_group(fan);
    let images: Vec<DivisorClass> = divisors.iter().map(TorusDivisor::class).collect();
    let elements: Vec<GroupElement> = images.iter().map(|c| c.0.clone()).collect();
    let kernel_basis = cg.group.homomorphism_kernel(&elements)?;
    let cl_x = cg.group.quotient_by(&elements)?;
    Ok(MultisectionClassGroup {
        kernel: FgAbelianGroup::free(kernel_basis.cols()),
        kernel_basis,
        cl_x,
        images,
    })
}
