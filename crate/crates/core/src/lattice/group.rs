use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{dot, hermite_rows, IntegerMatrix};
use super::smith::{kernel_basis, smith_normal_form, solve_integral};
use crate::error::{Error, Result};

/// A finitely generated abelian group `Z^rank + Z/t_1 + ... + Z/t_k` in
/// invariant-factor form (`t_1 | t_2 | ... | t_k`, every `t_j >= 2`),
/// presented as a quotient of some ambient `Z^m`.
///
/// The projection maps ambient vectors to normal-form coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgAbelianGroup {
    ambient_dim: usize,
    rank: usize,
    torsion: Vec<BigInt>,
    free_projection: IntegerMatrix,
    torsion_projection: IntegerMatrix,
}

/// An element in normal-form coordinates. Torsion residues are always
/// reduced into `[0, t_j)`, so structural equality is group equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
}

impl GroupElement {
    pub fn is_zero(&self) -> bool {
        self.free.iter().chain(&self.torsion).all(Zero::is_zero)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .free
            .iter()
            .chain(&self.torsion)
            .map(|x| x.to_string())
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `Z^rows / image(a)` in invariant-factor normal form.
///
/// A matrix with no columns gives the free group `Z^rows`.
pub fn cokernel(a: &IntegerMatrix) -> FgAbelianGroup {
    let m = a.rows();
    let snf = smith_normal_form(a);
    let rank = snf.rank();

    let mut torsion = Vec::new();
    let mut torsion_rows = Vec::new();
    for i in 0..rank {
        let d = &snf.diagonal[i];
        if d.is_one() {
            continue;
        }
        torsion.push(d.clone());
        torsion_rows.push(snf.left.row(i).iter().map(|x| x.mod_floor(d)).collect());
    }
    // The free rows span the saturated lattice of functionals vanishing on
    // image(a); Hermite form makes the free coordinates canonical.
    let free_rows = hermite_rows((rank..m).map(|i| snf.left.row(i).to_vec()).collect(), m);

    FgAbelianGroup {
        ambient_dim: m,
        rank: free_rows.len(),
        torsion,
        free_projection: IntegerMatrix::from_row_vecs(m, free_rows),
        torsion_projection: IntegerMatrix::from_row_vecs(m, torsion_rows),
    }
}

impl FgAbelianGroup {
    /// `Z/t_1 + ... + Z/t_k` presented on `Z^k` (factors need not form a
    /// divisibility chain, and `1` is allowed). Zero factors are rejected.
    pub fn finite(factors: &[BigInt]) -> Result<Self> {
        if factors.iter().any(|t| !t.is_positive()) {
            return Err(Error::InvalidArgument(
                "group factors must be positive integers".into(),
            ));
        }
        let k = factors.len();
        let mut rel = IntegerMatrix::zeros(k, k);
        for (i, t) in factors.iter().enumerate() {
            rel.set(i, i, t.clone());
        }
        Ok(cokernel(&rel))
    }

    /// `Z^rank` on itself.
    pub fn free(rank: usize) -> Self {
        cokernel(&IntegerMatrix::zeros(rank, 0))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// Group order, when finite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Same abstract group (rank and invariant factors), ignoring presentations.
    pub fn isomorphic(&self, other: &FgAbelianGroup) -> bool {
        self.rank == other.rank && self.torsion == other.torsion
    }

    pub fn free_projection(&self) -> &IntegerMatrix {
        &self.free_projection
    }

    pub fn torsion_projection(&self) -> &IntegerMatrix {
        &self.torsion_projection
    }

    /// Reduces an ambient vector to its normal-form element.
    pub fn element_of(&self, ambient: &[BigInt]) -> Result<GroupElement> {
        if ambient.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in a group presented on Z^{}",
                ambient.len(),
                self.ambient_dim
            )));
        }
        let free = self.free_projection.mul_vec(ambient)?;
        let torsion = self
            .torsion
            .iter()
            .enumerate()
            .map(|(j, t)| dot(self.torsion_projection.row(j), ambient).mod_floor(t))
            .collect();
        Ok(GroupElement { free, torsion })
    }

    pub fn element_of_i64(&self, ambient: &[i64]) -> Result<GroupElement> {
        let v: Vec<BigInt> = ambient.iter().map(|&x| BigInt::from(x)).collect();
        self.element_of(&v)
    }

    /// Builds an element from normal-form coordinates, reducing torsion residues.
    pub fn element(&self, free: Vec<BigInt>, torsion: Vec<BigInt>) -> Result<GroupElement> {
        if free.len() != self.rank || torsion.len() != self.torsion.len() {
            return Err(Error::DimensionMismatch(format!(
                "element with {} free and {} torsion coordinates in a group with {} and {}",
                free.len(),
                torsion.len(),
                self.rank,
                self.torsion.len()
            )));
        }
        let torsion = torsion
            .iter()
            .zip(&self.torsion)
            .map(|(r, t)| r.mod_floor(t))
            .collect();
        Ok(GroupElement { free, torsion })
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            free: vec![BigInt::zero(); self.rank],
            torsion: vec![BigInt::zero(); self.torsion.len()],
        }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.free.len() == self.rank
            && x.torsion.len() == self.torsion.len()
            && x
                .torsion
                .iter()
                .zip(&self.torsion)
                .all(|(r, t)| !r.is_negative() && r < t)
    }

    fn check(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("{x} is not an element of this group")))
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        let free = a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect();
        let torsion = a
            .torsion
            .iter()
            .zip(&b.torsion)
            .zip(&self.torsion)
            .map(|((x, y), t)| (x + y).mod_floor(t))
            .collect();
        Ok(GroupElement { free, torsion })
    }

    pub fn scale(&self, a: &GroupElement, k: &BigInt) -> Result<GroupElement> {
        self.check(a)?;
        let free = a.free.iter().map(|x| x * k).collect();
        let torsion = a
            .torsion
            .iter()
            .zip(&self.torsion)
            .map(|(x, t)| (x * k).mod_floor(t))
            .collect();
        Ok(GroupElement { free, torsion })
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.scale(a, &BigInt::from(-1))
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.add(a, &self.neg(b)?)
    }

    pub fn sum<'a, I>(&self, items: I) -> Result<GroupElement>
    where
        I: IntoIterator<Item = &'a GroupElement>,
    {
        items
            .into_iter()
            .try_fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// Some ambient vector whose class is `x`.
    pub fn lift(&self, x: &GroupElement) -> Result<Vec<BigInt>> {
        self.check(x)?;
        let m = self.ambient_dim;
        let k = self.torsion.len();
        // [P_free 0; P_tors diag(t)] (ambient, slack) = (free, torsion)
        let mut a = IntegerMatrix::zeros(self.rank + k, m + k);
        for i in 0..self.rank {
            for j in 0..m {
                a.set(i, j, self.free_projection.get(i, j).clone());
            }
        }
        for (r, t) in self.torsion.iter().enumerate() {
            for j in 0..m {
                a.set(self.rank + r, j, self.torsion_projection.get(r, j).clone());
            }
            a.set(self.rank + r, m + r, t.clone());
        }
        let rhs: Vec<BigInt> = x.free.iter().chain(&x.torsion).cloned().collect();
        let sol = solve_integral(&a, &rhs)?
            .ok_or(Error::InvalidArgument("projection is not surjective".into()))?;
        Ok(sol[..m].to_vec())
    }

    fn coordinates(&self, x: &GroupElement) -> Vec<BigInt> {
        x.free.iter().chain(&x.torsion).cloned().collect()
    }

    /// Relations among normal coordinates: `t_j` times the j-th torsion axis.
    fn relation_columns(&self) -> Vec<Vec<BigInt>> {
        let dim = self.rank + self.torsion.len();
        self.torsion
            .iter()
            .enumerate()
            .map(|(j, t)| {
                let mut c = vec![BigInt::zero(); dim];
                c[self.rank + j] = t.clone();
                c
            })
            .collect()
    }

    /// Kernel of the homomorphism `Z^g -> self` sending the i-th basis vector
    /// to `images[i]`, as basis columns of a `g x k` matrix (Hermite form).
    pub fn homomorphism_kernel(&self, images: &[GroupElement]) -> Result<IntegerMatrix> {
        for x in images {
            self.check(x)?;
        }
        let dim = self.rank + self.torsion.len();
        let g = images.len();
        let mut columns: Vec<Vec<BigInt>> = images.iter().map(|x| self.coordinates(x)).collect();
        columns.extend(self.relation_columns());
        let combined = IntegerMatrix::from_columns(dim, &columns)?;
        let ker = kernel_basis(&combined);
        // projecting onto the first g coordinates is injective on this kernel
        let rows: Vec<Vec<BigInt>> = (0..ker.cols())
            .map(|j| ker.column(j)[..g].to_vec())
            .collect();
        let rows = hermite_rows(rows, g);
        Ok(IntegerMatrix::from_row_vecs(g, rows).transpose())
    }

    /// `self / <images>`, presented on the normal coordinates of `self`.
    pub fn quotient_by(&self, images: &[GroupElement]) -> Result<FgAbelianGroup> {
        for x in images {
            self.check(x)?;
        }
        let dim = self.rank + self.torsion.len();
        let mut columns = self.relation_columns();
        columns.extend(images.iter().map(|x| self.coordinates(x)));
        Ok(cokernel(&IntegerMatrix::from_columns(dim, &columns)?))
    }

    /// The subgroup generated by `gens`, presented on `Z^{gens.len()}`.
    pub fn subgroup_generated(&self, gens: &[GroupElement]) -> Result<FgAbelianGroup> {
        let k = self.homomorphism_kernel(gens)?;
        Ok(cokernel(&k))
    }

    pub fn generates_whole_group(&self, gens: &[GroupElement]) -> Result<bool> {
        Ok(self.quotient_by(gens)?.is_trivial())
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.rank)
            });
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
