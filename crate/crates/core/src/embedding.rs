//! Lattice embeddings given by an integer matrix, primitivity through the
//! gcd of maximal minors, explicit torsion witnesses, and orthogonal
//! complements.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::IntegralLattice;
use crate::lll;
use crate::matrix::{combinations, content, IntMatrix};

/// `φ(e_i) = Σ_j matrix[i][j] f_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    source: IntegralLattice,
    target: IntegralLattice,
    matrix: IntMatrix,
}

/// An element `z` of the target with `z ∉ φ(L1)` but `N z ∈ φ(L1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionWitness {
    pub order: BigInt,
    /// `N z = Σ coeffs[i] φ(e_i)`.
    pub coeffs: Vec<BigInt>,
    /// Integer coordinates of `z` in the target basis.
    pub z: Vec<BigInt>,
}

/// Saturated orthogonal complement of an image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complement {
    pub basis: IntMatrix,
    pub lattice: IntegralLattice,
}

impl Embedding {
    /// Checks shapes only; see [`Embedding::validate`] for the Gram condition.
    pub fn new(source: IntegralLattice, target: IntegralLattice, matrix: IntMatrix) -> Result<Self> {
        if matrix.nrows() != source.rank() {
            return Err(Error::DimensionMismatch { expected: source.rank(), got: matrix.nrows() });
        }
        if matrix.ncols() != target.rank() {
            return Err(Error::DimensionMismatch { expected: target.rank(), got: matrix.ncols() });
        }
        Ok(Self { source, target, matrix })
    }

    /// The embedding of the lattice spanned by `matrix` rows, with the
    /// induced Gram matrix as source.
    pub fn induced(target: IntegralLattice, matrix: IntMatrix) -> Result<Self> {
        let gram = matrix.mul(target.gram())?.mul(&matrix.transpose())?;
        let source = IntegralLattice::new(gram)?;
        Self::new(source, target, matrix)
    }

    pub fn source(&self) -> &IntegralLattice {
        &self.source
    }

    pub fn target(&self) -> &IntegralLattice {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Gram compatibility and full row rank.
    pub fn validate(&self) -> bool {
        let image = self
            .matrix
            .mul(self.target.gram())
            .and_then(|m| m.mul(&self.matrix.transpose()));
        matches!(image, Ok(g) if &g == self.source.gram()) && self.matrix.rank() == self.matrix.nrows()
    }

    /// Gcd of all `n x n` minors (0 when the rows are dependent).
    pub fn maximal_minor_gcd(&self) -> BigInt {
        let (n, m) = (self.matrix.nrows(), self.matrix.ncols());
        let mut g = BigInt::zero();
        for cols in combinations(m, n) {
            g = g.gcd(&self.matrix.select_columns(&cols).det());
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn is_primitive(&self) -> bool {
        self.maximal_minor_gcd().is_one()
    }

    /// Whether `v` (target coordinates) lies in `φ(L1)`.
    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        Ok(self.solve(v)?.is_some())
    }

    /// Integer `c` with `c A = v`, if one exists.
    fn solve(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        let (n, m) = (self.matrix.nrows(), self.matrix.ncols());
        if v.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: v.len() });
        }
        let cols = combinations(m, n)
            .find(|cols| !self.matrix.select_columns(cols).det().is_zero())
            .ok_or(Error::RankDeficient)?;
        let a0 = self.matrix.select_columns(&cols);
        let (det, adj) = (a0.det(), a0.adjugate());
        // c A0 = v_cols  =>  c = v_cols adj(A0) / det(A0)
        let mut c = Vec::with_capacity(n);
        for j in 0..n {
            let num: BigInt = (0..n).map(|k| &v[cols[k]] * &adj[(k, j)]).sum();
            if !num.is_multiple_of(&det) {
                return Ok(None);
            }
            c.push(num / &det);
        }
        let back = row_times(&c, &self.matrix);
        Ok((back == v).then_some(c))
    }

    /// Builds an explicit torsion element when the minor gcd `d` exceeds 1,
    /// and checks it before returning.
    pub fn torsion_witness(&self) -> Result<TorsionWitness> {
        let (n, m) = (self.matrix.nrows(), self.matrix.ncols());
        let d = self.maximal_minor_gcd();
        if d.is_one() {
            return Err(Error::AlreadyPrimitive);
        }
        if d.is_zero() {
            return Err(Error::RankDeficient);
        }
        // a column tuple whose minor Δ0 = d K has d ∤ K^(n-1); one exists
        // because some minor has the exact d-adic valuation at some prime
        let tuple = combinations(m, n)
            .find(|cols| {
                let delta = self.matrix.select_columns(cols).det();
                if delta.is_zero() {
                    return false;
                }
                let k = (&delta / &d).abs();
                !Pow::pow(&k, (n - 1) as u32).is_multiple_of(&d)
            })
            .ok_or_else(|| Error::Verification("no admissible column tuple".into()))?;
        let a0 = self.matrix.select_columns(&tuple);
        let delta0 = a0.det();
        let adj = a0.adjugate();
        let row_gcd = |l: usize| content(adj.row(l));
        let ell = (0..n)
            .find(|&l| !row_gcd(l).is_multiple_of(&d))
            .ok_or_else(|| Error::Verification("every adjugate row is divisible by d".into()))?;
        let d0 = d.gcd(&row_gcd(ell));
        let order = &d / &d0;
        let coeffs: Vec<BigInt> = adj.row(ell).iter().map(|x| x / &d0).collect();
        let mut k = vec![BigInt::zero(); m];
        for (i, ki) in k.iter_mut().enumerate() {
            if let Some(pos) = tuple.iter().position(|&t| t == i) {
                if pos == ell {
                    *ki = &delta0 / &d0;
                }
            } else {
                let mut cols = tuple.clone();
                cols[ell] = i;
                *ki = self.matrix.select_columns(&cols).det() / &d0;
            }
        }
        if k.iter().any(|ki| !ki.is_multiple_of(&order)) {
            return Err(Error::Verification("N does not divide every k_i".into()));
        }
        let z: Vec<BigInt> = k.iter().map(|ki| ki / &order).collect();
        let witness = TorsionWitness { order, coeffs, z };
        // coprimality, N z = c A and z ∉ image
        witness.verify(self)?;
        Ok(witness)
    }

    /// Saturated complement `{x : x G φ(e_i)ᵀ = 0}`, LLL-reduced in the
    /// Euclidean metric.
    pub fn orthogonal_complement(&self) -> Result<Complement> {
        let ag = self.matrix.mul(self.target.gram())?;
        let kernel = ag.kernel_rows();
        let basis = if kernel.nrows() == 0 { kernel } else { lll::reduce_rows(&kernel)? };
        let gram = basis.mul(self.target.gram())?.mul(&basis.transpose())?;
        Ok(Complement { basis, lattice: IntegralLattice::new(gram)? })
    }
}

impl TorsionWitness {
    /// Checks `N > 1`, `gcd(N, c) = 1`, `N z = c A` and `z ∉ φ(L1)`.
    pub fn verify(&self, e: &Embedding) -> Result<()> {
        let fail = |s: &str| Err(Error::Verification(format!("torsion witness: {s}")));
        if self.order <= BigInt::one() {
            return fail("order must exceed 1");
        }
        if !content(&self.coeffs).gcd(&self.order).is_one() {
            return fail("gcd(N, c) != 1");
        }
        let lhs: Vec<BigInt> = self.z.iter().map(|x| x * &self.order).collect();
        if row_times(&self.coeffs, &e.matrix) != lhs {
            return fail("N z != c A");
        }
        if e.contains(&self.z)? {
            return fail("z lies in the image");
        }
        Ok(())
    }
}

/// Index of `α ⊕ α^⊥` in `M`, i.e. `|det|` of `α` stacked on a basis of `α^⊥`.
pub fn index_of_split(m: &IntegralLattice, alpha: &[i64]) -> Result<BigInt> {
    let alpha_big: Vec<BigInt> = alpha.iter().map(|&x| x.into()).collect();
    if !content(&alpha_big).is_one() {
        return Err(Error::NotPrimitive);
    }
    if m.inner_product(alpha, alpha)?.is_zero() {
        return Err(Error::Isotropic);
    }
    let row = IntMatrix::from_rows(&[alpha_big])?;
    let e = Embedding::induced(m.clone(), row.clone())?;
    let comp = e.orthogonal_complement()?;
    Ok(row.stack(&comp.basis)?.det().abs())
}

fn row_times(c: &[BigInt], a: &IntMatrix) -> Vec<BigInt> {
    (0..a.ncols()).map(|j| c.iter().enumerate().map(|(i, ci)| ci * &a[(i, j)]).sum()).collect()
}
