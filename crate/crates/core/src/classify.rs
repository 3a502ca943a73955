//! Decides whether the singular K3 surface with transcendental lattice
//! `[[2a, c], [c, 2b]]` covers an Enriques surface, and attaches a
//! certificate that can be replayed independently.
//!
//! Branches, by parity of `(a, b, c)`:
//!
//! | case  | condition                                             | covers |
//! |-------|-------------------------------------------------------|--------|
//! | I     | `a, b, c` even                                        | yes    |
//! | II    | `c` odd, `ab` even                                    | yes    |
//! | III-1 | `c` even, `a` or `b` odd, form does not represent 1   | yes    |
//! | III-2 | as III-1 but represents 1, `Δ ∉ {4, 8, 16}`            | yes    |
//! | III-3 | as III-1 but represents 1, `Δ ∈ {4, 8, 16}`            | no     |
//! | IV    | `a, b, c` odd                                         | no     |

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::form::{ParityClass, Sl2Matrix, TranscendentalForm};
use crate::lattice::{IntegralLattice, StandardLattice, U1, U2, V1, V2};
use crate::matrix::IntMatrix;
use crate::quadform::BinaryForm;
use crate::shortvec::{enumerate_norm, NormQuery};
use crate::vinberg::{self, NormWitness, VinbergVector, WitnessSource, SMALL_NORM_SLICES};

/// Rank of `Λ⁻ = U ⊕ U(2) ⊕ E8(2)`.
pub const LAMBDA_RANK: usize = 12;

/// The discriminants for which a form representing 1 fails to cover.
pub const EXCEPTIONAL_DELTAS: [i128; 3] = [4, 8, 16];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    #[serde(rename = "I")]
    I,
    #[serde(rename = "II")]
    II,
    #[serde(rename = "III-1")]
    III1,
    #[serde(rename = "III-2")]
    III2,
    #[serde(rename = "III-3")]
    III3,
    #[serde(rename = "IV")]
    IV,
}

impl Case {
    pub const ALL: [Case; 6] = [Case::I, Case::II, Case::III1, Case::III2, Case::III3, Case::IV];

    pub fn covers(self) -> bool {
        !matches!(self, Case::III3 | Case::IV)
    }

    pub fn label(self) -> &'static str {
        match self {
            Case::I => "I",
            Case::II => "II",
            Case::III1 => "III-1",
            Case::III2 => "III-2",
            Case::III3 => "III-3",
            Case::IV => "IV",
        }
    }
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Coordinates of `φ(u)`, `φ(v)` in the basis `(u1, u2, v1, v2, e1..e8)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingCertificate {
    /// `γ` with `γᵀ T γ` the form the construction was applied to.
    pub basis_change: Sl2Matrix,
    /// Rows `φ(u)`, `φ(v)` for the input basis.
    pub matrix: [[i128; LAMBDA_RANK]; 2],
    pub minor_gcd: i128,
    /// Vectors of norm −2 found in the complement (complement coordinates).
    pub minus_two_vectors: Vec<Vec<i64>>,
}

/// Externally tagged in JSON: internal tagging would buffer the payload,
/// which cannot carry 128-bit integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// All-even forms; optional embedding found by a bounded search.
    KeumCitation {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        embedding: Option<EmbeddingCertificate>,
    },
    ExplicitEmbedding(EmbeddingCertificate),
    /// A vector of `P` with norm `-Δ/4`, read in the abstract basis where
    /// `φ(u) = (1, 0, ..., 0)` and `φ(v) = (0, x0, ..., x10)`.
    VinbergWitness {
        norm: i64,
        /// `(x, y)` with `a x² + c x y + b y² = 1`.
        representation_of_one: (i128, i128),
        vector: VinbergVector,
        source: WitnessSource,
    },
    ExhaustiveAbsence {
        norm: i64,
        representation_of_one: (i128, i128),
        /// Slices `x0 = 3..=max_slice` were searched.
        max_slice: i128,
    },
    ParityObstruction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub case: Case,
    pub covers: bool,
    pub delta: i128,
    pub certificate: Certificate,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    /// Coordinate bound for the case I embedding search (0 disables it).
    pub case_i_search_bound: i64,
}

/// The branch, from parities and the representation of 1.
pub fn case_of(t: &TranscendentalForm) -> Result<Case> {
    let class = t.parity_class();
    let (represents_one, exceptional) = match class {
        ParityClass::EvenCOddEntry => (
            BinaryForm::from_transcendental(t).represents_one(),
            EXCEPTIONAL_DELTAS.contains(&t.delta()),
        ),
        _ => (false, false),
    };
    let odd = |v: i64| v % 2 != 0;
    let (a, b, c) = (t.a(), t.b(), t.c());
    let c_even_mixed = !odd(c) && (odd(a) || odd(b));
    let predicates = [
        (Case::I, !odd(a) && !odd(b) && !odd(c)),
        (Case::II, odd(c) && !(odd(a) && odd(b))),
        (Case::III1, c_even_mixed && !represents_one),
        (Case::III2, c_even_mixed && represents_one && !exceptional),
        (Case::III3, c_even_mixed && represents_one && exceptional),
        (Case::IV, odd(a) && odd(b) && odd(c)),
    ];
    let mut hits = predicates.iter().filter(|p| p.1).map(|p| p.0);
    match (hits.next(), hits.next()) {
        (Some(case), None) => Ok(case),
        _ => Err(Error::Verification(format!("branch predicates do not select exactly one case for {t}"))),
    }
}

pub fn classify(t: &TranscendentalForm) -> Result<Classification> {
    classify_with(t, Options::default())
}

pub fn classify_with(t: &TranscendentalForm, opts: Options) -> Result<Classification> {
    let case = case_of(t)?;
    let certificate = certify_with(t, case, opts)?;
    Ok(Classification { case, covers: case.covers(), delta: t.delta(), certificate })
}

pub fn certify(t: &TranscendentalForm, case: Case) -> Result<Certificate> {
    certify_with(t, case, Options::default())
}

fn certify_with(t: &TranscendentalForm, case: Case, opts: Options) -> Result<Certificate> {
    if case_of(t)? != case {
        return Err(Error::WrongBranch);
    }
    let cert = match case {
        Case::I => Certificate::KeumCitation { embedding: search_case_i(t, opts.case_i_search_bound)? },
        Case::II => Certificate::ExplicitEmbedding(embedding_certificate(t, Sl2Matrix::IDENTITY, odd_c_rows(t)?)?),
        Case::III1 => {
            let g = case_iii_basis_change(t)?;
            let (a, b, c) = transformed_coeffs(t, &g);
            Certificate::ExplicitEmbedding(embedding_certificate(t, g, even_c_rows_from(a, b, c)?)?)
        }
        Case::III2 => {
            let n = quarter_delta(t)?;
            let witness = vinberg::search_norm(n, vinberg::default_x0_cap(n))
                .ok_or_else(|| Error::Verification(format!("no vector of norm -{n} in P")))?;
            let NormWitness { vector, source } = witness;
            Certificate::VinbergWitness { norm: n, representation_of_one: one_rep(t)?, vector, source }
        }
        Case::III3 => Certificate::ExhaustiveAbsence {
            norm: quarter_delta(t)?,
            representation_of_one: one_rep(t)?,
            max_slice: SMALL_NORM_SLICES,
        },
        Case::IV => Certificate::ParityObstruction,
    };
    cert.verify(t)?;
    Ok(cert)
}

fn quarter_delta(t: &TranscendentalForm) -> Result<i64> {
    (t.delta() / 4).to_i64().ok_or(Error::Overflow("Δ/4 exceeds i64"))
}

fn one_rep(t: &TranscendentalForm) -> Result<(i128, i128)> {
    BinaryForm::from_transcendental(t)
        .representation_of_one()
        .ok_or_else(|| Error::Verification(format!("{t} does not represent 1")))
}

/// Moves a case III form to one with `a`, `b` odd (and `c` still even).
pub fn normalize_case_iii(t: &TranscendentalForm) -> Result<(TranscendentalForm, Sl2Matrix)> {
    let g = case_iii_basis_change(t)?;
    Ok((t.apply_basis_change(&g)?, g))
}

fn case_iii_basis_change(t: &TranscendentalForm) -> Result<Sl2Matrix> {
    if t.parity_class() != ParityClass::EvenCOddEntry {
        return Err(Error::WrongBranch);
    }
    if t.a() % 2 == 0 {
        Sl2Matrix::new(2, 1, 1, 1)
    } else if t.b() % 2 == 0 {
        Sl2Matrix::new(1, 1, 1, 2)
    } else {
        Ok(Sl2Matrix::IDENTITY)
    }
}

/// `(a, b, c)` of `γᵀ t γ` in i128, which never overflows for the small `γ` used here.
fn transformed_coeffs(t: &TranscendentalForm, g: &Sl2Matrix) -> (i128, i128, i128) {
    let (a, b, c) = (t.a() as i128, t.b() as i128, t.c() as i128);
    let [[x, y], [z, w]] = g.entries();
    (a * x * x + c * x * z + b * z * z, a * y * y + c * y * w + b * w * w, 2 * a * x * y + c * (x * w + y * z) + 2 * b * w * z)
}

fn row(entries: &[(usize, i128)]) -> [i128; LAMBDA_RANK] {
    let mut r = [0i128; LAMBDA_RANK];
    for &(i, v) in entries {
        r[i] = v;
    }
    r
}

/// `φ(u) = a u1 + u2 + ((c - ab - 1)/2) v1`, `φ(v) = u1 + b u2 + v2`; needs `c - ab` odd.
pub fn odd_c_rows(t: &TranscendentalForm) -> Result<[[i128; LAMBDA_RANK]; 2]> {
    let (a, b, c) = (t.a() as i128, t.b() as i128, t.c() as i128);
    let k = c - a * b - 1;
    if k % 2 != 0 {
        return Err(Error::WrongBranch);
    }
    Ok([row(&[(U1, a), (U2, 1), (V1, k / 2)]), row(&[(U1, 1), (U2, b), (V2, 1)])])
}

/// `φ(u) = u1 + a u2`, `φ(v) = u1 + (c - a) u2 + v1 + ((a + b - c)/2) v2`; needs `a + b - c` even.
pub fn even_c_rows(t: &TranscendentalForm) -> Result<[[i128; LAMBDA_RANK]; 2]> {
    even_c_rows_from(t.a() as i128, t.b() as i128, t.c() as i128)
}

fn even_c_rows_from(a: i128, b: i128, c: i128) -> Result<[[i128; LAMBDA_RANK]; 2]> {
    let k = a + b - c;
    if k % 2 != 0 {
        return Err(Error::WrongBranch);
    }
    Ok([row(&[(U1, 1), (U2, a)]), row(&[(U1, 1), (U2, c - a), (V1, 1), (V2, k / 2)])])
}

fn lambda_minus() -> IntegralLattice {
    IntegralLattice::standard(StandardLattice::LambdaMinus)
}

/// Rows for `t` from rows built for `γᵀ t γ`: the input basis is `(u', v') γ⁻¹`.
fn pull_back(rows: [[i128; LAMBDA_RANK]; 2], g: &Sl2Matrix) -> Result<[[i128; LAMBDA_RANK]; 2]> {
    let [[x, y], [z, w]] = g.entries();
    // γ⁻¹ = [[w, -y], [-z, x]]; u = w u' - z v', v = -y u' + x v'
    let combine = |p: i128, q: i128| -> Result<[i128; LAMBDA_RANK]> {
        let mut r = [0i128; LAMBDA_RANK];
        for j in 0..LAMBDA_RANK {
            let v = BigInt::from(p) * rows[0][j] + BigInt::from(q) * rows[1][j];
            r[j] = v.to_i128().ok_or(Error::Overflow("embedding coordinates exceed i128"))?;
        }
        Ok(r)
    };
    Ok([combine(w, -z)?, combine(-y, x)?])
}

fn embedding_certificate(
    t: &TranscendentalForm,
    g: Sl2Matrix,
    rows: [[i128; LAMBDA_RANK]; 2],
) -> Result<EmbeddingCertificate> {
    let matrix = pull_back(rows, &g)?;
    let e = Embedding::new(t.to_lattice(), lambda_minus(), IntMatrix::from_rows(&matrix.map(Vec::from))?)?;
    let minor_gcd = e.maximal_minor_gcd().to_i128().ok_or(Error::Overflow("minor gcd"))?;
    let minus_two_vectors = minus_two_in_complement(&e)?;
    Ok(EmbeddingCertificate { basis_change: g, matrix, minor_gcd, minus_two_vectors })
}

/// All norm −2 vectors (up to sign) in the orthogonal complement of the image.
pub fn minus_two_in_complement(e: &Embedding) -> Result<Vec<Vec<i64>>> {
    let comp = e.orthogonal_complement()?;
    enumerate_norm(&NormQuery::exact(comp.lattice, -2)?)
}

/// Bounded search for a primitive embedding of an all-even form into the
/// `U ⊕ U(2)` part of `Λ⁻` whose complement has no −2 vector.
fn search_case_i(t: &TranscendentalForm, bound: i64) -> Result<Option<EmbeddingCertificate>> {
    if bound <= 0 {
        return Ok(None);
    }
    let b = bound as i128;
    let h = |p: &[i128; 4], q: &[i128; 4]| p[0] * q[1] + p[1] * q[0] + 2 * (p[2] * q[3] + p[3] * q[2]);
    let range = || -b..=b;
    let mut small = Vec::new();
    for x in range() {
        for y in range() {
            for z in range() {
                for w in range() {
                    small.push([x, y, z, w]);
                }
            }
        }
    }
    let (two_a, two_b, c) = (2 * t.a() as i128, 2 * t.b() as i128, t.c() as i128);
    let us: Vec<&[i128; 4]> = small.iter().filter(|p| h(p, p) == two_a).collect();
    let vs: Vec<&[i128; 4]> = small.iter().filter(|q| h(q, q) == two_b).collect();
    for p in &us {
        for q in vs.iter().filter(|q| h(p, q) == c) {
            let lift = |s: &[i128; 4]| row(&[(U1, s[0]), (U2, s[1]), (V1, s[2]), (V2, s[3])]);
            let rows = [lift(p), lift(q)];
            let Ok(cert) = embedding_certificate(t, Sl2Matrix::IDENTITY, rows) else { continue };
            if cert.minor_gcd == 1 && cert.minus_two_vectors.is_empty() {
                return Ok(Some(cert));
            }
        }
    }
    Ok(None)
}

impl EmbeddingCertificate {
    /// Gram compatibility, primitivity and absence of −2 vectors, all recomputed.
    pub fn verify(&self, t: &TranscendentalForm) -> Result<()> {
        let fail = |s: String| Err(Error::Verification(s));
        let e = Embedding::new(t.to_lattice(), lambda_minus(), IntMatrix::from_rows(&self.matrix.map(Vec::from))?)?;
        if !e.validate() {
            return fail(format!("embedding matrix is not compatible with {t}"));
        }
        let d = e.maximal_minor_gcd();
        if !d.is_one() || self.minor_gcd != 1 {
            return fail(format!("embedding is not primitive (minor gcd {d})"));
        }
        let roots = minus_two_in_complement(&e)?;
        if !roots.is_empty() || !self.minus_two_vectors.is_empty() {
            return fail(format!("complement contains {} vectors of norm -2", roots.len()));
        }
        Ok(())
    }
}

impl Certificate {
    /// Replays every check the certificate stands for.
    pub fn verify(&self, t: &TranscendentalForm) -> Result<()> {
        let fail = |s: String| Err(Error::Verification(s));
        let case = case_of(t)?;
        let expected = match self {
            Certificate::KeumCitation { .. } => Case::I,
            Certificate::ExplicitEmbedding(_) if case == Case::II => Case::II,
            Certificate::ExplicitEmbedding(_) => Case::III1,
            Certificate::VinbergWitness { .. } => Case::III2,
            Certificate::ExhaustiveAbsence { .. } => Case::III3,
            Certificate::ParityObstruction => Case::IV,
        };
        if expected != case {
            return fail(format!("certificate for case {expected} attached to a case {case} form"));
        }
        match self {
            Certificate::KeumCitation { embedding } => {
                if let Some(e) = embedding {
                    e.verify(t)?;
                }
            }
            Certificate::ExplicitEmbedding(e) => e.verify(t)?,
            Certificate::VinbergWitness { norm, representation_of_one, vector, source } => {
                check_one(t, *representation_of_one)?;
                if BigInt::from(*norm) * 4 != BigInt::from(t.delta()) {
                    return fail(format!("witness norm {norm} is not Δ/4"));
                }
                NormWitness { vector: *vector, source: source.clone() }.verify(*norm)?;
            }
            Certificate::ExhaustiveAbsence { norm, representation_of_one, max_slice } => {
                check_one(t, *representation_of_one)?;
                if BigInt::from(*norm) * 4 != BigInt::from(t.delta()) {
                    return fail(format!("searched norm {norm} is not Δ/4"));
                }
                if *max_slice < SMALL_NORM_SLICES {
                    return fail(format!("search stopped at slice {max_slice}"));
                }
                if let Some(v) = vinberg::exhaustive_search(*norm, *max_slice) {
                    return fail(format!("{v} has norm -{norm}"));
                }
            }
            Certificate::ParityObstruction => {}
        }
        Ok(())
    }
}

fn check_one(t: &TranscendentalForm, (x, y): (i128, i128)) -> Result<()> {
    if BinaryForm::from_transcendental(t).evaluate(x, y).is_one() {
        Ok(())
    } else {
        Err(Error::Verification(format!("({x}, {y}) does not represent 1 for {t}")))
    }
}

impl Classification {
    /// Recomputes the branch and replays the certificate.
    pub fn verify(&self, t: &TranscendentalForm) -> Result<()> {
        let case = case_of(t)?;
        if case != self.case || self.covers != case.covers() || self.delta != t.delta() {
            return Err(Error::Verification(format!("classification of {t} does not match case {case}")));
        }
        self.certificate.verify(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::E8_START;

    fn form(a: i64, b: i64, c: i64) -> TranscendentalForm {
        TranscendentalForm::new(a, b, c).unwrap()
    }

    #[test]
    fn classification_examples() {
        let case = |a, b, c| classify(&form(a, b, c)).unwrap();
        assert_eq!(case(2, 2, 2).case, Case::I);
        assert_eq!(case(1, 2, 1).case, Case::II);
        assert_eq!(case(1, 1, 1).case, Case::IV);
        assert!(!case(1, 1, 1).covers);
        assert_eq!(case(2, 3, 2).case, Case::III1);
        let c = case(1, 1, 0);
        assert_eq!((c.case, c.covers, c.delta), (Case::III3, false, 4));
        let c = case(1, 3, 0);
        assert_eq!((c.case, c.covers, c.delta), (Case::III2, true, 12));
    }

    #[test]
    fn certificates() {
        match certify(&form(1, 2, 1), Case::II).unwrap() {
            Certificate::ExplicitEmbedding(e) => {
                assert_eq!(e.minor_gcd, 1);
                assert!(e.minus_two_vectors.is_empty());
            }
            other => panic!("{other:?}"),
        }
        match certify(&form(1, 3, 0), Case::III2).unwrap() {
            Certificate::VinbergWitness { norm, vector, source, .. } => {
                assert_eq!(norm, 3);
                assert_eq!(vector, vinberg::family_vector("Z", 1).unwrap());
                assert_eq!(source, WitnessSource::Family { name: "Z".into(), param: 1 });
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(certify(&form(1, 1, 0), Case::III3).unwrap(), Certificate::ExhaustiveAbsence { norm: 1, .. }));
        assert_eq!(certify(&form(1, 1, 0), Case::II), Err(Error::WrongBranch));
    }

    #[test]
    fn normalization() {
        let (t, _) = normalize_case_iii(&form(2, 1, 0)).unwrap();
        assert!(t.a() % 2 != 0 && t.b() % 2 != 0 && t.c() % 2 == 0);
        assert_eq!(normalize_case_iii(&form(1, 1, 0)).unwrap(), (form(1, 1, 0), Sl2Matrix::IDENTITY));
        let (t, g) = normalize_case_iii(&form(1, 2, 2)).unwrap();
        assert_eq!(g, Sl2Matrix::new(1, 1, 1, 2).unwrap());
        assert!(t.a() % 2 != 0 && t.b() % 2 != 0);
        assert_eq!(normalize_case_iii(&form(1, 1, 1)), Err(Error::WrongBranch));
    }

    #[test]
    fn even_c_embedding_sees_roots_iff_form_represents_one() {
        // (1, 3, 0) represents 1, (3, 3, 2) does not
        for (t, expect_roots) in [(form(1, 3, 0), true), (form(3, 3, 2), false)] {
            let rows = even_c_rows(&t).unwrap();
            let e = Embedding::new(t.to_lattice(), lambda_minus(), IntMatrix::from_rows(&rows.map(Vec::from)).unwrap())
                .unwrap();
            assert!(e.validate() && e.is_primitive());
            assert_eq!(!minus_two_in_complement(&e).unwrap().is_empty(), expect_roots);
        }
    }

    #[test]
    fn tampered_certificates_fail() {
        let t = form(1, 2, 1);
        let mut c = classify(&t).unwrap();
        if let Certificate::ExplicitEmbedding(e) = &mut c.certificate {
            e.matrix[0][V1] += 1;
        }
        assert!(c.verify(&t).is_err());
        let t = form(1, 3, 0);
        let mut c = classify(&t).unwrap();
        if let Certificate::VinbergWitness { vector, .. } = &mut c.certificate {
            vector.0[1] += 1;
        }
        assert!(c.verify(&t).is_err());
        let mut c = classify(&t).unwrap();
        if let Certificate::VinbergWitness { source, .. } = &mut c.certificate {
            *source = WitnessSource::Family { name: "X0".into(), param: 1 };
        }
        assert!(c.verify(&t).is_err());
        let c = classify(&form(1, 1, 1)).unwrap();
        assert!(c.verify(&form(2, 2, 2)).is_err());
    }

    #[test]
    fn case_i_search() {
        let t = form(2, 2, 0);
        let c = classify_with(&t, Options { case_i_search_bound: 2 }).unwrap();
        match &c.certificate {
            Certificate::KeumCitation { embedding: Some(e) } => e.verify(&t).unwrap(),
            other => panic!("{other:?}"),
        }
        let plain = classify(&t).unwrap();
        assert_eq!(plain.certificate, Certificate::KeumCitation { embedding: None });
    }

    #[test]
    fn e8_coordinates_unused_by_constructions() {
        let rows = odd_c_rows(&form(3, 2, -1)).unwrap();
        assert!(rows.iter().all(|r| r[E8_START..].iter().all(|&x| x == 0)));
    }
}
