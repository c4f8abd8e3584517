//! Quadratic dynamical systems x_k' = A_k^{i,j} x_i x_j, the permutation-
//! symmetric subclass, and the derivation L = A_k^{i,j} x_i x_j d/dx_k.
//!
//! A symmetric system is determined by four parameters (alpha, beta, gamma,
//! delta):
//!
//! ```text
//! x_k' = alpha x_k^2 + beta x_k p1(x) + gamma p1(x)^2 + delta p2(x)
//! ```
//!
//! where p1, p2 are the first two power sums. For n <= 2 the parameters are
//! redundant; constructors fold them to a canonical representative
//! (delta = 0 for n = 2, everything into alpha for n = 1).

use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg;
use crate::mpoly::{MultiPoly, VarSet};
use crate::scalar::{rat, Coeff, Complex64, Rational, Scalar};

/// Coefficient tensor of a quadratic system, symmetric in the upper pair.
#[derive(Clone, PartialEq, Debug)]
pub struct QuadraticTensor<C: Coeff> {
    n: usize,
    entries: Vec<C>, // [k][i][j] flattened, k*n*n + i*n + j
}

impl<C: Coeff> QuadraticTensor<C> {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1);
        QuadraticTensor {
            n,
            entries: vec![C::zero(); n * n * n],
        }
    }

    /// Build from full entries, checking A[k][i][j] = A[k][j][i].
    pub fn from_entries(n: usize, entries: Vec<C>) -> Result<Self> {
        if entries.len() != n * n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n * n,
                got: entries.len(),
            });
        }
        let t = QuadraticTensor { n, entries };
        for k in 0..n {
            for i in 0..n {
                for j in i + 1..n {
                    if t.entry(k, i, j) != t.entry(k, j, i) {
                        return Err(Error::Invalid(format!(
                            "tensor not symmetric in upper indices at [{k}][{i}][{j}]"
                        )));
                    }
                }
            }
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, k: usize, i: usize, j: usize) -> &C {
        &self.entries[k * self.n * self.n + i * self.n + j]
    }

    /// Set A[k][i][j] and A[k][j][i] together.
    pub fn set_pair(&mut self, k: usize, i: usize, j: usize, c: C) {
        let n = self.n;
        self.entries[k * n * n + i * n + j] = c.clone();
        self.entries[k * n * n + j * n + i] = c;
    }

    /// Right-hand side of the k-th equation as a polynomial in x1..xn
    /// (Einstein sum, so off-diagonal entries contribute twice).
    pub fn rhs_poly(&self, k: usize) -> MultiPoly<C> {
        let vars = VarSet::xi(self.n);
        let mut p = MultiPoly::zero(vars.clone());
        for i in 0..self.n {
            for j in 0..self.n {
                let c = self.entry(k, i, j);
                if c.is_zero() {
                    continue;
                }
                let mut e = vec![0u32; self.n];
                e[i] += 1;
                e[j] += 1;
                p = p.add(&MultiPoly::from_term(vars.clone(), e, c.clone()));
            }
        }
        p
    }

    /// Velocity A_k^{i,j} x_i x_j at a point.
    pub fn vector_field(&self, x: &[C]) -> Result<Vec<C>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut out = Vec::with_capacity(self.n);
        for k in 0..self.n {
            let mut acc = C::zero();
            for i in 0..self.n {
                for j in 0..self.n {
                    acc = acc.add(&self.entry(k, i, j).mul(&x[i]).mul(&x[j]));
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// The derivation L applied to a polynomial in x1..xn.
    pub fn lie_derivative(&self, p: &MultiPoly<C>) -> Result<MultiPoly<C>> {
        if p.vars().len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: p.vars().len(),
            });
        }
        let mut out = MultiPoly::zero(p.vars().clone());
        for k in 0..self.n {
            let dk = p.partial(k);
            if dk.is_zero() {
                continue;
            }
            out = out.add(&dk.mul(&self.rhs_poly(k)));
        }
        Ok(out)
    }

    pub fn to_numeric(&self) -> QuadraticTensor<Complex64> {
        QuadraticTensor {
            n: self.n,
            entries: self.entries.iter().map(|c| c.to_complex()).collect(),
        }
    }
}

impl<C: Coeff> Serialize for QuadraticTensor<C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.n;
        let a: Vec<Vec<Vec<Scalar>>> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|i| (0..n).map(|j| self.entry(k, i, j).to_scalar()).collect())
                    .collect()
            })
            .collect();
        let mut st = serializer.serialize_struct("QuadraticTensor", 2)?;
        st.serialize_field("n", &n)?;
        st.serialize_field("A", &a)?;
        st.end()
    }
}

impl<'de, C: Coeff> Deserialize<'de> for QuadraticTensor<C> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            n: usize,
            #[serde(rename = "A")]
            a: Vec<Vec<Vec<Scalar>>>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let n = raw.n;
        let mut entries = Vec::with_capacity(n * n * n);
        if raw.a.len() != n {
            return Err(serde::de::Error::custom("tensor outer length != n"));
        }
        for plane in &raw.a {
            if plane.len() != n {
                return Err(serde::de::Error::custom("tensor row length != n"));
            }
            for row in plane {
                if row.len() != n {
                    return Err(serde::de::Error::custom("tensor column length != n"));
                }
                for s in row {
                    entries.push(C::try_from_scalar(s).ok_or_else(|| {
                        serde::de::Error::custom(
                            "tensor entry mode does not match requested coefficient field",
                        )
                    })?);
                }
            }
        }
        QuadraticTensor::from_entries(n, entries).map_err(serde::de::Error::custom)
    }
}

/// Canonical parameters of a permutation-symmetric quadratic system.
#[derive(Clone, PartialEq, Debug)]
pub struct SymmetricSystem<C: Coeff> {
    n: usize,
    alpha: C,
    beta: C,
    gamma: C,
    delta: C,
}

impl<C: Coeff> SymmetricSystem<C> {
    /// Construct and fold to the canonical representative: for n = 2,
    /// delta p2 = delta (p1^2 - 2 x_k p1 + 2 x_k^2) identically, so delta
    /// folds into the other three; for n = 1 everything folds into alpha.
    pub fn new(n: usize, alpha: C, beta: C, gamma: C, delta: C) -> Self {
        assert!(n >= 1);
        match n {
            1 => SymmetricSystem {
                n,
                alpha: alpha.add(&beta).add(&gamma).add(&delta),
                beta: C::zero(),
                gamma: C::zero(),
                delta: C::zero(),
            },
            2 => {
                let two_delta = delta.add(&delta);
                SymmetricSystem {
                    n,
                    alpha: alpha.add(&two_delta),
                    beta: beta.sub(&two_delta),
                    gamma: gamma.add(&delta),
                    delta: C::zero(),
                }
            }
            _ => SymmetricSystem {
                n,
                alpha,
                beta,
                gamma,
                delta,
            },
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn alpha(&self) -> &C {
        &self.alpha
    }
    pub fn beta(&self) -> &C {
        &self.beta
    }
    pub fn gamma(&self) -> &C {
        &self.gamma
    }
    pub fn delta(&self) -> &C {
        &self.delta
    }

    pub fn params(&self) -> [&C; 4] {
        [&self.alpha, &self.beta, &self.gamma, &self.delta]
    }

    /// Expand into the coefficient tensor.
    pub fn to_tensor(&self) -> QuadraticTensor<C> {
        let n = self.n;
        let mut t = QuadraticTensor::zero(n);
        let two = C::from_int(2);
        let diag = self
            .alpha
            .add(&self.beta)
            .add(&self.gamma)
            .add(&self.delta);
        let off_sq = self.gamma.add(&self.delta);
        let cross_own = self.beta.add(&self.gamma.mul(&two)).div(&two);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let c = if i == k && j == k {
                        diag.clone()
                    } else if i == j {
                        off_sq.clone()
                    } else if i == k || j == k {
                        cross_own.clone()
                    } else {
                        self.gamma.clone()
                    };
                    t.entries[k * n * n + i * n + j] = c;
                }
            }
        }
        t
    }

    /// Velocity at a point: alpha x_k^2 + beta x_k p1 + gamma p1^2 + delta p2.
    pub fn vector_field(&self, x: &[C]) -> Result<Vec<C>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let p1 = x.iter().fold(C::zero(), |acc, v| acc.add(v));
        let p2 = x.iter().fold(C::zero(), |acc, v| acc.add(&v.mul(v)));
        let tail = self.gamma.mul(&p1).mul(&p1).add(&self.delta.mul(&p2));
        Ok(x.iter()
            .map(|xk| {
                self.alpha
                    .mul(xk)
                    .mul(xk)
                    .add(&self.beta.mul(xk).mul(&p1))
                    .add(&tail)
            })
            .collect())
    }

    /// The derivation L applied to a polynomial in x1..xn.
    pub fn lie_derivative(&self, p: &MultiPoly<C>) -> Result<MultiPoly<C>> {
        self.to_tensor().lie_derivative(p)
    }

    pub fn to_numeric(&self) -> SymmetricSystem<Complex64> {
        SymmetricSystem {
            n: self.n,
            alpha: self.alpha.to_complex(),
            beta: self.beta.to_complex(),
            gamma: self.gamma.to_complex(),
            delta: self.delta.to_complex(),
        }
    }
}

/// How a symmetric system sits in the triangular elimination hierarchy.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Generic,
    AlmostGenericOnly,
    NonGeneric,
}

/// Elimination constants c_1..c_{n-1} and the class they imply.
#[derive(Clone, PartialEq, Debug)]
pub struct Classification<C: Coeff> {
    pub kind: Kind,
    pub c: Vec<C>,
}

/// Classify by computing the triangular constants in the elementary
/// symmetric basis: generic iff all c_k are nonzero, almost generic iff
/// only the last vanishes.
pub fn classify<C: Coeff>(sys: &SymmetricSystem<C>) -> Classification<C> {
    let ss = crate::reduction::sigma_system(sys);
    let c = ss.c;
    let n = sys.n();
    let kind = if c.iter().all(|x| !x.is_zero()) {
        Kind::Generic
    } else if n >= 2
        && c[..n - 2].iter().all(|x| !x.is_zero())
        && c[n - 2].is_zero()
    {
        Kind::AlmostGenericOnly
    } else {
        Kind::NonGeneric
    };
    Classification { kind, c }
}

/// Recover canonical parameters from a tensor, checking invariance under the
/// adjacent transpositions (they generate the full permutation group).
pub fn detect_symmetry<C: Coeff>(t: &QuadraticTensor<C>) -> Result<SymmetricSystem<C>> {
    let n = t.n();
    for m in 0..n.saturating_sub(1) {
        let tr = |v: usize| -> usize {
            if v == m {
                m + 1
            } else if v == m + 1 {
                m
            } else {
                v
            }
        };
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    if t.entry(tr(k), tr(i), tr(j)) != t.entry(k, i, j) {
                        return Err(Error::NotSymmetric {
                            m: m + 1,
                            m_next: m + 2,
                            k: k + 1,
                            i: i + 1,
                            j: j + 1,
                        });
                    }
                }
            }
        }
    }

    // extract the four entry classes from representatives
    let a = t.entry(0, 0, 0).clone();
    if n == 1 {
        return Ok(SymmetricSystem::new(1, a, C::zero(), C::zero(), C::zero()));
    }
    let b = t.entry(0, 1, 1).clone();
    let c2 = t.entry(0, 0, 1).clone();
    if n == 2 {
        // canonical delta = 0: gamma = b, beta = 2 c2 - 2 b, alpha from the
        // diagonal
        let gamma = b.clone();
        let beta = c2.add(&c2).sub(&b).sub(&b);
        let alpha = a.sub(&beta).sub(&gamma);
        return Ok(SymmetricSystem::new(2, alpha, beta, gamma, C::zero()));
    }
    let d = t.entry(0, 1, 2).clone();
    let gamma = d.clone();
    let delta = b.sub(&d);
    let beta = c2.add(&c2).sub(&gamma.add(&gamma));
    let alpha = a.sub(&beta).sub(&gamma).sub(&delta);
    Ok(SymmetricSystem::new(n, alpha, beta, gamma, delta))
}

/// Check whether the system becomes symmetric in the coordinates eta = B xi,
/// and return its canonical parameters if so.
pub fn quasi_symmetric_check<C: Coeff>(
    t: &QuadraticTensor<C>,
    b: &[Vec<C>],
) -> Result<SymmetricSystem<C>> {
    let n = t.n();
    if b.len() != n || b.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let binv = linalg::invert(b)?;
    let mut out = QuadraticTensor::zero(n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc = C::zero();
                for p in 0..n {
                    if b[k][p].is_zero() {
                        continue;
                    }
                    for q in 0..n {
                        for r in 0..n {
                            let term = b[k][p]
                                .mul(t.entry(p, q, r))
                                .mul(&binv[q][i])
                                .mul(&binv[r][j]);
                            acc = acc.add(&term);
                        }
                    }
                }
                out.entries[k * n * n + i * n + j] = acc;
            }
        }
    }
    detect_symmetry(&out)
}

// --- preset systems -------------------------------------------------------

/// Lotka-Volterra chain x_k' = x_k (sum_l x_l - 2 x_k), assembled directly
/// as a tensor.
pub fn lv_tensor(n: usize) -> QuadraticTensor<Rational> {
    let mut t = QuadraticTensor::zero(n);
    let half = rat(1, 2);
    for k in 0..n {
        t.set_pair(k, k, k, rat(-1, 1));
        for l in 0..n {
            if l != k {
                t.set_pair(k, k, l, half.clone());
            }
        }
    }
    t
}

/// The three-variable family x_k' = x_k (sum_l x_l - m x_k).
pub fn kp2_tensor(m: &Rational) -> QuadraticTensor<Rational> {
    let n = 3;
    let mut t = QuadraticTensor::zero(n);
    let half = rat(1, 2);
    let diag = &Rational::one() - m;
    for k in 0..n {
        t.set_pair(k, k, k, diag.clone());
        for l in 0..n {
            if l != k {
                t.set_pair(k, k, l, half.clone());
            }
        }
    }
    t
}

/// Classical Darboux-Halphen system.
pub fn darboux_halphen() -> SymmetricSystem<Rational> {
    SymmetricSystem::new(3, rat(2, 1), rat(-2, 1), rat(1, 2), rat(-1, 2))
}

/// Two-parameter Darboux-Halphen generalization with an extra x_k^2 term.
pub fn gen_dh(a: &Rational, b: &Rational) -> SymmetricSystem<Rational> {
    let two = rat(2, 1);
    SymmetricSystem::new(
        3,
        &(&two * a) + b,
        -(&two * a),
        a / &two,
        -(a / &two),
    )
}

/// Symmetric quadratic system arising from the antisymmetric 3x3 Lax pair;
/// conserved p2, almost generic but not generic.
pub fn lax_system() -> SymmetricSystem<Rational> {
    SymmetricSystem::new(3, rat(0, 1), rat(1, 1), rat(0, 1), rat(-1, 1))
}

/// One-dimensional system x' = alpha x^2.
pub fn n1_system(alpha: Rational) -> SymmetricSystem<Rational> {
    SymmetricSystem::new(1, alpha, Rational::zero(), Rational::zero(), Rational::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::Monomial;

    fn r(v: i64) -> Rational {
        rat(v, 1)
    }

    fn rp(x: &[i64]) -> Vec<Rational> {
        x.iter().map(|&v| r(v)).collect()
    }

    #[test]
    fn to_tensor_n2_alpha_only() {
        let sys = SymmetricSystem::new(2, r(1), r(0), r(0), r(0));
        let t = sys.to_tensor();
        assert_eq!(*t.entry(0, 0, 0), r(1));
        for (k, i, j) in [(0, 0, 1), (0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 0, 1), (1, 1, 0)] {
            assert!(t.entry(k, i, j).is_zero());
        }
        assert_eq!(*t.entry(1, 1, 1), r(1));
    }

    #[test]
    fn to_tensor_n3_gamma_only_is_all_ones() {
        // gamma p1^2 expands so that every tensor entry equals one
        let sys = SymmetricSystem::new(3, r(0), r(0), r(1), r(0));
        let t = sys.to_tensor();
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(*t.entry(k, i, j), r(1), "entry {k}{i}{j}");
                }
            }
        }
    }

    /// Independent oracle: the Darboux-Halphen right-hand sides written out
    /// longhand.
    fn dh_rhs(x: &[Rational]) -> Vec<Rational> {
        let (x1, x2, x3) = (&x[0], &x[1], &x[2]);
        vec![
            &(x2 * x3) - &(&(x3 * x1) + &(x1 * x2)),
            &(x3 * x1) - &(&(x1 * x2) + &(x2 * x3)),
            &(x1 * x2) - &(&(x2 * x3) + &(x3 * x1)),
        ]
    }

    #[test]
    fn darboux_halphen_field_matches_longhand() {
        let sys = darboux_halphen();
        let x = rp(&[1, 2, 3]);
        let v = sys.vector_field(&x).unwrap();
        assert_eq!(v, rp(&[1, -5, -7]));
        assert_eq!(v, dh_rhs(&x));
        // tensor route agrees
        let vt = sys.to_tensor().vector_field(&x).unwrap();
        assert_eq!(vt, v);
    }

    #[test]
    fn lv3_field() {
        let sys = detect_symmetry(&lv_tensor(3)).unwrap();
        let v = sys.vector_field(&rp(&[1, 2, 3])).unwrap();
        assert_eq!(v, rp(&[4, 4, 0]));
        let zero = sys.vector_field(&rp(&[0, 0, 0])).unwrap();
        assert!(zero.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn detect_round_trips_presets() {
        for sys in [
            darboux_halphen(),
            lax_system(),
            SymmetricSystem::new(4, rat(3, 7), rat(-1, 3), rat(2, 5), rat(1, 6)),
        ] {
            let back = detect_symmetry(&sys.to_tensor()).unwrap();
            assert_eq!(back, sys);
        }
    }

    #[test]
    fn lv_detects_canonically() {
        for n in 2..=6 {
            let sys = detect_symmetry(&lv_tensor(n)).unwrap();
            // x_k' = -2 x_k^2 + x_k p1 for every n
            assert_eq!(*sys.alpha(), r(-2));
            assert_eq!(*sys.beta(), r(1));
            assert!(sys.gamma().is_zero() && sys.delta().is_zero());
        }
    }

    #[test]
    fn lax_tensor_detects_to_its_parameters() {
        let sys = lax_system();
        assert_eq!(sys.params(), [&r(0), &r(1), &r(0), &r(-1)]);
        let back = detect_symmetry(&sys.to_tensor()).unwrap();
        assert_eq!(back, sys);
    }

    #[test]
    fn asymmetric_tensor_is_rejected_with_witness() {
        // x1' = x1^2, x2' = 2 x2^2
        let mut t = QuadraticTensor::zero(2);
        t.set_pair(0, 0, 0, r(1));
        t.set_pair(1, 1, 1, r(2));
        match detect_symmetry(&t) {
            Err(Error::NotSymmetric { m, m_next, .. }) => {
                assert_eq!((m, m_next), (1, 2));
            }
            other => panic!("expected NotSymmetric, got {other:?}"),
        }
    }

    #[test]
    fn lie_derivative_examples() {
        // alpha = 1 only: L x1 = x1^2
        let sys = SymmetricSystem::new(2, r(1), r(0), r(0), r(0));
        let x1 = MultiPoly::<Rational>::var(VarSet::xi(2), 0);
        let lx = sys.lie_derivative(&x1).unwrap();
        assert_eq!(lx.num_terms(), 1);
        assert_eq!(lx.coeff(&Monomial(vec![2, 0])), r(1));

        // LV3: (x1 - x2) x3 is a first integral
        let lv3 = detect_symmetry(&lv_tensor(3)).unwrap();
        let vars = VarSet::xi(3);
        let p = MultiPoly::var(vars.clone(), 0)
            .sub(&MultiPoly::var(vars.clone(), 1))
            .mul(&MultiPoly::var(vars, 2));
        assert!(lv3.lie_derivative(&p).unwrap().is_zero());

        // Lax system: p2 is a first integral
        let lax = lax_system();
        let vars = VarSet::xi(3);
        let p2 = (0..3).fold(MultiPoly::zero(vars.clone()), |acc, i| {
            acc.add(&MultiPoly::var(vars.clone(), i).powu(2))
        });
        assert!(lax.lie_derivative(&p2).unwrap().is_zero());

        // grade drops by 4
        let p = MultiPoly::var(VarSet::xi(3), 0).powu(3);
        let lp = lax.lie_derivative(&p).unwrap();
        assert_eq!(p.grade(), Some(-12));
        assert_eq!(lp.grade(), Some(-16));

        // dimension mismatch
        let bad = MultiPoly::<Rational>::var(VarSet::xi(2), 0);
        assert!(matches!(
            lax.lie_derivative(&bad),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn quasi_symmetric_round_trip() {
        let sys = darboux_halphen();
        let t = sys.to_tensor();
        // identity
        let id: Vec<Vec<Rational>> = (0..3)
            .map(|i| (0..3).map(|j| if i == j { r(1) } else { r(0) }).collect())
            .collect();
        assert_eq!(quasi_symmetric_check(&t, &id).unwrap(), sys);
        // permutation matrices leave the parameters alone
        let perm: Vec<Vec<Rational>> = vec![
            vec![r(0), r(1), r(0)],
            vec![r(0), r(0), r(1)],
            vec![r(1), r(0), r(0)],
        ];
        assert_eq!(quasi_symmetric_check(&t, &perm).unwrap(), sys);
        // push the system through B^-1, then check with B; the matrix must
        // not centralize the permutations, or the skew stays symmetric
        let b: Vec<Vec<Rational>> = vec![
            vec![r(1), r(2), r(0)],
            vec![r(0), r(1), r(1)],
            vec![r(1), r(0), r(1)],
        ];
        let binv = linalg::invert(&b).unwrap();
        let mut skew = QuadraticTensor::zero(3);
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let mut acc = r(0);
                    for p in 0..3 {
                        for q in 0..3 {
                            for rr in 0..3 {
                                acc = &acc
                                    + &(&(&(&binv[k][p] * t.entry(p, q, rr)) * &b[q][i])
                                        * &b[rr][j]);
                            }
                        }
                    }
                    skew.set_pair(k, i, j, acc);
                }
            }
        }
        // the skewed tensor itself is not symmetric, but B restores it
        assert!(detect_symmetry(&skew).is_err());
        assert_eq!(quasi_symmetric_check(&skew, &b).unwrap(), sys);
        // singular matrix rejected
        let sing: Vec<Vec<Rational>> = vec![
            vec![r(1), r(1), r(0)],
            vec![r(1), r(1), r(0)],
            vec![r(0), r(0), r(1)],
        ];
        assert_eq!(
            quasi_symmetric_check(&t, &sing),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn tensor_json_round_trip() {
        let t = lv_tensor(2);
        let json = serde_json::to_string(&t).unwrap();
        assert!(json.contains("\"n\":2"));
        let back: QuadraticTensor<Rational> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn classify_examples() {
        let cls = classify(&darboux_halphen());
        assert_eq!(cls.kind, Kind::Generic);
        assert_eq!(cls.c, vec![r(-1), r(-6)]);
        let cls = classify(&lax_system());
        assert_eq!(cls.kind, Kind::AlmostGenericOnly);
        assert_eq!(cls.c, vec![r(6), r(0)]);
        // one-dimensional systems are generic for any alpha, zero included
        assert_eq!(classify(&n1_system(rat(0, 1))).kind, Kind::Generic);
        assert_eq!(classify(&n1_system(rat(5, 3))).kind, Kind::Generic);
        // alpha = 0 with alpha + 3 delta = 0 is neither
        let nong = SymmetricSystem::new(3, r(0), r(1), r(1), r(0));
        assert_eq!(classify(&nong).kind, Kind::NonGeneric);
    }

    #[test]
    fn n1_and_n2_fold_canonically() {
        let s1 = SymmetricSystem::new(1, r(1), r(2), r(3), r(4));
        assert_eq!(s1.params(), [&r(10), &r(0), &r(0), &r(0)]);
        let s2 = SymmetricSystem::new(2, r(1), r(1), r(1), r(1));
        assert_eq!(s2.params(), [&r(3), &r(-1), &r(2), &r(0)]);
        // both parameterizations generate the same field
        let raw = |x: &[Rational]| {
            let p1 = &x[0] + &x[1];
            let p2 = &(&x[0] * &x[0]) + &(&x[1] * &x[1]);
            x.iter()
                .map(|xk| {
                    &(&(xk * xk) + &(&(xk * &p1) + &(&p1 * &p1))) + &p2
                })
                .collect::<Vec<_>>()
        };
        let x = rp(&[3, 5]);
        assert_eq!(s2.vector_field(&x).unwrap(), raw(&x));
    }
}
