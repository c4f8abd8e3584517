//! The two-parameter matrix family B(lambda, q) = lambda E + q ee^T: the
//! centralizer of the permutation group. It acts on symmetric systems, on
//! their reduced ODEs (by pure rescaling of h), and on the elementary
//! symmetric functions by an explicit binomial formula.

use crate::error::{Error, Result};
use crate::mpoly::{MultiPoly, VarSet};
use crate::reduction::ReducedODE;
use crate::scalar::Coeff;
use crate::systems::SymmetricSystem;

/// The matrix lambda E + q ee^T in dimension n; invertible iff lambda != 0
/// and lambda + n q != 0 (the determinant is lambda^{n-1} (lambda + n q)).
#[derive(Clone, PartialEq, Debug)]
pub struct BMatrix<C: Coeff> {
    pub lambda: C,
    pub q: C,
    pub n: usize,
}

impl<C: Coeff> BMatrix<C> {
    pub fn new(lambda: C, q: C, n: usize) -> Self {
        BMatrix { lambda, q, n }
    }

    pub fn identity(n: usize) -> Self {
        BMatrix::new(C::one(), C::zero(), n)
    }

    /// lambda + n q, the factor by which p1 scales.
    pub fn trace_scale(&self) -> C {
        self.lambda
            .add(&self.q.mul(&C::from_int(self.n as i64)))
    }

    pub fn is_invertible(&self) -> bool {
        !self.lambda.is_zero() && !self.trace_scale().is_zero()
    }

    pub fn to_matrix(&self) -> Vec<Vec<C>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        if i == j {
                            self.lambda.add(&self.q)
                        } else {
                            self.q.clone()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Apply to a point: B x = lambda x + q (sum x) e.
    pub fn apply(&self, x: &[C]) -> Result<Vec<C>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let s = x.iter().fold(C::zero(), |acc, v| acc.add(v));
        let qs = self.q.mul(&s);
        Ok(x.iter().map(|v| self.lambda.mul(v).add(&qs)).collect())
    }
}

/// Product in the family: closed under multiplication with
/// (l1, q1)(l2, q2) = (l1 l2, l1 q2 + l2 q1 + n q1 q2); commutative.
pub fn b_compose<C: Coeff>(b1: &BMatrix<C>, b2: &BMatrix<C>) -> Result<BMatrix<C>> {
    if b1.n != b2.n {
        return Err(Error::DimensionMismatch {
            expected: b1.n,
            got: b2.n,
        });
    }
    let lambda = b1.lambda.mul(&b2.lambda);
    let q = b1
        .lambda
        .mul(&b2.q)
        .add(&b2.lambda.mul(&b1.q))
        .add(&C::from_int(b1.n as i64).mul(&b1.q).mul(&b2.q));
    Ok(BMatrix::new(lambda, q, b1.n))
}

/// Inverse: (1/lambda, -q / (lambda (lambda + n q))).
pub fn b_inverse<C: Coeff>(b: &BMatrix<C>) -> Result<BMatrix<C>> {
    if !b.is_invertible() {
        return Err(Error::SingularMatrix);
    }
    let lam_inv = C::one().div(&b.lambda);
    let q = b.q.neg().div(&b.lambda.mul(&b.trace_scale()));
    Ok(BMatrix::new(lam_inv, q, b.n))
}

/// Parameters of the system in the coordinates eta = B xi.
pub fn transform_system<C: Coeff>(
    sys: &SymmetricSystem<C>,
    b: &BMatrix<C>,
) -> Result<SymmetricSystem<C>> {
    if b.n != sys.n() {
        return Err(Error::DimensionMismatch {
            expected: sys.n(),
            got: b.n,
        });
    }
    if !b.is_invertible() {
        return Err(Error::SingularMatrix);
    }
    let n = sys.n();
    let (al, be, ga, de) = (sys.alpha(), sys.beta(), sys.gamma(), sys.delta());
    let (l, q) = (&b.lambda, &b.q);
    let ts = b.trace_scale();
    let l2 = l.mul(l);
    Ok(match n {
        1 => SymmetricSystem::new(1, al.div(&l.add(q)), C::zero(), C::zero(), C::zero()),
        2 => {
            // (lambda + 2q) a / lambda^2,
            // -(4q (lambda + q) a - lambda^2 b) / (lambda^2 (lambda + 2q)),
            // (q (lambda + q) a + lambda^2 g) / (lambda^2 (lambda + 2q))
            let lq = l.add(q);
            let alpha = ts.mul(al).div(&l2);
            let beta = C::from_int(4)
                .mul(q)
                .mul(&lq)
                .mul(al)
                .sub(&l2.mul(be))
                .neg()
                .div(&l2.mul(&ts));
            let gamma = q
                .mul(&lq)
                .mul(al)
                .add(&l2.mul(ga))
                .div(&l2.mul(&ts));
            SymmetricSystem::new(2, alpha, beta, gamma, C::zero())
        }
        _ => {
            // alpha/lambda,
            // -(2 q a - lambda b) / (lambda (lambda + n q)),
            // -(q^2 (a + n d) - lambda (lambda g - 2 q d))
            //   / (lambda^2 (lambda + n q)),
            // (q (a + n d) + lambda d) / lambda^2
            let a_nd = al.add(&C::from_int(n as i64).mul(de));
            let alpha = al.div(l);
            let beta = C::from_int(2)
                .mul(q)
                .mul(al)
                .sub(&l.mul(be))
                .neg()
                .div(&l.mul(&ts));
            let gamma = q
                .mul(q)
                .mul(&a_nd)
                .sub(&l.mul(&l.mul(ga).sub(&C::from_int(2).mul(q).mul(de))))
                .neg()
                .div(&l2.mul(&ts));
            let delta = q.mul(&a_nd).add(&l.mul(de)).div(&l2);
            SymmetricSystem::new(n, alpha, beta, gamma, delta)
        }
    })
}

/// Which orbit representative a generic system lands on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NormalFormCase {
    /// n = 1, nonzero: x' = x^2.
    N1Unit,
    /// n = 1, zero system.
    N1Zero,
    /// n = 2 with alpha + beta != 0: x_k' = x_k^2 + g p1^2.
    GammaOnly,
    /// n = 2 with alpha = -beta, alpha != 4 gamma: x_k' = x_k^2 + b x_k p1.
    BetaOnly,
    /// n = 2 with alpha = -beta = 4 gamma: the single exceptional orbit.
    Exceptional,
    /// n >= 3: x_k' = x_k^2 + b x_k p1 + g p1^2.
    BetaGamma,
}

/// Scale a generic system onto its orbit representative. For n = 2 the
/// scale is a square root; in the exact field this fails with
/// `Error::NotExact` unless the radicand is a perfect square (retry in the
/// numeric field then).
pub fn normal_form<C: Coeff>(
    sys: &SymmetricSystem<C>,
) -> Result<(BMatrix<C>, SymmetricSystem<C>, NormalFormCase)> {
    let cls = crate::systems::classify(sys);
    if cls.kind != crate::systems::Kind::Generic {
        let k = cls.c.iter().position(|c| c.is_zero()).unwrap_or(0) + 1;
        return Err(Error::NotGeneric(k));
    }
    let n = sys.n();
    let (al, be, ga, de) = (sys.alpha(), sys.beta(), sys.gamma(), sys.delta());
    match n {
        1 => {
            if al.is_zero() {
                let b = BMatrix::identity(1);
                return Ok((b.clone(), sys.clone(), NormalFormCase::N1Zero));
            }
            let b = BMatrix::new(al.clone(), C::zero(), 1);
            let out = transform_system(sys, &b)?;
            Ok((b, out, NormalFormCase::N1Unit))
        }
        2 => {
            let q_for = |lambda: &C| -> C {
                // q = lambda (lambda - alpha) / (2 alpha)
                lambda
                    .mul(&lambda.sub(al))
                    .div(&C::from_int(2).mul(al))
            };
            let ab = al.add(be);
            if !ab.is_zero() {
                let rad = al.mul(&ab);
                let lambda = rad.sqrt().ok_or(Error::NotExact)?;
                let b = BMatrix::new(lambda.clone(), q_for(&lambda), 2);
                let out = transform_system(sys, &b)?;
                return Ok((b, out, NormalFormCase::GammaOnly));
            }
            let a4g = al.sub(&C::from_int(4).mul(ga));
            if !a4g.is_zero() {
                let rad = al.mul(&a4g);
                let lambda = rad.sqrt().ok_or(Error::NotExact)?;
                let b = BMatrix::new(lambda.clone(), q_for(&lambda), 2);
                let out = transform_system(sys, &b)?;
                return Ok((b, out, NormalFormCase::BetaOnly));
            }
            let lambda = C::one();
            let b = BMatrix::new(lambda.clone(), q_for(&lambda), 2);
            let out = transform_system(sys, &b)?;
            Ok((b, out, NormalFormCase::Exceptional))
        }
        _ => {
            // lambda = alpha, q = -alpha delta / (alpha + n delta) puts the
            // system at alpha = 1, delta = 0
            let a_nd = al.add(&C::from_int(n as i64).mul(de));
            let b = BMatrix::new(al.clone(), al.mul(de).neg().div(&a_nd), n);
            let out = transform_system(sys, &b)?;
            Ok((b, out, NormalFormCase::BetaGamma))
        }
    }
}

/// Action on a reduced ODE: h scales by lambda + n q, so each coefficient
/// scales by (lambda + n q)^{1 - |omega|}.
pub fn transform_ode<C: Coeff>(
    ode: &ReducedODE<C>,
    lambda: &C,
    q: &C,
    n: usize,
) -> Result<ReducedODE<C>> {
    let scale = lambda.add(&q.mul(&C::from_int(n as i64)));
    if scale.is_zero() {
        return Err(Error::SingularMatrix);
    }
    ode.rescale(&scale)
}

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    acc
}

/// s_k of the transformed coordinates as a polynomial in s_1..s_k:
/// s_k(B x) = sum_m C(n-k+m, m) lambda^{k-m} q^m s_{k-m}(x) s_1(x)^m.
pub fn sigma_pushforward<C: Coeff>(k: usize, b: &BMatrix<C>) -> Result<MultiPoly<C>> {
    let n = b.n;
    if k < 1 || k > n {
        return Err(Error::IndexOutOfRange(k));
    }
    let vars = VarSet::sigma(n);
    let mut out = MultiPoly::zero(vars.clone());
    for m in 0..=k {
        let coeff = C::from_int(binomial(n - k + m, m))
            .mul(&b.lambda.powu((k - m) as u32))
            .mul(&b.q.powu(m as u32));
        if coeff.is_zero() {
            continue;
        }
        let mut e = vec![0u32; n];
        e[0] += m as u32;
        if k - m >= 1 {
            e[k - m - 1] += 1;
        }
        out = out.add(&MultiPoly::from_term(vars.clone(), e, coeff));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::reduce_generic;
    use crate::scalar::{rat, Complex64, Rational};
    use crate::symfun::vieta_image;
    use crate::systems::darboux_halphen;

    fn r(v: i64) -> Rational {
        rat(v, 1)
    }

    #[test]
    fn compose_and_inverse() {
        let id = BMatrix::<Rational>::identity(2);
        let b = BMatrix::new(r(3), r(5), 2);
        assert_eq!(b_compose(&id, &b).unwrap(), b);
        // n=2: B(2,1) B(3,1) = B(6, 2 + 3 + 2) = B(6, 7)
        let p = b_compose(&BMatrix::new(r(2), r(1), 2), &BMatrix::new(r(3), r(1), 2)).unwrap();
        assert_eq!(p, BMatrix::new(r(6), r(7), 2));
        // inverse against the closed form, and compose checks out
        let binv = b_inverse(&BMatrix::new(r(1), r(1), 3)).unwrap();
        assert_eq!(binv, BMatrix::new(r(1), rat(-1, 4), 3));
        let prod = b_compose(&BMatrix::new(r(1), r(1), 3), &binv).unwrap();
        assert_eq!(prod, BMatrix::identity(3));
        // singular element has no inverse
        assert_eq!(
            b_inverse(&BMatrix::new(r(1), rat(-1, 2), 2)),
            Err(Error::SingularMatrix)
        );
        // dimension mismatch is rejected
        assert!(b_compose(&BMatrix::<Rational>::identity(2), &BMatrix::identity(3)).is_err());
    }

    #[test]
    fn matrix_form_matches_apply() {
        let b = BMatrix::new(r(2), r(3), 3);
        let x = vec![r(1), r(4), r(-2)];
        let via_matrix = crate::linalg::mat_vec(&b.to_matrix(), &x);
        assert_eq!(b.apply(&x).unwrap(), via_matrix);
    }

    #[test]
    fn transform_identity_and_example() {
        let sys = darboux_halphen();
        let id = BMatrix::identity(3);
        assert_eq!(transform_system(&sys, &id).unwrap(), sys);

        // n=3, (1,0,0,0) under B(1,1) -> (1, -1/2, -1/4, 1)
        let pure = SymmetricSystem::new(3, r(1), r(0), r(0), r(0));
        let out = transform_system(&pure, &BMatrix::new(r(1), r(1), 3)).unwrap();
        assert_eq!(
            out.params(),
            [&r(1), &rat(-1, 2), &rat(-1, 4), &r(1)]
        );
    }

    /// The defining property: B F_sys(x) = F_transformed(B x).
    fn check_pushforward(sys: &SymmetricSystem<Rational>, b: &BMatrix<Rational>, x: &[Rational]) {
        let out = transform_system(sys, b).unwrap();
        let lhs = b.apply(&sys.vector_field(x).unwrap()).unwrap();
        let rhs = out.vector_field(&b.apply(x).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pushforward_identity_all_dimensions() {
        let pts2 = [vec![r(1), r(3)], vec![rat(1, 2), rat(-5, 3)]];
        let sys2 = SymmetricSystem::new(2, r(2), rat(1, 3), r(-1), r(0));
        let b2 = BMatrix::new(rat(3, 2), rat(-1, 5), 2);
        for x in &pts2 {
            check_pushforward(&sys2, &b2, x);
        }
        let sys3 = darboux_halphen();
        let b3 = BMatrix::new(r(2), r(1), 3);
        check_pushforward(&sys3, &b3, &[r(1), r(2), r(3)]);
        let sys1 = SymmetricSystem::new(1, r(3), r(0), r(0), r(0));
        let b1 = BMatrix::new(r(2), r(5), 1);
        check_pushforward(&sys1, &b1, &[rat(7, 3)]);
        let sys4 = SymmetricSystem::new(4, r(1), r(2), rat(-1, 2), rat(1, 3));
        let b4 = BMatrix::new(rat(5, 4), rat(2, 7), 4);
        check_pushforward(&sys4, &b4, &[r(1), r(-1), r(2), rat(1, 5)]);
    }

    #[test]
    fn normal_form_n3_example() {
        let sys = SymmetricSystem::new(3, r(2), r(0), r(0), r(1));
        let (b, out, case) = normal_form(&sys).unwrap();
        assert_eq!(b, BMatrix::new(r(2), rat(-2, 5), 3));
        assert_eq!(out.params(), [&r(1), &r(1), &rat(1, 4), &r(0)]);
        assert_eq!(case, NormalFormCase::BetaGamma);
        // already in normal form: B(1,0)
        let plain = SymmetricSystem::new(3, r(1), r(5), r(7), r(0));
        let (b, out, _) = normal_form(&plain).unwrap();
        assert_eq!(b, BMatrix::identity(3));
        assert_eq!(out, plain);
    }

    #[test]
    fn normal_form_n2_cases() {
        // (1,0,0) is its own representative in the gamma-only family
        let sys = SymmetricSystem::new(2, r(1), r(0), r(0), r(0));
        let (b, out, case) = normal_form(&sys).unwrap();
        assert_eq!(b, BMatrix::identity(2));
        assert_eq!(out, sys);
        assert_eq!(case, NormalFormCase::GammaOnly);

        // rational square: alpha (alpha + beta) = 4 stays exact
        let sys = SymmetricSystem::new(2, r(1), r(3), r(2), r(0));
        let (b, out, case) = normal_form(&sys).unwrap();
        assert_eq!(case, NormalFormCase::GammaOnly);
        assert_eq!(b.lambda, r(2));
        assert_eq!(*out.alpha(), r(1));
        assert!(out.beta().is_zero());
        // gamma target: (beta + 4 gamma) / (4 (alpha + beta)) = 11/16
        assert_eq!(*out.gamma(), rat(11, 16));

        // irrational square root: exact mode refuses, numeric succeeds
        let sys = SymmetricSystem::new(2, r(1), r(1), r(0), r(0));
        assert_eq!(normal_form(&sys).unwrap_err(), Error::NotExact);
        let num = sys.to_numeric();
        let (b, out, case) = normal_form(&num).unwrap();
        assert_eq!(case, NormalFormCase::GammaOnly);
        assert!((b.lambda - Complex64::new(2f64.sqrt(), 0.0)).norm() < 1e-12);
        assert!((out.alpha() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(out.beta().norm() < 1e-12);

        // alpha = -beta branch, radicand 1*(1+3) = 4 stays exact
        let sys = SymmetricSystem::new(2, r(1), r(-1), rat(-3, 4), r(0));
        let (_, out, case) = normal_form(&sys).unwrap();
        assert_eq!(case, NormalFormCase::BetaOnly);
        assert_eq!(*out.alpha(), r(1));
        // beta target: (beta + 4 gamma)/(alpha - 4 gamma) = (-4)/4 = -1
        assert_eq!(*out.beta(), r(-1));
        assert!(out.gamma().is_zero());

        // exceptional orbit alpha = -beta = 4 gamma
        let sys = SymmetricSystem::new(2, r(4), r(-4), r(1), r(0));
        let (_, out, case) = normal_form(&sys).unwrap();
        assert_eq!(case, NormalFormCase::Exceptional);
        assert_eq!(out.params(), [&r(1), &r(-1), &rat(1, 4), &r(0)]);
    }

    #[test]
    fn transform_ode_functoriality_sample() {
        let sys = darboux_halphen();
        let b = BMatrix::new(r(2), r(1), 3);
        let direct = reduce_generic(&transform_system(&sys, &b).unwrap())
            .unwrap()
            .ode;
        let via_action =
            transform_ode(&reduce_generic(&sys).unwrap().ode, &b.lambda, &b.q, 3).unwrap();
        assert_eq!(direct, via_action);
        // scale 1 leaves the ODE alone
        let same = transform_ode(&via_action, &r(3), &rat(-2, 3), 3).unwrap();
        assert_eq!(same, via_action);
        // singular scale rejected
        assert_eq!(
            transform_ode(&via_action, &r(3), &r(-1), 3),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn sigma_pushforward_formulas() {
        // k = 1: (lambda + n q) s1
        let b = BMatrix::new(r(2), r(3), 4);
        let p = sigma_pushforward(1, &b).unwrap();
        let vars = VarSet::sigma(4);
        assert_eq!(
            p,
            MultiPoly::from_term(vars, vec![1, 0, 0, 0], r(14))
        );
        // n=2, k=2: lambda^2 s2 + (lambda q + q^2) s1^2
        let b = BMatrix::new(r(2), r(3), 2);
        let p = sigma_pushforward(2, &b).unwrap();
        assert_eq!(p.coeff(&crate::mpoly::Monomial(vec![0, 1])), r(4));
        assert_eq!(p.coeff(&crate::mpoly::Monomial(vec![2, 0])), r(15));
        // q = 0: pure scaling lambda^k s_k
        let b = BMatrix::new(r(3), r(0), 3);
        let p = sigma_pushforward(3, &b).unwrap();
        let vars = VarSet::sigma(3);
        assert_eq!(p, MultiPoly::from_term(vars, vec![0, 0, 1], r(27)));
        // out of range
        assert!(sigma_pushforward(5, &b).is_err());
        assert!(sigma_pushforward(0, &b).is_err());
    }

    #[test]
    fn sigma_pushforward_matches_direct_expansion() {
        let b = BMatrix::new(rat(3, 2), rat(-2, 5), 4);
        let x = vec![r(1), rat(1, 2), r(-3), rat(5, 7)];
        let bx = b.apply(&x).unwrap();
        let s_bx = vieta_image(&bx);
        let s_x = vieta_image(&x);
        for k in 1..=4 {
            let p = sigma_pushforward(k, &b).unwrap();
            assert_eq!(p.eval(&s_x), s_bx[k - 1], "k = {k}");
        }
    }
}
