//! Symmetric-function algebra: elementary and power-sum bases, rewriting
//! symmetric polynomials in elementary symmetric coordinates, the
//! symmetrization projector, Vieta coefficients, and discriminants.

use crate::error::{Error, Result};
use crate::linalg::determinant;
use crate::mpoly::{MultiPoly, VarSet};
use crate::scalar::Coeff;
use crate::systems::SymmetricSystem;

/// All permutations of 0..n in a deterministic order (n <= 8).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            prefix.push(v);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}

/// k-th elementary symmetric polynomial in x1..xn.
pub fn elementary_xi<C: Coeff>(k: usize, n: usize) -> MultiPoly<C> {
    let vars = VarSet::xi(n);
    if k == 0 {
        return MultiPoly::constant(vars, C::one());
    }
    if k > n {
        return MultiPoly::zero(vars);
    }
    let mut out = MultiPoly::zero(vars.clone());
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mut e = vec![0u32; n];
        for &i in &idx {
            e[i] = 1;
        }
        out = out.add(&MultiPoly::from_term(vars.clone(), e, C::one()));
        // next k-combination of 0..n
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// k-th power sum x1^k + ... + xn^k (k = 0 gives the constant n).
pub fn power_sum_xi<C: Coeff>(k: usize, n: usize) -> MultiPoly<C> {
    let vars = VarSet::xi(n);
    if k == 0 {
        return MultiPoly::constant(vars, C::from_int(n as i64));
    }
    let mut out = MultiPoly::zero(vars.clone());
    for i in 0..n {
        let mut e = vec![0u32; n];
        e[i] = k as u32;
        out = out.add(&MultiPoly::from_term(vars.clone(), e, C::one()));
    }
    out
}

/// Values of the elementary symmetric functions at a point.
pub fn vieta_image<C: Coeff>(x: &[C]) -> Vec<C> {
    let n = x.len();
    // e[k] after processing items: standard one-pass recurrence
    let mut e = vec![C::zero(); n + 1];
    e[0] = C::one();
    for (m, xi) in x.iter().enumerate() {
        for k in (1..=m + 1).rev() {
            e[k] = e[k].add(&e[k - 1].mul(xi));
        }
    }
    e.remove(0);
    e
}

/// Coefficients (1, -h1, +h2, ..., (-1)^n hn) of the monic polynomial whose
/// roots have elementary symmetric values h.
pub fn monic_coeffs<C: Coeff>(h: &[C]) -> Vec<C> {
    let mut out = Vec::with_capacity(h.len() + 1);
    out.push(C::one());
    let mut sign = -1i64;
    for hk in h {
        out.push(if sign < 0 { hk.neg() } else { hk.clone() });
        sign = -sign;
    }
    out
}

/// Power sum p_k written in the elementary symmetric variables s1..sn,
/// via the Newton recurrence; valid identically, with truncation at sn for
/// k > n.
pub fn newton_in_sigma<C: Coeff>(k: usize, n: usize) -> MultiPoly<C> {
    let vars = VarSet::sigma(n);
    if k == 0 {
        return MultiPoly::constant(vars, C::from_int(n as i64));
    }
    let mut p: Vec<MultiPoly<C>> = vec![MultiPoly::constant(vars.clone(), C::from_int(n as i64))];
    for m in 1..=k {
        // p_m = s1 p_{m-1} - s2 p_{m-2} + ... + (-1)^{m-2} s_{m-1} p_1
        //       + (-1)^{m-1} m s_m            (terms with s_{>n} dropped)
        let mut acc = MultiPoly::zero(vars.clone());
        let mut sign = 1i64;
        for i in 1..m.min(n + 1) {
            let si = MultiPoly::var(vars.clone(), i - 1);
            let term = si.mul(&p[m - i]).scale(&C::from_int(sign));
            acc = acc.add(&term);
            sign = -sign;
        }
        if m <= n {
            let sm = MultiPoly::var(vars.clone(), m - 1);
            acc = acc.add(&sm.scale(&C::from_int(sign * m as i64)));
        }
        p.push(acc);
    }
    p.pop().unwrap()
}

/// Witness of the first adjacent transposition that changes the polynomial,
/// or None when symmetric.
pub fn symmetry_witness<C: Coeff>(p: &MultiPoly<C>) -> Option<(usize, usize)> {
    let n = p.vars().len();
    for m in 0..n.saturating_sub(1) {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(m, m + 1);
        if &p.permute_vars(&perm) != p {
            return Some((m + 1, m + 2));
        }
    }
    None
}

/// Rewrite a symmetric polynomial in x1..xn as a polynomial in the
/// elementary symmetric variables, by leading-term subtraction. The answer
/// is double-checked by evaluation at a handful of deterministic rational
/// test points.
pub fn express_in_sigma<C: Coeff>(p: &MultiPoly<C>) -> Result<MultiPoly<C>> {
    if let Some((i, j)) = symmetry_witness(p) {
        return Err(Error::NotSymmetricInput(i, j));
    }
    let n = p.vars().len();
    let svars = VarSet::sigma(n);
    let elems: Vec<MultiPoly<C>> = (1..=n).map(|k| elementary_xi(k, n)).collect();

    let mut rem = p.clone();
    let mut out = MultiPoly::zero(svars.clone());
    while !rem.is_zero() {
        let (mono, coeff) = rem.leading_term_lex().expect("nonzero");
        let lambda = mono.0.clone();
        let coeff = coeff.clone();
        debug_assert!(
            lambda.windows(2).all(|w| w[0] >= w[1]),
            "leading exponent of a symmetric polynomial must be non-increasing"
        );
        let mut se = vec![0u32; n];
        for i in 0..n {
            let next = if i + 1 < n { lambda[i + 1] } else { 0 };
            se[i] = lambda[i] - next;
        }
        out = out.add(&MultiPoly::from_term(svars.clone(), se.clone(), coeff.clone()));
        let mut prod = MultiPoly::constant(p.vars().clone(), coeff);
        for (i, &e) in se.iter().enumerate() {
            if e > 0 {
                prod = prod.mul(&elems[i].powu(e));
            }
        }
        rem = rem.sub(&prod);
    }

    // spot-check the identity Q(s(x)) = P(x) at deterministic points
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for _ in 0..5 {
        let x: Vec<C> = (0..n)
            .map(|_| {
                let num = (next() % 199) as i64 - 99;
                let den = (next() % 9) as i64 + 1;
                C::from_rational(&crate::scalar::Rational::new(num, den))
            })
            .collect();
        let sx = vieta_image(&x);
        let lhs = out.eval(&sx);
        let rhs = p.eval(&x);
        // exact for rationals; allow roundoff when numeric
        let diff = lhs.sub(&rhs).to_complex().norm();
        let scale = rhs.to_complex().norm().max(1.0);
        assert!(
            diff <= 1e-9 * scale,
            "elementary-symmetric rewrite failed its spot check"
        );
    }
    Ok(out)
}

/// Symmetrization projector: average over all coordinate permutations
/// (factorial enumeration, so n is capped at 8).
pub fn symmetrize<C: Coeff>(p: &MultiPoly<C>) -> Result<MultiPoly<C>> {
    let n = p.vars().len();
    if n > 8 {
        return Err(Error::DimensionTooLarge(n));
    }
    let mut acc = MultiPoly::zero(p.vars().clone());
    let perms = permutations(n);
    let count = C::from_int(perms.len() as i64);
    for perm in &perms {
        acc = acc.add(&p.permute_vars(perm));
    }
    Ok(acc.scale(&C::one().div(&count)))
}

/// Discriminant as a polynomial in x1..xn: prod_{i<j} (x_i - x_j)^2.
pub fn discriminant_xi<C: Coeff>(n: usize) -> MultiPoly<C> {
    let vars = VarSet::xi(n);
    let mut out = MultiPoly::constant(vars.clone(), C::one());
    for i in 0..n {
        for j in i + 1..n {
            let d = MultiPoly::var(vars.clone(), i).sub(&MultiPoly::var(vars.clone(), j));
            out = out.mul(&d.powu(2));
        }
    }
    out
}

/// Discriminant of the monic degree-n polynomial with elementary symmetric
/// values h, via the Sylvester resultant with its derivative, normalized so
/// it equals prod_{i<j} (x_i - x_j)^2 on the roots.
pub fn discriminant_from_sigma<C: Coeff>(h: &[C]) -> C {
    let n = h.len();
    assert!(n >= 2, "discriminant needs degree >= 2");
    let f = monic_coeffs(h); // descending powers, length n+1
    let fp: Vec<C> = (0..n)
        .map(|i| f[i].mul(&C::from_int((n - i) as i64)))
        .collect();
    let size = 2 * n - 1;
    let mut m = vec![vec![C::zero(); size]; size];
    for r in 0..n - 1 {
        for (j, c) in f.iter().enumerate() {
            m[r][r + j] = c.clone();
        }
    }
    for r in 0..n {
        for (j, c) in fp.iter().enumerate() {
            m[n - 1 + r][r + j] = c.clone();
        }
    }
    let res = determinant(&m);
    // sign (-1)^{n(n-1)/2}, leading coefficient 1
    if (n * (n - 1) / 2) % 2 == 1 {
        res.neg()
    } else {
        res
    }
}

/// Check the logarithmic-derivative law for the discriminant along a
/// symmetric system: L(disc) = (n-1)(2 alpha + n beta) s1 disc, exactly,
/// at one rational point.
pub fn discriminant_log_derivative_check<C: Coeff>(
    sys: &SymmetricSystem<C>,
    x: &[C],
) -> Result<bool> {
    discriminant_log_derivative_check_batch(sys, std::slice::from_ref(&x.to_vec()))
        .map(|mut v| v.pop().expect("one point"))
}

/// Same law checked at many points; the (expensive) derivative of the
/// expanded discriminant is computed once.
pub fn discriminant_log_derivative_check_batch<C: Coeff>(
    sys: &SymmetricSystem<C>,
    points: &[Vec<C>],
) -> Result<Vec<bool>> {
    let n = sys.n();
    assert!(n >= 2);
    let disc = discriminant_xi::<C>(n);
    let ldisc = sys.lie_derivative(&disc)?;
    let factor = C::from_int(n as i64 - 1).mul(
        &sys.alpha()
            .add(sys.alpha())
            .add(&sys.beta().mul(&C::from_int(n as i64))),
    );
    let mut out = Vec::with_capacity(points.len());
    for x in points {
        let dval = disc.eval(x);
        if dval.is_zero() {
            return Err(Error::DegenerateInput);
        }
        let lhs = ldisc.eval(x);
        let s1 = x.iter().fold(C::zero(), |acc, v| acc.add(v));
        let rhs = factor.mul(&s1).mul(&dval);
        out.push(lhs == rhs);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::Monomial;
    use crate::scalar::{rat, Rational};
    use crate::systems::darboux_halphen;

    fn r(v: i64) -> Rational {
        rat(v, 1)
    }

    fn rp(x: &[i64]) -> Vec<Rational> {
        x.iter().map(|&v| r(v)).collect()
    }

    #[test]
    fn vieta_examples() {
        assert_eq!(vieta_image(&rp(&[1, 2, 3])), rp(&[6, 11, 6]));
        assert_eq!(vieta_image(&rp(&[2, 3])), rp(&[5, 6]));
        assert_eq!(vieta_image(&rp(&[7, 0, 0])), rp(&[7, 0, 0]));
    }

    #[test]
    fn monic_coeffs_examples() {
        assert_eq!(monic_coeffs(&rp(&[5, 6])), rp(&[1, -5, 6]));
        assert_eq!(monic_coeffs(&rp(&[6, 11, 6])), rp(&[1, -6, 11, -6]));
        assert_eq!(monic_coeffs(&rp(&[0, 0, 0])), rp(&[1, 0, 0, 0]));
    }

    #[test]
    fn newton_in_sigma_small() {
        // p2 = s1^2 - 2 s2
        let p2 = newton_in_sigma::<Rational>(2, 2);
        assert_eq!(p2.coeff(&Monomial(vec![2, 0])), r(1));
        assert_eq!(p2.coeff(&Monomial(vec![0, 1])), r(-2));
        assert_eq!(p2.num_terms(), 2);
        // p3 = s1^3 - 3 s1 s2 + 3 s3
        let p3 = newton_in_sigma::<Rational>(3, 3);
        assert_eq!(p3.coeff(&Monomial(vec![3, 0, 0])), r(1));
        assert_eq!(p3.coeff(&Monomial(vec![1, 1, 0])), r(-3));
        assert_eq!(p3.coeff(&Monomial(vec![0, 0, 1])), r(3));
        // p0 = n
        let p0 = newton_in_sigma::<Rational>(0, 4);
        assert_eq!(p0, MultiPoly::constant(VarSet::sigma(4), r(4)));
    }

    #[test]
    fn newton_round_trip_against_power_sums() {
        // evaluating p_k-in-sigma at sigma(x) recovers the power sum, also
        // for k > n where the recurrence truncates
        let x = vec![rat(1, 2), rat(-2, 3), rat(3, 1), rat(5, 7)];
        let s = vieta_image(&x);
        for k in 0..=12 {
            let pk = newton_in_sigma::<Rational>(k, 4);
            let direct = power_sum_xi::<Rational>(k, 4).eval(&x);
            assert_eq!(pk.eval(&s), direct, "k = {k}");
        }
    }

    #[test]
    fn express_in_sigma_examples() {
        // p2 for n=2 -> s1^2 - 2 s2
        let p2 = power_sum_xi::<Rational>(2, 2);
        let q = express_in_sigma(&p2).unwrap();
        assert_eq!(q, newton_in_sigma::<Rational>(2, 2));

        // disc2 = (x1 - x2)^2 -> s1^2 - 4 s2
        let d2 = discriminant_xi::<Rational>(2);
        let q = express_in_sigma(&d2).unwrap();
        assert_eq!(q.coeff(&Monomial(vec![2, 0])), r(1));
        assert_eq!(q.coeff(&Monomial(vec![0, 1])), r(-4));
        assert_eq!(q.num_terms(), 2);

        // x1 x2 x3 -> s3
        let vars = VarSet::xi(3);
        let m = MultiPoly::from_term(vars, vec![1, 1, 1], r(1));
        let q = express_in_sigma(&m).unwrap();
        assert_eq!(q, MultiPoly::var(VarSet::sigma(3), 2));

        // non-symmetric input is rejected with a witness
        let bad = MultiPoly::<Rational>::var(VarSet::xi(2), 0);
        assert_eq!(express_in_sigma(&bad), Err(Error::NotSymmetricInput(1, 2)));
    }

    #[test]
    fn symmetrize_examples() {
        // x1^2 (n=2) -> (x1^2 + x2^2)/2
        let vars = VarSet::xi(2);
        let p = MultiPoly::from_term(vars.clone(), vec![2, 0], r(1));
        let s = symmetrize(&p).unwrap();
        assert_eq!(s.coeff(&Monomial(vec![2, 0])), rat(1, 2));
        assert_eq!(s.coeff(&Monomial(vec![0, 2])), rat(1, 2));

        // fixes symmetric inputs
        let e2 = elementary_xi::<Rational>(2, 3);
        assert_eq!(symmetrize(&e2).unwrap(), e2);

        // kills antisymmetric ones
        let vars = VarSet::xi(2);
        let anti = MultiPoly::<Rational>::var(vars.clone(), 0).sub(&MultiPoly::var(vars, 1));
        assert!(symmetrize(&anti).unwrap().is_zero());

        // idempotent
        let vars = VarSet::xi(3);
        let p = MultiPoly::from_term(vars, vec![3, 1, 0], rat(2, 5));
        let s1 = symmetrize(&p).unwrap();
        assert_eq!(symmetrize(&s1).unwrap(), s1);
        assert!(symmetry_witness(&s1).is_none());

        // factorial enumeration is capped
        let big = MultiPoly::<Rational>::var(VarSet::xi(9), 0);
        assert_eq!(symmetrize(&big), Err(Error::DimensionTooLarge(9)));
    }

    #[test]
    fn discriminant_values() {
        assert_eq!(discriminant_from_sigma(&rp(&[5, 6])), r(1));
        assert_eq!(discriminant_from_sigma(&rp(&[2, 1])), r(0));
        assert_eq!(discriminant_from_sigma(&rp(&[6, 11, 6])), r(4));
        // cubic closed form at (6, 11, 6):
        // -27 h3^2 + 18 h1 h2 h3 - 4 h1^3 h3 - 4 h2^3 + h1^2 h2^2 = 4
        let (h1, h2, h3) = (6i64, 11, 6);
        let closed =
            -27 * h3 * h3 + 18 * h1 * h2 * h3 - 4 * h1 * h1 * h1 * h3 - 4 * h2 * h2 * h2
                + h1 * h1 * h2 * h2;
        assert_eq!(closed, 4);
    }

    #[test]
    fn discriminant_matches_root_product() {
        let pts: [&[i64]; 3] = [&[2, 3], &[1, 2, 3], &[1, 2, 3, 5]];
        for x in pts {
            let xr = rp(x);
            let h = vieta_image(&xr);
            let prod = discriminant_xi::<Rational>(x.len()).eval(&xr);
            assert_eq!(discriminant_from_sigma(&h), prod);
        }
    }

    #[test]
    fn log_derivative_law_examples() {
        // n = 2, alpha = 1: factor is 2
        let sys = SymmetricSystem::new(2, r(1), r(0), r(0), r(0));
        assert!(discriminant_log_derivative_check(&sys, &rp(&[3, 5])).unwrap());
        // Darboux-Halphen at (1,2,3): factor (n-1)(2a+nb) = -4
        assert!(discriminant_log_derivative_check(&darboux_halphen(), &rp(&[1, 2, 3])).unwrap());
        // degenerate point rejected
        assert_eq!(
            discriminant_log_derivative_check(&darboux_halphen(), &rp(&[1, 1, 3])),
            Err(Error::DegenerateInput)
        );
    }

    #[test]
    fn classical_determinant_identities_at_points() {
        // evaluate both classical determinant identities at a rational
        // point and compare with the direct power sums / elementary values
        let x = [rat(1, 2), rat(-1, 3), rat(2, 1), rat(7, 5), rat(-3, 4)];
        for n in 2..=5usize {
            let xs = &x[..n];
            let s = vieta_image(xs);
            let p: Vec<Rational> = (0..=8)
                .map(|k| power_sum_xi::<Rational>(k, n).eval(xs))
                .collect();
            for k in 1..=8usize {
                // det of the k x k matrix with columns built from s-values
                // equals p_k
                let mut m = vec![vec![r(0); k]; k];
                for i in 0..k {
                    for j in 0..k {
                        m[i][j] = if j == 0 {
                            let si = if i < n { s[i].clone() } else { r(0) };
                            &si * &r(i as i64 + 1)
                        } else if j <= i + 1 {
                            let idx = i + 1 - j; // s_{i-j+1}, s_0 = 1
                            if idx == 0 {
                                r(1)
                            } else if idx <= n {
                                s[idx - 1].clone()
                            } else {
                                r(0)
                            }
                        } else {
                            r(0)
                        };
                    }
                }
                assert_eq!(determinant(&m), p[k], "p_{k} via determinant, n = {n}");

                // det of the k x k matrix with p-values equals k! s_k
                if k <= n {
                    let mut m = vec![vec![r(0); k]; k];
                    for i in 0..k {
                        for j in 0..k {
                            m[i][j] = if j <= i {
                                p[i - j + 1].clone()
                            } else if j == i + 1 {
                                r(j as i64)
                            } else {
                                r(0)
                            };
                        }
                    }
                    let kfact = (1..=k as i64).product::<i64>();
                    assert_eq!(
                        determinant(&m),
                        &r(kfact) * &s[k - 1],
                        "k! s_{k} via determinant, n = {n}"
                    );
                }
            }
        }
    }
}
