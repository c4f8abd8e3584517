//! Graded multivariate polynomials over an exact or numeric coefficient field.
//!
//! Terms are kept in a canonical graded-lexicographic order (total exponent
//! first, then lexicographic with the first variable strongest), zero
//! coefficients are never stored, so equality is structural.
//!
//! Three variable sets cover the whole crate, all graded so that time has
//! weight 4:
//! * coordinate variables x1..xn, weight -4 each,
//! * elementary symmetric variables s1..sn, weight(sk) = -4k,
//! * jet variables h, h', h'', ... for a scalar unknown, weight -4(k+1) for
//!   the k-th derivative.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Coeff, Complex64, Scalar};

/// Exponent multi-index with graded-lex ordering.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// An ordered list of named variables with integer grading weights.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VarSet {
    names: Vec<String>,
    weights: Vec<i64>,
}

impl VarSet {
    pub fn new(names: Vec<String>, weights: Vec<i64>) -> Self {
        assert_eq!(names.len(), weights.len());
        VarSet { names, weights }
    }

    /// Coordinate variables x1..xn, weight -4 each.
    pub fn xi(n: usize) -> Self {
        VarSet {
            names: (1..=n).map(|i| format!("x{i}")).collect(),
            weights: vec![-4; n],
        }
    }

    /// Elementary symmetric variables s1..sn, weight(sk) = -4k.
    pub fn sigma(n: usize) -> Self {
        VarSet {
            names: (1..=n).map(|i| format!("s{i}")).collect(),
            weights: (1..=n).map(|i| -4 * i as i64).collect(),
        }
    }

    /// Jet variables for h and its derivatives up to order `max_order`,
    /// weight of the k-th derivative is -4(k+1).
    pub fn jet(max_order: usize) -> Self {
        let names = (0..=max_order)
            .map(|k| match k {
                0 => "h".to_string(),
                1 => "h'".to_string(),
                2 => "h''".to_string(),
                3 => "h'''".to_string(),
                _ => format!("h^({k})"),
            })
            .collect();
        VarSet {
            names,
            weights: (0..=max_order).map(|k| -4 * (k as i64 + 1)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.weights[i]
    }

    pub fn monomial_weight(&self, m: &Monomial) -> i64 {
        m.0.iter()
            .zip(&self.weights)
            .map(|(&e, &w)| e as i64 * w)
            .sum()
    }
}

/// Sparse multivariate polynomial over `C`.
#[derive(Clone, PartialEq, Debug)]
pub struct MultiPoly<C: Coeff> {
    vars: VarSet,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> MultiPoly<C> {
    pub fn zero(vars: VarSet) -> Self {
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: VarSet, c: C) -> Self {
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial(vec![0; p.vars.len()]), c);
        }
        p
    }

    /// The i-th variable as a polynomial (0-based index).
    pub fn var(vars: VarSet, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::from_term(vars, e, C::one())
    }

    pub fn from_term(vars: VarSet, exponents: Vec<u32>, c: C) -> Self {
        assert_eq!(exponents.len(), vars.len());
        let mut p = MultiPoly::zero(vars);
        p.add_term(Monomial(exponents), c);
        p
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn assert_same_vars(&self, other: &Self) {
        assert_eq!(
            self.vars, other.vars,
            "polynomial operands have different variable sets"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_vars(other);
        let mut out = MultiPoly::zero(self.vars.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = Monomial(
                    ma.0.iter()
                        .zip(&mb.0)
                        .map(|(&a, &b)| a + b)
                        .collect(),
                );
                out.add_term(m, ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return MultiPoly::zero(self.vars.clone());
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.mul(c);
        }
        out
    }

    pub fn powu(&self, e: u32) -> Self {
        let mut acc = MultiPoly::constant(self.vars.clone(), C::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut me = m.0.clone();
            me[i] -= 1;
            out.add_term(Monomial(me), c.mul(&C::from_int(e as i64)));
        }
        out
    }

    /// Largest exponent of each variable over all terms.
    fn max_exponents(&self) -> Vec<u32> {
        let mut maxe = vec![0u32; self.vars.len()];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                maxe[i] = maxe[i].max(e);
            }
        }
        maxe
    }

    /// Evaluate at a full vector of values (one per variable); powers are
    /// tabulated once per variable.
    pub fn eval(&self, vals: &[C]) -> C {
        assert_eq!(vals.len(), self.vars.len());
        let tables: Vec<Vec<C>> = self
            .max_exponents()
            .iter()
            .zip(vals)
            .map(|(&maxe, v)| {
                let mut powers = Vec::with_capacity(maxe as usize + 1);
                powers.push(C::one());
                for _ in 0..maxe {
                    powers.push(powers.last().unwrap().mul(v));
                }
                powers
            })
            .collect();
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&tables[i][e as usize]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Evaluate at complex values, promoting exact coefficients.
    pub fn eval_complex(&self, vals: &[Complex64]) -> Complex64 {
        assert_eq!(vals.len(), self.vars.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_complex();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= vals[i].powu(e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Evaluate with a named assignment of tagged scalars. The assignment
    /// must cover every variable that actually appears and must not mix
    /// exact and numeric values. The result is exact only when the
    /// polynomial and the whole assignment are exact.
    pub fn eval_scalar(&self, assignment: &BTreeMap<String, Scalar>) -> Result<Scalar> {
        let mut used = vec![false; self.vars.len()];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        let mut vals = Vec::with_capacity(self.vars.len());
        let mut any_numeric = false;
        let mut any_exact = false;
        for i in 0..self.vars.len() {
            let name = self.vars.name(i);
            match assignment.get(name) {
                Some(s) => {
                    match s {
                        Scalar::Exact(_) => any_exact = true,
                        Scalar::Numeric(_) => any_numeric = true,
                    }
                    vals.push(s.clone());
                }
                None if used[i] => return Err(Error::MissingVariable(name.to_string())),
                None => vals.push(Scalar::Exact(crate::scalar::Rational::zero())),
            }
        }
        if any_exact && any_numeric {
            return Err(Error::MixedScalarMode);
        }
        let exact_poly = self.terms.values().all(|c| c.to_scalar().is_exact());
        if exact_poly && !any_numeric {
            let rvals: Vec<crate::scalar::Rational> = vals
                .iter()
                .map(|s| s.as_exact().cloned().unwrap())
                .collect();
            let mut acc = crate::scalar::Rational::zero();
            for (m, c) in &self.terms {
                let cr = <crate::scalar::Rational as Coeff>::try_from_scalar(&c.to_scalar())
                    .expect("exact poly");
                let mut t = cr;
                for (i, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        t = Coeff::mul(&t, &rvals[i].powu(e));
                    }
                }
                acc = Coeff::add(&acc, &t);
            }
            Ok(Scalar::Exact(acc))
        } else {
            let cvals: Vec<Complex64> = vals.iter().map(|s| s.to_complex()).collect();
            Ok(Scalar::Numeric(self.eval_complex(&cvals)))
        }
    }

    /// Substitute variable i by `images[i]`; images share one variable set.
    pub fn substitute(&self, images: &[MultiPoly<C>]) -> MultiPoly<C> {
        assert_eq!(images.len(), self.vars.len());
        let target = images
            .first()
            .map(|p| p.vars.clone())
            .expect("substitute needs at least one image");
        for img in images {
            assert_eq!(img.vars, target, "images must share a variable set");
        }
        let mut out = MultiPoly::zero(target.clone());
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target.clone(), c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].powu(e));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Rename/permute variables: variable i of `self` becomes variable
    /// `perm[i]` of the result, i.e. the result is P(x_{perm(1)}, ...).
    pub fn map_vars(&self, perm: &[usize], target: VarSet) -> MultiPoly<C> {
        assert_eq!(perm.len(), self.vars.len());
        let mut out = MultiPoly::zero(target.clone());
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.len()];
            for (i, &ei) in m.0.iter().enumerate() {
                e[perm[i]] += ei;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Apply a coordinate permutation (same variable set).
    pub fn permute_vars(&self, perm: &[usize]) -> MultiPoly<C> {
        self.map_vars(perm, self.vars.clone())
    }

    /// Grading weight when homogeneous. Zero polynomial has no grade.
    pub fn grade(&self) -> Option<i64> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let w = self.vars.monomial_weight(first);
        for m in it {
            if self.vars.monomial_weight(m) != w {
                return None;
            }
        }
        Some(w)
    }

    /// True for the zero polynomial and for homogeneous ones of weight `w`.
    pub fn is_homogeneous_of(&self, w: i64) -> bool {
        self.terms
            .keys()
            .all(|m| self.vars.monomial_weight(m) == w)
    }

    /// Leading term under the pure lexicographic order (first variable
    /// strongest); used by the symmetric-function rewriting algorithm.
    pub fn leading_term_lex(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().max_by(|(a, _), (b, _)| a.0.cmp(&b.0))
    }

    /// Map coefficients into another field (e.g. exact -> complex).
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Total-derivative operator on jet polynomials: the k-th jet variable
    /// maps to the (k+1)-st by the Leibniz rule. The result lives in a jet
    /// variable set extended by one order.
    pub fn diff_total(&self) -> MultiPoly<C> {
        let m = self.vars.len();
        let target = VarSet::jet(m); // orders 0..m, one past the input
        debug_assert_eq!(
            &target.names[..m],
            &self.vars.names[..],
            "diff_total expects jet variables"
        );
        let mut out = MultiPoly::zero(target.clone());
        for (mono, c) in &self.terms {
            for (k, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut exp = vec![0u32; target.len()];
                exp[..m].copy_from_slice(&mono.0);
                exp[k] -= 1;
                exp[k + 1] += 1;
                out.add_term(Monomial(exp), c.mul(&C::from_int(e as i64)));
            }
        }
        out
    }

    /// Embed a jet polynomial into a jet variable set of higher order.
    pub fn extend_jet(&self, max_order: usize) -> MultiPoly<C> {
        let m = self.vars.len();
        assert!(max_order + 1 >= m, "cannot shrink the jet");
        let target = VarSet::jet(max_order);
        let mut out = MultiPoly::zero(target.clone());
        for (mono, c) in &self.terms {
            let mut exp = vec![0u32; target.len()];
            exp[..m].copy_from_slice(&mono.0);
            out.add_term(Monomial(exp), c.clone());
        }
        out
    }
}

impl<C: Coeff> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest terms first reads better
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let cs = c.to_string();
            let (negative, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            if m.is_constant() {
                write!(f, "{mag}")?;
            } else {
                if mag != "1" {
                    write!(f, "{mag}*")?;
                }
                let mut first = true;
                for (j, &e) in m.0.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if !first {
                        write!(f, "*")?;
                    }
                    first = false;
                    if e == 1 {
                        write!(f, "{}", self.vars.name(j))?;
                    } else {
                        write!(f, "{}^{}", self.vars.name(j), e)?;
                    }
                }
            }
        }
        Ok(())
    }
}
