//! Reduction of a symmetric quadratic system to a single higher-order ODE.
//!
//! In the elementary symmetric coordinates s_k the system becomes
//! triangular:
//!
//! ```text
//! s_k' = g_{k+1}(s_1, ..., s_k) + c_k s_{k+1},   c_n = 0.
//! ```
//!
//! When every c_k (k < n) is nonzero, each s_{k+1} can be solved from the
//! k-th equation as a differential polynomial in h = s_1, and the last
//! equation collapses to one monic order-n ODE for h. When only c_{n-1}
//! vanishes, the (n-1)-st equation yields an ODE of order n-1 and the last
//! equation stays as a first-order linear ODE for s_n whose coefficients
//! are differential polynomials in h.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mpoly::{Monomial, MultiPoly, VarSet};
use crate::scalar::{Coeff, Scalar};
use crate::symfun::{discriminant_xi, elementary_xi, express_in_sigma, newton_in_sigma, vieta_image};
use crate::systems::{classify, Kind, SymmetricSystem};

/// The system in elementary symmetric coordinates, split per equation into
/// the remainder g_{k+1} and the constant c_k multiplying s_{k+1}.
#[derive(Clone, PartialEq, Debug)]
pub struct SigmaSystem<C: Coeff> {
    pub n: usize,
    /// rhs[k-1] = derivative of s_k, a polynomial in s_1..s_n.
    pub rhs: Vec<MultiPoly<C>>,
    /// c[k-1] = coefficient of s_{k+1} in rhs[k-1], for k = 1..n-1.
    pub c: Vec<C>,
    /// g[k-1] = rhs[k-1] - c_k s_{k+1}; free of s_{k+1}..s_n for k < n.
    pub g: Vec<MultiPoly<C>>,
}

/// Derive the triangular system: apply the derivation to each elementary
/// symmetric polynomial in coordinates, then rewrite in the s-basis.
pub fn sigma_system<C: Coeff>(sys: &SymmetricSystem<C>) -> SigmaSystem<C> {
    let n = sys.n();
    let svars = VarSet::sigma(n);
    let mut rhs = Vec::with_capacity(n);
    for k in 1..=n {
        let lsk = sys
            .lie_derivative(&elementary_xi(k, n))
            .expect("dimensions agree");
        let q = express_in_sigma(&lsk).expect("derivative of a symmetric polynomial is symmetric");
        debug_assert!(q.is_homogeneous_of(-4 * (k as i64 + 1)));
        rhs.push(q);
    }
    let mut c = Vec::with_capacity(n.saturating_sub(1));
    let mut g = Vec::with_capacity(n);
    for k in 1..=n {
        if k < n {
            let mut e = vec![0u32; n];
            e[k] = 1; // the monomial s_{k+1}
            let ck = rhs[k - 1].coeff(&Monomial(e.clone()));
            let lin = MultiPoly::from_term(svars.clone(), e, ck.clone());
            let gk = rhs[k - 1].sub(&lin);
            debug_assert!(
                gk.terms().all(|(m, _)| m.0[k..].iter().all(|&x| x == 0)),
                "remainder must be free of s_{{k+1}}..s_n"
            );
            c.push(ck);
            g.push(gk);
        } else {
            g.push(rhs[k - 1].clone());
        }
    }
    SigmaSystem { n, rhs, c, g }
}

/// Independent route to the same right-hand sides, driven entirely by the
/// Newton power-sum recurrence and the classical identities; never touches
/// the coordinate-space derivation.
pub fn sigma_system_newton_oracle<C: Coeff>(sys: &SymmetricSystem<C>) -> Vec<MultiPoly<C>> {
    let n = sys.n();
    let svars = VarSet::sigma(n);
    let pin: Vec<MultiPoly<C>> = (0..=n + 1).map(|i| newton_in_sigma(i, n)).collect();
    let p1sq = pin[1].mul(&pin[1]);
    // p_i' = i (alpha p_{i+1} + beta p_i p_1 + gamma p_{i-1} p_1^2
    //          + delta p_{i-1} p_2)
    let pprime = |i: usize| -> MultiPoly<C> {
        if i == 0 {
            return MultiPoly::zero(svars.clone());
        }
        pin[i + 1]
            .scale(sys.alpha())
            .add(&pin[i].mul(&pin[1]).scale(sys.beta()))
            .add(&pin[i - 1].mul(&p1sq).scale(sys.gamma()))
            .add(&pin[i - 1].mul(&pin[2]).scale(sys.delta()))
            .scale(&C::from_int(i as i64))
    };
    // k s_k' = sum_{i=1}^{k} (-1)^{i-1} (s_{k-i}' p_i + s_{k-i} p_i'),
    // with s_0 = 1, s_0' = 0, recursing on already-known s_j'.
    let mut rhs: Vec<MultiPoly<C>> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut acc = MultiPoly::zero(svars.clone());
        let mut sign = C::one();
        for i in 1..=k {
            let sprev = if k - i == 0 {
                MultiPoly::constant(svars.clone(), C::one())
            } else {
                MultiPoly::var(svars.clone(), k - i - 1)
            };
            let sprev_d = if k - i == 0 {
                MultiPoly::zero(svars.clone())
            } else {
                rhs[k - i - 1].clone()
            };
            let term = sprev_d.mul(&pin[i]).add(&sprev.mul(&pprime(i)));
            acc = acc.add(&term.scale(&sign));
            sign = sign.neg();
        }
        rhs.push(acc.scale(&C::one().div(&C::from_int(k as i64))));
    }
    rhs
}

/// Extend the derivation to the s-coordinates by the chain rule.
pub fn apply_l_sigma<C: Coeff>(ss: &SigmaSystem<C>, p: &MultiPoly<C>) -> MultiPoly<C> {
    let mut out = MultiPoly::zero(p.vars().clone());
    for k in 0..ss.n {
        let dk = p.partial(k);
        if dk.is_zero() {
            continue;
        }
        out = out.add(&dk.mul(&ss.rhs[k]));
    }
    out
}

/// Monic graded ODE of a given order for the unknown h: the top derivative
/// plus a sum of coefficient-weighted monomials in (h, h', ..., h^(order-1)).
#[derive(Clone, PartialEq, Debug)]
pub struct ReducedODE<C: Coeff> {
    order: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> ReducedODE<C> {
    pub fn new(order: usize, terms: BTreeMap<Monomial, C>) -> Self {
        let ode = ReducedODE { order, terms };
        debug_assert!(ode.is_graded());
        ode
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, omega: &[u32]) -> C {
        self.terms
            .get(&Monomial(omega.to_vec()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// Every stored multi-index satisfies the homogeneity constraint
    /// sum_k i_k * 4(k) ... i.e. weight -4(order + 1) under the jet grading.
    pub fn is_graded(&self) -> bool {
        let jet = VarSet::jet(self.order.saturating_sub(1));
        self.terms
            .keys()
            .all(|m| jet.monomial_weight(m) == -4 * (self.order as i64 + 1))
    }

    /// The ODE satisfied by mu * h when h satisfies self.
    pub fn rescale(&self, mu: &C) -> Result<ReducedODE<C>> {
        if mu.is_zero() {
            return Err(Error::ZeroScale);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, lam)| {
                let total: i64 = m.total_degree() as i64;
                (m.clone(), lam.mul(&mu.powi(1 - total)))
            })
            .collect();
        Ok(ReducedODE {
            order: self.order,
            terms,
        })
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> ReducedODE<D> {
        ReducedODE {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), f(c)))
                .collect(),
        }
    }

    /// Render as "h^(n) + ... = 0", top derivative first.
    pub fn display(&self) -> String {
        let jet = VarSet::jet(self.order);
        let top = jet.name(self.order).to_string();
        if self.terms.is_empty() {
            return format!("{top} = 0");
        }
        let mut rest = MultiPoly::<C>::zero(VarSet::jet(self.order.saturating_sub(1)));
        for (m, c) in &self.terms {
            rest = rest.add(&MultiPoly::from_term(
                rest.vars().clone(),
                m.0.clone(),
                c.clone(),
            ));
        }
        let rest_str = rest.to_string();
        match rest_str.strip_prefix('-') {
            Some(tail) => format!("{top} - {tail} = 0"),
            None => format!("{top} + {rest_str} = 0"),
        }
    }
}

impl<C: Coeff> Serialize for ReducedODE<C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            omega: Vec<u32>,
            lambda: Scalar,
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(m, c)| Term {
                omega: m.0.clone(),
                lambda: c.to_scalar(),
            })
            .collect();
        let mut st = serializer.serialize_struct("ReducedODE", 2)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

impl<'de, C: Coeff> Deserialize<'de> for ReducedODE<C> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Term {
            omega: Vec<u32>,
            lambda: Scalar,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            order: usize,
            terms: Vec<Term>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut terms = BTreeMap::new();
        for t in raw.terms {
            if t.omega.len() != raw.order {
                return Err(serde::de::Error::custom("omega length != order"));
            }
            let c = C::try_from_scalar(&t.lambda)
                .ok_or_else(|| serde::de::Error::custom("lambda mode mismatch"))?;
            terms.insert(Monomial(t.omega), c);
        }
        Ok(ReducedODE {
            order: raw.order,
            terms,
        })
    }
}

/// Output of the generic reduction: the order-n ODE for h = s_1 and the
/// differential polynomials recovering s_2..s_n from the jet of h.
#[derive(Clone, PartialEq, Debug)]
pub struct ReductionData<C: Coeff> {
    pub ode: ReducedODE<C>,
    /// sigma_exprs[k-1] expresses s_k through (h, ..., h^(n-1)); the first
    /// entry is h itself.
    pub sigma_exprs: Vec<MultiPoly<C>>,
}

/// Output of the almost-generic reduction: an order-(n-1) ODE, the
/// differential polynomials for s_1..s_{n-1}, and the linear first-order
/// equation s_n' = c s_1 s_n + g(jet of h).
#[derive(Clone, PartialEq, Debug)]
pub struct AlmostGenericReduction<C: Coeff> {
    pub ode: ReducedODE<C>,
    pub sigma_exprs: Vec<MultiPoly<C>>,
    pub last_linear: (C, MultiPoly<C>),
}

/// Solve s_{k+1} from equation k for k = 1..upto-1; expressions come back
/// over the jet variable set of order `jet_order`.
fn solve_exprs<C: Coeff>(
    ss: &SigmaSystem<C>,
    upto: usize,
    jet_order: usize,
) -> Result<Vec<MultiPoly<C>>> {
    let n = ss.n;
    let mut exprs: Vec<MultiPoly<C>> = vec![MultiPoly::var(VarSet::jet(0), 0)];
    for k in 1..upto {
        if ss.c[k - 1].is_zero() {
            return Err(Error::NotGeneric(k));
        }
        let d = exprs[k - 1].diff_total(); // over jet(k)
        let images: Vec<MultiPoly<C>> = (0..n)
            .map(|j| {
                if j < k {
                    exprs[j].extend_jet(k)
                } else {
                    MultiPoly::zero(VarSet::jet(k))
                }
            })
            .collect();
        let g_sub = ss.g[k - 1].substitute(&images);
        let next = d.sub(&g_sub).scale(&C::one().div(&ss.c[k - 1]));
        debug_assert!(next.is_homogeneous_of(-4 * (k as i64 + 1)));
        exprs.push(next);
    }
    Ok(exprs.into_iter().map(|e| e.extend_jet(jet_order)).collect())
}

/// Turn the eliminated equation (a jet polynomial linear in the top
/// derivative with constant coefficient) into a monic ODE.
fn monic_ode<C: Coeff>(e: &MultiPoly<C>, order: usize) -> ReducedODE<C> {
    let width = e.vars().len();
    assert_eq!(width, order + 1);
    let mut lead_exp = vec![0u32; width];
    lead_exp[order] = 1;
    let lead = e.coeff(&Monomial(lead_exp.clone()));
    assert!(
        !lead.is_zero(),
        "top derivative dropped out of the eliminated equation"
    );
    let mut terms = BTreeMap::new();
    for (m, c) in e.terms() {
        if m.0 == lead_exp {
            continue;
        }
        assert!(
            m.0[order] == 0,
            "eliminated equation must be linear in the top derivative"
        );
        terms.insert(Monomial(m.0[..order].to_vec()), c.div(&lead));
    }
    ReducedODE::new(order, terms)
}

/// Generic reduction: one monic order-n ODE plus differential polynomials
/// for s_2..s_n.
pub fn reduce_generic<C: Coeff>(sys: &SymmetricSystem<C>) -> Result<ReductionData<C>> {
    let cls = classify(sys);
    if cls.kind != Kind::Generic {
        let k = cls.c.iter().position(|c| c.is_zero()).unwrap_or(0) + 1;
        return Err(Error::NotGeneric(k));
    }
    let n = sys.n();
    let ss = sigma_system(sys);
    let exprs = solve_exprs(&ss, n, n.saturating_sub(1))?;
    // last equation: D(expr for s_n) = g_{n+1}(s_1..s_n)
    let d = exprs[n - 1].extend_jet(n.saturating_sub(1)).diff_total();
    let images: Vec<MultiPoly<C>> = exprs.iter().map(|e| e.extend_jet(n)).collect();
    let g_sub = ss.g[n - 1].substitute(&images);
    let e = d.sub(&g_sub);
    debug_assert!(e.is_homogeneous_of(-4 * (n as i64 + 1)));
    Ok(ReductionData {
        ode: monic_ode(&e, n),
        sigma_exprs: exprs,
    })
}

/// Almost-generic reduction (n = 2 or 3 only; larger almost-generic systems
/// are generic): an order-(n-1) ODE for h and a linear first-order equation
/// for s_n.
pub fn reduce_almost_generic<C: Coeff>(
    sys: &SymmetricSystem<C>,
) -> Result<AlmostGenericReduction<C>> {
    let cls = classify(sys);
    if cls.kind != Kind::AlmostGenericOnly {
        return Err(Error::NotAlmostGeneric);
    }
    let n = sys.n();
    debug_assert!(n == 2 || n == 3);
    let ss = sigma_system(sys);
    let exprs = solve_exprs(&ss, n - 1, n.saturating_sub(2))?;
    // equation n-1 becomes the ODE (c_{n-1} = 0)
    let d = exprs[n - 2].extend_jet(n - 2).diff_total();
    let images_mid: Vec<MultiPoly<C>> = (0..n)
        .map(|j| {
            if j < n - 1 {
                exprs[j].extend_jet(n - 1)
            } else {
                MultiPoly::zero(VarSet::jet(n - 1))
            }
        })
        .collect();
    let g_sub = ss.g[n - 2].substitute(&images_mid);
    let e = d.sub(&g_sub);
    let ode = monic_ode(&e, n - 1);

    // last equation: s_n' = c s_1 s_n + g, with g free of s_n by grading
    let mut lin_exp = vec![0u32; n];
    lin_exp[0] = 1;
    lin_exp[n - 1] = 1;
    let c_lin = ss.rhs[n - 1].coeff(&Monomial(lin_exp.clone()));
    let svars = VarSet::sigma(n);
    let rest = ss.rhs[n - 1].sub(&MultiPoly::from_term(svars, lin_exp, c_lin.clone()));
    debug_assert!(
        rest.terms().all(|(m, _)| m.0[n - 1] == 0),
        "after removing the linear part nothing may depend on s_n"
    );
    let images_last: Vec<MultiPoly<C>> = (0..n)
        .map(|j| {
            if j < n - 1 {
                exprs[j].clone()
            } else {
                MultiPoly::zero(VarSet::jet(n - 2))
            }
        })
        .collect();
    let g_lin = rest.substitute(&images_last);
    debug_assert!(g_lin.is_homogeneous_of(-4 * (n as i64 + 1)));
    Ok(AlmostGenericReduction {
        ode,
        sigma_exprs: exprs,
        last_linear: (c_lin, g_lin),
    })
}

/// Jet polynomials of h = s_1 along the flow: [s_1, L s_1, L^2 s_1, ...].
pub fn sigma1_jet_polys<C: Coeff>(ss: &SigmaSystem<C>, count: usize) -> Vec<MultiPoly<C>> {
    let mut out = Vec::with_capacity(count);
    let mut p = MultiPoly::var(VarSet::sigma(ss.n), 0);
    for _ in 0..count {
        out.push(p.clone());
        p = apply_l_sigma(ss, &p);
    }
    out
}

/// Initial data (h, h', ..., h^(n-1)) at a point with pairwise distinct
/// coordinates.
pub fn initial_jets<C: Coeff>(sys: &SymmetricSystem<C>, x0: &[C]) -> Result<Vec<C>> {
    let n = sys.n();
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x0.len(),
        });
    }
    if n >= 2 && discriminant_xi::<C>(n).eval(x0).is_zero() {
        return Err(Error::DegenerateInitialData);
    }
    let ss = sigma_system(sys);
    let svals = vieta_image(x0);
    Ok(sigma1_jet_polys(&ss, n)
        .iter()
        .map(|p| p.eval(&svals))
        .collect())
}

/// The ODE satisfied by mu * h when h satisfies `ode`.
pub fn rescale_ode<C: Coeff>(ode: &ReducedODE<C>, mu: &C) -> Result<ReducedODE<C>> {
    ode.rescale(mu)
}

/// Parameter of the cubic-family equation produced by the two-parameter
/// Darboux-Halphen generalization: c = b^2 / (4 (a + 2b)(a - b)).
pub fn chazy_c<C: Coeff>(a: &C, b: &C) -> Result<C> {
    let two = C::from_int(2);
    let denom = a.add(&two.mul(b)).mul(&a.sub(b)).mul(&C::from_int(4));
    if denom.is_zero() {
        return Err(Error::GenericityViolated);
    }
    Ok(b.mul(b).div(&denom))
}
