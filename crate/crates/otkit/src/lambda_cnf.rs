//! Undecorated normal forms in base `L`, vector assignments, and the
//! small slice of term arithmetic needed to substitute `L` by an
//! omega tower.

use crate::order::{ord_cmp, EQ, GT, LT};
use crate::term::{ETerm, Kind, Term};
use crate::validity::is_irreducible;
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("vector is not irreducible")]
    NotIrreducible,
    #[error("slice index must be at least 1")]
    BadSlice,
}

/// `sum L^exp * coef`, exponents strictly decreasing; empty is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LambdaCnf(pub Vec<(LambdaCnf, Term)>);

impl LambdaCnf {
    pub fn zero() -> LambdaCnf {
        LambdaCnf(vec![])
    }

    pub fn one() -> LambdaCnf {
        LambdaCnf::constant(Term::one())
    }

    pub fn constant(c: Term) -> LambdaCnf {
        if c.is_zero() {
            LambdaCnf::zero()
        } else {
            LambdaCnf(vec![(LambdaCnf::zero(), c)])
        }
    }

    /// `L^x`.
    pub fn power(x: LambdaCnf) -> LambdaCnf {
        LambdaCnf(vec![(x, Term::one())])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Drops decorations.
    pub fn from_eterm(x: &ETerm) -> LambdaCnf {
        LambdaCnf(x.monos().iter().map(|(e, t)| (LambdaCnf::from_eterm(e), t.coeff.clone())).collect())
    }
}

impl Ord for LambdaCnf {
    fn cmp(&self, other: &LambdaCnf) -> Ordering {
        for ((e, c), (f, d)) in self.0.iter().zip(&other.0) {
            match e.cmp(f).then_with(|| ord_cmp(c, d)) {
                EQ => continue,
                o => return o,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for LambdaCnf {
    fn partial_cmp(&self, other: &LambdaCnf) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for LambdaCnf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "L^({})*{}", e, c)?;
        }
        Ok(())
    }
}

/// Ordinary addition: monomials of `x` below the head of `y` are absorbed.
pub fn cnf_add(x: &LambdaCnf, y: &LambdaCnf) -> LambdaCnf {
    let Some((ye, yc)) = y.0.first() else {
        return x.clone();
    };
    let mut out: Vec<(LambdaCnf, Term)> = x.0.iter().filter(|(e, _)| e.cmp(ye) == GT).cloned().collect();
    let mut rest = y.0.clone();
    if let Some((_, xc)) = x.0.iter().find(|(e, _)| e.cmp(ye) == EQ) {
        rest[0] = (ye.clone(), term_add(xc, yc));
    }
    out.extend(rest);
    LambdaCnf(out)
}

/// Natural (commutative) sum.
pub fn nat_sum(x: &LambdaCnf, y: &LambdaCnf) -> LambdaCnf {
    let mut out: Vec<(LambdaCnf, Term)> = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < x.0.len() || j < y.0.len() {
        let o = match (x.0.get(i), y.0.get(j)) {
            (Some((e, _)), Some((f, _))) => e.cmp(f),
            (Some(_), None) => GT,
            _ => LT,
        };
        match o {
            GT => {
                out.push(x.0[i].clone());
                i += 1;
            }
            LT => {
                out.push(y.0[j].clone());
                j += 1;
            }
            EQ => {
                out.push((x.0[i].0.clone(), term_nat_sum(&x.0[i].1, &y.0[j].1)));
                i += 1;
                j += 1;
            }
        }
    }
    LambdaCnf(out)
}

/// `L_i(x)`: `L_0(x) = x`, `L_{i+1}(x) = L^{L_i(x)}`.
pub fn lambda_tower(i: usize, x: &LambdaCnf) -> LambdaCnf {
    (0..i).fold(x.clone(), |acc, _| LambdaCnf::power(acc))
}

/// `o(v) = # { L_{i-1}(v_i + 1) : v_i != 0 }` with `i` running over `2..N`.
pub fn o_assign(v: &[ETerm]) -> Result<LambdaCnf, CnfError> {
    if !is_irreducible(v) {
        return Err(CnfError::NotIrreducible);
    }
    let mut acc = LambdaCnf::zero();
    for (j, x) in v.iter().enumerate() {
        if !x.is_zero() {
            let succ = cnf_add(&LambdaCnf::from_eterm(x), &LambdaCnf::one());
            acc = nat_sum(&acc, &lambda_tower(j + 1, &succ));
        }
    }
    Ok(acc)
}

/// `o(v)` with `L` read as `omega_n(K+1)`.
pub fn o_assign_n(v: &[ETerm], n: usize) -> Result<Term, CnfError> {
    if n == 0 {
        return Err(CnfError::BadSlice);
    }
    let o = o_assign(v)?;
    Ok(substitute(&o, &omega_tower(n - 1)))
}

/// Value of a normal form with `L = omega^e`.
pub fn substitute(x: &LambdaCnf, e: &Term) -> Term {
    let mut acc = Term::zero();
    for (exp, c) in &x.0 {
        let ex = term_mul(e, &substitute(exp, e));
        for part in c.parts() {
            acc = term_add(&acc, &omega_pow(&term_add(&ex, &log(part))));
        }
    }
    acc
}

/// `omega_0(K+1) = K+1`, `omega_{m+1}(K+1) = w^(omega_m(K+1))`.
pub fn omega_tower(n: usize) -> Term {
    let base = Term::sum(vec![Term::kappa(), Term::one()]);
    (0..n).fold(base, |acc, _| Term::omega_exp(acc))
}

/// Ordinal sum of two normal-form terms.
pub fn term_add(x: &Term, y: &Term) -> Term {
    let ys = y.parts();
    let Some(head) = ys.first() else {
        return x.clone();
    };
    let mut parts: Vec<Term> = x.parts().iter().filter(|p| ord_cmp(p, head) != LT).cloned().collect();
    parts.extend(ys.iter().cloned());
    Term::sum(parts)
}

/// Natural sum of two normal-form terms.
pub fn term_nat_sum(x: &Term, y: &Term) -> Term {
    let mut parts: Vec<Term> = x.parts().iter().chain(y.parts()).cloned().collect();
    parts.sort_by(|a, b| crate::order::compare(b, a));
    Term::sum(parts)
}

/// Exponent of an additive principal term: `w^b -> b`; epsilon numbers
/// and larger critical points map to themselves.
pub fn log(p: &Term) -> Term {
    match p.kind() {
        Kind::Phi(a, g) if a.is_zero() => g.clone(),
        Kind::OmegaExp(b) => b.clone(),
        _ => p.clone(),
    }
}

/// `omega^x` in normal form.
pub fn omega_pow(x: &Term) -> Term {
    if x.is_zero() {
        return Term::one();
    }
    match ord_cmp(x, &Term::kappa()) {
        EQ => Term::kappa(),
        GT => Term::omega_exp(x.clone()),
        LT => {
            let fixed = x.parts().len() == 1 && &log(x) == x && !matches!(x.kind(), Kind::Phi(a, _) if a.is_zero());
            if fixed {
                x.clone()
            } else {
                Term::phi(Term::zero(), x.clone())
            }
        }
    }
}

/// Ordinal product.
pub fn term_mul(x: &Term, y: &Term) -> Term {
    let Some(lead) = x.parts().first() else {
        return Term::zero();
    };
    let lead_log = log(lead);
    let mut acc = Term::zero();
    for part in y.parts() {
        let l = log(part);
        let piece = if l.is_zero() { x.clone() } else { omega_pow(&term_add(&lead_log, &l)) };
        acc = term_add(&acc, &piece);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::compare;
    use crate::term::Config;

    fn lam() -> LambdaCnf {
        LambdaCnf::power(LambdaCnf::one())
    }

    #[test]
    fn addition() {
        let one = LambdaCnf::one();
        assert_eq!(cnf_add(&LambdaCnf::zero(), &lam()), lam());
        assert_eq!(cnf_add(&one, &lam()), lam());
        assert_eq!(nat_sum(&lam(), &one), LambdaCnf(vec![lam().0[0].clone(), one.0[0].clone()]));
        assert_eq!(nat_sum(&one, &lam()), nat_sum(&lam(), &one));
        let two = cnf_add(&one, &one);
        assert_eq!(two, LambdaCnf::constant(Term::nat(2)));
    }

    #[test]
    fn towers() {
        let x = lam();
        assert_eq!(lambda_tower(0, &x), x);
        assert_eq!(lambda_tower(1, &LambdaCnf::zero()), LambdaCnf::one());
        assert_eq!(lambda_tower(2, &LambdaCnf::zero()), lam());
    }

    #[test]
    fn assignment() {
        assert_eq!(o_assign(&Config::new(4).zero_vec()), Ok(LambdaCnf::zero()));
        // (1) with N = 3: L_1(1 + 1) = L^2
        let o = o_assign(&[ETerm::one()]).unwrap();
        assert_eq!(o, LambdaCnf::power(LambdaCnf::constant(Term::nat(2))));
    }

    #[test]
    fn omega_towers_increase() {
        assert_eq!(omega_tower(1), Term::omega_exp(Term::sum(vec![Term::kappa(), Term::one()])));
        for n in 0..4 {
            assert_eq!(compare(&omega_tower(n), &omega_tower(n + 1)), LT);
        }
    }

    #[test]
    fn term_arithmetic() {
        let w = Term::omega();
        assert_eq!(term_add(&Term::one(), &w), w);
        assert_eq!(term_add(&w, &Term::one()), Term::sum(vec![w.clone(), Term::one()]));
        assert_eq!(omega_pow(&Term::one()), w);
        assert_eq!(omega_pow(&Term::kappa()), Term::kappa());
        // omega * omega = omega^2
        assert_eq!(term_mul(&w, &w), omega_pow(&Term::nat(2)));
        assert_eq!(term_mul(&Term::nat(3), &Term::one()), Term::nat(3));
        // substituting L = w^(K+1) in L^1
        let e = omega_tower(0);
        assert_eq!(substitute(&lam(), &e), omega_tower(1));
    }
}
