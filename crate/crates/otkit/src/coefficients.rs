//! Coefficient sets and the predecessor skeleton.

use crate::order::{compare, le, lt, ord_cmp, predecessor, set_lt, LT};
use crate::term::{eset, vec_coeffs, Config, ETerm, Kind, MVector, Term};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("{0} is not below K")]
    NotBelowKappa(String),
    #[error("hull base {0} must be 0, K or a collapsing term")]
    BadHullBase(String),
}

/// Finite set of terms, sorted by the term order and deduplicated.
pub type TermSet = Vec<Term>;

pub fn normalize(mut xs: Vec<Term>) -> TermSet {
    xs.sort_by(compare);
    xs.dedup();
    xs
}

/// Coefficients at or above `delta`.
pub fn kdelta(delta: &Term, alpha: &Term) -> TermSet {
    let mut out = Vec::new();
    kdelta_into(delta, alpha, &mut out);
    normalize(out)
}

fn kdelta_into(delta: &Term, alpha: &Term, out: &mut Vec<Term>) {
    match alpha.kind() {
        Kind::Zero | Kind::Kappa => {}
        Kind::Sum(ps) => ps.iter().for_each(|p| kdelta_into(delta, p, out)),
        Kind::Phi(b, g) => {
            kdelta_into(delta, b, out);
            kdelta_into(delta, g, out);
        }
        Kind::OmegaExp(b) | Kind::OmegaIdx(b) => kdelta_into(delta, b, out),
        Kind::Psi(pi, nu, a) => {
            if ord_cmp(alpha, delta) == LT {
                return;
            }
            out.push(a.clone());
            kdelta_into(delta, a, out);
            kdelta_into(delta, pi, out);
            for b in vec_coeffs(nu) {
                kdelta_into(delta, &b, out);
            }
        }
    }
}

/// Coefficients at or above `delta` of every triple in an exponent term.
pub fn kdelta_eterm(delta: &Term, xi: &ETerm) -> TermSet {
    let mut out = Vec::new();
    for t in xi.triples() {
        kdelta_into(delta, &t.coeff, &mut out);
    }
    normalize(out)
}

/// Membership in the hull of `delta` below stage `gamma`, decided through
/// the coefficient set.
pub fn in_hull(gamma: &Term, delta: &Term, alpha: &Term) -> Result<bool, CoeffError> {
    if !(delta.is_zero() || delta.is_kappa() || delta.is_psi()) {
        return Err(CoeffError::BadHullBase(delta.to_string()));
    }
    Ok(set_lt(&kdelta(delta, alpha), gamma))
}

/// Anchor of a collapsing term.
pub fn pd(alpha: &Term) -> Option<Term> {
    alpha.as_psi().map(|(p, _, _)| p.clone())
}

pub fn pd_iter(n: usize, alpha: &Term) -> Option<Term> {
    let mut cur = alpha.clone();
    for _ in 0..n {
        cur = pd(&cur)?;
    }
    Some(cur)
}

/// `pi` strictly below `kappa` in the anchor chain.
pub fn prec_lt(pi: &Term, kappa: &Term) -> bool {
    let mut cur = pi.clone();
    while let Some(p) = pd(&cur) {
        if &p == kappa {
            return true;
        }
        cur = p;
    }
    false
}

pub fn pd_star(pi: &Term, kappa: &Term) -> bool {
    pi == kappa || prec_lt(pi, kappa)
}

/// Anchor, argument and vector coefficients of a collapsing term.
fn psi_parts(psi: &Term) -> Vec<Term> {
    let (p, v, a) = psi.as_psi().unwrap();
    let mut out = vec![p.clone(), a.clone()];
    out.extend(vec_coeffs(v));
    out
}

fn over_eset(alpha: &Term, f: &dyn Fn(&Term) -> Vec<Term>) -> TermSet {
    normalize(eset(alpha).iter().flat_map(f).collect())
}

fn over_all(xs: &[Term], f: &dyn Fn(&Term) -> TermSet) -> Vec<Term> {
    xs.iter().flat_map(f).collect()
}

pub fn g_kappa(kappa: &Term, alpha: &Term) -> TermSet {
    over_eset(alpha, &|psi| {
        let pi = pd(psi).unwrap();
        if pd_star(&pi, kappa) {
            vec![psi.clone()]
        } else if lt(kappa, &pi) {
            over_all(&psi_parts(psi), &|x| g_kappa(kappa, x))
        } else {
            g_kappa(kappa, &pi)
        }
    })
}

pub fn f_delta(delta: &Term, alpha: &Term) -> TermSet {
    over_eset(alpha, &|psi| {
        if lt(psi, delta) {
            vec![psi.clone()]
        } else {
            over_all(&psi_parts(psi), &|x| f_delta(delta, x))
        }
    })
}

pub fn k_small(delta: &Term, alpha: &Term) -> TermSet {
    over_eset(alpha, &|psi| {
        if lt(psi, delta) {
            vec![]
        } else {
            let mut out = vec![psi.clone()];
            out.extend(over_all(&psi_parts(psi), &|x| k_small(delta, x)));
            out
        }
    })
}

pub fn f_delta_set(delta: &Term, xs: &[Term]) -> TermSet {
    normalize(over_all(xs, &|x| f_delta(delta, x)))
}

/// The vector `m(alpha)` of a term below `K`.
pub fn m_vec(alpha: &Term, cfg: Config) -> Result<MVector, CoeffError> {
    if !lt(alpha, &Term::kappa()) {
        return Err(CoeffError::NotBelowKappa(alpha.to_string()));
    }
    Ok(match alpha.kind() {
        Kind::Psi(_, v, _) => v.clone(),
        Kind::OmegaIdx(b) if predecessor(b).is_some() => {
            let mut v = cfg.zero_vec();
            v[0] = ETerm::one();
            v
        }
        _ => cfg.zero_vec(),
    })
}

/// Entry `k` (in `2..N`) of `m(alpha)`.
pub fn m_k(alpha: &Term, k: usize, cfg: Config) -> Result<ETerm, CoeffError> {
    assert!((2..cfg.levels).contains(&k), "level {k} out of range");
    Ok(m_vec(alpha, cfg)?[k - 2].clone())
}

/// Every member of `xs` is at most some member of `ys`.
pub fn all_le(xs: &[Term], ys: &[Term]) -> bool {
    xs.iter().all(|x| ys.iter().any(|y| le(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s, Config::new(3)).unwrap()
    }

    #[test]
    fn kdelta_clauses() {
        let p = t("psi(Om(phi(0,0)); 0)");
        assert!(kdelta(&p, &Term::zero()).is_empty());
        assert_eq!(kdelta(&p, &p), vec![Term::zero()]);
        let q = t("psi(Om(phi(0,0)); phi(0,0))");
        assert!(kdelta(&q, &p).is_empty());
        assert_eq!(kdelta(&p, &q), vec![Term::one()]);
        assert!(kdelta(&Term::kappa(), &q).is_empty());
    }

    #[test]
    fn hull_membership() {
        let p = t("psi(Om(phi(0,0)); 0)");
        assert_eq!(in_hull(&Term::one(), &p, &p), Ok(true));
        assert_eq!(in_hull(&Term::zero(), &p, &p), Ok(false));
        assert_eq!(in_hull(&Term::zero(), &p, &Term::zero()), Ok(true));
        assert!(in_hull(&Term::one(), &Term::one(), &p).is_err());
    }

    #[test]
    fn anchors() {
        let p = t("psi(Om(phi(0,0)); 0)");
        assert_eq!(pd(&p), Some(Term::big_omega()));
        assert!(prec_lt(&p, &Term::big_omega()));
        assert!(pd_star(&p, &p));
        assert!(!prec_lt(&Term::big_omega(), &p));
        assert_eq!(pd(&Term::one()), None);
    }

    #[test]
    fn coefficient_sets() {
        let p = t("psi(Om(phi(0,0)); 0)");
        assert!(g_kappa(&Term::kappa(), &Term::zero()).is_empty());
        let q = t("psi(K; 0)");
        assert_eq!(f_delta(&q, &p), vec![p.clone()]);
        assert!(k_small(&q, &p).is_empty());
        assert_eq!(k_small(&p, &p), vec![p.clone()]);
        assert_eq!(g_kappa(&Term::big_omega(), &p), vec![p.clone()]);
    }

    #[test]
    fn m_vectors() {
        let c = Config::new(4);
        assert_eq!(m_k(&Term::one(), 2, c), Ok(ETerm::Zero));
        assert_eq!(m_k(&Term::big_omega(), 2, c), Ok(ETerm::one()));
        assert_eq!(m_k(&Term::big_omega(), 3, c), Ok(ETerm::Zero));
        assert!(m_vec(&Term::kappa(), c).is_err());
        let v = vec![ETerm::Zero, ETerm::ktriple(Term::one(), Term::one())];
        let a = Term::psi(Term::kappa(), v.clone(), Term::one());
        assert_eq!(m_vec(&a, c), Ok(v));
    }
}
