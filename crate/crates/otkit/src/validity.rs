//! Membership in the notation system and in its slices, irreducibility of
//! vectors, and the next regular term above a term.

use crate::coefficients::{kdelta, m_vec};
use crate::lambda_cnf::{cnf_add, lambda_tower, omega_tower, term_add, LambdaCnf};
use crate::order::{ecmp, le, lt, lt_ksl, lt_zero, ord_cmp, predecessor, set_lt, st, tail_mono, te_iter, GT, LT};
use crate::term::{vec_is_zero, Config, ETerm, Kind, Mono, Term, Triple};
use dashmap::DashMap;
use once_cell::sync::Lazy;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub clause: &'static str,
    pub subterm: String,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.clause, self.subterm, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidityReport {
    pub ok: bool,
    pub failures: Vec<Failure>,
}

/// Which formation rule produced a collapsing term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Clause {
    /// Zero vector.
    Plain,
    /// Anchor `K`, vector `0,...,0,<b,K,a>`.
    KCollapse,
    /// Stepping down from the anchor at level `k`.
    Step { k: usize },
    /// Vector below `m_2` of the anchor, with the least `<_Ksl` witness.
    Below { witness: Vec<usize> },
}

static MEMO: Lazy<DashMap<(Term, usize), bool>> = Lazy::new(DashMap::new);
const MEMO_CAP: usize = 1 << 21;

/// Memoized validity.
pub fn is_valid(alpha: &Term, cfg: Config) -> bool {
    let key = (alpha.clone(), cfg.levels);
    if let Some(v) = MEMO.get(&key) {
        return *v;
    }
    let ok = node_failures(alpha, cfg, true).is_empty();
    if MEMO.len() > MEMO_CAP {
        MEMO.clear();
    }
    MEMO.insert(key, ok);
    ok
}

/// Full diagnostic check, reporting failures in every invalid subterm.
pub fn check(alpha: &Term, cfg: Config) -> ValidityReport {
    let mut failures = Vec::new();
    collect(alpha, cfg, &mut failures);
    ValidityReport { ok: failures.is_empty(), failures }
}

fn collect(alpha: &Term, cfg: Config, out: &mut Vec<Failure>) {
    for c in alpha.children() {
        if !is_valid(&c, cfg) {
            collect(&c, cfg, out);
        }
    }
    out.extend(node_failures(alpha, cfg, false));
}

struct Sink<'a> {
    at: &'a Term,
    out: Vec<Failure>,
}

impl Sink<'_> {
    fn fail(&mut self, clause: &'static str, message: impl Into<String>) {
        self.out.push(Failure { clause, subterm: self.at.to_string(), message: message.into() });
    }

    fn require(&mut self, cond: bool, clause: &'static str, message: &str) {
        if !cond {
            self.fail(clause, message);
        }
    }
}

/// Failures at the root of `alpha`; with `deep`, invalid children count too.
fn node_failures(alpha: &Term, cfg: Config, deep: bool) -> Vec<Failure> {
    let mut s = Sink { at: alpha, out: Vec::new() };
    if deep && alpha.children().iter().any(|c| !is_valid(c, cfg)) {
        s.fail("subterm", "contains an invalid subterm");
        return s.out;
    }
    let kappa = Term::kappa();
    match alpha.kind() {
        Kind::Zero | Kind::Kappa => {}
        Kind::Sum(ps) => {
            s.require(ps.len() >= 2, "sum", "needs at least two parts");
            s.require(
                ps.iter().all(|p| !matches!(p.kind(), Kind::Sum(_) | Kind::Zero)),
                "sum",
                "parts must be nonzero additive principal terms",
            );
            s.require(ps.windows(2).all(|w| ord_cmp(&w[0], &w[1]) != LT), "sum", "parts must weakly decrease");
        }
        Kind::Phi(b, g) => {
            s.require(lt(b, &kappa) && lt(g, &kappa), "phi", "arguments must be below K");
            s.require(lt(b, alpha) && lt(g, alpha), "phi", "arguments must be below the value");
        }
        Kind::OmegaExp(b) => {
            s.require(lt(&kappa, b), "w", "exponent must exceed K");
            s.require(ord_cmp(alpha, b) == GT, "w", "w^b must exceed b");
        }
        Kind::OmegaIdx(b) => {
            s.require(lt(b, &kappa), "Om", "index must be below K");
            s.require(ord_cmp(alpha, b) == GT, "Om", "Om(b) must exceed b");
        }
        Kind::Psi(pi, nu, a) => psi_failures(&mut s, alpha, pi, nu, a, cfg),
    }
    s.out
}

fn triple_failures(s: &mut Sink, t: &Triple, cfg: Config) {
    for c in [&t.coeff, &t.anchor, &t.stage] {
        if !is_valid(c, cfg) {
            s.fail("triple", format!("component {} is invalid", c));
        }
    }
    s.require(!t.coeff.is_zero(), "triple", "coefficient must be positive");
    s.require(le(&t.coeff, &t.stage), "triple", "coefficient must not exceed the stage");
}

fn eterm_failures(s: &mut Sink, x: &ETerm, cfg: Config) {
    match x {
        ETerm::Zero => {}
        ETerm::KTriple(t) => triple_failures(s, t, cfg),
        ETerm::LSum(ms) => {
            for m in ms.iter() {
                s.require(!m.exp.is_zero(), "exponent", "exponents must be nonzero");
                eterm_failures(s, &m.exp, cfg);
                triple_failures(s, &m.coef, cfg);
            }
            s.require(
                ms.windows(2).all(|w| ecmp(&w[0].exp, &w[1].exp) == GT),
                "exponent",
                "exponents must strictly decrease",
            );
        }
    }
}

fn psi_failures(s: &mut Sink, alpha: &Term, pi: &Term, nu: &[ETerm], a: &Term, cfg: Config) {
    if nu.len() != cfg.width() {
        s.fail("psi", format!("vector has {} entries, expected {}", nu.len(), cfg.width()));
        return;
    }
    for x in nu {
        eterm_failures(s, x, cfg);
    }
    let kappa = Term::kappa();
    if !(pi.is_kappa() || lt(pi, &kappa)) {
        s.fail("psi", "anchor must be K or below K");
        return;
    }
    let bounded = set_lt(&kdelta(alpha, pi), a) && set_lt(&kdelta(alpha, a), a);
    let triples_bounded =
        || nu.iter().flat_map(|x| x.triples()).all(|t| le(&t.stage, a) && set_lt(&kdelta(alpha, &t.coeff), &t.coeff));
    if vec_is_zero(nu) {
        let regular = pi.is_kappa() || !vec_is_zero(&m_vec(pi, cfg).unwrap_or_default());
        s.require(regular, "psi.plain", "anchor must be K or carry a nonzero vector");
        s.require(bounded, "psi.plain", "K_alpha(anchor) and K_alpha(argument) must lie below the argument");
        return;
    }
    if pi.is_kappa() {
        match k_collapse_triple(nu, a) {
            Some(t) => {
                s.require(set_lt(&kdelta(alpha, &t.coeff), &t.coeff), "psi.kcollapse", "K_alpha(b) must lie below b");
                s.require(set_lt(&kdelta(alpha, a), a), "psi.kcollapse", "K_alpha(a) must lie below a");
            }
            None => s.fail("psi.kcollapse", "vector must be 0,...,0,<b,K,a> with a the argument"),
        }
        return;
    }
    s.require(is_strongly_irreducible(nu), "psi.vector", "vector must be strongly irreducible");
    s.require(triples_bounded(), "psi.coefficients", "every triple <b,p,c> needs c <= a and K_alpha(b) < b");
    s.require(bounded, "psi.coefficients", "K_alpha(anchor) and K_alpha(argument) must lie below the argument");
    let m = m_vec(pi, cfg).unwrap_or_else(|_| cfg.zero_vec());
    if step_level(pi, &m, nu, a).is_some() {
        return;
    }
    let mut why = Vec::new();
    if m[1..].iter().any(|x| !x.is_zero()) {
        why.push("anchor has nonzero entries above level 2");
    }
    if lt_ksl(nu, &m[0], cfg).is_none() {
        why.push("vector is not <_Ksl m_2(anchor)");
    }
    let tails_ok = nu.iter().filter_map(st).all(|t| set_lt(&kdelta(pi, &t.coeff), &t.stage));
    if !tails_ok {
        why.push("K_anchor(b_i) < a_i fails for some lowest triple");
    }
    if !why.is_empty() {
        s.fail("psi.step", "vector is not a step down from the anchor");
        s.fail("psi.below", why.join("; "));
    }
}

fn k_collapse_triple(nu: &[ETerm], a: &Term) -> Option<Triple> {
    let (last, init) = nu.split_last()?;
    match last {
        ETerm::KTriple(t) if vec_is_zero(init) && &t.stage == a => Some((**t).clone()),
        _ => None,
    }
}

/// The level `k` at which `nu` steps down from an anchor with vector `m`.
fn step_level(pi: &Term, m: &[ETerm], nu: &[ETerm], a: &Term) -> Option<usize> {
    let n = nu.len();
    (0..n.saturating_sub(1)).find_map(|j| {
        if m[j + 1].is_zero() || nu[..j] != m[..j] || !vec_is_zero(&nu[j + 1..]) {
            return None;
        }
        let ms = nu[j].monos();
        let (last, init) = ms.split_last()?;
        let (exp, t) = last;
        let matches =
            init.to_vec() == m[j].monos() && exp == &m[j + 1] && &t.anchor == pi && &t.stage == a && le(&t.coeff, a);
        matches.then_some(j + 2)
    })
}

/// Which clause built `alpha`, assuming it is valid.
pub fn clause_of(alpha: &Term, cfg: Config) -> Option<Clause> {
    let (pi, nu, a) = alpha.as_psi()?;
    if vec_is_zero(nu) {
        return Some(Clause::Plain);
    }
    if pi.is_kappa() {
        return Some(Clause::KCollapse);
    }
    let m = m_vec(pi, cfg).ok()?;
    if let Some(k) = step_level(pi, &m, nu, a) {
        return Some(Clause::Step { k });
    }
    lt_ksl(nu, &m[0], cfg).map(|witness| Clause::Below { witness })
}

/// `xi_i > 0` forces `Tl(xi_i) >= L_k(xi_{i+k} + 1)` whenever `xi_{i+k}` is
/// nonzero.
pub fn is_irreducible(v: &[ETerm]) -> bool {
    let one = LambdaCnf::one();
    for (i, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let tl = LambdaCnf::from_eterm(&tail_mono(x));
        for (k, y) in v.iter().enumerate().skip(i + 1) {
            if y.is_zero() {
                continue;
            }
            let bound = lambda_tower(k - i, &cnf_add(&LambdaCnf::from_eterm(y), &one));
            if tl.lt(&bound) {
                return false;
            }
        }
    }
    true
}

pub fn is_strongly_irreducible(v: &[ETerm]) -> bool {
    for i in 0..v.len() {
        if v[i].is_zero() {
            continue;
        }
        for j in i + 1..v.len() {
            if v[j].is_zero() {
                continue;
            }
            if !lt_zero(&v[j], &te_iter(j - i, &v[i])) || v[i + 1..j].iter().any(|x| x.is_zero()) {
                return false;
            }
        }
    }
    true
}

/// Extends entry `k` by `L^{v_{k+1}} t` and clears entry `k + 1`.
pub fn extend_at(v: &[ETerm], k: usize, t: Triple) -> Vec<ETerm> {
    let mut out = v.to_vec();
    let mut ms: Vec<Mono> = v[k].monos().into_iter().map(|(exp, coef)| Mono { exp, coef }).collect();
    ms.push(Mono { exp: v[k + 1].clone(), coef: t });
    out[k] = ETerm::lsum(ms);
    out[k + 1] = ETerm::Zero;
    out
}

/// Every subterm lies below `omega_n(K+1)`.
pub fn in_slice(alpha: &Term, n: usize) -> bool {
    let bound = omega_tower(n);
    alpha.all_subterms().iter().all(|s| lt(s, &bound))
}

/// Level of the largest cardinal `Om(l)` at or below `alpha < K`.
pub fn lev(alpha: &Term) -> Option<Term> {
    if !lt(alpha, &Term::kappa()) {
        return None;
    }
    Some(match alpha.kind() {
        Kind::Zero => Term::zero(),
        Kind::Sum(ps) => lev(&ps[0])?,
        Kind::Phi(b, g) => {
            let (x, y) = (lev(b)?, lev(g)?);
            if lt(&x, &y) {
                y
            } else {
                x
            }
        }
        Kind::OmegaIdx(b) => b.clone(),
        Kind::Psi(pi, _, _) => match pi.kind() {
            Kind::OmegaIdx(g) => match predecessor(g) {
                Some(gp) => gp,
                None => alpha.clone(),
            },
            _ => alpha.clone(),
        },
        Kind::Kappa | Kind::OmegaExp(_) => return None,
    })
}

/// Least successor cardinal above `alpha`, or `None` for infinity.
pub fn next_regular(alpha: &Term) -> Option<Term> {
    lev(alpha).map(|l| Term::omega_idx(term_add(&l, &Term::one())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_eterm, parse_term};

    fn t(s: &str, n: usize) -> Term {
        parse_term(s, Config::new(n)).unwrap()
    }

    #[test]
    fn basic_terms() {
        let c = Config::new(3);
        for s in ["0", "K", "phi(0,0)", "phi(0,0)+phi(0,0)", "Om(phi(0,0))", "w^(K+phi(0,0))", "psi(K; 0)"] {
            assert!(check(&t(s, 3), c).ok, "{s}");
        }
        for s in ["Om(0)", "phi(0,0)+K", "w^(phi(0,0))", "phi(K,0)", "0+0"] {
            assert!(!check(&t(s, 3), c).ok, "{s}");
        }
    }

    #[test]
    fn plain_collapses() {
        let c = Config::new(3);
        assert!(is_valid(&t("psi(Om(phi(0,0)); 0)", 3), c));
        // Om(w) is not a successor cardinal
        assert!(!is_valid(&t("psi(Om(phi(0,phi(0,0))); 0)", 3), c));
        assert_eq!(clause_of(&t("psi(K; 0)", 3), c), Some(Clause::Plain));
    }

    #[test]
    fn k_collapses() {
        let c = Config::new(3);
        let good = t("psi(K; <phi(0,0),K,phi(0,0)>; phi(0,0))", 3);
        assert!(check(&good, c).ok);
        assert_eq!(clause_of(&good, c), Some(Clause::KCollapse));
        let bad = t("psi(K; <phi(0,0),K,0>; 0)", 3);
        let r = check(&bad, c);
        assert!(!r.ok);
        assert!(r.failures.iter().any(|f| f.clause == "triple"));
    }

    #[test]
    fn irreducibility() {
        let c = Config::new(4);
        assert!(is_irreducible(&c.zero_vec()));
        assert!(is_strongly_irreducible(&c.zero_vec()));
        let one = ETerm::one();
        assert!(!is_irreducible(&[one.clone(), one.clone()]));
        assert!(is_irreducible(&[ETerm::Zero, one.clone()]));
        let big = parse_eterm("L^(L^(<phi(0,0)+phi(0,0),K,phi(0,0)+phi(0,0)>)*<K,K,K>)*<K,K,K>", c).unwrap();
        assert!(is_irreducible(&[big, one]));
    }

    #[test]
    fn regular_successors() {
        assert_eq!(next_regular(&Term::zero()), Some(Term::big_omega()));
        let om2 = t("Om(phi(0,0)+phi(0,0))", 3);
        assert_eq!(next_regular(&Term::big_omega()), Some(om2.clone()));
        assert_eq!(next_regular(&t("psi(Om(phi(0,0)+phi(0,0)); 0)", 3)), Some(om2));
        assert_eq!(next_regular(&Term::kappa()), None);
    }

    #[test]
    fn slices() {
        assert!(in_slice(&Term::zero(), 1));
        let w = omega_tower(1);
        assert!(!in_slice(&w, 1));
        assert!(in_slice(&w, 2));
    }
}
