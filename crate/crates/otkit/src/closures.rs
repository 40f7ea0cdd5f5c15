//! Distinguished-set operators on finite universes.
//!
//! `C^alpha(X)` membership is decided exactly by structural recursion.
//! Everything else (`G`, `V_N`, `V*`, the distinguished-set test) is
//! relativized to an explicit finite [`Universe`] and is only an
//! approximation of the class-level notions.

use crate::coefficients::{f_delta, normalize, TermSet};
use crate::order::{compare, le, lt};
use crate::term::{Config, Kind, Term};
use crate::towers::Chain;
use crate::validity::{is_valid, next_regular};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("{0} is not in the universe")]
    NotInUniverse(String),
}

/// A finite, subterm-closed set of valid terms, sorted by the order.
#[derive(Clone, Debug)]
pub struct Universe {
    cfg: Config,
    terms: Vec<Term>,
    chains: Vec<Option<Chain>>,
}

impl Universe {
    /// Subterm closure of `seeds` together with 0 and `K`; invalid terms
    /// are dropped.
    pub fn new(seeds: &[Term], cfg: Config) -> Universe {
        let mut all: Vec<Term> = seeds.iter().flat_map(|t| t.all_subterms()).filter(|t| is_valid(t, cfg)).collect();
        all.extend([Term::zero(), Term::kappa()]);
        let terms = normalize(all);
        let chains = terms.iter().map(|t| Chain::build(t, cfg).ok()).collect();
        Universe { cfg, terms, chains }
    }

    /// The anchor chain of a member, if it collapses with a nonzero vector.
    pub fn chain(&self, t: &Term) -> Option<&Chain> {
        self.index(t).and_then(|i| self.chains[i].as_ref())
    }

    pub fn cfg(&self) -> Config {
        self.cfg
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.index(t).is_some()
    }

    pub fn index(&self, t: &Term) -> Option<usize> {
        self.terms.binary_search_by(|x| compare(x, t)).ok()
    }

    /// The members selected by the bits of `mask`.
    pub fn subset(&self, mask: u64) -> TermSet {
        self.terms.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, t)| t.clone()).collect()
    }
}

fn member(x: &[Term], t: &Term) -> bool {
    x.iter().any(|y| y == t)
}

/// `alpha` in `C^bound(X)`.
pub fn in_closure(alpha: &Term, bound: &Term, x: &[Term]) -> bool {
    if alpha.is_zero() || alpha.is_kappa() || (member(x, alpha) && lt(alpha, bound)) {
        return true;
    }
    match alpha.kind() {
        Kind::Zero | Kind::Kappa => true,
        Kind::Sum(ps) => sum_in_closure(ps, bound, x),
        Kind::Phi(b, g) => in_closure(b, bound, x) && in_closure(g, bound, x),
        Kind::OmegaExp(b) | Kind::OmegaIdx(b) => in_closure(b, bound, x),
        Kind::Psi(sigma, v, a) => {
            lt(bound, sigma)
                && in_closure(sigma, bound, x)
                && in_closure(a, bound, x)
                && v.iter().flat_map(|e| e.triples()).all(|t| {
                    in_closure(&t.coeff, bound, x) && in_closure(&t.anchor, bound, x) && in_closure(&t.stage, bound, x)
                })
        }
    }
}

/// A sum is built from segments: single parts in the closure, or the
/// leading parts of a member of `X` whose dropped parts are absorbed by
/// what follows.
fn sum_in_closure(ps: &[Term], bound: &Term, x: &[Term]) -> bool {
    let n = ps.len();
    let mut ok = vec![false; n + 1];
    ok[0] = true;
    for j in 1..=n {
        ok[j] = (0..j).any(|i| {
            ok[i] && {
                let seg = &ps[i..j];
                (j == i + 1 && in_closure(&ps[i], bound, x)) || x.iter().any(|m| truncates_to(m, seg, ps.get(j), bound))
            }
        });
    }
    ok[n]
}

/// `m` in `X` below `bound` starts with `seg`, and every further part is
/// below `next` (none allowed at the end).
fn truncates_to(m: &Term, seg: &[Term], next: Option<&Term>, bound: &Term) -> bool {
    let parts = m.parts();
    lt(m, bound)
        && parts.len() >= seg.len()
        && &parts[..seg.len()] == seg
        && match next {
            None => parts.len() == seg.len(),
            Some(h) => parts[seg.len()..].iter().all(|p| lt(p, h)),
        }
}

/// `alpha` in `G(X)`, the inclusion checked over the universe.
pub fn is_in_g(alpha: &Term, x: &[Term], u: &Universe) -> Result<bool, ClosureError> {
    if !u.contains(alpha) {
        return Err(ClosureError::NotInUniverse(alpha.to_string()));
    }
    Ok(in_closure(alpha, alpha, x)
        && u.terms().iter().filter(|b| lt(b, alpha)).all(|b| !in_closure(b, alpha, x) || member(x, b)))
}

/// A finite relation on `0..size`; `preds[y]` lists every `x` with `x r y`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteRelation {
    pub preds: Vec<Vec<usize>>,
}

impl FiniteRelation {
    pub fn new(size: usize) -> FiniteRelation {
        FiniteRelation { preds: vec![Vec::new(); size] }
    }

    pub fn size(&self) -> usize {
        self.preds.len()
    }

    pub fn add(&mut self, x: usize, y: usize) {
        self.preds[y].push(x);
    }

    /// Membership in the wellfounded part, by least fixed point.
    pub fn wf_part(&self) -> Vec<bool> {
        let mut w = vec![false; self.size()];
        loop {
            let mut grew = false;
            for y in 0..self.size() {
                if !w[y] && self.preds[y].iter().all(|&x| w[x]) {
                    w[y] = true;
                    grew = true;
                }
            }
            if !grew {
                return w;
            }
        }
    }
}

/// Wellfounded part of a relation on at most 64 points given as
/// predecessor masks.
pub fn wf_part_mask(preds: &[u64]) -> u64 {
    let mut w = 0u64;
    loop {
        let mut next = w;
        for (y, &p) in preds.iter().enumerate() {
            if p & !w == 0 {
                next |= 1 << y;
            }
        }
        if next == w {
            return w;
        }
        w = next;
    }
}

/// `beta` in `U_i(X)`; vacuous off collapsing terms with nonzero vectors.
pub fn u_i(beta: &Term, x: &[Term], i: usize, cfg: Config) -> bool {
    let Ok(c) = Chain::build(beta, cfg) else {
        return true;
    };
    let up = c.pd_k(0, i + 1);
    up == c.pd_k(0, i) || f_delta(&c.term(up), &c.st_k(0, i)).iter().all(|t| member(x, t))
}

/// `eta` in `V_N(X)`, with the pair relations built over the universe.
pub fn v_n(eta: &Term, x: &[Term], u: &Universe) -> bool {
    let cfg = u.cfg();
    let Some(c) = u.chain(eta) else {
        return true;
    };
    let below: TermSet = x.iter().filter(|t| lt(t, eta)).cloned().collect();
    (2..cfg.levels.saturating_sub(1)).all(|i| {
        let w = pair_relation(&below, i, u);
        c.s_i(0, i).into_iter().all(|b| {
            let beta = c.term(b);
            u_i(&beta, x, i, cfg) && w.contains(&beta, eta)
        })
    })
}

/// Wellfounded part of `<^Y_{i,p}` on the pairs `<x, g>` of universe
/// members with `x` on the anchor chain of `g` and `x` in `U_i(Y)`.
struct PairPart {
    pairs: Vec<(Term, Term)>,
    wf: Vec<bool>,
}

impl PairPart {
    fn contains(&self, x: &Term, g: &Term) -> bool {
        self.pairs.iter().zip(&self.wf).any(|((a, b), &w)| w && a == x && b == g)
    }
}

fn pair_relation(y: &[Term], i: usize, u: &Universe) -> PairPart {
    let cfg = u.cfg();
    let mut pairs = Vec::new();
    for g in u.terms() {
        let Some(c) = u.chain(g) else { continue };
        for x in c.nodes() {
            if u_i(x, y, i, cfg) {
                pairs.push((x.clone(), g.clone()));
            }
        }
    }
    let mut rel = FiniteRelation::new(pairs.len());
    for (p, (xa, ga)) in pairs.iter().enumerate() {
        let ca = u.chain(xa).expect("chain nodes are collapsing");
        let cg = u.chain(ga).expect("pair anchors are collapsing");
        for (q, (xb, gb)) in pairs.iter().enumerate() {
            let (Some(yb), Some(gi), Some(ei)) = (ca.index_of(xb), cg.index_of(ga), cg.index_of(gb)) else {
                continue;
            };
            if yb < ca.len() && ca.lt_i(i, 0, yb) && cg.preceq(gi, ei) {
                rel.add(p, q);
            }
        }
    }
    PairPart { pairs, wf: rel.wf_part() }
}

/// `alpha` in `V*(X)`: in `V_N(X)` with every universe member of
/// `C^alpha(X)` below it in `V_N(X)` too.
pub fn v_star(alpha: &Term, x: &[Term], u: &Universe) -> bool {
    v_n(alpha, x, u) && u.terms().iter().filter(|b| lt(b, alpha)).all(|b| !in_closure(b, alpha, x) || v_n(b, x, u))
}

fn below_plus(t: &Term, alpha: &Term) -> bool {
    next_regular(alpha).is_none_or(|p| lt(t, &p))
}

/// The distinguished-set condition with every set construction
/// relativized to `u`.  The wellfounded part of a finite linearly ordered
/// set is the whole set, so the condition reduces to
/// `V*C^alpha(X) ∩ alpha^+ = X ∩ alpha^+` over universe members.
pub fn is_distinguished_approx(x: &[Term], u: &Universe) -> bool {
    if !x.iter().all(|t| lt(t, &Term::kappa())) {
        return false;
    }
    let Some(top) = x.iter().max_by(|a, b| compare(a, b)) else {
        return true;
    };
    let ts = u.terms();
    let in_v: Vec<bool> = ts.iter().map(|t| v_n(t, x, u)).collect();
    let in_v_star: Vec<bool> =
        ts.iter().enumerate().map(|(j, t)| in_v[j] && (0..j).all(|b| in_v[b] || !in_closure(&ts[b], t, x))).collect();
    ts.iter().filter(|a| le(a, top)).all(|alpha| {
        ts.iter().enumerate().filter(|(_, t)| below_plus(t, alpha)).all(|(j, t)| {
            let lhs = in_v_star[j] && in_closure(t, alpha, x);
            lhs == member(x, t)
        })
    })
}

/// End extension: `x` is an initial segment of `y`.
pub fn end_extends(x: &[Term], y: &[Term]) -> bool {
    x.iter().all(|t| member(y, t))
        && y.iter().filter(|t| !member(x, t)).all(|t| x.iter().all(|s| compare(s, t) == Ordering::Less))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::k_small;
    use crate::enumerate::enumerate;
    use crate::parse::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s, Config::new(3)).unwrap()
    }

    #[test]
    fn closure_basics() {
        assert!(in_closure(&Term::zero(), &Term::zero(), &[]));
        let p = t("psi(Om(phi(0,0)); 0)");
        // parts 0 and Om(1) are always in
        assert!(in_closure(&p, &Term::zero(), &[]));
        assert!(!in_closure(&p, &Term::big_omega(), &[]));
        assert!(in_closure(&p, &Term::big_omega(), std::slice::from_ref(&p)));
        // a collapse above the bound is built by the constructor clause
        assert!(in_closure(&p, &p, &[]));
    }

    #[test]
    fn sums_from_truncated_members() {
        let p = t("psi(Om(phi(0,0)); 0)");
        let big = Term::big_omega();
        let m = Term::sum(vec![p.clone(), Term::one()]);
        let target = Term::sum(vec![p.clone(), Term::omega()]);
        assert!(!in_closure(&target, &big, &[]));
        assert!(in_closure(&target, &big, std::slice::from_ref(&m)));
        assert!(in_closure(&m, &big, std::slice::from_ref(&m)));
    }

    #[test]
    fn key_sets_land_in_the_closure() {
        let cfg = Config::new(3);
        let ts = enumerate(9, cfg);
        let deltas: Vec<Term> = ts.iter().filter(|d| d.is_psi() || d.is_kappa()).cloned().collect();
        for a in &ts {
            for d in &deltas {
                let mut x = f_delta(d, a);
                x.extend(k_small(d, a));
                assert!(in_closure(a, &Term::kappa(), &x), "{a} with {d}");
            }
        }
    }

    #[test]
    fn wellfounded_parts() {
        let mut r = FiniteRelation::new(2);
        r.add(0, 1);
        r.add(1, 0);
        assert_eq!(r.wf_part(), vec![false, false]);
        assert_eq!(FiniteRelation::new(3).wf_part(), vec![true; 3]);
        let mut chain = FiniteRelation::new(3);
        chain.add(0, 1);
        chain.add(1, 2);
        assert_eq!(chain.wf_part(), vec![true; 3]);
        assert_eq!(wf_part_mask(&[0b10, 0b01, 0b000]), 0b100);
    }

    #[test]
    fn g_membership() {
        let u = Universe::new(&enumerate(5, Config::new(3)), Config::new(3));
        assert_eq!(is_in_g(&Term::zero(), &[], &u), Ok(true));
        assert!(is_in_g(&Term::nat(10), &[], &u).is_err());
    }

    #[test]
    fn empty_set_is_distinguished() {
        let u = Universe::new(&enumerate(5, Config::new(3)), Config::new(3));
        assert!(is_distinguished_approx(&[], &u));
        assert!(!is_distinguished_approx(&[Term::one()], &u));
        assert!(end_extends(&[Term::zero()], &[Term::zero(), Term::one()]));
        assert!(!end_extends(&[Term::one()], &[Term::zero(), Term::one()]));
    }
}
