//! The order on terms and exponent terms, with the head/tail calculus and
//! the auxiliary relations on exponent terms.

use crate::coefficients::kdelta;
use crate::term::{vec_coeffs, Config, ETerm, Kind, Mono, Term, Triple};
use crate::validity::{is_irreducible, next_regular};
use std::cmp::Ordering;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use thiserror::Error;

pub use std::cmp::Ordering::{Equal as EQ, Greater as GT, Less as LT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("vector {0} is not irreducible")]
    NotIrreducible(String),
    #[error("vectors have different lengths")]
    LengthMismatch,
}

static UNDECIDED: AtomicUsize = AtomicUsize::new(0);

/// How many collapsing-term comparisons so far found neither or both
/// directions of the case test true.  On valid terms this stays at zero.
pub fn undecided_psi_comparisons() -> usize {
    UNDECIDED.load(AtomicOrdering::Relaxed)
}

/// Total order: the ordinal comparison, with ordinal ties between
/// structurally different terms broken structurally.  `EQ` exactly on
/// structural equality.
pub fn compare(x: &Term, y: &Term) -> Ordering {
    if x == y {
        return EQ;
    }
    match ord_cmp(x, y) {
        EQ => struct_cmp(x, y),
        o => o,
    }
}

pub fn lt(x: &Term, y: &Term) -> bool {
    ord_cmp(x, y) == LT
}

pub fn le(x: &Term, y: &Term) -> bool {
    ord_cmp(x, y) != GT
}

/// Every member of `xs` is below `a`.
pub fn set_lt(xs: &[Term], a: &Term) -> bool {
    xs.iter().all(|x| lt(x, a))
}

fn ord_parts(t: &Term) -> &[Term] {
    match t.kind() {
        Kind::OmegaIdx(b) if b.is_zero() => &[],
        _ => t.parts(),
    }
}

/// Ordinal comparison.  `EQ` means the two terms denote the same ordinal
/// as far as the rules can tell; distinct valid terms never tie.
pub fn ord_cmp(x: &Term, y: &Term) -> Ordering {
    if x == y {
        return EQ;
    }
    let (xs, ys) = (ord_parts(x), ord_parts(y));
    for (p, q) in xs.iter().zip(ys) {
        match principal_cmp(p, q) {
            EQ => continue,
            o => return o,
        }
    }
    xs.len().cmp(&ys.len())
}

enum View<'a> {
    Veblen(Option<&'a Term>, &'a Term),
    Atom,
}

fn view(t: &Term) -> View<'_> {
    match t.kind() {
        Kind::Phi(b, g) => View::Veblen(Some(b), g),
        Kind::OmegaExp(g) => View::Veblen(None, g),
        _ => View::Atom,
    }
}

fn first_arg_cmp(a: Option<&Term>, b: Option<&Term>) -> Ordering {
    match (a, b) {
        (None, None) => EQ,
        (None, Some(b)) => ord_cmp(&Term::zero(), b),
        (Some(a), None) => ord_cmp(a, &Term::zero()),
        (Some(a), Some(b)) => ord_cmp(a, b),
    }
}

fn principal_cmp(p: &Term, q: &Term) -> Ordering {
    if p == q {
        return EQ;
    }
    match (view(p), view(q)) {
        (View::Veblen(b1, g1), View::Veblen(b2, g2)) => match first_arg_cmp(b1, b2) {
            EQ => ord_cmp(g1, g2),
            LT => ord_cmp(g1, q),
            GT => ord_cmp(p, g2),
        },
        (View::Veblen(b, g), View::Atom) => veblen_atom(b, g, q),
        (View::Atom, View::Veblen(b, g)) => veblen_atom(b, g, p).reverse(),
        (View::Atom, View::Atom) => atom_cmp(p, q),
    }
}

/// Compares a Veblen value with a strongly critical atom.
fn veblen_atom(b: Option<&Term>, g: &Term, s: &Term) -> Ordering {
    let zero = Term::zero();
    let cb = ord_cmp(b.unwrap_or(&zero), s);
    let cg = ord_cmp(g, s);
    if cb == LT && cg == LT {
        LT
    } else if (cb == EQ && g.is_zero()) || (cb == LT && cg == EQ) {
        EQ
    } else {
        GT
    }
}

fn atom_cmp(s: &Term, t: &Term) -> Ordering {
    match (s.kind(), t.kind()) {
        (Kind::Kappa, Kind::Kappa) => EQ,
        (Kind::Kappa, Kind::OmegaIdx(b)) => ord_cmp(b, s).reverse(),
        (Kind::OmegaIdx(_), Kind::Kappa) => atom_cmp(t, s).reverse(),
        (Kind::Kappa, Kind::Psi(..)) => GT,
        (Kind::Psi(..), Kind::Kappa) => LT,
        (Kind::OmegaIdx(b), Kind::OmegaIdx(c)) => ord_cmp(b, c),
        (Kind::OmegaIdx(b), Kind::Psi(..)) => omega_psi(b, t),
        (Kind::Psi(..), Kind::OmegaIdx(b)) => omega_psi(b, s).reverse(),
        (Kind::Psi(..), Kind::Psi(..)) => psi_cmp(s, t),
        _ => unreachable!("atoms are K, Om and psi"),
    }
}

/// `x - 1` for a successor term `x`.
pub fn predecessor(x: &Term) -> Option<Term> {
    let ps = x.parts();
    match ps.last() {
        Some(l) if l.is_one() => Some(Term::sum(ps[..ps.len() - 1].to_vec())),
        _ => None,
    }
}

/// Compares `Om(b)` with a collapsing term.
fn omega_psi(b: &Term, psi: &Term) -> Ordering {
    let (anchor, _, _) = psi.as_psi().unwrap();
    if let Kind::OmegaIdx(g) = anchor.kind() {
        if let Some(gp) = predecessor(g) {
            // psi lies strictly between Om(g-1) and Om(g)
            return if le(b, &gp) { LT } else { GT };
        }
    }
    ord_cmp(b, psi)
}

fn psi_cmp(x: &Term, y: &Term) -> Ordering {
    match (psi_lt(x, y), psi_lt(y, x)) {
        (true, false) => LT,
        (false, true) => GT,
        _ => {
            UNDECIDED.fetch_add(1, AtomicOrdering::Relaxed);
            EQ
        }
    }
}

/// The four-case test for `x < y` on collapsing terms.
fn psi_lt(x: &Term, y: &Term) -> bool {
    let (pi, nu, b) = x.as_psi().unwrap();
    let (kappa, xi, a) = y.as_psi().unwrap();
    if le(pi, y) {
        return true;
    }
    let ba = ord_cmp(b, a);
    let nu_coeffs = vec_coeffs(nu);
    let nu_bounded = || nu_coeffs.iter().all(|g| set_lt(&kdelta(y, g), a));
    if ba == LT && lt(x, kappa) && nu_bounded() && set_lt(&kdelta(y, pi), a) && set_lt(&kdelta(y, b), a) {
        return true;
    }
    if ba != LT {
        let reaches = |set: Vec<Term>| set.iter().any(|z| le(b, z));
        if vec_coeffs(xi).iter().any(|d| reaches(kdelta(x, d))) {
            return true;
        }
        if reaches(kdelta(x, kappa)) || reaches(kdelta(x, a)) {
            return true;
        }
    }
    ba == EQ && ord_cmp(pi, kappa) == EQ && nu_bounded() && lt_lx(nu, xi).unwrap_or(false)
}

/// Structural order, used only to break ordinal ties.
pub fn struct_cmp(x: &Term, y: &Term) -> Ordering {
    if x == y {
        return EQ;
    }
    fn tag(t: &Term) -> u8 {
        match t.kind() {
            Kind::Zero => 0,
            Kind::Kappa => 1,
            Kind::Sum(_) => 2,
            Kind::Phi(..) => 3,
            Kind::OmegaExp(_) => 4,
            Kind::OmegaIdx(_) => 5,
            Kind::Psi(..) => 6,
        }
    }
    tag(x).cmp(&tag(y)).then_with(|| match (x.kind(), y.kind()) {
        (Kind::Sum(a), Kind::Sum(b)) => seq_cmp(a, b, struct_cmp),
        (Kind::Phi(a, b), Kind::Phi(c, d)) => struct_cmp(a, c).then_with(|| struct_cmp(b, d)),
        (Kind::OmegaExp(a), Kind::OmegaExp(b)) | (Kind::OmegaIdx(a), Kind::OmegaIdx(b)) => struct_cmp(a, b),
        (Kind::Psi(p, v, a), Kind::Psi(q, w, b)) => {
            struct_cmp(p, q).then_with(|| seq_cmp(v, w, estruct_cmp)).then_with(|| struct_cmp(a, b))
        }
        _ => EQ,
    })
}

fn seq_cmp<T>(a: &[T], b: &[T], f: impl Fn(&T, &T) -> Ordering) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match f(x, y) {
            EQ => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

fn triple_struct_cmp(s: &Triple, t: &Triple) -> Ordering {
    struct_cmp(&s.coeff, &t.coeff)
        .then_with(|| struct_cmp(&s.anchor, &t.anchor))
        .then_with(|| struct_cmp(&s.stage, &t.stage))
}

fn estruct_cmp(x: &ETerm, y: &ETerm) -> Ordering {
    let tag = |e: &ETerm| match e {
        ETerm::Zero => 0,
        ETerm::KTriple(_) => 1,
        ETerm::LSum(_) => 2,
    };
    tag(x).cmp(&tag(y)).then_with(|| match (x, y) {
        (ETerm::KTriple(s), ETerm::KTriple(t)) => triple_struct_cmp(s, t),
        (ETerm::LSum(a), ETerm::LSum(b)) => seq_cmp(a, b, |m: &Mono, n: &Mono| {
            estruct_cmp(&m.exp, &n.exp).then_with(|| triple_struct_cmp(&m.coef, &n.coef))
        }),
        _ => EQ,
    })
}

/// Comparison in base-`L` normal form; decorations are ignored.
pub fn ecmp(x: &ETerm, y: &ETerm) -> Ordering {
    let (mx, my) = (x.monos(), y.monos());
    for ((e, s), (f, t)) in mx.iter().zip(&my) {
        match ecmp(e, f).then_with(|| ord_cmp(&s.coeff, &t.coeff)) {
            EQ => continue,
            o => return o,
        }
    }
    mx.len().cmp(&my.len())
}

pub fn elt(x: &ETerm, y: &ETerm) -> bool {
    ecmp(x, y) == LT
}

pub fn ele(x: &ETerm, y: &ETerm) -> bool {
    ecmp(x, y) != GT
}

fn is_unit(x: &ETerm) -> bool {
    x.is_zero() || x.is_one()
}

/// Head exponent.
pub fn he(x: &ETerm) -> ETerm {
    match x {
        _ if is_unit(x) => x.clone(),
        ETerm::LSum(ms) => ms[0].exp.clone(),
        _ => ETerm::Zero,
    }
}

/// Tail exponent.
pub fn te(x: &ETerm) -> ETerm {
    match x {
        _ if is_unit(x) => x.clone(),
        ETerm::LSum(ms) => ms[ms.len() - 1].exp.clone(),
        _ => ETerm::Zero,
    }
}

/// Head monomial.
pub fn head_mono(x: &ETerm) -> ETerm {
    match x {
        ETerm::LSum(ms) => ETerm::lsum(vec![ms[0].clone()]),
        _ => x.clone(),
    }
}

/// Tail monomial.
pub fn tail_mono(x: &ETerm) -> ETerm {
    match x {
        ETerm::LSum(ms) => ETerm::lsum(vec![ms[ms.len() - 1].clone()]),
        _ => x.clone(),
    }
}

pub fn he_iter(i: usize, x: &ETerm) -> ETerm {
    (0..i).fold(x.clone(), |acc, _| he(&acc))
}

pub fn te_iter(i: usize, x: &ETerm) -> ETerm {
    (0..i).fold(x.clone(), |acc, _| te(&acc))
}

/// Drops the `n` lowest monomials.
pub fn hd_n(n: usize, x: &ETerm) -> ETerm {
    if n == 0 {
        return x.clone();
    }
    match x {
        ETerm::LSum(ms) if n < ms.len() => ETerm::lsum(ms[..ms.len() - n].to_vec()),
        _ => ETerm::Zero,
    }
}

pub fn hd(x: &ETerm) -> ETerm {
    hd_n(1, x)
}

/// Iterated heads along a path of tails.
pub fn hd_vec(ns: &[usize], x: &ETerm) -> ETerm {
    match ns {
        [] => x.clone(),
        [n] => hd_n(*n, x),
        [n, rest @ ..] => hd_vec(rest, &te(&hd_n(*n, x))),
    }
}

/// Lowest decorated coefficient.
pub fn st(x: &ETerm) -> Option<Triple> {
    x.monos().pop().map(|(_, t)| t)
}

pub fn le_pt(z: &ETerm, x: &ETerm) -> bool {
    (0..=x.width()).any(|n| hd_n(n, x) == *z)
}

pub fn lt_pt(z: &ETerm, x: &ETerm) -> bool {
    z != x && le_pt(z, x)
}

/// Same monomials except the last coefficient, which is strictly smaller.
fn last_coeff_smaller(v: &ETerm, x: &ETerm) -> Option<(Triple, Triple)> {
    let (mv, mx) = (v.monos(), x.monos());
    if mv.is_empty() || mv.len() != mx.len() {
        return None;
    }
    let n = mv.len() - 1;
    if mv[..n] != mx[..n] {
        return None;
    }
    let ((e, s), (f, t)) = (&mv[n], &mx[n]);
    if e == f && s.anchor == t.anchor && s.stage == t.stage && lt(&s.coeff, &t.coeff) {
        Some((s.clone(), t.clone()))
    } else {
        None
    }
}

pub fn lt_st(v: &ETerm, x: &ETerm) -> bool {
    (v.is_zero() && !x.is_zero()) || last_coeff_smaller(v, x).is_some()
}

/// Agreement above some monomial, a smaller coefficient there with the
/// same exponent and decorations, anything below.
pub fn lt_zero(v: &ETerm, x: &ETerm) -> bool {
    let (mv, mx) = (v.monos(), x.monos());
    for j in 0..mx.len() {
        if j >= mv.len() || mv[j].0 != mx[j].0 {
            return false;
        }
        let (s, t) = (&mv[j].1, &mx[j].1);
        if s.anchor == t.anchor && s.stage == t.stage && lt(&s.coeff, &t.coeff) {
            return true;
        }
        if s != t {
            return false;
        }
    }
    false
}

/// The side condition attached to a coefficient decrease at anchor `p0`.
fn decrease_allowed(p0: &Term, b: &Term, c: &Term, cfg: Config) -> bool {
    let (lo, hi) = if p0.is_kappa() {
        (b.clone(), c.clone())
    } else {
        match next_regular(p0) {
            Some(up) => (Term::psi(up.clone(), cfg.zero_vec(), b.clone()), Term::psi(up, cfg.zero_vec(), c.clone())),
            None => return false,
        }
    };
    set_lt(&kdelta(&lo, p0), b)
        && set_lt(&kdelta(&lo, b), b)
        && set_lt(&kdelta(&hi, p0), c)
        && set_lt(&kdelta(&hi, c), c)
        && lt(&lo, &hi)
}

pub fn lt_kst(v: &ETerm, m: &ETerm, cfg: Config) -> bool {
    match (v, m) {
        (ETerm::Zero, _) => !m.is_zero(),
        (ETerm::KTriple(s), ETerm::KTriple(t)) => lt(&s.coeff, &t.coeff),
        (ETerm::LSum(_), ETerm::LSum(_)) => match last_coeff_smaller(v, m) {
            Some((s, t)) => decrease_allowed(&s.anchor, &s.coeff, &t.coeff, cfg),
            None => false,
        },
        _ => false,
    }
}

/// Least witness `(p_2, ..., p_{N-1})` for `v <_Ksl xi`.
pub fn lt_ksl(v: &[ETerm], xi: &ETerm, cfg: Config) -> Option<Vec<usize>> {
    fn go(v: &[ETerm], cur: &ETerm, cfg: Config, acc: &mut Vec<usize>) -> bool {
        let Some((first, rest)) = v.split_first() else {
            return true;
        };
        for p in 0..cur.width() {
            let mu = hd_n(p, cur);
            if lt_kst(first, &mu, cfg) {
                acc.push(p);
                if go(rest, &te(&mu), cfg, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let mut acc = Vec::new();
    go(v, xi, cfg, &mut acc).then_some(acc)
}

/// `v <_tl xi`: some chain of pieces of `xi` dominates `v` entrywise.
pub fn lt_tl(v: &[ETerm], xi: &ETerm) -> bool {
    let Some((first, rest)) = v.split_first() else {
        return true;
    };
    (0..=xi.width()).any(|n| {
        let mu = hd_n(n, xi);
        elt(first, &mu) && lt_tl(rest, &te(&mu))
    })
}

/// Lexicographic comparison of irreducible vectors.
pub fn lt_lx(v: &[ETerm], w: &[ETerm]) -> Result<bool, OrderError> {
    if v.len() != w.len() {
        return Err(OrderError::LengthMismatch);
    }
    for x in [v, w] {
        if !is_irreducible(x) {
            return Err(OrderError::NotIrreducible(crate::parse::show_vector(x)));
        }
    }
    let Some(i) = (0..v.len()).find(|&i| ecmp(&v[i], &w[i]) != EQ) else {
        return Ok(false);
    };
    let Some(k1) = (i..w.len()).find(|&j| !w[j].is_zero()) else {
        return Ok(false);
    };
    let Some(k0) = (i..v.len()).find(|&j| !v[j].is_zero()) else {
        return Ok(true);
    };
    if i == k0 && k0 < k1 {
        Ok(ele(&he_iter(k1 - i, &v[i]), &w[k1]))
    } else if k0 >= k1 && k1 == i {
        Ok(elt(&v[k0], &he_iter(k0 - i, &w[i])))
    } else {
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_eterm, parse_term};

    fn t(s: &str) -> Term {
        parse_term(s, Config::new(3)).unwrap()
    }

    fn e(s: &str) -> ETerm {
        parse_eterm(s, Config::new(3)).unwrap()
    }

    #[test]
    fn basic_order() {
        assert_eq!(compare(&Term::zero(), &Term::kappa()), LT);
        assert_eq!(compare(&Term::one(), &Term::omega()), LT);
        assert_eq!(compare(&Term::nat(3), &Term::omega()), LT);
        assert_eq!(compare(&t("K+K"), &t("w^(K+phi(0,0))")), LT);
    }

    #[test]
    fn veblen_fixed_points_tie() {
        // phi(0, epsilon_0) is epsilon_0 as an ordinal
        let eps = t("phi(phi(0,0),0)");
        let w_eps = Term::phi(Term::zero(), eps.clone());
        assert_eq!(ord_cmp(&w_eps, &eps), EQ);
        assert_ne!(compare(&w_eps, &eps), EQ);
    }

    #[test]
    fn collapses_sit_between_cardinals() {
        let om1 = Term::big_omega();
        let om2 = t("Om(phi(0,0)+phi(0,0))");
        let p = t("psi(Om(phi(0,0)+phi(0,0)); 0)");
        assert_eq!(compare(&om1, &p), LT);
        assert_eq!(compare(&p, &om2), LT);
        assert_eq!(compare(&t("psi(Om(phi(0,0)); 0)"), &t("psi(Om(phi(0,0)); phi(0,0))")), LT);
    }

    #[test]
    fn antisymmetric_on_samples() {
        let xs = ["0", "K", "phi(0,0)", "psi(K; 0)", "psi(K; K)", "Om(psi(K; 0))", "psi(Om(phi(0,0)); K)", "K+K"];
        for a in xs {
            for b in xs {
                assert_eq!(compare(&t(a), &t(b)), compare(&t(b), &t(a)).reverse(), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn exponent_order() {
        assert_eq!(ecmp(&ETerm::Zero, &ETerm::one()), LT);
        let a = e("L^(<phi(0,0),K,phi(0,0)>)*<phi(0,0),K,K>");
        let b = e("L^(<phi(0,0),K,phi(0,0)>)*<phi(0,0),K,K>+L^(<K,K,K>)*<K,K,K>");
        assert_eq!(ecmp(&a, &b), LT);
        let c = e("<phi(0,0),K,K>");
        let d = e("<phi(0,0)+phi(0,0),K,phi(0,0)+phi(0,0)>");
        assert_eq!(ecmp(&c, &d), LT);
        // decorations do not matter
        let a2 = e("L^(<phi(0,0),K,K>)*<phi(0,0),Om(phi(0,0)),phi(0,0)>");
        assert_eq!(ecmp(&a, &a2), EQ);
    }

    #[test]
    fn head_and_tail() {
        assert_eq!(he(&ETerm::Zero), ETerm::Zero);
        assert_eq!(he(&ETerm::one()), ETerm::one());
        let x = e("L^(<K,K,K>)*<K,K,K>+L^(<phi(0,0),K,K>)*<K,K,K>");
        assert_eq!(he(&x), e("<K,K,K>"));
        assert_eq!(te(&x), e("<phi(0,0),K,K>"));
        let y = e("L^(L^(<K,K,K>)*<K,K,K>)*<K,K,K>");
        assert_eq!(he_iter(2, &y), e("<K,K,K>"));
        assert_eq!(hd(&e("L^(<K,K,K>)*<K,K,K>")), ETerm::Zero);
        assert_eq!(hd_n(5, &x), ETerm::Zero);
        assert_eq!(hd_n(1, &x), e("L^(<K,K,K>)*<K,K,K>"));
        assert_eq!(st(&x).unwrap().coeff, Term::kappa());
        assert_eq!(st(&ETerm::Zero), None);
    }

    #[test]
    fn piece_relations() {
        let x = e("L^(<K,K,K>)*<K,K,K>+L^(<phi(0,0),K,K>)*<K,K,K>");
        assert!(le_pt(&x, &x));
        assert!(lt_pt(&ETerm::Zero, &x));
        assert!(lt_kst(&ETerm::Zero, &x, Config::new(3)));
        assert!(lt_kst(&e("<phi(0,0),K,K>"), &e("<K,K,K>"), Config::new(3)));
        assert!(lt_tl(&[ETerm::Zero], &ETerm::one()));
        assert!(!lt_tl(std::slice::from_ref(&x), &x));
        let y = e("L^(<K,K,K>)*<K,K,K>+L^(<phi(0,0),K,K>)*<phi(0,0),K,K>");
        assert!(lt_st(&y, &x));
        assert!(lt_zero(&y, &x));
    }

    #[test]
    fn lexicographic_vectors() {
        let z = vec![ETerm::Zero, ETerm::Zero];
        let w = vec![ETerm::Zero, e("<K,K,K>")];
        assert_eq!(lt_lx(&z, &w), Ok(true));
        assert_eq!(lt_lx(&w, &w), Ok(false));
        assert_eq!(lt_lx(&[e("<phi(0,0),K,K>")], &[e("<K,K,K>")]), Ok(true));
    }
}
