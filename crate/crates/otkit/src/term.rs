//! Term syntax: ordinal terms, exponent terms and decorated coefficients.
//!
//! Terms are immutable and reference counted.  Every node caches its
//! structural hash and its symbol length, so equality checks and map
//! lookups stay cheap even for deep terms.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Number of reflection levels `N` (at least 3).  Vectors attached to
/// collapsing terms have `N - 2` entries, indexed `2..N-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Config {
    pub levels: usize,
}

impl Config {
    pub fn new(levels: usize) -> Config {
        assert!(levels >= 3, "levels must be at least 3");
        Config { levels }
    }

    pub fn width(&self) -> usize {
        self.levels - 2
    }

    pub fn zero_vec(&self) -> MVector {
        vec![ETerm::Zero; self.width()]
    }
}

impl Default for Config {
    fn default() -> Self {
        Config { levels: 3 }
    }
}

#[derive(Clone)]
pub struct Term(Arc<Node>);

struct Node {
    kind: Kind,
    hash: u64,
    len: usize,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Kind {
    Zero,
    Kappa,
    Sum(Vec<Term>),
    Phi(Term, Term),
    OmegaExp(Term),
    OmegaIdx(Term),
    Psi(Term, MVector, Term),
}

/// A decorated coefficient `<coeff, anchor, stage>`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Triple {
    pub coeff: Term,
    pub anchor: Term,
    pub stage: Term,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono {
    pub exp: ETerm,
    pub coef: Triple,
}

/// Exponent-level terms below the second epsilon number after `K`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ETerm {
    Zero,
    KTriple(Arc<Triple>),
    LSum(Arc<Vec<Mono>>),
}

pub type MVector = Vec<ETerm>;

impl Term {
    fn mk(kind: Kind) -> Term {
        let mut h = DefaultHasher::new();
        kind.hash(&mut h);
        let len = match &kind {
            Kind::Zero | Kind::Kappa => 1,
            Kind::Sum(ps) => ps.iter().map(|p| p.len()).sum::<usize>() + ps.len() - 1,
            Kind::Phi(a, b) => 1 + a.len() + b.len(),
            Kind::OmegaExp(a) | Kind::OmegaIdx(a) => 1 + a.len(),
            Kind::Psi(p, v, a) => 1 + p.len() + v.iter().map(|e| e.len()).sum::<usize>() + a.len(),
        };
        Term(Arc::new(Node { kind, hash: h.finish(), len }))
    }

    pub fn zero() -> Term {
        Term::mk(Kind::Zero)
    }

    pub fn kappa() -> Term {
        Term::mk(Kind::Kappa)
    }

    /// Sum of the given parts with nested sums flattened and zeros dropped.
    /// No ordering is imposed.
    pub fn sum(parts: Vec<Term>) -> Term {
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match p.kind() {
                Kind::Sum(ps) => flat.extend(ps.iter().cloned()),
                Kind::Zero => {}
                _ => flat.push(p),
            }
        }
        match flat.len() {
            0 => Term::zero(),
            1 => flat.pop().unwrap(),
            _ => Term::mk(Kind::Sum(flat)),
        }
    }

    /// Sum node exactly as given, for the parser.
    pub fn sum_raw(parts: Vec<Term>) -> Term {
        if parts.len() == 1 {
            parts.into_iter().next().unwrap()
        } else {
            Term::mk(Kind::Sum(parts))
        }
    }

    pub fn phi(a: Term, b: Term) -> Term {
        Term::mk(Kind::Phi(a, b))
    }

    pub fn omega_exp(a: Term) -> Term {
        Term::mk(Kind::OmegaExp(a))
    }

    pub fn omega_idx(a: Term) -> Term {
        Term::mk(Kind::OmegaIdx(a))
    }

    pub fn psi(anchor: Term, vec: MVector, arg: Term) -> Term {
        Term::mk(Kind::Psi(anchor, vec, arg))
    }

    /// `1 = phi(0,0)`.
    pub fn one() -> Term {
        Term::phi(Term::zero(), Term::zero())
    }

    /// `omega = phi(0,1)`.
    pub fn omega() -> Term {
        Term::phi(Term::zero(), Term::one())
    }

    /// Finite ordinal as a sum of ones.
    pub fn nat(n: usize) -> Term {
        Term::sum(vec![Term::one(); n])
    }

    /// `Om(1)`.
    pub fn big_omega() -> Term {
        Term::omega_idx(Term::one())
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    /// Symbol count over `0, K, L, +, w, phi, Om, psi`.
    pub fn len(&self) -> usize {
        self.0.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind(), Kind::Zero)
    }

    pub fn is_kappa(&self) -> bool {
        matches!(self.kind(), Kind::Kappa)
    }

    pub fn is_psi(&self) -> bool {
        matches!(self.kind(), Kind::Psi(..))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.kind(), Kind::Phi(a, b) if a.is_zero() && b.is_zero())
    }

    /// Additive parts: empty for zero, the parts of a sum, or the term itself.
    pub fn parts(&self) -> &[Term] {
        match self.kind() {
            Kind::Zero => &[],
            Kind::Sum(ps) => ps,
            _ => std::slice::from_ref(self),
        }
    }

    /// Anchor, vector and argument of a collapsing term.
    pub fn as_psi(&self) -> Option<(&Term, &MVector, &Term)> {
        match self.kind() {
            Kind::Psi(p, v, a) => Some((p, v, a)),
            _ => None,
        }
    }

    /// Immediate children; vector coefficients, anchors and stages included.
    pub fn children(&self) -> Vec<Term> {
        match self.kind() {
            Kind::Zero | Kind::Kappa => vec![],
            Kind::Sum(ps) => ps.clone(),
            Kind::Phi(a, b) => vec![a.clone(), b.clone()],
            Kind::OmegaExp(a) | Kind::OmegaIdx(a) => vec![a.clone()],
            Kind::Psi(p, v, a) => {
                let mut out = vec![p.clone()];
                for e in v {
                    for t in e.triples() {
                        out.push(t.coeff.clone());
                        out.push(t.anchor.clone());
                        out.push(t.stage.clone());
                    }
                }
                out.push(a.clone());
                out
            }
        }
    }

    /// All subterms, the term itself included, without duplicates.
    pub fn all_subterms(&self) -> Vec<Term> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        let mut stack = vec![self.clone()];
        while let Some(t) = stack.pop() {
            if seen.insert(t.clone()) {
                stack.extend(t.children());
                out.push(t);
            }
        }
        out
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        self.ptr_eq(other) || (self.0.hash == other.0.hash && self.0.len == other.0.len && self.0.kind == other.0.kind)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Triple {
    pub fn new(coeff: Term, anchor: Term, stage: Term) -> Triple {
        Triple { coeff, anchor, stage }
    }

    pub fn len(&self) -> usize {
        self.coeff.len() + self.anchor.len() + self.stage.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl ETerm {
    pub fn ktriple(coeff: Term, stage: Term) -> ETerm {
        ETerm::KTriple(Arc::new(Triple::new(coeff, Term::kappa(), stage)))
    }

    /// The exponent-level one, `<1,K,1>`.
    pub fn one() -> ETerm {
        ETerm::ktriple(Term::one(), Term::one())
    }

    /// Sum of monomials; an empty list gives zero.
    pub fn lsum(monos: Vec<Mono>) -> ETerm {
        if monos.is_empty() {
            ETerm::Zero
        } else {
            ETerm::LSum(Arc::new(monos))
        }
    }

    pub fn mono(exp: ETerm, coef: Triple) -> ETerm {
        ETerm::lsum(vec![Mono { exp, coef }])
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ETerm::Zero)
    }

    /// The one of `E`: a K-triple whose coefficient is `phi(0,0)`.
    pub fn is_one(&self) -> bool {
        matches!(self, ETerm::KTriple(t) if t.coeff.is_one())
    }

    pub fn len(&self) -> usize {
        match self {
            ETerm::Zero => 1,
            ETerm::KTriple(t) => t.len(),
            ETerm::LSum(ms) => ms.iter().map(|m| 1 + m.exp.len() + m.coef.len()).sum::<usize>() + ms.len() - 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of monomials.
    pub fn width(&self) -> usize {
        match self {
            ETerm::Zero => 0,
            ETerm::KTriple(_) => 1,
            ETerm::LSum(ms) => ms.len(),
        }
    }

    /// Monomials from the highest down, a K-triple being `L^0 * coeff`.
    pub fn monos(&self) -> Vec<(ETerm, Triple)> {
        match self {
            ETerm::Zero => vec![],
            ETerm::KTriple(t) => vec![(ETerm::Zero, (**t).clone())],
            ETerm::LSum(ms) => ms.iter().map(|m| (m.exp.clone(), m.coef.clone())).collect(),
        }
    }

    /// Every triple occurring in the term, exponents included.
    pub fn triples(&self) -> Vec<Triple> {
        let mut out = Vec::new();
        self.collect_triples(&mut out);
        out
    }

    fn collect_triples(&self, out: &mut Vec<Triple>) {
        match self {
            ETerm::Zero => {}
            ETerm::KTriple(t) => out.push((**t).clone()),
            ETerm::LSum(ms) => {
                for m in ms.iter() {
                    out.push(m.coef.clone());
                    m.exp.collect_triples(out);
                }
            }
        }
    }
}

pub fn vec_is_zero(v: &[ETerm]) -> bool {
    v.iter().all(|e| e.is_zero())
}

/// Coefficients of every triple in a vector.
pub fn vec_coeffs(v: &[ETerm]) -> Vec<Term> {
    v.iter().flat_map(|e| e.triples()).map(|t| t.coeff).collect()
}

/// Outermost collapsing subterms.
pub fn eset(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    fn go(t: &Term, out: &mut Vec<Term>) {
        match t.kind() {
            Kind::Zero | Kind::Kappa => {}
            Kind::Sum(ps) => ps.iter().for_each(|p| go(p, out)),
            Kind::Phi(a, b) => {
                go(a, out);
                go(b, out)
            }
            Kind::OmegaExp(a) | Kind::OmegaIdx(a) => go(a, out),
            Kind::Psi(..) => {
                if !out.contains(t) {
                    out.push(t.clone())
                }
            }
        }
    }
    go(t, &mut out);
    out
}

/// Immediate subterms with collapsing terms standing for themselves.
pub fn subterms(t: &Term) -> Vec<Term> {
    let mut out: Vec<Term> = match t.kind() {
        Kind::Zero | Kind::Kappa => vec![],
        Kind::Psi(..) => vec![t.clone()],
        _ => t.children(),
    };
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths() {
        assert_eq!(Term::zero().len(), 1);
        assert_eq!(Term::one().len(), 3);
        let c = Config::new(3);
        assert_eq!(Term::psi(Term::kappa(), c.zero_vec(), Term::zero()).len(), 4);
        assert_eq!(Term::nat(3).len(), 11);
        assert_eq!(ETerm::one().len(), 7);
    }

    #[test]
    fn sum_flattens() {
        let s = Term::sum(vec![Term::nat(2), Term::one()]);
        assert_eq!(s, Term::nat(3));
        assert_eq!(Term::sum(vec![Term::one()]), Term::one());
        assert!(Term::sum(vec![]).is_zero());
    }

    #[test]
    fn subterm_sets() {
        assert!(subterms(&Term::zero()).is_empty());
        let p = Term::phi(Term::kappa(), Term::one());
        assert_eq!(subterms(&p), vec![Term::kappa(), Term::one()]);
        let s = Term::psi(Term::big_omega(), Config::default().zero_vec(), Term::zero());
        assert_eq!(subterms(&s), vec![s.clone()]);
        assert_eq!(eset(&s), vec![s.clone()]);
        assert!(eset(&Term::kappa()).is_empty());
        let two_om = Term::sum(vec![Term::big_omega(), Term::big_omega()]);
        assert_eq!(eset(&two_om), eset(&Term::one()));
    }

    #[test]
    fn structural_equality_is_deep() {
        let a = Term::phi(Term::zero(), Term::one());
        let b = Term::omega();
        assert!(!a.ptr_eq(&b));
        assert_eq!(a, b);
        assert_ne!(a, Term::one());
    }
}
