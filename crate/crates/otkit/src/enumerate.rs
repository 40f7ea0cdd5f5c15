//! Exhaustive enumeration of valid terms by length.
//!
//! Terms of each exact length are assembled from valid terms of smaller
//! lengths, since every subterm of a valid term is valid.  Candidates go
//! through the validator.

use crate::order::{ecmp, le, GT};
use crate::term::{Config, ETerm, Kind, Mono, Term, Triple};
use crate::validity::is_valid;

/// Valid terms and exponent candidates bucketed by exact length.
pub struct Enumerator {
    cfg: Config,
    terms: Vec<Vec<Term>>,
    eterms: Vec<Vec<ETerm>>,
}

impl Enumerator {
    pub fn new(cfg: Config) -> Enumerator {
        Enumerator { cfg, terms: vec![vec![]], eterms: vec![vec![]] }
    }

    /// Valid terms of length exactly `l`.
    pub fn terms_of_len(&mut self, l: usize) -> &[Term] {
        self.grow(l);
        &self.terms[l]
    }

    fn grow(&mut self, l: usize) {
        while self.terms.len() <= l {
            let n = self.terms.len();
            let ts = self.build_terms(n);
            self.terms.push(ts);
            let es = self.build_eterms(n);
            self.eterms.push(es);
        }
    }

    fn build_terms(&self, l: usize) -> Vec<Term> {
        let mut cands = Vec::new();
        if l == 1 {
            cands.push(Term::zero());
            cands.push(Term::kappa());
        }
        if l >= 2 {
            for b in &self.terms[l - 1] {
                cands.push(Term::omega_exp(b.clone()));
                cands.push(Term::omega_idx(b.clone()));
            }
        }
        if l >= 3 {
            for la in 1..l - 1 {
                for a in &self.terms[la] {
                    for b in &self.terms[l - 1 - la] {
                        cands.push(Term::phi(a.clone(), b.clone()));
                    }
                }
            }
            // p + rest, with p principal and the head of rest at most p
            for lp in 1..l - 1 {
                for p in self.terms[lp].iter().filter(|p| principal(p)) {
                    for rest in &self.terms[l - 1 - lp] {
                        if rest.is_zero() || !le(&rest.parts()[0], p) {
                            continue;
                        }
                        let mut parts = vec![p.clone()];
                        parts.extend(rest.parts().iter().cloned());
                        cands.push(Term::sum_raw(parts));
                    }
                }
            }
            self.psi_candidates(l, &mut cands);
        }
        let mut out: Vec<Term> = cands.into_iter().filter(|t| t.len() == l && is_valid(t, self.cfg)).collect();
        sort_printed(&mut out);
        out.dedup();
        out
    }

    fn psi_candidates(&self, l: usize, out: &mut Vec<Term>) {
        let w = self.cfg.width();
        // 1 + len(anchor) + len(vector) + len(arg) = l, each vector entry at least 1
        for lp in 1..l {
            for la in 1..l {
                if 1 + lp + la + w > l {
                    continue;
                }
                let lv = l - 1 - lp - la;
                let vecs = self.vectors(w, lv);
                for pi in &self.terms[lp] {
                    if !anchor_shape(pi) {
                        continue;
                    }
                    for a in &self.terms[la] {
                        for v in &vecs {
                            out.push(Term::psi(pi.clone(), v.clone(), a.clone()));
                        }
                    }
                }
            }
        }
    }

    /// Vectors of `w` exponent candidates with total length `lv`.
    fn vectors(&self, w: usize, lv: usize) -> Vec<Vec<ETerm>> {
        if w == 0 {
            return if lv == 0 { vec![vec![]] } else { vec![] };
        }
        let mut out = Vec::new();
        for l0 in 1..=lv.saturating_sub(w - 1) {
            if l0 >= self.eterms.len() {
                break;
            }
            for rest in self.vectors(w - 1, lv - l0) {
                for e in &self.eterms[l0] {
                    let mut v = vec![e.clone()];
                    v.extend(rest.iter().cloned());
                    out.push(v);
                }
            }
        }
        out
    }

    /// Exponent candidates of length exactly `l`, built from valid terms
    /// and shorter candidates.
    fn build_eterms(&self, l: usize) -> Vec<ETerm> {
        let mut out = Vec::new();
        if l == 1 {
            out.push(ETerm::Zero);
        }
        // <b,K,a>
        for lb in 1..l.saturating_sub(1) {
            let la = l - 1 - lb;
            for b in self.terms[lb].iter().filter(|b| !b.is_zero()) {
                for a in &self.terms[la] {
                    out.push(ETerm::ktriple(b.clone(), a.clone()));
                }
            }
        }
        // L^e <b,pi,a> + rest
        for le_ in 1..l {
            for e in self.eterms[le_].iter().filter(|e| !e.is_zero()) {
                for lc in 3..l {
                    if 1 + le_ + lc > l {
                        break;
                    }
                    let rem = l - 1 - le_ - lc;
                    let rests: Vec<Option<&ETerm>> = if rem == 0 {
                        vec![None]
                    } else if rem >= 2 {
                        self.eterms[rem - 1]
                            .iter()
                            .filter(|r| matches!(r, ETerm::LSum(ms) if ecmp(e, &ms[0].exp) == GT))
                            .map(Some)
                            .collect()
                    } else {
                        vec![]
                    };
                    if rests.is_empty() {
                        continue;
                    }
                    for coef in self.triples(lc) {
                        for r in &rests {
                            let mut ms = vec![Mono { exp: e.clone(), coef: coef.clone() }];
                            if let Some(ETerm::LSum(rs)) = r {
                                ms.extend(rs.iter().cloned());
                            }
                            out.push(ETerm::lsum(ms));
                        }
                    }
                }
            }
        }
        out
    }

    fn triples(&self, l: usize) -> Vec<Triple> {
        let mut out = Vec::new();
        for lb in 1..l {
            for lp in 1..l - lb {
                let la = l - lb - lp;
                for b in self.terms[lb].iter().filter(|b| !b.is_zero()) {
                    for p in self.terms[lp].iter().filter(|p| anchor_shape(p)) {
                        for a in &self.terms[la] {
                            out.push(Triple::new(b.clone(), p.clone(), a.clone()));
                        }
                    }
                }
            }
        }
        out
    }
}

fn principal(t: &Term) -> bool {
    !matches!(t.kind(), Kind::Zero | Kind::Sum(_))
}

fn anchor_shape(t: &Term) -> bool {
    matches!(t.kind(), Kind::Kappa | Kind::OmegaIdx(_) | Kind::Psi(..))
}

/// Sorts by length, then printed form.
pub fn sort_printed(ts: &mut [Term]) {
    ts.sort_by_cached_key(|t| (t.len(), t.to_string()));
}

/// All valid terms of length at most `max_len`, by length then printed form.
pub fn enumerate(max_len: usize, cfg: Config) -> Vec<Term> {
    let mut e = Enumerator::new(cfg);
    (1..=max_len).flat_map(|l| e.terms_of_len(l).to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate, GenSpec};
    use crate::parse::parse_term;

    #[test]
    fn shortest_terms() {
        let c = Config::new(3);
        assert_eq!(enumerate(1, c), vec![Term::zero(), Term::kappa()]);
        let four = enumerate(4, c);
        assert!(four.contains(&Term::one()));
        assert!(four.contains(&Term::big_omega()));
        assert!(!four.contains(&Term::omega_idx(Term::zero())));
        assert!(four.iter().all(|t| is_valid(t, c)));
    }

    #[test]
    fn collapsing_terms_appear() {
        let c = Config::new(3);
        let ts = enumerate(7, c);
        assert!(ts.contains(&parse_term("psi(K; 0)", c).unwrap()));
        assert!(ts.contains(&parse_term("psi(Om(phi(0,0)); 0)", c).unwrap()));
    }

    #[test]
    fn contains_every_sampled_term() {
        for n in [3, 4] {
            let cfg = Config::new(n);
            let ts = enumerate(7, cfg);
            let spec = GenSpec { count: 300, max_len: 7, cfg, ..GenSpec::default() };
            for t in generate(&spec).unwrap() {
                assert!(ts.contains(&t), "{t} missing");
            }
        }
    }

    #[test]
    fn ordered_and_duplicate_free() {
        let ts = enumerate(5, Config::new(3));
        for w in ts.windows(2) {
            assert!((w[0].len(), w[0].to_string()) < (w[1].len(), w[1].to_string()));
        }
    }
}
