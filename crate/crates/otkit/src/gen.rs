//! Seeded random generation: terms by grammar-directed sampling with
//! rejection, exponent terms, irreducible vectors and regular chains.

use crate::order::{compare, ecmp, hd_n, lt, te};
use crate::term::{Config, ETerm, Mono, Term, Triple};
use crate::validity::{extend_at, in_slice, is_irreducible, is_strongly_irreducible, is_valid};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("acceptance {accepted}/{attempts} is below 0.1%; check the shape weights")]
    LowAcceptance { attempts: usize, accepted: usize },
}

/// Relative frequency of each constructor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Weights {
    pub zero: u32,
    pub kappa: u32,
    pub sum: u32,
    pub phi: u32,
    pub omega_exp: u32,
    pub omega_idx: u32,
    pub psi: u32,
}

impl Default for Weights {
    fn default() -> Self {
        Weights { zero: 3, kappa: 1, sum: 2, phi: 3, omega_exp: 1, omega_idx: 2, psi: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub seed: u64,
    pub count: usize,
    pub max_len: usize,
    pub cfg: Config,
    pub slice: Option<usize>,
    pub weights: Weights,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec { seed: 0, count: 10, max_len: 12, cfg: Config::new(3), slice: None, weights: Weights::default() }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pick(rng: &mut ChaCha8Rng, w: &Weights, budget: usize) -> usize {
    let table = [w.zero, w.kappa, w.sum, w.phi, w.omega_exp, w.omega_idx, w.psi];
    let allowed: Vec<usize> = (0..7).filter(|&i| table[i] > 0 && (budget >= 3 || i < 2)).collect();
    if allowed.is_empty() {
        return 0;
    }
    let total: u32 = allowed.iter().map(|&i| table[i]).sum();
    let mut x = rng.gen_range(0..total);
    for &i in &allowed {
        if x < table[i] {
            return i;
        }
        x -= table[i];
    }
    0
}

fn split(rng: &mut ChaCha8Rng, budget: usize) -> (usize, usize) {
    let a = rng.gen_range(1..budget);
    (a, budget - a)
}

/// A raw term of length at most `budget`.
pub fn random_term(rng: &mut ChaCha8Rng, w: &Weights, cfg: Config, budget: usize) -> Term {
    match pick(rng, w, budget) {
        0 => Term::zero(),
        1 => Term::kappa(),
        2 => {
            let (a, b) = split(rng, budget - 1);
            let mut parts = vec![random_term(rng, w, cfg, a), random_term(rng, w, cfg, b)];
            parts.sort_by(|x, y| compare(y, x));
            Term::sum(parts)
        }
        3 => {
            let (a, b) = split(rng, budget - 1);
            Term::phi(random_term(rng, w, cfg, a), random_term(rng, w, cfg, b))
        }
        4 => Term::omega_exp(random_term(rng, w, cfg, budget - 1)),
        5 => Term::omega_idx(random_term(rng, w, cfg, budget - 1)),
        _ => {
            let (a, b) = split(rng, budget - 1);
            let arg = random_term(rng, w, cfg, b);
            let mut v = cfg.zero_vec();
            let anchor = if rng.gen_bool(0.5) {
                if b >= 3 && rng.gen_bool(0.3) {
                    let stage = arg.clone();
                    let coeff = if rng.gen_bool(0.5) { Term::one() } else { stage.clone() };
                    v[cfg.width() - 1] = ETerm::ktriple(coeff, stage);
                }
                Term::kappa()
            } else {
                random_term(rng, w, cfg, a)
            };
            Term::psi(anchor, v, arg)
        }
    }
}

/// Acceptance under 0.1% once enough attempts have been made.
pub fn below_floor(attempts: usize, accepted: usize) -> bool {
    attempts >= 10_000 && accepted * 1000 < attempts
}

/// `spec.count` valid terms, sampled with rejection.  Each output draws a
/// length budget uniformly and retries until a valid term of at least half
/// that length comes out, so long terms are not crowded out by leaves.
pub fn generate(spec: &GenSpec) -> Result<Vec<Term>, GenError> {
    let mut r = rng(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    let (mut attempts, mut accepted) = (0usize, 0usize);
    while out.len() < spec.count {
        let budget = r.gen_range(1..=spec.max_len.max(1));
        for _ in 0..1000 {
            attempts += 1;
            let t = random_term(&mut r, &spec.weights, spec.cfg, budget);
            let sized = t.len() <= spec.max_len && 2 * t.len() >= budget;
            if sized && is_valid(&t, spec.cfg) && spec.slice.is_none_or(|n| in_slice(&t, n)) {
                accepted += 1;
                out.push(t);
                break;
            }
        }
        if below_floor(attempts, accepted) {
            return Err(GenError::LowAcceptance { attempts, accepted });
        }
    }
    Ok(out)
}

/// Small collapse-free terms, increasing.
pub fn small_terms() -> Vec<Term> {
    let w = Term::omega();
    vec![
        Term::one(),
        Term::nat(2),
        Term::nat(3),
        Term::nat(4),
        w.clone(),
        Term::sum(vec![w.clone(), Term::one()]),
        Term::sum(vec![w.clone(), w.clone()]),
        Term::phi(Term::zero(), Term::nat(2)),
    ]
}

fn small(rng: &mut ChaCha8Rng) -> Term {
    small_terms().choose(rng).unwrap().clone()
}

fn smaller_in(rng: &mut ChaCha8Rng, pool: &[Term], t: &Term) -> Option<Term> {
    let below: Vec<&Term> = pool.iter().filter(|x| lt(x, t)).collect();
    below.choose(rng).map(|x| (*x).clone())
}

fn k_triple(rng: &mut ChaCha8Rng) -> Triple {
    Triple::new(small(rng), Term::kappa(), small(rng))
}

/// A random exponent term with nesting at most `depth`.
pub fn random_eterm(rng: &mut ChaCha8Rng, depth: usize) -> ETerm {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.2) { ETerm::Zero } else { ETerm::KTriple(k_triple(rng).into()) };
    }
    let n = rng.gen_range(1..=3);
    let mut exps: Vec<ETerm> = (0..n).map(|_| random_eterm(rng, depth - 1)).filter(|e| !e.is_zero()).collect();
    exps.sort_by(|a, b| ecmp(b, a));
    exps.dedup_by(|a, b| ecmp(a, b).is_eq());
    if exps.is_empty() {
        exps.push(ETerm::one());
    }
    ETerm::lsum(exps.into_iter().map(|exp| Mono { exp, coef: k_triple(rng) }).collect())
}

/// Strictly above `x`.
fn exceed(x: &ETerm) -> ETerm {
    if x.is_zero() {
        ETerm::one()
    } else {
        ETerm::mono(x.clone(), Triple::new(Term::one(), Term::kappa(), Term::one()))
    }
}

/// At least `L_j(x + 1)`.
fn at_least_tower(j: usize, x: &ETerm) -> ETerm {
    if j == 0 {
        exceed(x)
    } else {
        ETerm::mono(at_least_tower(j - 1, x), Triple::new(Term::one(), Term::kappa(), Term::one()))
    }
}

/// An irreducible vector, built from the last entry back.
pub fn irreducible_vector(rng: &mut ChaCha8Rng, cfg: Config) -> Vec<ETerm> {
    let w = cfg.width();
    let mut v = vec![ETerm::Zero; w];
    for i in (0..w).rev() {
        if rng.gen_bool(0.3) {
            continue;
        }
        let need = (i + 1..w).filter(|&j| !v[j].is_zero()).map(|j| at_least_tower(j - i - 1, &v[j])).max_by(ecmp);
        v[i] = match need {
            None => random_eterm(rng, 2),
            Some(tail) => {
                let tail = if rng.gen_bool(0.3) { exceed(&tail) } else { tail };
                let mut ms = Vec::new();
                if rng.gen_bool(0.4) {
                    ms.push(Mono { exp: exceed(&tail), coef: k_triple(rng) });
                }
                ms.push(Mono { exp: tail, coef: k_triple(rng) });
                ETerm::lsum(ms)
            }
        };
    }
    debug_assert!(is_irreducible(&v));
    v
}

/// Same monomials, last coefficient lowered.
fn lower_last(rng: &mut ChaCha8Rng, x: &ETerm) -> Option<ETerm> {
    lower_last_in(rng, &small_terms(), x)
}

fn lower_last_in(rng: &mut ChaCha8Rng, pool: &[Term], x: &ETerm) -> Option<ETerm> {
    let mut ms = x.monos();
    let (_, last) = ms.last_mut()?;
    last.coeff = smaller_in(rng, pool, &last.coeff)?;
    Some(match x {
        ETerm::KTriple(_) => ETerm::KTriple(ms.pop()?.1.into()),
        _ => ETerm::lsum(ms.into_iter().map(|(exp, coef)| Mono { exp, coef }).collect()),
    })
}

/// A strongly irreducible vector: leading zeros, a run of entries each
/// lowering the tail exponent of the previous one, trailing zeros.
pub fn strongly_irreducible_vector(rng: &mut ChaCha8Rng, cfg: Config) -> Vec<ETerm> {
    let w = cfg.width();
    loop {
        let mut v = vec![ETerm::Zero; w];
        let start = rng.gen_range(0..w);
        v[start] = random_eterm(rng, w + 1);
        for i in start + 1..w {
            if rng.gen_bool(0.15) {
                break;
            }
            match lower_last(rng, &te(&v[i - 1])) {
                Some(x) => v[i] = x,
                None => break,
            }
        }
        if is_strongly_irreducible(&v) {
            return v;
        }
    }
}

fn nat_plus(base: &Term, n: usize) -> Term {
    let mut parts = base.parts().to_vec();
    parts.extend(std::iter::repeat_n(Term::one(), n));
    Term::sum(parts)
}

/// A chain of K-collapse, stepping and below-anchor nodes in the regular
/// pattern, returned bottom first.  Needs `N >= 4`.
pub fn regular_chain(rng: &mut ChaCha8Rng, cfg: Config, blocks: usize) -> Vec<Term> {
    regular_chain_with(rng, cfg, blocks, &Term::omega(), &small_terms())
}

/// As [`regular_chain`], with stages built on `base` and coefficients drawn
/// from `pool`.
pub fn regular_chain_with(rng: &mut ChaCha8Rng, cfg: Config, blocks: usize, base: &Term, pool: &[Term]) -> Vec<Term> {
    assert!(cfg.levels >= 4, "regular chains need at least four levels");
    'restart: loop {
        let mut arg = nat_plus(base, rng.gen_range(0..3));
        let mut v = cfg.zero_vec();
        v[cfg.width() - 1] = ETerm::ktriple(pool.choose(rng).unwrap().clone(), arg.clone());
        let top = Term::psi(Term::kappa(), v, arg.clone());
        if !is_valid(&top, cfg) {
            continue;
        }
        let mut nodes = vec![top];
        for b in 0..blocks {
            for k in (2..cfg.levels - 1).rev() {
                let pi = nodes.last().unwrap().clone();
                let Some(node) = (0..20).find_map(|_| {
                    let a = nat_plus(&arg, rng.gen_range(1..3));
                    let coeff = smaller_in(rng, pool, &a).unwrap_or_else(Term::one);
                    let m = pi.as_psi().unwrap().1;
                    let nu = extend_at(m, k - 2, Triple::new(coeff, pi.clone(), a.clone()));
                    let t = Term::psi(pi.clone(), nu, a);
                    is_valid(&t, cfg).then_some(t)
                }) else {
                    continue 'restart;
                };
                arg = node.as_psi().unwrap().2.clone();
                nodes.push(node);
            }
            let pi = nodes.last().unwrap().clone();
            let last = b + 1 == blocks;
            let Some(node) = (0..50).find_map(|_| {
                let nu = below_vector(rng, pool, &pi.as_psi().unwrap().1[0], cfg, last)?;
                let t = Term::psi(pi.clone(), nu, nat_plus(&arg, rng.gen_range(1..3)));
                is_valid(&t, cfg).then_some(t)
            }) else {
                continue 'restart;
            };
            arg = node.as_psi().unwrap().2.clone();
            nodes.push(node);
        }
        nodes.reverse();
        return nodes;
    }
}

/// A candidate `nu <_Ksl x`: entry `i` lowers a head of the tail exponent
/// reached so far.  Unless `last`, the final entry must be nonzero.
fn below_vector(rng: &mut ChaCha8Rng, pool: &[Term], x: &ETerm, cfg: Config, last: bool) -> Option<Vec<ETerm>> {
    let w = cfg.width();
    let first = if rng.gen_bool(0.25) { rng.gen_range(0..w) } else { 0 };
    let end = if last && rng.gen_bool(0.3) { rng.gen_range(first + 1..=w) } else { w };
    let mut v = vec![ETerm::Zero; w];
    let mut cur = x.clone();
    for (i, entry) in v.iter_mut().enumerate() {
        if cur.width() == 0 {
            return None;
        }
        let mu = hd_n(rng.gen_range(0..cur.width()), &cur);
        if (first..end).contains(&i) {
            *entry = lower_last_in(rng, pool, &mu)?;
        }
        cur = te(&mu);
    }
    Some(v)
}

/// Fresh regular chains, bottom terms only.
pub fn regular_chains(seed: u64, count: usize, cfg: Config) -> Vec<Term> {
    let mut r = rng(seed);
    let max_blocks = if cfg.levels == 4 { 3 } else { 2 };
    (0..count)
        .map(|_| {
            let blocks = r.gen_range(1..=max_blocks);
            regular_chain(&mut r, cfg, blocks).swap_remove(0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validity::{clause_of, Clause};

    #[test]
    fn generation_replays() {
        let spec = GenSpec { count: 20, ..GenSpec::default() };
        let a = generate(&spec).unwrap();
        assert_eq!(a, generate(&spec).unwrap());
        assert!(a.iter().all(|t| is_valid(t, spec.cfg) && t.len() <= spec.max_len));
    }

    #[test]
    fn acceptance_floor() {
        assert!(!below_floor(9_999, 0));
        assert!(below_floor(10_000, 9));
        assert!(!below_floor(10_000, 10));
    }

    #[test]
    fn vectors() {
        let mut r = rng(7);
        for n in [3, 4, 5] {
            let cfg = Config::new(n);
            for _ in 0..50 {
                assert!(is_irreducible(&irreducible_vector(&mut r, cfg)));
                assert!(is_strongly_irreducible(&strongly_irreducible_vector(&mut r, cfg)));
            }
        }
    }

    #[test]
    fn chains_follow_the_pattern() {
        let mut r = rng(1);
        for n in [4, 5] {
            let cfg = Config::new(n);
            let nodes = regular_chain(&mut r, cfg, 2);
            assert_eq!(nodes.len(), 1 + 2 * (n - 2));
            assert!(nodes.windows(2).all(|w| lt(&w[0], &w[1])));
            assert_eq!(clause_of(nodes.last().unwrap(), cfg), Some(Clause::KCollapse));
            assert!(matches!(clause_of(&nodes[0], cfg), Some(Clause::Below { .. })));
            assert!(nodes.iter().all(|t| is_valid(t, cfg)));
        }
    }
}
