//! Predecessor chains, the `k`-predecessors, the sequences `alpha_k^m`,
//! and the towers `E_i(eta)` with their exponential orderings.
//!
//! A chain lists the collapsing terms `alpha, pd(alpha), ...` up to the
//! node whose anchor is `K`.  Positions are indices into that list; the
//! index `len()` stands for `K` itself.

use crate::coefficients::{all_le, f_delta, kdelta};
use crate::order::{hd_n, lt, lt_kst, st};
use crate::term::{Config, ETerm, Term};
use crate::validity::{clause_of, is_valid, Clause};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("{0} is not a collapsing term")]
    NotPsi(String),
    #[error("{0} has the zero vector")]
    ZeroVector(String),
    #[error("{0} is not a valid term")]
    Invalid(String),
    #[error("anchor {0} is neither K nor a collapsing term")]
    BadAnchor(String),
    #[error("outside the domain at level {level}: {detail}")]
    Domain { level: usize, detail: String },
    #[error("m_{k} of {term} is zero")]
    NoComponent { term: String, k: usize },
}

/// How a stepping node jumps past the levels above its own.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StepRule {
    /// `pd^{(N-1-k)}`: lands on the node that starts the next block.
    #[default]
    Block,
    /// `pd^{(N-k)}`: one node further.
    Shifted,
}

#[derive(Clone, Debug)]
pub struct Chain {
    cfg: Config,
    rule: StepRule,
    nodes: Vec<Term>,
    clauses: Vec<Clause>,
    /// `q_k(nu_j)` at `[k][j]`.
    q_table: Vec<Vec<usize>>,
}

impl Chain {
    pub fn build(alpha: &Term, cfg: Config) -> Result<Chain, TowerError> {
        Chain::build_with(alpha, cfg, StepRule::default())
    }

    pub fn build_with(alpha: &Term, cfg: Config, rule: StepRule) -> Result<Chain, TowerError> {
        if !alpha.is_psi() {
            return Err(TowerError::NotPsi(alpha.to_string()));
        }
        if !is_valid(alpha, cfg) {
            return Err(TowerError::Invalid(alpha.to_string()));
        }
        let mut nodes = Vec::new();
        let mut clauses = Vec::new();
        let mut cur = alpha.clone();
        loop {
            let clause = clause_of(&cur, cfg).ok_or_else(|| TowerError::Invalid(cur.to_string()))?;
            if clause == Clause::Plain {
                return Err(TowerError::ZeroVector(cur.to_string()));
            }
            let anchor = cur.as_psi().unwrap().0.clone();
            nodes.push(cur);
            clauses.push(clause);
            if anchor.is_kappa() {
                break;
            }
            if !anchor.is_psi() {
                return Err(TowerError::BadAnchor(anchor.to_string()));
            }
            cur = anchor;
        }
        let len = nodes.len();
        let mut chain = Chain { cfg, rule, nodes, clauses, q_table: vec![vec![0; len]; cfg.levels] };
        for j in (0..len).rev() {
            for k in 2..cfg.levels {
                chain.q_table[k][j] = chain.compute_q(k, j);
            }
        }
        Ok(chain)
    }

    pub fn cfg(&self) -> Config {
        self.cfg
    }

    pub fn rule(&self) -> StepRule {
        self.rule
    }

    /// Number of collapsing nodes; also the index standing for `K`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn top(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Term] {
        &self.nodes
    }

    /// The nodes followed by `K`.
    pub fn terms(&self) -> Vec<Term> {
        let mut out = self.nodes.clone();
        out.push(Term::kappa());
        out
    }

    /// The term at index `j`, `K` past the last node.
    pub fn term(&self, j: usize) -> Term {
        self.nodes.get(j).cloned().unwrap_or_else(Term::kappa)
    }

    pub fn clause(&self, j: usize) -> Option<&Clause> {
        self.clauses.get(j)
    }

    pub fn index_of(&self, t: &Term) -> Option<usize> {
        if t.is_kappa() {
            return Some(self.top());
        }
        self.nodes.iter().position(|n| n == t)
    }

    fn levels(&self) -> usize {
        self.cfg.levels
    }

    /// `m_k` of node `j`, zero past the chain.
    pub fn m(&self, j: usize, k: usize) -> ETerm {
        match self.nodes.get(j) {
            Some(t) => t.as_psi().unwrap().1[k - 2].clone(),
            None => ETerm::Zero,
        }
    }

    /// Entry `p_k` of the least `<_Ksl` witness; zero off below-anchor nodes.
    pub fn p(&self, j: usize, k: usize) -> usize {
        match self.clauses.get(j) {
            Some(Clause::Below { witness }) => witness.get(k - 2).copied().unwrap_or(0),
            _ => 0,
        }
    }

    /// `q_k(nu_j)`, with `q_1 = 0`.
    pub fn q(&self, k: usize, j: usize) -> usize {
        if k <= 1 || j >= self.len() {
            return 0;
        }
        self.q_table[k][j]
    }

    /// Fills `q_k(nu_j)` once every higher node and lower level is known.
    fn compute_q(&self, k: usize, j: usize) -> usize {
        if self.p(j, k) == 0 {
            self.q(k - 1, j)
        } else {
            let r = self.r(k, j);
            r + self.q(k, j + r)
        }
    }

    /// `q_k(n, nu_j)`.
    pub fn qn(&self, k: usize, n: usize, j: usize) -> usize {
        if n == 0 || j >= self.len() {
            return 0;
        }
        let m = self.q(k - 1, j) + self.levels() - 2;
        m + self.qn(k, n - 1 + self.p(j, k), j + m)
    }

    /// `r_k(nu_j)`, zero when `p_k = 0`.
    pub fn r(&self, k: usize, j: usize) -> usize {
        let p = self.p(j, k);
        if p == 0 || j >= self.len() {
            return 0;
        }
        let m = self.q(k - 1, j) + self.levels() - 2;
        m + self.qn(k, p - 1, j + m)
    }

    fn up(&self, j: usize, steps: usize) -> usize {
        (j + steps).min(self.top())
    }

    /// Index of `pd_k` of node `j`, for `2 <= k <= N`.
    pub fn pd_k(&self, j: usize, k: usize) -> usize {
        let n = self.levels();
        if j >= self.len() || k >= n {
            return self.top();
        }
        match &self.clauses[j] {
            Clause::KCollapse => self.top(),
            Clause::Step { k: kk } => {
                if k <= kk + 1 {
                    self.up(j, 1)
                } else {
                    let steps = match self.rule {
                        StepRule::Block => n - 1 - kk,
                        StepRule::Shifted => n - kk,
                    };
                    self.up(j, steps)
                }
            }
            Clause::Below { .. } => self.up(j, self.q(k - 1, j) + k - 1),
            Clause::Plain => self.up(j, 1),
        }
    }

    /// The `pd_k`-path from `j` (exclusive) up to `K`.
    fn path(&self, j: usize, k: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = j;
        while cur < self.top() {
            cur = self.pd_k(cur, k);
            out.push(cur);
        }
        out
    }

    /// `j <_k i` in the transitive closure of `pd_k`.
    pub fn prec_k(&self, j: usize, i: usize, k: usize) -> bool {
        self.path(j, k).contains(&i)
    }

    pub fn preceq_k(&self, j: usize, i: usize, k: usize) -> bool {
        j == i || self.prec_k(j, i, k)
    }

    /// `j` at or below `i` along the anchors.
    pub fn preceq(&self, j: usize, i: usize) -> bool {
        j <= i
    }

    /// First coefficient `st_k`, zero when `m_k` vanishes.
    pub fn st_k(&self, j: usize, k: usize) -> Term {
        st(&self.m(j, k)).map(|t| t.coeff).unwrap_or_else(Term::zero)
    }

    fn splits(&self, j: usize, k: usize) -> bool {
        j < self.len() && self.pd_k(j, k) != self.pd_k(j, k + 1)
    }

    /// First node at or above `j` on the `pd_k`-path where `pd_k` and
    /// `pd_{k+1}` differ.
    fn first_split(&self, j: usize, k: usize) -> Option<usize> {
        std::iter::once(j).chain(self.path(j, k)).find(|&d| self.splits(d, k))
    }

    /// The sequence `alpha_k^0, alpha_k^1, ...`; its length is `lh_k`.
    pub fn kseq(&self, j: usize, k: usize) -> Vec<usize> {
        let last = self.len() - 1;
        let Some(first) = self.first_split(j, k) else {
            return vec![last];
        };
        let mut out = vec![first];
        loop {
            let from = self.pd_k(*out.last().unwrap(), k + 1);
            match (from < self.top()).then(|| self.first_split(from, k)).flatten() {
                Some(next) => out.push(next),
                None => {
                    out.push(last);
                    return out;
                }
            }
        }
    }

    pub fn lh(&self, j: usize, k: usize) -> usize {
        self.kseq(j, k).len()
    }

    /// `S_i(eta)`.
    pub fn s_i(&self, j: usize, i: usize) -> Vec<usize> {
        let mut cur = self.kseq(j, 2);
        for level in 3..=i {
            let mut next: Vec<usize> = cur.iter().flat_map(|&r| self.kseq(r, level)).collect();
            next.sort_unstable();
            next.dedup();
            cur = next;
        }
        cur.sort_unstable();
        cur.dedup();
        cur
    }

    /// `eta <_i rho`.
    pub fn lt_i(&self, i: usize, a: usize, b: usize) -> bool {
        a < self.len()
            && b < self.len()
            && self.prec_k(a, b, i)
            && self.pd_k(a, i) != self.pd_k(a, i + 1)
            && self.pd_k(a, i + 1) == self.pd_k(b, i + 1)
    }

    /// `E_i(eta)` for `2 <= i <= N-1`.
    pub fn e_tower(&self, j: usize, i: usize) -> Tower {
        if i + 1 >= self.levels() {
            return Tower::Leaf(self.term(j));
        }
        let seq = self.kseq(j, i);
        let mut ms = Vec::with_capacity(seq.len() + 1);
        for m in (1..seq.len()).rev() {
            ms.push((self.e_tower(seq[m], i + 1), Coef::Term(self.term(seq[m - 1]))));
        }
        ms.push((Tower::Succ(Box::new(self.e_tower(seq[0], i + 1))), Coef::Unit));
        ms.push((self.e_tower(j, i + 1), Coef::Unit));
        Tower::Node(ms)
    }

    /// `T(eta) = E_2(eta)`.
    pub fn tower(&self, j: usize) -> Tower {
        self.e_tower(j, 2)
    }

    fn idx(&self, t: &Term) -> Option<usize> {
        self.index_of(t).filter(|&j| j < self.len())
    }

    fn coef_lt(&self, i: usize, x: &Coef, y: &Coef) -> bool {
        match (x, y) {
            (Coef::Term(a), Coef::Term(b)) => match (self.idx(a), self.idx(b)) {
                (Some(a), Some(b)) => self.lt_i(i, a, b),
                _ => false,
            },
            _ => false,
        }
    }

    /// `<_{E_i}` with the successor extension.
    pub fn tower_lt(&self, i: usize, x: &Tower, y: &Tower) -> bool {
        match (x, y) {
            (Tower::Succ(a), Tower::Succ(b)) => self.tower_lt(i, a, b),
            (Tower::Succ(a), b) => self.tower_lt(i, a, b),
            (a, Tower::Succ(b)) => a == &**b || self.tower_lt(i, a, b),
            (Tower::Leaf(a), Tower::Leaf(b)) => match (self.idx(a), self.idx(b)) {
                (Some(a), Some(b)) => i + 1 >= self.levels() && self.lt_i(self.levels() - 1, a, b),
                _ => false,
            },
            (Tower::Node(xs), Tower::Node(ys)) => {
                exp_less(xs, ys, |a, b| self.tower_lt(i + 1, a, b), |a, b| self.coef_lt(i, a, b))
            }
            _ => false,
        }
    }

    /// `<p, gamma>` lies in the domain of `<_{E_i,p}`.
    pub fn in_domain(&self, i: usize, x: &Tower, gamma: &Term) -> Result<(), TowerError> {
        let g = self
            .index_of(gamma)
            .ok_or_else(|| TowerError::Domain { level: i, detail: format!("{} is not on the chain", gamma) })?;
        self.domain_at(i, x, g)
    }

    fn domain_at(&self, i: usize, x: &Tower, g: usize) -> Result<(), TowerError> {
        let fail = |detail: String| Err(TowerError::Domain { level: i, detail });
        let below = |t: &Term| self.index_of(t).is_some_and(|j| self.preceq(g, j));
        match x {
            Tower::Succ(a) => self.domain_at(i, a, g),
            Tower::Leaf(a) => {
                if below(a) {
                    Ok(())
                } else {
                    fail(format!("anchor is not below {}", a))
                }
            }
            Tower::Node(ms) => {
                for w in ms.windows(2) {
                    if !self.tower_lt(i + 1, &w[1].0, &w[0].0) {
                        return fail(format!("exponents {} and {} are not decreasing", w[0].0, w[1].0));
                    }
                }
                for (e, c) in ms {
                    self.domain_at(i + 1, e, g)?;
                    if let Coef::Term(t) = c {
                        if !below(t) {
                            return fail(format!("anchor is not below coefficient {}", t));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// `<x, gamma> <_{E_i,p} <y, eta>`.
    pub fn tower_lt_p(&self, i: usize, x: &Tower, gamma: &Term, y: &Tower, eta: &Term) -> Result<bool, TowerError> {
        self.in_domain(i, x, gamma)?;
        self.in_domain(i, y, eta)?;
        let (g, e) = (self.index_of(gamma).unwrap(), self.index_of(eta).unwrap());
        Ok(self.tower_lt(i, x, y) && self.preceq(g, e))
    }

    /// `<T(eta), eta>`.
    pub fn pair_tower(&self, j: usize) -> PairedTower {
        PairedTower { tower: self.tower(j), anchor: self.term(j) }
    }

    /// `<_{T,p}`.
    pub fn tower_compare_p(&self, a: &PairedTower, b: &PairedTower) -> Result<bool, TowerError> {
        self.tower_lt_p(2, &a.tower, &a.anchor, &b.tower, &b.anchor)
    }
}

/// A tower with the anchor used by `<_{T,p}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairedTower {
    pub tower: Tower,
    pub anchor: Term,
}

/// `pd_k(alpha)` as a term.
pub fn pd_k_term(alpha: &Term, k: usize, cfg: Config) -> Result<Term, TowerError> {
    let c = Chain::build(alpha, cfg)?;
    Ok(c.term(c.pd_k(0, k)))
}

/// `st_k(alpha)`; fails when `m_k(alpha)` is zero.
pub fn st_k_term(alpha: &Term, k: usize, cfg: Config) -> Result<Term, TowerError> {
    let c = Chain::build(alpha, cfg)?;
    if c.m(0, k).is_zero() {
        return Err(TowerError::NoComponent { term: alpha.to_string(), k });
    }
    Ok(c.st_k(0, k))
}

/// `alpha_k^0, alpha_k^1, ...` as terms.
pub fn kseq_terms(alpha: &Term, k: usize, cfg: Config) -> Result<Vec<Term>, TowerError> {
    let c = Chain::build(alpha, cfg)?;
    Ok(c.kseq(0, k).into_iter().map(|j| c.term(j)).collect())
}

/// `T(eta)`; a leaf when `N = 3`.
pub fn build_tower(eta: &Term, cfg: Config) -> Result<Tower, TowerError> {
    Ok(Chain::build(eta, cfg)?.tower(0))
}

/// Coefficient of a tower monomial: a term or the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coef {
    Unit,
    Term(Term),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tower {
    Leaf(Term),
    Succ(Box<Tower>),
    Node(Vec<(Tower, Coef)>),
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coef::Unit => write!(f, "1"),
            Coef::Term(t) => write!(f, "{}", t),
        }
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tower::Leaf(t) => write!(f, "{}", t),
            Tower::Succ(t) => write!(f, "(succ {})", t),
            Tower::Node(ms) => {
                write!(f, "(sum")?;
                for (e, c) in ms {
                    write!(f, " (pow {} {})", e, c)?;
                }
                write!(f, ")")
            }
        }
    }
}

/// `E(<1, <0)` on sequences of pairs, without the domain check.
pub fn exp_less<A: PartialEq, B: PartialEq>(
    xs: &[(A, B)],
    ys: &[(A, B)],
    lt1: impl Fn(&A, &A) -> bool,
    lt0: impl Fn(&B, &B) -> bool,
) -> bool {
    for ((a, b), (c, d)) in xs.iter().zip(ys) {
        if a == c && b == d {
            continue;
        }
        return lt1(a, c) || (a == c && lt0(b, d));
    }
    xs.len() < ys.len()
}

/// `E(<1, <0)` with the domain condition that first components decrease.
pub fn exp_compare<A: PartialEq, B: PartialEq>(
    xs: &[(A, B)],
    ys: &[(A, B)],
    lt1: impl Fn(&A, &A) -> bool,
    lt0: impl Fn(&B, &B) -> bool,
) -> Result<bool, TowerError> {
    for (name, s) in [("left", xs), ("right", ys)] {
        if s.windows(2).any(|w| !lt1(&w[1].0, &w[0].0)) {
            return Err(TowerError::Domain { level: 0, detail: format!("{name} exponents are not decreasing") });
        }
    }
    Ok(exp_less(xs, ys, lt1, lt0))
}

/// Outcome of one identity check on a chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub check: &'static str,
    pub detail: String,
}

fn violation(check: &'static str, detail: String) -> Violation {
    Violation { check, detail }
}

/// Positions where the recursion for `q_k` applies.
fn block_nodes(c: &Chain) -> impl Iterator<Item = usize> + '_ {
    (0..c.len()).filter(|&j| matches!(c.clause(j), Some(Clause::Below { .. })))
}

/// `m_k(pd^{(q_k(n))}) = hd^{(n)}(m_k)` for every `n` below the width.
pub fn check_heads(c: &Chain) -> Vec<Violation> {
    let mut out = Vec::new();
    let n_lev = c.cfg().levels;
    for j in block_nodes(c) {
        for k in 2..n_lev.saturating_sub(1) {
            let mk = c.m(j, k);
            for n in 0..mk.width() {
                let lhs = c.m(j + c.qn(k, n, j), k);
                if lhs != hd_n(n, &mk) {
                    out.push(violation("heads", format!("node {j}, k={k}, n={n}: {} vs {}", lhs, hd_n(n, &mk))));
                }
            }
        }
    }
    out
}

/// `r_k > 0` forces `m_k <_Kst m_k(pd^{(r_k)})`, and always
/// `m_k <_Kst m_k(pd^{(q_k + k - 1)})`.
pub fn check_kst_steps(c: &Chain) -> Vec<Violation> {
    let mut out = Vec::new();
    let cfg = c.cfg();
    for j in block_nodes(c) {
        for k in 2..cfg.levels.saturating_sub(1) {
            let mk = c.m(j, k);
            let r = c.r(k, j);
            if r > 0 && !lt_kst(&mk, &c.m(j + r, k), cfg) {
                out.push(violation("r-step", format!("node {j}, k={k}, r={r}")));
            }
            let q = c.q(k, j) + k - 1;
            if !lt_kst(&mk, &c.m(j + q, k), cfg) {
                out.push(violation("q-step", format!("node {j}, k={k}, q+k-1={q}")));
            }
        }
    }
    out
}

/// `mu <_k pd_{k+1}(mu)` on every node.
pub fn check_prec_next(c: &Chain) -> Vec<Violation> {
    let mut out = Vec::new();
    for j in 0..c.len() {
        for k in 2..c.cfg().levels {
            let up = c.pd_k(j, k + 1);
            if !c.prec_k(j, up, k) {
                out.push(violation("prec-next", format!("node {j}, k={k}, pd_(k+1)={up}")));
            }
        }
    }
    out
}

/// Where `pd_k` and `pd_{k+1}` part: the first coefficient's collapsing
/// pieces stay below every lower node, and grows along `<_k` while
/// `pd_{k+1}` is shared.
pub fn check_key_facts(c: &Chain) -> Vec<Violation> {
    let mut out = Vec::new();
    for j in 0..c.len() {
        for k in 2..c.cfg().levels {
            let sigma_i = c.pd_k(j, k + 1);
            if sigma_i == c.pd_k(j, k) {
                continue;
            }
            let sigma = c.term(sigma_i);
            let s = c.st_k(j, k);
            let f = f_delta(&sigma, &s);
            for b in 0..=j {
                let beta = c.term(b);
                if !f.iter().all(|x| lt(x, &beta)) {
                    out.push(violation("key-bound", format!("node {j}, k={k}, beta={b}")));
                }
            }
            for g in c.path(j, k).into_iter().filter(|&g| g < c.len()) {
                if c.pd_k(g, k + 1) != sigma_i {
                    continue;
                }
                let t = c.st_k(g, k);
                if !lt(&s, &t) {
                    out.push(violation("key-growth", format!("node {j} vs {g}, k={k}: {} !< {}", s, t)));
                }
                if !all_le(&kdelta(&sigma, &s), &kdelta(&sigma, &t)) {
                    out.push(violation("key-hull", format!("node {j} vs {g}, k={k}")));
                }
            }
        }
    }
    out
}

/// `alpha <=_{k+1} alpha_k^0` and consecutive members step up by `<_{k+1}`.
pub fn check_kseq(c: &Chain) -> Vec<Violation> {
    let mut out = Vec::new();
    for j in 0..c.len() {
        for k in 2..c.cfg().levels.saturating_sub(1) {
            let seq = c.kseq(j, k);
            if !c.preceq_k(j, seq[0], k + 1) {
                out.push(violation("kseq-start", format!("node {j}, k={k}, start={}", seq[0])));
            }
            for w in seq.windows(2) {
                if !c.prec_k(w[0], w[1], k + 1) {
                    out.push(violation("kseq-step", format!("node {j}, k={k}: {} to {}", w[0], w[1])));
                }
            }
        }
    }
    out
}

/// Which of the three cases relates the sequences of `gamma` and
/// `eta = pd_k(gamma)`.
pub fn step_cases(c: &Chain, gamma: usize, k: usize) -> Vec<u8> {
    let eta = c.pd_k(gamma, k);
    let (gs, es) = (c.kseq(gamma, k), c.kseq(eta, k));
    let mut cases = Vec::new();
    if eta == c.pd_k(gamma, k + 1) && gs == es {
        cases.push(1);
    }
    let g_up = c.pd_k(gamma, k + 1);
    if gs[0] == gamma {
        if c.pd_k(eta, k + 1) == g_up && lt(&c.st_k(gamma, k), &c.st_k(eta, k)) && es[..] == gs[1..] {
            cases.push(2);
        }
        let e_up = c.pd_k(eta, k + 1);
        if c.prec_k(e_up, g_up, k) {
            let found = (0..es.len().saturating_sub(1)).any(|m| {
                c.pd_k(es[m], k + 1) == g_up
                    && lt(&c.st_k(gamma, k), &c.st_k(es[m], k))
                    && es.len() - m == gs.len()
                    && (1..gs.len()).all(|i| es[m + i] == gs[i])
            });
            if found {
                cases.push(3);
            }
        }
    }
    cases
}

pub fn check_trichotomy(c: &Chain) -> Vec<Violation> {
    let mut out = Vec::new();
    for j in 0..c.len() {
        for k in 2..c.cfg().levels.saturating_sub(1) {
            if c.pd_k(j, k) >= c.len() {
                continue;
            }
            let cases = step_cases(c, j, k);
            if cases.len() != 1 {
                out.push(violation("trichotomy", format!("node {j}, k={k}: cases {:?}", cases)));
            }
        }
    }
    out
}

/// Every `k`-step `gamma -> pd_k(gamma)` below `K` embeds into `<_{E_k,p}`.
pub fn check_embedding(c: &Chain) -> (usize, Vec<Violation>) {
    let mut steps = 0;
    let mut out = Vec::new();
    for j in 0..c.len() {
        for k in 2..c.cfg().levels {
            let e = c.pd_k(j, k);
            if e >= c.len() {
                continue;
            }
            steps += 1;
            let (x, y) = (c.e_tower(j, k), c.e_tower(e, k));
            match c.tower_lt_p(k, &x, &c.term(j), &y, &c.term(e)) {
                Ok(true) => {}
                Ok(false) => out.push(violation("embedding", format!("node {j} -> {e}, k={k}: not below"))),
                Err(err) => out.push(violation("embedding", format!("node {j} -> {e}, k={k}: {err}"))),
            }
        }
    }
    (steps, out)
}

/// All identity checks on one chain.
pub fn check_chain(c: &Chain) -> Vec<Violation> {
    let mut out = check_heads(c);
    out.extend(check_kst_steps(c));
    out.extend(check_prec_next(c));
    out.extend(check_key_facts(c));
    out.extend(check_kseq(c));
    out.extend(check_trichotomy(c));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;

    fn k_collapse(n: usize) -> Term {
        let c = Config::new(n);
        let mut v = c.zero_vec();
        v[n - 3] = ETerm::ktriple(Term::nat(2), Term::nat(2));
        Term::psi(Term::kappa(), v, Term::nat(2))
    }

    #[test]
    fn k_collapse_chain() {
        for n in [3, 4, 5] {
            let c = Chain::build(&k_collapse(n), Config::new(n)).unwrap();
            assert_eq!(c.len(), 1);
            for k in 2..=n {
                assert_eq!(c.pd_k(0, k), c.top());
            }
            assert_eq!(c.kseq(0, 2), vec![0]);
            assert_eq!(c.st_k(0, n - 1), Term::nat(2));
        }
    }

    #[test]
    fn towers_of_a_single_node() {
        let c = Chain::build(&k_collapse(3), Config::new(3)).unwrap();
        assert_eq!(c.tower(0), Tower::Leaf(k_collapse(3)));
        let c4 = Chain::build(&k_collapse(4), Config::new(4)).unwrap();
        let t = c4.tower(0);
        let leaf = Tower::Leaf(k_collapse(4));
        assert_eq!(t, Tower::Node(vec![(Tower::Succ(Box::new(leaf.clone())), Coef::Unit), (leaf, Coef::Unit)]));
        let p = c4.pair_tower(0);
        assert_eq!(c4.tower_compare_p(&p, &p), Ok(false));
        assert_eq!(pd_k_term(&k_collapse(4), 3, Config::new(4)), Ok(Term::kappa()));
        assert_eq!(st_k_term(&k_collapse(4), 3, Config::new(4)), Ok(Term::nat(2)));
        assert!(matches!(st_k_term(&k_collapse(4), 2, Config::new(4)), Err(TowerError::NoComponent { .. })));
        assert_eq!(c4.terms().len(), 2);
    }

    #[test]
    fn rejects_non_chains() {
        let c = Config::new(3);
        assert!(matches!(Chain::build(&Term::zero(), c), Err(TowerError::NotPsi(_))));
        let p = parse_term("psi(K; 0)", c).unwrap();
        assert!(matches!(Chain::build(&p, c), Err(TowerError::ZeroVector(_))));
    }

    #[test]
    fn exponential_order() {
        let lt = |a: &u32, b: &u32| a < b;
        let empty: Vec<(u32, u32)> = vec![];
        assert_eq!(exp_compare(&empty, &[(1, 1)], lt, lt), Ok(true));
        assert_eq!(exp_compare(&[(2, 1)], &[(2, 1)], lt, lt), Ok(false));
        assert_eq!(exp_compare(&[(3, 1), (1, 5)], &[(3, 1), (2, 0)], lt, lt), Ok(true));
        assert_eq!(exp_compare(&[(3, 2)], &[(3, 1), (2, 0)], lt, lt), Ok(false));
        assert!(exp_compare(&[(1, 1), (2, 1)], &[(3, 1)], lt, lt).is_err());
    }
}
