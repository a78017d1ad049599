//! Oriented relations of O(SL_q(N)) and their bounded completion.
//!
//! Rules are `lhs -> rhs` with every word of `rhs` strictly below `lhs`
//! in [`MonomialOrder`]. The starting set is the quadratic exchange rules
//! (one per descending adjacent pair) plus the determinant rule with
//! leading word `u_11 u_22 ... u_NN`. Completion resolves overlap
//! ambiguities up to a degree bound and adds the nonzero reduced
//! differences as new rules.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::poly::NcPoly;
use super::word::{GeneratorIndex, MonomialKey, MonomialOrder, Word};
use crate::error::{Error, Result};
use crate::scalar::ScalarQ;

pub const DEFAULT_DEGREE_BOUND: usize = 8;
pub const DEFAULT_RULE_CAP: usize = 20_000;

#[derive(Clone, Debug)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: NcPoly,
}

/// Where to look for a reducible subword first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Leftmost start position.
    LeftOutermost,
    /// Rightmost start position, shortest match.
    RightInnermost,
}

/// Summary of a completion run.
#[derive(Clone, Debug, Default)]
pub struct CompletionStats {
    pub pairs_considered: usize,
    pub rules_added: usize,
    pub rules_retired: usize,
    pub pairs_beyond_bound: usize,
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    n: usize,
    order: MonomialOrder,
    rules: Vec<Option<Rule>>,
    quad: Vec<Option<usize>>,
    long: HashMap<Vec<u8>, usize>,
    long_lengths: BTreeSet<usize>,
    degree_bound: usize,
    complete: bool,
    stats: CompletionStats,
}

impl RewriteSystem {
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    /// True when no overlap was left unresolved, i.e. reduction is
    /// confluent in every degree and the bound no longer applies.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn stats(&self) -> &CompletionStats {
        &self.stats
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter().flatten()
    }

    pub fn rule_count(&self) -> usize {
        self.rules().count()
    }

    /// Degree check applied before reducing an input.
    pub fn check_degree(&self, degree: usize) -> Result<()> {
        if !self.complete && degree > self.degree_bound {
            return Err(Error::BoundExceeded { degree, bound: self.degree_bound });
        }
        Ok(())
    }

    fn empty(n: usize, degree_bound: usize) -> Self {
        let l = n * n;
        RewriteSystem {
            n,
            order: MonomialOrder::new(n),
            rules: Vec::new(),
            quad: vec![None; l * l],
            long: HashMap::new(),
            long_lengths: BTreeSet::new(),
            degree_bound,
            complete: false,
            stats: CompletionStats::default(),
        }
    }

    fn insert_rule(&mut self, rule: Rule) -> usize {
        let idx = self.rules.len();
        let l = self.n * self.n;
        let w = rule.lhs.letters();
        if w.len() == 2 && w[0] > w[1] {
            self.quad[w[0] as usize * l + w[1] as usize] = Some(idx);
        } else {
            self.long.insert(w.to_vec(), idx);
            self.long_lengths.insert(w.len());
        }
        self.rules.push(Some(rule));
        idx
    }

    fn retire_rule(&mut self, idx: usize) -> Option<Rule> {
        let rule = self.rules[idx].take()?;
        let l = self.n * self.n;
        let w = rule.lhs.letters();
        if w.len() == 2 && w[0] > w[1] {
            self.quad[w[0] as usize * l + w[1] as usize] = None;
        } else {
            self.long.remove(w);
            if !self.long.keys().any(|k| k.len() == w.len()) {
                self.long_lengths.remove(&w.len());
            }
        }
        Some(rule)
    }

    fn quad_at(&self, a: u8, b: u8) -> Option<usize> {
        if a <= b {
            return None;
        }
        self.quad[a as usize * self.n * self.n + b as usize]
    }

    /// Finds a reducible subword `w[start..end]` and the rule that applies.
    pub fn find_redex(&self, w: &[u8], strategy: Strategy) -> Option<(usize, usize, usize)> {
        let len = w.len();
        let probe = |start: usize| -> Option<(usize, usize, usize)> {
            if start + 1 < len {
                if let Some(r) = self.quad_at(w[start], w[start + 1]) {
                    return Some((start, start + 2, r));
                }
            }
            for &l in &self.long_lengths {
                if start + l > len {
                    break;
                }
                if let Some(&r) = self.long.get(&w[start..start + l]) {
                    return Some((start, start + l, r));
                }
            }
            None
        };
        match strategy {
            Strategy::LeftOutermost => (0..len).find_map(probe),
            Strategy::RightInnermost => (0..len).rev().find_map(probe),
        }
    }

    pub(crate) fn rules_slot(&self, idx: usize) -> &Rule {
        self.rules[idx].as_ref().expect("live rule")
    }

    pub fn is_normal_word(&self, w: &[u8]) -> bool {
        self.find_redex(w, Strategy::LeftOutermost).is_none()
    }

    /// Reduces by repeatedly rewriting the largest reducible term.
    pub fn reduce_with(&self, p: &NcPoly, strategy: Strategy) -> NcPoly {
        let mut queue: BTreeMap<MonomialKey, ScalarQ> = BTreeMap::new();
        for (w, c) in p.terms() {
            push_term(&mut queue, self.order.key(w), c.clone());
        }
        let mut out = NcPoly::zero(self.n);
        while let Some((key, c)) = queue.pop_last() {
            match self.find_redex(key.word.letters(), strategy) {
                None => out.add_term(key.word, c),
                Some((s, e, r)) => {
                    let rule = self.rules[r].as_ref().expect("live rule");
                    for (rw, rc) in rule.rhs.terms() {
                        let nw = key.word.splice(s, e, rw.letters());
                        push_term(&mut queue, self.order.key(&nw), &c * rc);
                    }
                }
            }
        }
        out
    }

    /// The quadratic exchange rules of quantum matrices.
    fn quadratic(n: usize, degree_bound: usize) -> Self {
        let mut sys = RewriteSystem::empty(n, degree_bound);
        let gens: Vec<GeneratorIndex> = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| GeneratorIndex { row: i, col: j }))
            .collect();
        let letter = |g: GeneratorIndex| g.letter(n);
        let q_inv = ScalarQ::q_pow(-1);
        for &big in &gens {
            for &small in &gens {
                if big <= small {
                    continue;
                }
                let lhs = Word(vec![letter(big), letter(small)]);
                let swapped = Word(vec![letter(small), letter(big)]);
                // big = u_{ab}, small = u_{cd} with (c,d) < (a,b)
                let (a, b, c, d) = (big.row, big.col, small.row, small.col);
                let rhs = if b == d {
                    // same column: u_jk u_ik = q^{-1} u_ik u_jk
                    NcPoly::term(n, swapped, q_inv.clone())
                } else if a == c {
                    // same row: u_kj u_ki = q^{-1} u_ki u_kj
                    NcPoly::term(n, swapped, q_inv.clone())
                } else if b < d {
                    // small = u_il, big = u_jk with i < j, k < l: commute
                    NcPoly::word(n, swapped)
                } else {
                    // small = u_ik, big = u_jl with i < j, k < l:
                    // u_jl u_ik = u_ik u_jl - (q - q^{-1}) u_il u_jk
                    let il = GeneratorIndex { row: c, col: b };
                    let jk = GeneratorIndex { row: a, col: d };
                    let mut r = NcPoly::word(n, swapped);
                    r.add_term(Word(vec![letter(il), letter(jk)]), -ScalarQ::q_minus_qinv());
                    r
                };
                sys.insert_rule(Rule { lhs, rhs });
            }
        }
        sys
    }

    /// Runs bounded completion starting from the quadratic rules and the
    /// determinant rule.
    pub fn complete_rules(n: usize, degree_bound: usize) -> Result<Self> {
        RewriteSystem::complete_rules_capped(n, degree_bound, DEFAULT_RULE_CAP)
    }

    pub fn complete_rules_capped(n: usize, degree_bound: usize, rule_cap: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnsupportedRank(n));
        }
        if degree_bound < 2 {
            return Err(Error::InvalidArgument(format!(
                "completion degree bound must be at least 2, got {}",
                degree_bound
            )));
        }
        let sys = RewriteSystem::quadratic(n, degree_bound);
        let det = sys.reduce_with(&raw_determinant(n), Strategy::LeftOutermost);
        let diag = Word((1..=n).map(|i| GeneratorIndex { row: i, col: i }.letter(n)).collect());
        let lead = leading_word(&sys.order, &det).expect("determinant is nonzero");
        if lead != diag {
            return Err(Error::CompletionFailed(format!(
                "determinant leading word is {}, expected the diagonal word",
                lead.display(n)
            )));
        }
        let mut equation = det;
        equation.add_term(Word::empty(), ScalarQ::from_int(-1));
        let mut pending = vec![equation];
        let mut completion = Completion { sys, pairs: BTreeSet::new(), rule_cap };
        let first_new = 0;
        // seed pairs among the quadratic rules
        let existing: Vec<usize> = (0..completion.sys.rules.len()).collect();
        for &i in &existing {
            completion.add_pairs_for(i, first_new);
        }
        completion.absorb(&mut pending)?;
        completion.run()?;
        let mut sys = completion.sys;
        sys.interreduce_rhs();
        Ok(sys)
    }

    fn interreduce_rhs(&mut self) {
        for idx in 0..self.rules.len() {
            let rhs = match &self.rules[idx] {
                Some(rule) => self.reduce_with(&rule.rhs, Strategy::LeftOutermost),
                None => continue,
            };
            if let Some(rule) = self.rules[idx].as_mut() {
                rule.rhs = rhs;
            }
        }
    }
}

fn push_term(queue: &mut BTreeMap<MonomialKey, ScalarQ>, key: MonomialKey, c: ScalarQ) {
    if c.is_zero() {
        return;
    }
    match queue.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let v = e.get() + &c;
            if v.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = v;
            }
        }
    }
}

pub(crate) fn leading_word(order: &MonomialOrder, p: &NcPoly) -> Option<Word> {
    p.terms().map(|(w, _)| w).max_by(|a, b| order.cmp(a, b)).cloned()
}

/// Number of inversions of a permutation.
pub(crate) fn inversions(perm: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                count += 1;
            }
        }
    }
    count
}

/// All permutations of `0..k` in lexicographic order.
pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Unreduced quantum minor `sum_sigma (-q)^inv(sigma) u_{i_sigma(1) j_1} ... u_{i_sigma(k) j_k}`
/// for sorted row and column lists.
pub(crate) fn raw_minor(n: usize, rows: &[usize], cols: &[usize]) -> NcPoly {
    let mut p = NcPoly::zero(n);
    for perm in permutations(rows.len()) {
        let w = Word(
            perm.iter()
                .zip(cols)
                .map(|(&s, &c)| GeneratorIndex { row: rows[s], col: c }.letter(n))
                .collect(),
        );
        p.add_term(w, ScalarQ::neg_q_pow(inversions(&perm) as i64));
    }
    p
}

fn raw_determinant(n: usize) -> NcPoly {
    let all: Vec<usize> = (1..=n).collect();
    raw_minor(n, &all, &all)
}

/// Pending overlap, ordered by degree first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Pair {
    degree: usize,
    left: usize,
    right: usize,
    overlap: usize,
}

struct Completion {
    sys: RewriteSystem,
    pairs: BTreeSet<Pair>,
    rule_cap: usize,
}

impl Completion {
    /// Registers overlaps between rule `idx` and every live rule.
    fn add_pairs_for(&mut self, idx: usize, _first_new: usize) {
        let live: Vec<usize> =
            (0..self.sys.rules.len()).filter(|&j| self.sys.rules[j].is_some()).collect();
        for j in live {
            self.add_pairs_between(idx, j);
            if j != idx {
                self.add_pairs_between(j, idx);
            }
        }
    }

    /// Overlaps where a proper suffix of `left`'s lhs is a proper prefix of
    /// `right`'s lhs.
    fn add_pairs_between(&mut self, left: usize, right: usize) {
        let (a, b) = match (&self.sys.rules[left], &self.sys.rules[right]) {
            (Some(a), Some(b)) => (a.lhs.letters(), b.lhs.letters()),
            _ => return,
        };
        let max = a.len().min(b.len());
        for k in 1..max {
            if a[a.len() - k..] == b[..k] {
                let degree = a.len() + b.len() - k;
                if degree > self.sys.degree_bound {
                    self.sys.stats.pairs_beyond_bound += 1;
                    continue;
                }
                self.pairs.insert(Pair { degree, left, right, overlap: k });
            }
        }
        // the same rule with k == len cannot occur for proper overlaps
    }

    fn run(&mut self) -> Result<()> {
        while let Some(pair) = self.pairs.pop_first() {
            self.sys.stats.pairs_considered += 1;
            let (l, r) = match (&self.sys.rules[pair.left], &self.sys.rules[pair.right]) {
                (Some(l), Some(r)) => (l.clone(), r.clone()),
                _ => continue,
            };
            let k = pair.overlap;
            let tail = Word(r.lhs.letters()[k..].to_vec());
            let head = Word(l.lhs.letters()[..l.lhs.len() - k].to_vec());
            let via_left = l.rhs.concat_mul(&NcPoly::word(self.sys.n, tail));
            let via_right = NcPoly::word(self.sys.n, head).concat_mul(&r.rhs);
            let mut pending = vec![via_left.sub(&via_right)];
            self.absorb(&mut pending)?;
        }
        self.sys.complete = self.sys.stats.pairs_beyond_bound == 0;
        Ok(())
    }

    /// Reduces each pending equation and turns nonzero results into rules.
    fn absorb(&mut self, pending: &mut Vec<NcPoly>) -> Result<()> {
        while let Some(eq) = pending.pop() {
            let red = self.sys.reduce_with(&eq, Strategy::LeftOutermost);
            if red.is_zero() {
                continue;
            }
            let lead = leading_word(&self.sys.order, &red).unwrap();
            let lc = red.coeff(&lead);
            let inv = ScalarQ::one().checked_div(&lc)?;
            let mut rhs = red.scale(&-&inv);
            rhs.add_term(lead.clone(), ScalarQ::one());
            debug_assert!(rhs.coeff(&lead).is_zero());
            // retire rules whose lhs contains the new lhs
            let retire: Vec<usize> = (0..self.sys.rules.len())
                .filter(|&i| {
                    self.sys.rules[i].as_ref().is_some_and(|rule| {
                        rule.lhs.len() > lead.len() && contains(rule.lhs.letters(), lead.letters())
                    })
                })
                .collect();
            let idx = self.sys.insert_rule(Rule { lhs: lead, rhs });
            self.sys.stats.rules_added += 1;
            for i in retire {
                if let Some(old) = self.sys.retire_rule(i) {
                    self.sys.stats.rules_retired += 1;
                    let mut e = NcPoly::word(self.sys.n, old.lhs);
                    e = e.sub(&old.rhs);
                    pending.push(e);
                }
            }
            if self.sys.rule_count() > self.rule_cap {
                return Err(Error::CompletionFailed(format!(
                    "rule count exceeded the cap of {} (degree bound {})",
                    self.rule_cap, self.sys.degree_bound
                )));
            }
            self.add_pairs_for(idx, idx);
        }
        Ok(())
    }
}

fn contains(hay: &[u8], needle: &[u8]) -> bool {
    hay.windows(needle.len()).any(|w| w == needle)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letter(n: usize, i: usize, j: usize) -> u8 {
        GeneratorIndex { row: i, col: j }.letter(n)
    }

    #[test]
    fn bound_below_two_rejected() {
        assert!(matches!(RewriteSystem::complete_rules(2, 0), Err(Error::InvalidArgument(_))));
        assert!(RewriteSystem::complete_rules(2, 1).is_err());
    }

    #[test]
    fn quadratic_rules_cover_all_descending_pairs() {
        let sys = RewriteSystem::quadratic(3, 4);
        assert_eq!(sys.rule_count(), 36);
        for a in 0..9u8 {
            for b in 0..9u8 {
                assert_eq!(sys.quad_at(a, b).is_some(), a > b);
            }
        }
    }

    #[test]
    fn rules_decrease_in_monomial_order() {
        for n in [2, 3] {
            let sys = RewriteSystem::complete_rules(n, 5).unwrap();
            let ord = sys.order();
            for rule in sys.rules() {
                for (w, _) in rule.rhs.terms() {
                    assert_eq!(ord.cmp(w, &rule.lhs), std::cmp::Ordering::Less);
                }
            }
        }
    }

    #[test]
    fn strategies_agree_on_u22_u11() {
        let n = 2;
        let sys = RewriteSystem::complete_rules(n, 4).unwrap();
        let p = NcPoly::word(n, Word(vec![letter(n, 2, 2), letter(n, 1, 1)]));
        let a = sys.reduce_with(&p, Strategy::LeftOutermost);
        let b = sys.reduce_with(&p, Strategy::RightInnermost);
        assert_eq!(a, b);
    }

    #[test]
    fn rule_cap_aborts() {
        let r = RewriteSystem::complete_rules_capped(3, 6, 40);
        assert!(matches!(r, Err(Error::CompletionFailed(_))));
    }

    #[test]
    fn permutation_helpers() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(inversions(&[2, 1, 0]), 3);
    }
}
