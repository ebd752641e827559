//! Depth-first search for generating sets over the sign representatives of
//! the candidate list.
//!
//! Conditions are checked in this order at every extension: anticommutation
//! across subgroups, the cross-product square, then real independence.
//! Canonical form: every member is the representative of `{Λ, -Λ}` with
//! positive leading coefficient; members of the `Λ_k1` list and of each
//! subgroup are strictly increasing in candidate order; subgroups of equal
//! size beyond the second group are ordered by their first member.

use std::borrow::Cow;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::{Mutex, OnceLock};

use crate::code::GroupSignature;
use crate::exec::{map_collect, Execution};
use crate::lambda::LambdaCandidate;
use crate::monomial::{RealSpan, UnitMonomial};
use crate::error::{Error, Result};

use super::gamma::GammaSet;

/// Above this many representatives, relation rows are computed on demand.
const PRECOMPUTE_MAX: usize = 4096;

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    /// Stop after this many results (in canonical order).
    pub limit: Option<usize>,
    pub execution: Execution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn zeros(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn ones(n: usize) -> Self {
        let mut b = Self::zeros(n);
        for i in 0..n {
            b.set(i);
        }
        b
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }

    /// Set bits at positions `≥ from`.
    fn count_from(&self, from: usize) -> usize {
        let w = from / 64;
        if w >= self.0.len() {
            return 0;
        }
        let first = (self.0[w] >> (from % 64)).count_ones() as usize;
        first + self.0[w + 1..].iter().map(|x| x.count_ones() as usize).sum::<usize>()
    }

    fn next_from(&self, from: usize) -> Option<usize> {
        let mut w = from / 64;
        if w >= self.0.len() {
            return None;
        }
        let mut word = self.0[w] & (!0u64 << (from % 64));
        loop {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
            w += 1;
            if w >= self.0.len() {
                return None;
            }
            word = self.0[w];
        }
    }
}

/// Immutable tables shared by every branch.
pub(crate) struct Tables<'a> {
    cands: &'a [LambdaCandidate],
    /// Candidate index of each sign representative, in candidate order.
    reps: Vec<usize>,
    mono: Vec<UnitMonomial>,
    vecs: Vec<Vec<i64>>,
    anti: Option<Vec<Bits>>,
    compat: Vec<OnceLock<Vec<Bits>>>,
}

impl<'a> Tables<'a> {
    pub(crate) fn new(cands: &'a [LambdaCandidate]) -> Result<Self> {
        let reps: Vec<usize> = (0..cands.len())
            .filter(|&i| cands[i].is_sign_representative())
            .collect();
        if reps.is_empty() {
            return Err(Error::domain("no candidates to search"));
        }
        let mono: Vec<UnitMonomial> = reps.iter().map(|&i| cands[i].monomial).collect();
        let n = mono[0].dim();
        if mono.iter().any(|m| m.dim() != n) {
            return Err(Error::shape("candidates of mixed size"));
        }
        let vecs = mono.iter().map(UnitMonomial::real_vector).collect();
        let r = reps.len();
        let anti = (r <= PRECOMPUTE_MAX).then(|| (0..r).map(|x| anti_row(&mono, x)).collect());
        Ok(Self {
            cands,
            reps,
            mono,
            vecs,
            anti,
            compat: (0..r).map(|_| OnceLock::new()).collect(),
        })
    }

    fn len(&self) -> usize {
        self.reps.len()
    }

    fn anti_row(&self, x: usize) -> Cow<'_, Bits> {
        match &self.anti {
            Some(rows) => Cow::Borrowed(&rows[x]),
            None => Cow::Owned(anti_row(&self.mono, x)),
        }
    }

    /// Representatives `y` with `(x·Λ_11·y)² = -I` for `Λ_11 = root`.
    fn compat_row(&self, root: usize, x: usize) -> Cow<'_, Bits> {
        if self.len() <= PRECOMPUTE_MAX {
            let rows = self.compat[root]
                .get_or_init(|| (0..self.len()).map(|x| compat_row(&self.mono, root, x)).collect());
            Cow::Borrowed(&rows[x])
        } else {
            Cow::Owned(compat_row(&self.mono, root, x))
        }
    }

    fn right_vec(&self, root: usize, y: usize) -> Vec<i64> {
        self.mono[y].mul(&self.mono[root]).real_vector()
    }
}

fn anti_row(mono: &[UnitMonomial], x: usize) -> Bits {
    let mut b = Bits::zeros(mono.len());
    for (y, m) in mono.iter().enumerate() {
        if mono[x].anticommutes(m) {
            b.set(y);
        }
    }
    b
}

fn compat_row(mono: &[UnitMonomial], root: usize, x: usize) -> Bits {
    let p = mono[x].mul(&mono[root]);
    let mut b = Bits::zeros(mono.len());
    for (y, m) in mono.iter().enumerate() {
        if p.mul(m).squares_to_neg_identity() {
            b.set(y);
        }
    }
    b
}

/// A found set as positions into the representative list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Found {
    pub root: usize,
    pub left: Vec<usize>,
    /// Per subgroup; the first subgroup omits the root.
    pub right: Vec<Vec<usize>>,
}

/// One unit of parallel work: a root and, when the first group has more
/// than one member, the first `Λ_k1`.
#[derive(Debug, Clone, Copy)]
struct Task {
    index: usize,
    root: usize,
    first_left: Option<usize>,
}

struct LimitState {
    limit: Option<usize>,
    /// Lowest task index that alone reached the limit.
    satisfied_by: AtomicUsize,
    /// Per-task result counts once finished.
    done: Mutex<(Vec<Option<usize>>, usize, usize)>,
}

impl LimitState {
    fn new(limit: Option<usize>, tasks: usize) -> Self {
        Self {
            limit,
            satisfied_by: AtomicUsize::new(usize::MAX),
            done: Mutex::new((vec![None; tasks], 0, 0)),
        }
    }

    /// Cheap check: an earlier task alone reached the limit.
    fn overtaken(&self, t: usize) -> bool {
        self.limit.is_some() && self.satisfied_by.load(AtomicOrdering::Relaxed) < t
    }

    /// Whether every result task `t` could contribute is already beyond the limit.
    fn skip(&self, t: usize) -> bool {
        let Some(limit) = self.limit else {
            return false;
        };
        if self.satisfied_by.load(AtomicOrdering::Relaxed) < t {
            return true;
        }
        let g = self.done.lock().unwrap();
        // (counts, finished prefix length, results in that prefix)
        g.1 >= t && g.2 >= limit
    }

    fn finish(&self, t: usize, count: usize) {
        let Some(limit) = self.limit else {
            return;
        };
        if count >= limit {
            self.satisfied_by.fetch_min(t, AtomicOrdering::Relaxed);
        }
        let mut g = self.done.lock().unwrap();
        g.0[t] = Some(count);
        while g.1 < g.0.len() {
            match g.0[g.1] {
                Some(c) => {
                    g.2 += c;
                    g.1 += 1;
                }
                None => break,
            }
        }
    }
}

struct Dfs<'t, 'a> {
    t: &'t Tables<'a>,
    root: usize,
    task: usize,
    n_left: usize,
    /// Members still to choose per subgroup.
    need: Vec<usize>,
    sub_sizes: Vec<usize>,
    span: RealSpan,
    left: Vec<usize>,
    right: Vec<Vec<usize>>,
    right_vecs: Vec<Option<Vec<i64>>>,
    out: Vec<Found>,
    limit: Option<usize>,
    state: &'t LimitState,
    stopped: bool,
}

impl Dfs<'_, '_> {
    fn halted(&mut self) -> bool {
        if !self.stopped {
            if let Some(l) = self.limit {
                if self.out.len() >= l || self.state.overtaken(self.task) {
                    self.stopped = true;
                }
            }
        }
        self.stopped
    }

    fn right_vec(&mut self, y: usize) -> &[i64] {
        if self.right_vecs[y].is_none() {
            self.right_vecs[y] = Some(self.t.right_vec(self.root, y));
        }
        self.right_vecs[y].as_deref().unwrap()
    }

    fn extend_left(&mut self, start: usize, allowed: &Bits) {
        if self.halted() {
            return;
        }
        if self.left.len() == self.n_left {
            let all = Bits::ones(self.t.len());
            self.enter_subgroup(0, allowed, &all);
            return;
        }
        let total_need: usize = self.need.iter().sum();
        for x in start..self.t.len() {
            if x == self.root {
                continue;
            }
            let next = allowed.and(&self.t.compat_row(self.root, x));
            if next.count_from(0) < total_need {
                continue;
            }
            let depth = self.span.len();
            if !self.span.push_if_independent(&self.t.vecs[x]) {
                continue;
            }
            self.left.push(x);
            self.extend_left(x + 1, &next);
            self.left.pop();
            self.span.truncate(depth);
            if self.halted() {
                return;
            }
        }
    }

    /// Starts subgroup `s`; `anti` holds the members that anticommute with
    /// every member of earlier subgroups.
    fn enter_subgroup(&mut self, s: usize, allowed: &Bits, anti: &Bits) {
        if s == self.need.len() {
            self.out.push(Found {
                root: self.root,
                left: self.left.clone(),
                right: self.right.clone(),
            });
            return;
        }
        let mut cand = allowed.and(anti);
        cand.clear(self.root);
        let start = if s >= 2 && self.sub_sizes[s] == self.sub_sizes[s - 1] {
            self.right[s - 1][0] + 1
        } else {
            0
        };
        let mut anti_acc = anti.clone();
        if s == 0 {
            anti_acc = anti_acc.and(&self.t.anti_row(self.root));
        }
        self.extend_subgroup(s, start, &cand, &anti_acc, allowed);
    }

    fn extend_subgroup(&mut self, s: usize, start: usize, cand: &Bits, anti_acc: &Bits, allowed: &Bits) {
        if self.halted() {
            return;
        }
        if self.right[s].len() == self.need[s] {
            self.enter_subgroup(s + 1, allowed, anti_acc);
            return;
        }
        let remaining = self.need[s] - self.right[s].len();
        let mut y = start;
        while let Some(pos) = cand.next_from(y) {
            if cand.count_from(pos) < remaining {
                return;
            }
            y = pos + 1;
            let next_anti = if s + 1 < self.need.len() {
                anti_acc.and(&self.t.anti_row(pos))
            } else {
                anti_acc.clone()
            };
            let depth = self.span.len();
            let v = self.right_vec(pos).to_vec();
            if !self.span.push_if_independent(&v) {
                continue;
            }
            self.right[s].push(pos);
            self.extend_subgroup(s, pos + 1, cand, &next_anti, allowed);
            self.right[s].pop();
            self.span.truncate(depth);
            if self.halted() {
                return;
            }
        }
    }
}

fn check_signature(sig: &GroupSignature) -> Result<()> {
    if sig.groups() < 2 {
        return Err(Error::domain("generating-set search needs at least two groups"));
    }
    Ok(())
}

/// Runs the search and returns canonical positions, sorted.
pub(crate) fn run(
    t: &Tables<'_>,
    sig: &GroupSignature,
    opts: SearchOptions,
) -> Result<Vec<Found>> {
    check_signature(sig)?;
    if opts.limit == Some(0) {
        return Ok(Vec::new());
    }
    let sizes = sig.sizes();
    let n_left = sizes[0] - 1;
    let mut need: Vec<usize> = sizes[1..].to_vec();
    need[0] -= 1;
    let r = t.len();
    let mut tasks = Vec::new();
    for root in 0..r {
        if n_left == 0 {
            tasks.push((root, None));
        } else {
            for x in 0..r {
                if x != root {
                    tasks.push((root, Some(x)));
                }
            }
        }
    }
    let tasks: Vec<Task> = tasks
        .into_iter()
        .enumerate()
        .map(|(index, (root, first_left))| Task { index, root, first_left })
        .collect();
    let state = LimitState::new(opts.limit, tasks.len());
    let results = map_collect(opts.execution, tasks, |task| {
        if state.skip(task.index) {
            state.finish(task.index, 0);
            return Vec::new();
        }
        let mut dfs = Dfs {
            t,
            root: task.root,
            task: task.index,
            n_left,
            need: need.clone(),
            sub_sizes: sizes[1..].to_vec(),
            span: RealSpan::new(),
            left: Vec::new(),
            right: vec![Vec::new(); need.len()],
            right_vecs: vec![None; r],
            out: Vec::new(),
            limit: opts.limit,
            state: &state,
            stopped: false,
        };
        let root_vec = t.vecs[task.root].clone();
        dfs.span.push_if_independent(&root_vec);
        let neg_identity = t.right_vec(task.root, task.root);
        dfs.span.push_if_independent(&neg_identity);
        let total_need: usize = need.iter().sum();
        let mut allowed = Bits::ones(r);
        allowed.clear(task.root);
        match task.first_left {
            None => dfs.extend_left(0, &allowed),
            Some(x) => {
                let next = allowed.and(&t.compat_row(task.root, x));
                if next.count_from(0) >= total_need && dfs.span.push_if_independent(&t.vecs[x]) {
                    dfs.left.push(x);
                    dfs.extend_left(x + 1, &next);
                }
            }
        }
        let mut out = dfs.out;
        if let Some(l) = opts.limit {
            out.truncate(l);
        }
        state.finish(task.index, out.len());
        out
    });
    let mut all: Vec<Found> = results.into_iter().flatten().collect();
    all.sort();
    if let Some(l) = opts.limit {
        all.truncate(l);
    }
    Ok(all)
}

pub(crate) fn materialize(t: &Tables<'_>, sig: &GroupSignature, f: &Found) -> GammaSet {
    let cand = |p: usize| t.cands[t.reps[p]].clone();
    GammaSet {
        a: t.mono[0].dim().trailing_zeros() as usize,
        signature: sig.clone(),
        lambda_11: cand(f.root),
        lambda_k1: f.left.iter().map(|&p| cand(p)).collect(),
        lambda_1l: f.right.iter().flatten().map(|&p| cand(p)).collect(),
    }
}

/// All generating sets for `sig` in canonical form, in canonical order.
pub fn find_gamma_sets(
    sig: &GroupSignature,
    candidates: &[LambdaCandidate],
    opts: SearchOptions,
) -> Result<Vec<GammaSet>> {
    let t = Tables::new(candidates)?;
    let found = run(&t, sig, opts)?;
    Ok(found.iter().map(|f| materialize(&t, sig, f)).collect())
}

/// Number of canonical generating sets for `sig`.
pub fn count_gamma_sets(
    sig: &GroupSignature,
    candidates: &[LambdaCandidate],
    execution: Execution,
) -> Result<usize> {
    let t = Tables::new(candidates)?;
    Ok(run(&t, sig, SearchOptions { limit: None, execution })?.len())
}

/// Number of generating sets without any symmetry reduction: every
/// ordered choice of members over the full candidate list. Slow; a
/// reference for small signatures.
pub fn count_gamma_sets_unpruned(sig: &GroupSignature, candidates: &[LambdaCandidate]) -> Result<u64> {
    check_signature(sig)?;
    let mono: Vec<UnitMonomial> = candidates.iter().map(|c| c.monomial).collect();
    let sizes = sig.sizes();
    // slot list: (is_left, subgroup)
    let mut slots: Vec<(bool, usize)> = vec![(true, 0); sizes[0] - 1];
    for (s, &n) in sizes[1..].iter().enumerate() {
        let n = if s == 0 { n - 1 } else { n };
        slots.extend(std::iter::repeat_n((false, s), n));
    }
    fn rec(
        mono: &[UnitMonomial],
        slots: &[(bool, usize)],
        root: usize,
        chosen: &mut Vec<usize>,
    ) -> u64 {
        let i = chosen.len();
        if i == slots.len() {
            return 1;
        }
        let (is_left, sub) = slots[i];
        let l = &mono[root];
        let mut total = 0;
        'cand: for c in 0..mono.len() {
            let m = &mono[c];
            if !m.squares_to_neg_identity() {
                continue;
            }
            for (j, &p) in chosen.iter().enumerate() {
                let (pl, ps) = slots[j];
                let ok = match (is_left, pl) {
                    (true, false) => m.mul(l).mul(&mono[p]).squares_to_neg_identity(),
                    (false, true) => mono[p].mul(l).mul(m).squares_to_neg_identity(),
                    (false, false) => ps == sub || m.anticommutes(&mono[p]),
                    (true, true) => true,
                };
                if !ok {
                    continue 'cand;
                }
            }
            if !is_left && sub != 0 && !m.anticommutes(l) {
                continue;
            }
            // root pairs with itself on both sides
            if !is_left && !l.mul(l).mul(m).squares_to_neg_identity() {
                continue;
            }
            if is_left && !m.mul(l).mul(l).squares_to_neg_identity() {
                continue;
            }
            let mut span = RealSpan::new();
            let mut ok = span.push_if_independent(&l.real_vector())
                && span.push_if_independent(&l.mul(l).real_vector());
            for (j, &p) in chosen.iter().chain(std::iter::once(&c)).enumerate() {
                let v = if slots[j].0 {
                    mono[p].real_vector()
                } else {
                    mono[p].mul(l).real_vector()
                };
                ok = ok && span.push_if_independent(&v);
            }
            if !ok {
                continue;
            }
            chosen.push(c);
            total += rec(mono, slots, root, chosen);
            chosen.pop();
        }
        total
    }
    let mut total = 0;
    for root in 0..mono.len() {
        if mono[root].squares_to_neg_identity() {
            total += rec(&mono, &slots, root, &mut Vec::new());
        }
    }
    Ok(total)
}

/// `2^members · (n_1 - 1)! · (n_2 - 1)! · Π_{s≥3} n_s! · Π (equal-size runs among groups ≥ 3)!`:
/// how many ordered, signed sets each canonical set stands for.
pub fn symmetry_factor(sig: &GroupSignature) -> u64 {
    let fact = |n: usize| (1..=n as u64).product::<u64>();
    let sizes = sig.sizes();
    let members: usize = sizes.iter().sum::<usize>() - 1;
    let mut f = 1u64 << members;
    f *= fact(sizes[0] - 1) * fact(sizes[1] - 1);
    for &n in &sizes[2..] {
        f *= fact(n);
    }
    let mut rest = sizes[2..].to_vec();
    rest.sort();
    for run in rest.chunk_by(|a, b| a == b) {
        f *= fact(run.len());
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_ops() {
        let mut b = Bits::zeros(130);
        b.set(3);
        b.set(64);
        b.set(129);
        assert_eq!(b.count_from(0), 3);
        assert_eq!(b.count_from(4), 2);
        assert_eq!(b.next_from(4), Some(64));
        assert_eq!(b.next_from(65), Some(129));
        assert_eq!(b.next_from(130), None);
        b.clear(64);
        assert_eq!(b.and(&Bits::ones(130)), b);
        assert_eq!(Bits::ones(130).count_from(0), 130);
    }

    #[test]
    fn factor() {
        let s = |v: &[usize]| GroupSignature::new(v.to_vec()).unwrap();
        assert_eq!(symmetry_factor(&s(&[1, 1])), 2);
        assert_eq!(symmetry_factor(&s(&[2, 2])), 8);
        assert_eq!(symmetry_factor(&s(&[1, 1, 1])), 4);
        assert_eq!(symmetry_factor(&s(&[1, 1, 1, 1])), 8 * 2);
        assert_eq!(symmetry_factor(&s(&[2, 2, 4])), (1 << 7) * 24);
    }
}
