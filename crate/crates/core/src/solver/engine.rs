//! CDCL search over clauses and `<=` PB rows.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::heap::VarHeap;
use super::pb::PbRow;
use super::Stats;
use crate::formula::{Lit, Var};

const UNDEF: i8 = 0;
const VAR_DECAY: f64 = 0.95;
const CLA_DECAY: f32 = 0.999;
const RESTART_UNIT: u64 = 64;
const FIRST_REDUCE: usize = 2000;
const REDUCE_STEP: usize = 600;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Reason {
    None,
    Clause(u32),
    /// Implied by a binary clause whose other literal is this (false) one.
    Binary(Lit),
    Pb(u32),
}

#[derive(Clone, Copy, Debug)]
enum Conflict {
    Clause(u32),
    Binary(Lit, Lit),
    Pb(u32),
}

#[derive(Clone, Copy, Debug)]
struct Watcher {
    cref: u32,
    blocker: Lit,
}

#[derive(Clone, Copy, Debug)]
struct ClauseHdr {
    start: u32,
    len: u32,
    learnt: bool,
    lbd: u32,
    activity: f32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Sat,
    Unsat,
    Interrupted,
}

/// Limits checked while searching: wall-clock deadline (at decisions) and a
/// total conflict cap.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Limits {
    pub deadline: Option<Instant>,
    pub max_conflicts: Option<u64>,
}

pub(crate) struct Engine {
    /// indexed by literal code
    values: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Reason>,
    trail_pos: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    flipped: Vec<bool>,
    qhead: usize,

    arena: Vec<Lit>,
    hdrs: Vec<ClauseHdr>,
    num_learnts: usize,
    watches: Vec<Vec<Watcher>>,
    bin: Vec<Vec<Lit>>,

    rows: Vec<PbRow>,
    occ: Vec<Vec<(u32, i64)>>,

    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f32,
    heap: VarHeap,
    phase: Vec<bool>,

    seen: Vec<bool>,
    to_clear: Vec<Lit>,
    lits_buf: Vec<Lit>,
    stack_buf: Vec<Lit>,
    redundant_buf: Vec<Lit>,
    level_stamp: Vec<u64>,
    stamp: u64,

    ok: bool,
    learning: bool,
    next_reduce: usize,
    luby_index: u32,
    pub stats: Stats,
}

fn luby(mut i: u32) -> u64 {
    // i is 0-based
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < (i as u64) + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i as u64 {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size as u32;
    }
    1u64 << seq
}

impl Engine {
    pub fn new(num_vars: usize, seed: u64, learning: bool) -> Engine {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let activity: Vec<f64> = (0..num_vars).map(|_| rng.gen::<f64>() * 1e-5).collect();
        let mut heap = VarHeap::new(num_vars);
        for v in 0..num_vars {
            heap.insert(v, &activity);
        }
        Engine {
            values: vec![UNDEF; 2 * num_vars],
            level: vec![0; num_vars],
            reason: vec![Reason::None; num_vars],
            trail_pos: vec![0; num_vars],
            trail: Vec::with_capacity(num_vars),
            trail_lim: Vec::new(),
            flipped: Vec::new(),
            qhead: 0,
            arena: Vec::new(),
            hdrs: Vec::new(),
            num_learnts: 0,
            watches: vec![Vec::new(); 2 * num_vars],
            bin: vec![Vec::new(); 2 * num_vars],
            rows: Vec::new(),
            occ: vec![Vec::new(); 2 * num_vars],
            activity,
            var_inc: 1.0,
            cla_inc: 1.0,
            heap,
            phase: vec![false; num_vars],
            seen: vec![false; num_vars],
            to_clear: Vec::new(),
            lits_buf: Vec::new(),
            stack_buf: Vec::new(),
            redundant_buf: Vec::new(),
            level_stamp: vec![0; num_vars + 1],
            stamp: 0,
            ok: true,
            learning,
            next_reduce: FIRST_REDUCE,
            luby_index: 0,
            stats: Stats::default(),
        }
    }

    #[inline]
    fn value(&self, l: Lit) -> i8 {
        self.values[l.code()]
    }

    #[inline]
    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: Reason) {
        let v = l.var().index();
        debug_assert_eq!(self.values[l.code()], UNDEF);
        self.values[l.code()] = 1;
        self.values[(!l).code()] = -1;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail_pos[v] = self.trail.len() as u32;
        self.trail.push(l);
    }

    pub fn model_value(&self, v: usize) -> bool {
        self.values[2 * v] == 1
    }

    // ---- constraint loading (level 0 only) ----

    /// Adds a clause at decision level 0, simplifying against fixed values.
    pub fn add_clause(&mut self, lits: &[Lit]) {
        debug_assert_eq!(self.decision_level(), 0);
        if !self.ok {
            return;
        }
        let mut out: Vec<Lit> = Vec::with_capacity(lits.len());
        for &l in lits {
            match self.value(l) {
                1 => return,
                -1 => {}
                _ => {
                    if out.contains(&!l) {
                        return;
                    }
                    if !out.contains(&l) {
                        out.push(l);
                    }
                }
            }
        }
        match out.len() {
            0 => self.ok = false,
            1 => self.enqueue(out[0], Reason::None),
            2 => self.attach_binary(out[0], out[1]),
            _ => {
                self.attach_clause(&out, false, 0);
            }
        }
    }

    /// Adds `sum coef * lit <= bound` (coefficients positive) at level 0.
    pub fn add_pb_le(&mut self, terms: &[(i64, Lit)], bound: i64) {
        debug_assert_eq!(self.decision_level(), 0);
        if !self.ok {
            return;
        }
        let mut bound = bound;
        let mut live: Vec<(i64, Lit)> = Vec::with_capacity(terms.len());
        for &(c, l) in terms {
            debug_assert!(c > 0);
            match self.value(l) {
                1 => bound -= c,
                -1 => {}
                _ => live.push((c, l)),
            }
        }
        if bound < 0 {
            self.ok = false;
            return;
        }
        let total: i64 = live.iter().map(|(c, _)| c).sum();
        if total <= bound {
            return;
        }
        // terms too heavy to ever be true
        let (heavy, mut live): (Vec<_>, Vec<_>) = live.into_iter().partition(|(c, _)| *c > bound);
        for (_, l) in heavy {
            self.enqueue(!l, Reason::None);
        }
        let total: i64 = live.iter().map(|(c, _)| c).sum();
        if total <= bound {
            return;
        }
        if live.iter().all(|(c, _)| total - c <= bound) {
            let clause: Vec<Lit> = live.iter().map(|(_, l)| !*l).collect();
            self.add_clause(&clause);
            return;
        }
        live.sort_by(|a, b| b.0.cmp(&a.0));
        let idx = self.rows.len() as u32;
        for &(c, l) in &live {
            self.occ[l.code()].push((idx, c));
        }
        self.rows.push(PbRow { terms: live, bound, true_sum: 0 });
    }

    fn attach_binary(&mut self, a: Lit, b: Lit) {
        self.bin[(!a).code()].push(b);
        self.bin[(!b).code()].push(a);
    }

    fn attach_clause(&mut self, lits: &[Lit], learnt: bool, lbd: u32) -> u32 {
        let cref = self.hdrs.len() as u32;
        let start = self.arena.len() as u32;
        self.arena.extend_from_slice(lits);
        self.hdrs.push(ClauseHdr { start, len: lits.len() as u32, learnt, lbd, activity: 0.0 });
        self.watches[(!lits[0]).code()].push(Watcher { cref, blocker: lits[1] });
        self.watches[(!lits[1]).code()].push(Watcher { cref, blocker: lits[0] });
        if learnt {
            self.num_learnts += 1;
        }
        cref
    }

    #[inline]
    fn clause(&self, cref: u32) -> &[Lit] {
        let h = &self.hdrs[cref as usize];
        &self.arena[h.start as usize..(h.start + h.len) as usize]
    }

    // ---- propagation ----

    fn propagate(&mut self) -> Option<Conflict> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;

            let mut conflict = None;
            for k in 0..self.occ[p.code()].len() {
                let (ri, c) = self.occ[p.code()][k];
                self.rows[ri as usize].true_sum += c;
                if conflict.is_none() {
                    conflict = self.propagate_row(ri);
                }
            }
            if conflict.is_some() {
                return conflict;
            }

            for k in 0..self.bin[p.code()].len() {
                let q = self.bin[p.code()][k];
                match self.value(q) {
                    1 => {}
                    -1 => return Some(Conflict::Binary(!p, q)),
                    _ => self.enqueue(q, Reason::Binary(!p)),
                }
            }

            if let Some(c) = self.propagate_watches(p) {
                return Some(c);
            }
        }
        None
    }

    fn propagate_row(&mut self, ri: u32) -> Option<Conflict> {
        let row = &self.rows[ri as usize];
        let slack = row.bound - row.true_sum;
        if slack < 0 {
            return Some(Conflict::Pb(ri));
        }
        let mut k = 0;
        while k < self.rows[ri as usize].terms.len() {
            let (c, l) = self.rows[ri as usize].terms[k];
            if c <= slack {
                break;
            }
            if self.value(l) == UNDEF {
                self.enqueue(!l, Reason::Pb(ri));
            }
            k += 1;
        }
        None
    }

    fn propagate_watches(&mut self, p: Lit) -> Option<Conflict> {
        let false_lit = !p;
        let mut ws = std::mem::take(&mut self.watches[p.code()]);
        let mut i = 0;
        let mut j = 0;
        let mut conflict = None;
        while i < ws.len() {
            let w = ws[i];
            i += 1;
            if self.value(w.blocker) == 1 {
                ws[j] = w;
                j += 1;
                continue;
            }
            let h = self.hdrs[w.cref as usize];
            let (start, len) = (h.start as usize, h.len as usize);
            if self.arena[start] == false_lit {
                self.arena.swap(start, start + 1);
            }
            let first = self.arena[start];
            let nw = Watcher { cref: w.cref, blocker: first };
            if first != w.blocker && self.value(first) == 1 {
                ws[j] = nw;
                j += 1;
                continue;
            }
            let mut moved = false;
            for k in start + 2..start + len {
                let l = self.arena[k];
                if self.value(l) != -1 {
                    self.arena.swap(start + 1, k);
                    self.watches[(!l).code()].push(nw);
                    moved = true;
                    break;
                }
            }
            if moved {
                continue;
            }
            ws[j] = nw;
            j += 1;
            if self.value(first) == -1 {
                conflict = Some(Conflict::Clause(w.cref));
                while i < ws.len() {
                    ws[j] = ws[i];
                    j += 1;
                    i += 1;
                }
            } else {
                self.enqueue(first, Reason::Clause(w.cref));
            }
        }
        ws.truncate(j);
        self.watches[p.code()] = ws;
        conflict
    }

    // ---- explanations ----

    /// True row literals assigned before trail position `before`, largest
    /// coefficients first, until their sum exceeds `need`. Written negated
    /// (all false).
    fn pb_explain(&self, ri: u32, before: u32, need: i64, out: &mut Vec<Lit>) {
        let mut sum = 0;
        for &(c, l) in &self.rows[ri as usize].terms {
            if self.value(l) == 1 && self.trail_pos[l.var().index()] < before {
                sum += c;
                out.push(!l);
                if sum > need {
                    return;
                }
            }
        }
        unreachable!("PB reason does not justify its implication");
    }

    /// False literals of the reason that implied `v`.
    fn reason_lits(&self, v: usize, out: &mut Vec<Lit>) {
        out.clear();
        match self.reason[v] {
            Reason::None => {}
            Reason::Binary(other) => out.push(other),
            Reason::Clause(cref) => out.extend_from_slice(&self.clause(cref)[1..]),
            Reason::Pb(ri) => {
                let implied = Lit::new(Var::from_index(v), self.values[2 * v] == 1);
                let c = self.rows[ri as usize]
                    .terms
                    .iter()
                    .find(|(_, l)| *l == !implied)
                    .map(|(c, _)| *c)
                    .unwrap();
                self.pb_explain(ri, self.trail_pos[v], self.rows[ri as usize].bound - c, out);
            }
        }
    }

    fn conflict_lits(&self, c: Conflict, out: &mut Vec<Lit>) {
        out.clear();
        match c {
            Conflict::Clause(cref) => out.extend_from_slice(self.clause(cref)),
            Conflict::Binary(a, b) => out.extend_from_slice(&[a, b]),
            Conflict::Pb(ri) => self.pb_explain(ri, u32::MAX, self.rows[ri as usize].bound, out),
        }
    }

    // ---- conflict analysis ----

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: u32) {
        let h = &mut self.hdrs[cref as usize];
        if !h.learnt {
            return;
        }
        h.activity += self.cla_inc;
        if h.activity > 1e20 {
            for h in &mut self.hdrs {
                h.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn abstract_level(&self, v: usize) -> u32 {
        1 << (self.level[v] & 31)
    }

    /// First-UIP learned clause (asserting literal first) and backjump level.
    fn analyze(&mut self, conflict: Conflict) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![Lit::from_code(0)];
        let mut path = 0usize;
        let mut index = self.trail.len();
        let mut lits = std::mem::take(&mut self.lits_buf);
        self.conflict_lits(conflict, &mut lits);
        if let Conflict::Clause(cref) = conflict {
            self.bump_clause(cref);
        }
        let current = self.decision_level();
        let uip;
        loop {
            for &q in &lits {
                let v = q.var().index();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var().index()] {
                    break;
                }
            }
            let p = self.trail[index];
            let v = p.var().index();
            self.seen[v] = false;
            path -= 1;
            if path == 0 {
                uip = p;
                break;
            }
            if let Reason::Clause(cref) = self.reason[v] {
                self.bump_clause(cref);
            }
            self.reason_lits(v, &mut lits);
        }
        learnt[0] = !uip;
        self.lits_buf = lits;

        // recursive minimization
        self.to_clear.clear();
        self.to_clear.extend_from_slice(&learnt);
        let mut abstract_levels = 0u32;
        for &l in &learnt[1..] {
            abstract_levels |= self.abstract_level(l.var().index());
        }
        let mut kept = 1;
        for k in 1..learnt.len() {
            let l = learnt[k];
            let v = l.var().index();
            if self.reason[v] == Reason::None || !self.lit_redundant(l, abstract_levels) {
                learnt[kept] = l;
                kept += 1;
            }
        }
        learnt.truncate(kept);
        for k in 0..self.to_clear.len() {
            let v = self.to_clear[k].var().index();
            self.seen[v] = false;
        }
        self.to_clear.clear();

        let bt = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for k in 2..learnt.len() {
                if self.level[learnt[k].var().index()] > self.level[learnt[max_i].var().index()] {
                    max_i = k;
                }
            }
            learnt.swap(1, max_i);
            self.level[learnt[1].var().index()]
        };
        (learnt, bt)
    }

    fn lit_redundant(&mut self, p: Lit, abstract_levels: u32) -> bool {
        let mut stack = std::mem::take(&mut self.stack_buf);
        let mut lits = std::mem::take(&mut self.redundant_buf);
        stack.clear();
        stack.push(p);
        let top = self.to_clear.len();
        let mut redundant = true;
        'outer: while let Some(q) = stack.pop() {
            self.reason_lits(q.var().index(), &mut lits);
            for &l in &lits {
                let v = l.var().index();
                if self.seen[v] || self.level[v] == 0 {
                    continue;
                }
                if self.reason[v] != Reason::None && self.abstract_level(v) & abstract_levels != 0 {
                    self.seen[v] = true;
                    stack.push(l);
                    self.to_clear.push(l);
                } else {
                    for k in top..self.to_clear.len() {
                        let u = self.to_clear[k].var().index();
                        self.seen[u] = false;
                    }
                    self.to_clear.truncate(top);
                    redundant = false;
                    break 'outer;
                }
            }
        }
        self.stack_buf = stack;
        self.redundant_buf = lits;
        redundant
    }

    fn lbd(&mut self, lits: &[Lit]) -> u32 {
        self.stamp += 1;
        let mut n = 0;
        for l in lits {
            let lv = self.level[l.var().index()] as usize;
            if self.level_stamp[lv] != self.stamp {
                self.level_stamp[lv] = self.stamp;
                n += 1;
            }
        }
        n
    }

    // ---- backtracking and search ----

    fn backtrack(&mut self, target: u32) {
        if self.decision_level() <= target {
            return;
        }
        let start = self.trail_lim[target as usize];
        for pos in (start..self.trail.len()).rev() {
            let l = self.trail[pos];
            if pos < self.qhead {
                for k in 0..self.occ[l.code()].len() {
                    let (ri, c) = self.occ[l.code()][k];
                    self.rows[ri as usize].true_sum -= c;
                }
            }
            let v = l.var().index();
            self.values[l.code()] = UNDEF;
            self.values[(!l).code()] = UNDEF;
            self.reason[v] = Reason::None;
            self.phase[v] = l.is_positive();
            self.heap.insert(v, &self.activity);
        }
        self.qhead = self.qhead.min(start);
        self.trail.truncate(start);
        self.trail_lim.truncate(target as usize);
        self.flipped.truncate(target as usize);
    }

    fn new_level(&mut self, flipped: bool) {
        self.trail_lim.push(self.trail.len());
        self.flipped.push(flipped);
        if self.level_stamp.len() <= self.trail_lim.len() {
            self.level_stamp.resize(self.trail_lim.len() + 1, 0);
        }
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.values[2 * v] == UNDEF {
                return Some(Lit::new(Var::from_index(v), self.phase[v]));
            }
        }
        None
    }

    fn learn(&mut self, learnt: Vec<Lit>) {
        self.stats.learned += 1;
        match learnt.len() {
            1 => self.enqueue(learnt[0], Reason::None),
            2 => {
                self.attach_binary(learnt[0], learnt[1]);
                self.enqueue(learnt[0], Reason::Binary(learnt[1]));
            }
            _ => {
                let lbd = self.lbd(&learnt);
                let cref = self.attach_clause(&learnt, true, lbd);
                self.bump_clause(cref);
                self.enqueue(learnt[0], Reason::Clause(cref));
            }
        }
    }

    /// Chronological backtracking without learning: flips the most recent
    /// unflipped decision. Returns false when none is left.
    fn flip_last_decision(&mut self) -> bool {
        loop {
            let lvl = self.decision_level();
            if lvl == 0 {
                return false;
            }
            let decision = self.trail[self.trail_lim[lvl as usize - 1]];
            let was_flipped = self.flipped[lvl as usize - 1];
            self.backtrack(lvl - 1);
            if !was_flipped {
                self.new_level(true);
                self.enqueue(!decision, Reason::None);
                return true;
            }
        }
    }

    /// Deletes about half of the learnt clauses with LBD above 2 and
    /// rebuilds the arena and watch lists. Only called at level 0.
    fn reduce_db(&mut self) {
        debug_assert_eq!(self.decision_level(), 0);
        let mut cands: Vec<u32> = (0..self.hdrs.len() as u32)
            .filter(|&c| self.hdrs[c as usize].learnt && self.hdrs[c as usize].lbd > 2)
            .collect();
        cands.sort_by(|&a, &b| {
            let (ha, hb) = (&self.hdrs[a as usize], &self.hdrs[b as usize]);
            hb.lbd.cmp(&ha.lbd).then(ha.activity.partial_cmp(&hb.activity).unwrap())
        });
        let mut dead = vec![false; self.hdrs.len()];
        for &c in &cands[..cands.len() / 2] {
            dead[c as usize] = true;
        }
        self.rebuild(|cref, _| dead[cref as usize]);
        self.stats.reductions += 1;
    }

    /// Drops clauses matching `remove` or satisfied at level 0, compacts the
    /// arena and re-attaches watches.
    fn rebuild(&mut self, remove: impl Fn(u32, &ClauseHdr) -> bool) {
        let old_arena = std::mem::take(&mut self.arena);
        let old_hdrs = std::mem::take(&mut self.hdrs);
        for w in &mut self.watches {
            w.clear();
        }
        for v in 0..self.reason.len() {
            self.reason[v] = Reason::None;
        }
        self.num_learnts = 0;
        for (cref, h) in old_hdrs.iter().enumerate() {
            if remove(cref as u32, h) {
                continue;
            }
            let lits = &old_arena[h.start as usize..(h.start + h.len) as usize];
            if lits.iter().any(|&l| self.value(l) == 1) {
                continue;
            }
            let live: Vec<Lit> = lits.iter().copied().filter(|&l| self.value(l) != -1).collect();
            debug_assert!(live.len() >= 2);
            if live.len() == 2 {
                self.attach_binary(live[0], live[1]);
                continue;
            }
            let new = self.attach_clause(&live, h.learnt, h.lbd);
            self.hdrs[new as usize].activity = h.activity;
        }
    }

    /// Runs CDCL until a model, a refutation or an exhausted limit.
    pub fn solve(&mut self, limits: &Limits) -> Outcome {
        if !self.ok {
            return Outcome::Unsat;
        }
        self.backtrack(0);
        // PB rows can imply at level 0 before anything is processed
        for ri in 0..self.rows.len() as u32 {
            if self.propagate_row(ri).is_some() {
                self.ok = false;
                return Outcome::Unsat;
            }
        }
        loop {
            let budget = if self.learning { luby(self.luby_index) * RESTART_UNIT } else { u64::MAX };
            self.luby_index += 1;
            match self.search(budget, limits) {
                Some(outcome) => return outcome,
                None => {
                    self.stats.restarts += 1;
                    if self.num_learnts >= self.next_reduce {
                        self.reduce_db();
                        self.next_reduce += REDUCE_STEP;
                    }
                }
            }
        }
    }

    fn search(&mut self, budget: u64, limits: &Limits) -> Option<Outcome> {
        let mut local_conflicts = 0u64;
        loop {
            if let Some(conflict) = self.propagate() {
                self.stats.conflicts += 1;
                local_conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Some(Outcome::Unsat);
                }
                if self.learning {
                    let (learnt, bt) = self.analyze(conflict);
                    self.backtrack(bt);
                    self.learn(learnt);
                    self.var_inc /= VAR_DECAY;
                    self.cla_inc /= CLA_DECAY;
                } else if !self.flip_last_decision() {
                    self.ok = false;
                    return Some(Outcome::Unsat);
                }
                if limits.max_conflicts.is_some_and(|m| self.stats.conflicts >= m) {
                    self.backtrack(0);
                    return Some(Outcome::Interrupted);
                }
            } else {
                if local_conflicts >= budget {
                    self.backtrack(0);
                    return None;
                }
                if limits.deadline.is_some_and(|d| Instant::now() >= d) {
                    self.backtrack(0);
                    return Some(Outcome::Interrupted);
                }
                match self.pick_branch() {
                    None => return Some(Outcome::Sat),
                    Some(l) => {
                        self.stats.decisions += 1;
                        self.new_level(false);
                        self.enqueue(l, Reason::None);
                    }
                }
            }
        }
    }

    /// Back to level 0 so more constraints can be added after a model.
    pub fn reset(&mut self) {
        self.backtrack(0);
    }
}
