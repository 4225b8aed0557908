//! Answer sets of one stage: the rules that derive literals of state
//! `w_k`, after evaluating every literal of `w_{k-1}` away.
//!
//! Literal `l` of atom `i` has id `2i` (positive) or `2i + 1` (negated).
//! The search assigns literal ids true or false, propagates, and checks each
//! full assignment against the least model of its reduct.

#[derive(Clone, Debug)]
pub(crate) struct StageRule {
    /// `None` is `⊥`.
    pub head: Option<u32>,
    pub pos: Vec<u32>,
    pub neg: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Val {
    Unknown,
    True,
    False,
}

pub(crate) struct Stage<'a> {
    rules: Vec<StageRule>,
    heads_of: Vec<Vec<u32>>,
    occurs: Vec<Vec<u32>>,
    /// Per atom: states must decide it.
    total: &'a [bool],
}

type Queue = Vec<u32>;

impl<'a> Stage<'a> {
    pub fn new(rules: Vec<StageRule>, total: &'a [bool]) -> Self {
        let n = total.len() * 2;
        let mut heads_of = vec![Vec::new(); n];
        let mut occurs = vec![Vec::new(); n];
        for (i, r) in rules.iter().enumerate() {
            let i = i as u32;
            if let Some(h) = r.head {
                heads_of[h as usize].push(i);
            }
            for &b in r.pos.iter().chain(&r.neg) {
                if occurs[b as usize].last() != Some(&i) {
                    occurs[b as usize].push(i);
                }
            }
        }
        Stage {
            rules,
            heads_of,
            occurs,
            total,
        }
    }

    /// Every answer set of the stage program that is consistent and decides
    /// every atom marked total, as a truth vector over literal ids.
    pub fn solve(&self) -> Vec<Vec<bool>> {
        let n = self.heads_of.len();
        let mut val = vec![Val::Unknown; n];
        let mut q = Vec::new();
        let mut out = Vec::new();
        let ok = (0..self.rules.len()).all(|r| self.check_rule(&mut val, r as u32, &mut q))
            && (0..n).all(|x| self.check_support(&mut val, x as u32, &mut q))
            && self.propagate(&mut val, &mut q);
        if ok {
            self.search(val, &mut out);
        }
        out
    }

    fn search(&self, val: Vec<Val>, out: &mut Vec<Vec<bool>>) {
        let Some(x) = val.iter().position(|v| *v == Val::Unknown) else {
            let w: Vec<bool> = val.iter().map(|v| *v == Val::True).collect();
            if self.is_answer_set(&w) {
                out.push(w);
            }
            return;
        };
        for b in [true, false] {
            let mut v = val.clone();
            let mut q = Vec::new();
            if self.set(&mut v, x as u32, b, &mut q) && self.propagate(&mut v, &mut q) {
                self.search(v, out);
            }
        }
    }

    fn set(&self, val: &mut [Val], x: u32, b: bool, q: &mut Queue) -> bool {
        match val[x as usize] {
            Val::Unknown => {
                val[x as usize] = if b { Val::True } else { Val::False };
                q.push(x);
                true
            }
            Val::True => b,
            Val::False => !b,
        }
    }

    fn propagate(&self, val: &mut [Val], q: &mut Queue) -> bool {
        while let Some(x) = q.pop() {
            let c = x ^ 1;
            let ok = match val[x as usize] {
                Val::True => self.set(val, c, false, q),
                _ if self.total[(x >> 1) as usize] => self.set(val, c, true, q),
                _ => true,
            };
            if !ok {
                return false;
            }
            for &r in &self.occurs[x as usize] {
                if !self.check_rule(val, r, q) {
                    return false;
                }
            }
            if !self.check_support(val, x, q) {
                return false;
            }
        }
        true
    }

    fn blocked(&self, val: &[Val], r: &StageRule) -> bool {
        r.pos.iter().any(|&p| val[p as usize] == Val::False) || r.neg.iter().any(|&n| val[n as usize] == Val::True)
    }

    fn check_rule(&self, val: &mut [Val], ri: u32, q: &mut Queue) -> bool {
        let r = &self.rules[ri as usize];
        if self.blocked(val, r) {
            return match r.head {
                Some(h) => self.check_support(val, h, q),
                None => true,
            };
        }
        let mut open = None;
        let mut n_open = 0;
        for &p in &r.pos {
            if val[p as usize] == Val::Unknown {
                n_open += 1;
                open = Some((p, true));
            }
        }
        for &n in &r.neg {
            if val[n as usize] == Val::Unknown {
                n_open += 1;
                open = Some((n, false));
            }
        }
        if n_open == 0 {
            return match r.head {
                None => false,
                Some(h) => self.set(val, h, true, q),
            };
        }
        let head_false = r.head.is_none_or(|h| val[h as usize] == Val::False);
        if n_open == 1 && head_false {
            let (l, positive) = open.expect("one open literal");
            return self.set(val, l, !positive, q);
        }
        match r.head {
            Some(h) if val[h as usize] == Val::True => self.check_support(val, h, q),
            _ => true,
        }
    }

    /// An atom with no applicable rule is false; a true atom with exactly
    /// one applicable rule needs that rule's body.
    fn check_support(&self, val: &mut [Val], h: u32, q: &mut Queue) -> bool {
        if val[h as usize] == Val::False {
            return true;
        }
        let mut live = None;
        let mut count = 0;
        for &r in &self.heads_of[h as usize] {
            if !self.blocked(val, &self.rules[r as usize]) {
                count += 1;
                live = Some(r);
                if count > 1 {
                    break;
                }
            }
        }
        if count == 0 {
            return self.set(val, h, false, q);
        }
        if count == 1 && val[h as usize] == Val::True {
            let r = &self.rules[live.expect("one live rule") as usize];
            for &p in &r.pos {
                if !self.set(val, p, true, q) {
                    return false;
                }
            }
            for &n in &r.neg {
                if !self.set(val, n, false, q) {
                    return false;
                }
            }
        }
        true
    }

    /// `w` is the least model of its reduct, derives no `⊥`, is consistent
    /// and decides every total atom.
    fn is_answer_set(&self, w: &[bool]) -> bool {
        for (i, t) in self.total.iter().enumerate() {
            let (p, n) = (w[2 * i], w[2 * i + 1]);
            if (p && n) || (*t && !p && !n) {
                return false;
            }
        }
        let mut model = vec![false; w.len()];
        let mut missing: Vec<usize> = self.rules.iter().map(|r| r.pos.len()).collect();
        let applicable: Vec<bool> = self
            .rules
            .iter()
            .map(|r| r.neg.iter().all(|&n| !w[n as usize]))
            .collect();
        let mut stack = Vec::new();
        for (i, r) in self.rules.iter().enumerate() {
            if applicable[i] && missing[i] == 0 {
                match r.head {
                    None => return false,
                    Some(h) => stack.push(h),
                }
            }
        }
        while let Some(h) = stack.pop() {
            if model[h as usize] {
                continue;
            }
            model[h as usize] = true;
            for &ri in &self.occurs[h as usize] {
                let r = &self.rules[ri as usize];
                if !applicable[ri as usize] || !r.pos.contains(&h) {
                    continue;
                }
                let k = r.pos.iter().filter(|&&p| p == h).count();
                missing[ri as usize] -= k;
                if missing[ri as usize] == 0 {
                    match r.head {
                        None => return false,
                        Some(x) => stack.push(x),
                    }
                }
            }
        }
        model == w
    }
}
