//! Weight-biased child sets for stars.
//!
//! Every leaf (a child cluster) gets rank `floor(log2 weight)`. Two roots of
//! equal rank are paired under a new node one rank higher, like carries in
//! a binary counter, so a node of rank `r` weighs at least `2^r`. The
//! remaining roots have distinct ranks and are folded smallest first, which
//! puts a leaf of weight `w` at depth at most `log2(W / w) + 2`.

use rustc_hash::FxHashMap;

use crate::aggregate::AggregateSpec;
use crate::hierarchy::summary::StarAcc;

const NIL: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Node<V> {
    parent: u32,
    kids: [u32; 2],
    rank: u32,
    key: u32,
    weight: u64,
    acc: StarAcc<V>,
}

#[derive(Clone, Debug)]
pub struct RankTree<V> {
    nodes: Vec<Node<V>>,
    free: Vec<u32>,
    leaf_of: FxHashMap<u32, u32>,
    roots: Vec<u32>,
}

fn rank_of(w: u64) -> u32 {
    63 - w.max(1).leading_zeros()
}

impl<V: Copy + PartialEq + std::fmt::Debug> RankTree<V> {
    pub fn new() -> Self {
        RankTree { nodes: Vec::new(), free: Vec::new(), leaf_of: FxHashMap::default(), roots: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.leaf_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaf_of.is_empty()
    }

    pub fn contains(&self, key: u32) -> bool {
        self.leaf_of.contains_key(&key)
    }

    fn alloc(&mut self, n: Node<V>) -> u32 {
        match self.free.pop() {
            Some(i) => {
                self.nodes[i as usize] = n;
                i
            }
            None => {
                self.nodes.push(n);
                (self.nodes.len() - 1) as u32
            }
        }
    }

    /// Add `x` as a root, pairing equal ranks upward.
    fn carry<S: AggregateSpec<Value = V>>(&mut self, mut x: u32, spec: &S) {
        loop {
            self.nodes[x as usize].parent = NIL;
            let r = self.nodes[x as usize].rank as usize;
            if self.roots.len() <= r {
                self.roots.resize(r + 1, NIL);
            }
            let y = self.roots[r];
            if y == NIL {
                self.roots[r] = x;
                return;
            }
            self.roots[r] = NIL;
            let (a, b) = (&self.nodes[y as usize], &self.nodes[x as usize]);
            let m = Node {
                parent: NIL,
                kids: [y, x],
                rank: r as u32 + 1,
                key: NIL,
                weight: a.weight + b.weight,
                acc: a.acc.merge(&b.acc, spec),
            };
            let m = self.alloc(m);
            self.nodes[y as usize].parent = m;
            self.nodes[x as usize].parent = m;
            x = m;
        }
    }

    pub fn insert<S: AggregateSpec<Value = V>>(&mut self, key: u32, weight: u64, acc: StarAcc<V>, spec: &S) {
        debug_assert!(!self.contains(key));
        let x = self.alloc(Node { parent: NIL, kids: [NIL; 2], rank: rank_of(weight), key, weight, acc });
        self.leaf_of.insert(key, x);
        self.carry(x, spec);
    }

    pub fn remove<S: AggregateSpec<Value = V>>(&mut self, key: u32, spec: &S) -> bool {
        let Some(x) = self.leaf_of.remove(&key) else { return false };
        // free the leaf's ancestors; their other children become roots
        let mut loose = Vec::new();
        let mut c = x;
        let mut p = self.nodes[c as usize].parent;
        while p != NIL {
            let k = self.nodes[p as usize].kids;
            loose.push(if k[0] == c { k[1] } else { k[0] });
            self.free.push(c);
            c = p;
            p = self.nodes[c as usize].parent;
        }
        let r = self.nodes[c as usize].rank as usize;
        debug_assert_eq!(self.roots[r], c);
        self.roots[r] = NIL;
        self.free.push(c);
        for s in loose {
            self.carry(s, spec);
        }
        while self.roots.last() == Some(&NIL) {
            self.roots.pop();
        }
        true
    }

    /// Insert, or refresh the weight and accumulator of an existing leaf.
    pub fn upsert<S: AggregateSpec<Value = V>>(&mut self, key: u32, weight: u64, acc: StarAcc<V>, spec: &S) {
        match self.leaf_of.get(&key) {
            Some(&x) if self.nodes[x as usize].rank == rank_of(weight) => {
                let n = &mut self.nodes[x as usize];
                if n.weight == weight && n.acc == acc {
                    return;
                }
                let dw = weight as i128 - n.weight as i128;
                n.weight = weight;
                n.acc = acc;
                let mut p = n.parent;
                while p != NIL {
                    let [a, b] = self.nodes[p as usize].kids;
                    let m = self.nodes[a as usize].acc.merge(&self.nodes[b as usize].acc, spec);
                    let n = &mut self.nodes[p as usize];
                    n.acc = m;
                    n.weight = (n.weight as i128 + dw) as u64;
                    p = n.parent;
                }
            }
            Some(_) => {
                self.remove(key, spec);
                self.insert(key, weight, acc, spec);
            }
            None => self.insert(key, weight, acc, spec),
        }
    }

    pub fn total<S: AggregateSpec<Value = V>>(&self, spec: &S) -> StarAcc<V> {
        let mut acc = StarAcc::empty();
        for &r in self.roots.iter().filter(|&&r| r != NIL) {
            acc.absorb(&self.nodes[r as usize].acc, spec);
        }
        acc
    }

    /// Accumulator over every leaf except `key`.
    pub fn total_without<S: AggregateSpec<Value = V>>(&self, key: u32, spec: &S) -> StarAcc<V> {
        let Some(&x) = self.leaf_of.get(&key) else { return self.total(spec) };
        let mut acc = StarAcc::empty();
        let mut c = x;
        let mut p = self.nodes[c as usize].parent;
        while p != NIL {
            let k = self.nodes[p as usize].kids;
            let s = if k[0] == c { k[1] } else { k[0] };
            acc.absorb(&self.nodes[s as usize].acc, spec);
            c = p;
            p = self.nodes[c as usize].parent;
        }
        for &r in self.roots.iter().filter(|&&r| r != NIL && r != c) {
            acc.absorb(&self.nodes[r as usize].acc, spec);
        }
        acc
    }

    /// Depth of leaf `key` in the conceptual binary tree: pairing depth plus
    /// its root's position in the smallest-first fold of the roots.
    pub fn depth(&self, key: u32) -> Option<u32> {
        let mut c = *self.leaf_of.get(&key)?;
        let mut d = 0;
        while self.nodes[c as usize].parent != NIL {
            c = self.nodes[c as usize].parent;
            d += 1;
        }
        let live: Vec<u32> = self.roots.iter().copied().filter(|&r| r != NIL).collect();
        let m = live.len() as u32;
        if m > 1 {
            let j = live.iter().position(|&r| r == c).unwrap() as u32;
            d += m - j.max(1);
        }
        Some(d)
    }

    pub fn total_weight(&self) -> u64 {
        self.roots.iter().filter(|&&r| r != NIL).map(|&r| self.nodes[r as usize].weight).sum()
    }

    pub fn keys(&self) -> impl Iterator<Item = u32> + '_ {
        self.leaf_of.keys().copied()
    }

    pub fn leaf_acc(&self, key: u32) -> Option<&StarAcc<V>> {
        self.leaf_of.get(&key).map(|&x| &self.nodes[x as usize].acc)
    }

    /// Check internal accumulators and weights against their children and
    /// the depth bound for every leaf.
    pub fn check<S: AggregateSpec<Value = V>>(&self, spec: &S) -> Result<(), String> {
        let total = self.total_weight();
        for (&key, &x) in &self.leaf_of {
            if self.nodes[x as usize].key != key {
                return Err(format!("leaf for {key} carries another key"));
            }
            let mut c = x;
            let mut p = self.nodes[c as usize].parent;
            while p != NIL {
                let n = &self.nodes[p as usize];
                if !n.kids.contains(&c) {
                    return Err(format!("broken parent link under key {key}"));
                }
                let [a, b] = n.kids;
                let (na, nb) = (&self.nodes[a as usize], &self.nodes[b as usize]);
                if n.acc != na.acc.merge(&nb.acc, spec) || n.weight != na.weight + nb.weight {
                    return Err(format!("stale accumulator above key {key}"));
                }
                if na.rank + 1 != n.rank || nb.rank + 1 != n.rank {
                    return Err(format!("rank mismatch above key {key}"));
                }
                c = p;
                p = n.parent;
            }
            let w = self.nodes[x as usize].weight.max(1) as f64;
            let bound = (total.max(1) as f64 / w).log2() + 2.0;
            let d = self.depth(key).unwrap() as f64;
            if d > bound + 1e-9 {
                return Err(format!("leaf {key} at depth {d} exceeds {bound:.2}"));
            }
        }
        Ok(())
    }

    pub fn heap_bytes(&self) -> usize {
        self.nodes.capacity() * std::mem::size_of::<Node<V>>()
            + self.free.capacity() * 4
            + self.leaf_of.capacity() * 9
            + self.roots.capacity() * 4
    }
}

impl<V: Copy + PartialEq + std::fmt::Debug> Default for RankTree<V> {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregate::MaxI64;
    use crate::hierarchy::summary::Group;

    fn acc(x: i64, size: u64) -> StarAcc<i64> {
        let mut a = StarAcc::empty();
        a.groups.push(Group { x: 0, cnt: 1, top1: x as u64, top2: 0, near: x as u64, sub: x });
        a.size = size;
        a
    }

    #[test]
    fn insert_remove_keeps_totals() {
        let s = MaxI64;
        let mut t = RankTree::new();
        let ws = [1u64, 1, 1, 5, 9, 2, 33, 1, 4];
        for (k, &w) in ws.iter().enumerate() {
            t.insert(k as u32, w, acc(k as i64 * 3 % 7, w), &s);
            t.check(&s).unwrap();
        }
        let best = |t: &RankTree<i64>| t.total(&s).groups[0].sub;
        assert_eq!(best(&t), 6);
        assert_eq!(t.total_without(2, &s).groups[0].sub, 5);
        t.remove(2, &s);
        t.check(&s).unwrap();
        assert_eq!(best(&t), 5);
        t.upsert(6, 40, acc(100, 40), &s);
        t.check(&s).unwrap();
        assert_eq!(best(&t), 100);
        assert_eq!(t.total(&s).size, 1 + 1 + 5 + 9 + 2 + 40 + 1 + 4);
        for k in [0, 1, 3, 4, 5, 6, 7, 8] {
            t.remove(k, &s);
            t.check(&s).unwrap();
        }
        assert!(t.is_empty());
    }
}
