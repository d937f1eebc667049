//! Indexed 4-ary min-heap with decrease-key, keyed by `(weight, tiebreak)`.

use crate::graph::VertexId;
use crate::weight::Weight;

const ARITY: usize = 4;
const ABSENT: u32 = u32::MAX;

pub(crate) struct IndexedHeap<W> {
    items: Vec<(W, u32, u32)>,
    pos: Vec<u32>,
}

impl<W: Weight> IndexedHeap<W> {
    pub(crate) fn new(n: usize) -> Self {
        assert!(n < ABSENT as usize, "heap holds at most 2^32 - 1 vertices");
        IndexedHeap { items: Vec::new(), pos: vec![ABSENT; n] }
    }

    #[inline]
    fn less(a: &(W, u32, u32), b: &(W, u32, u32)) -> bool {
        let o = a.0.total_cmp_w(&b.0);
        o.is_lt() | (o.is_eq() & (a.1 < b.1))
    }

    /// Inserts `v`, or lowers its key if it is already queued. The caller
    /// only ever lowers keys.
    #[inline]
    pub(crate) fn push_or_decrease(&mut self, v: VertexId, key: W, tie: usize) {
        let item = (key, tie as u32, v as u32);
        let i = match self.pos[v] {
            ABSENT => {
                self.items.push(item);
                self.items.len() - 1
            }
            i => i as usize,
        };
        self.sift_up(i, item);
    }

    #[inline]
    pub(crate) fn pop(&mut self) -> Option<(W, usize, VertexId)> {
        let last = self.items.pop()?;
        let top = if self.items.is_empty() {
            last
        } else {
            let top = self.items[0];
            self.sift_down(last);
            top
        };
        self.pos[top.2 as usize] = ABSENT;
        Some((top.0, top.1 as usize, top.2 as usize))
    }

    fn sift_up(&mut self, mut i: usize, item: (W, u32, u32)) {
        while i > 0 {
            let parent = (i - 1) / ARITY;
            if !Self::less(&item, &self.items[parent]) {
                break;
            }
            self.items[i] = self.items[parent];
            self.pos[self.items[i].2 as usize] = i as u32;
            i = parent;
        }
        self.items[i] = item;
        self.pos[item.2 as usize] = i as u32;
    }

    fn sift_down(&mut self, item: (W, u32, u32)) {
        let items = &mut self.items[..];
        let len = items.len();
        let mut i = 0;
        loop {
            let first = ARITY * i + 1;
            if first >= len {
                break;
            }
            let best = if first + ARITY <= len {
                let k = &items[first..first + ARITY];
                let a = usize::from(Self::less(&k[1], &k[0]));
                let b = 2 + usize::from(Self::less(&k[3], &k[2]));
                first + if Self::less(&k[b], &k[a]) { b } else { a }
            } else {
                let kids = &items[first..len];
                let mut best = 0;
                for (c, kid) in kids.iter().enumerate().skip(1) {
                    if Self::less(kid, &kids[best]) {
                        best = c;
                    }
                }
                first + best
            };
            if !Self::less(&items[best], &item) {
                break;
            }
            items[i] = items[best];
            self.pos[items[i].2 as usize] = i as u32;
            i = best;
        }
        items[i] = item;
        self.pos[item.2 as usize] = i as u32;
    }
}
