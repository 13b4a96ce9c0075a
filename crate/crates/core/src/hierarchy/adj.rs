use rustc_hash::FxHashMap;

/// Same-level neighbor set of a cluster: `(neighbor, edge ref)` pairs.
///
/// Up to three entries live inline. Larger degrees spill the extra entries
/// into a heap map that is dropped again once it empties.
#[derive(Clone, Default, Debug)]
pub(crate) struct Adj {
    len: u8,
    inl: [(u32, u32); 3],
    over: Option<Box<FxHashMap<u32, u32>>>,
}

impl Adj {
    #[inline]
    pub fn degree(&self) -> usize {
        self.len as usize + self.over.as_ref().map_or(0, |m| m.len())
    }

    #[inline]
    pub fn get(&self, nb: u32) -> Option<u32> {
        for &(x, e) in &self.inl[..self.len as usize] {
            if x == nb {
                return Some(e);
            }
        }
        self.over.as_ref().and_then(|m| m.get(&nb).copied())
    }

    pub fn insert(&mut self, nb: u32, er: u32) {
        debug_assert!(self.get(nb).is_none());
        if (self.len as usize) < 3 {
            self.inl[self.len as usize] = (nb, er);
            self.len += 1;
        } else {
            self.over.get_or_insert_with(Default::default).insert(nb, er);
        }
    }

    pub fn remove(&mut self, nb: u32) -> Option<u32> {
        let len = self.len as usize;
        if let Some(i) = self.inl[..len].iter().position(|&(x, _)| x == nb) {
            let er = self.inl[i].1;
            // keep the inline part full while overflow entries remain
            let refill = self.over.as_mut().and_then(|m| {
                let k = *m.keys().next()?;
                Some((k, m.remove(&k).unwrap()))
            });
            match refill {
                Some(p) => self.inl[i] = p,
                None => {
                    self.inl[i] = self.inl[len - 1];
                    self.len -= 1;
                }
            }
            if self.over.as_ref().is_some_and(|m| m.is_empty()) {
                self.over = None;
            }
            return Some(er);
        }
        let m = self.over.as_mut()?;
        let er = m.remove(&nb)?;
        if m.is_empty() {
            self.over = None;
        }
        Some(er)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.inl[..self.len as usize]
            .iter()
            .copied()
            .chain(self.over.iter().flat_map(|m| m.iter().map(|(&k, &v)| (k, v))))
    }

    #[inline]
    pub fn first(&self) -> Option<(u32, u32)> {
        if self.len > 0 {
            Some(self.inl[0])
        } else {
            None
        }
    }

    pub fn clear(&mut self) {
        self.len = 0;
        self.over = None;
    }

    pub fn heap_bytes(&self) -> usize {
        self.over.as_ref().map_or(0, |m| {
            std::mem::size_of::<FxHashMap<u32, u32>>() + m.capacity() * (8 + 1)
        })
    }
}
