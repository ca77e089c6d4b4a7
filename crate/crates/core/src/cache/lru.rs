use std::collections::HashMap;

use crate::ObjectId;

const NIL: usize = usize::MAX;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub insertions: u64,
    /// Capacity-pressure evictions only; refreshing a present id is not one.
    pub evictions: u64,
}

#[derive(Debug, Clone)]
struct Entry {
    id: ObjectId,
    prev: usize,
    next: usize,
}

/// Fixed-capacity LRU set of object ids. Entries live in a slab linked from
/// most- (`head`) to least-recently used (`tail`).
#[derive(Debug, Clone)]
pub struct LruCache {
    capacity: usize,
    index: HashMap<ObjectId, usize>,
    slab: Vec<Entry>,
    head: usize,
    tail: usize,
    stats: CacheStats,
}

impl LruCache {
    pub fn new(capacity: usize) -> Self {
        LruCache {
            capacity,
            index: HashMap::with_capacity(capacity),
            slab: Vec::with_capacity(capacity),
            head: NIL,
            tail: NIL,
            stats: CacheStats::default(),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn stats(&self) -> CacheStats {
        self.stats
    }

    /// Membership test without touching recency or counters.
    pub fn contains(&self, id: ObjectId) -> bool {
        self.index.contains_key(&id)
    }

    /// Counts a hit or miss; a hit makes `id` most recently used.
    pub fn lookup(&mut self, id: ObjectId) -> bool {
        match self.index.get(&id) {
            Some(&slot) => {
                self.stats.hits += 1;
                self.promote(slot);
                true
            }
            None => {
                self.stats.misses += 1;
                false
            }
        }
    }

    /// Makes `id` most recently used, evicting the LRU entry when full.
    pub fn insert(&mut self, id: ObjectId) -> Option<ObjectId> {
        if self.capacity == 0 {
            return None;
        }
        if let Some(&slot) = self.index.get(&id) {
            self.promote(slot);
            return None;
        }
        self.stats.insertions += 1;
        let mut evicted = None;
        let slot = if self.index.len() == self.capacity {
            let slot = self.tail;
            self.unlink(slot);
            let old = self.slab[slot].id;
            self.index.remove(&old);
            self.stats.evictions += 1;
            evicted = Some(old);
            self.slab[slot].id = id;
            slot
        } else {
            self.slab.push(Entry { id, prev: NIL, next: NIL });
            self.slab.len() - 1
        };
        self.index.insert(id, slot);
        self.push_front(slot);
        evicted
    }

    /// Ids from most to least recently used.
    pub fn iter(&self) -> impl Iterator<Item = ObjectId> + '_ {
        let mut cur = self.head;
        std::iter::from_fn(move || {
            if cur == NIL {
                return None;
            }
            let e = &self.slab[cur];
            cur = e.next;
            Some(e.id)
        })
    }

    fn promote(&mut self, slot: usize) {
        if self.head != slot {
            self.unlink(slot);
            self.push_front(slot);
        }
    }

    fn unlink(&mut self, slot: usize) {
        let (prev, next) = (self.slab[slot].prev, self.slab[slot].next);
        if prev == NIL {
            self.head = next;
        } else {
            self.slab[prev].next = next;
        }
        if next == NIL {
            self.tail = prev;
        } else {
            self.slab[next].prev = prev;
        }
    }

    fn push_front(&mut self, slot: usize) {
        self.slab[slot].prev = NIL;
        self.slab[slot].next = self.head;
        if self.head != NIL {
            self.slab[self.head].prev = slot;
        }
        self.head = slot;
        if self.tail == NIL {
            self.tail = slot;
        }
    }
}
