//! Insert-once memo table shared by the engines.

use std::collections::HashMap;
use std::fmt::Display;
use std::hash::Hash;

use parking_lot::RwLock;

use crate::error::{GwError, Result};
use crate::rational::Rational;

/// Concurrent map from canonical bracket keys to values.
///
/// Re-inserting a key with a different value is a hard error: it can only
/// happen if evaluation is not deterministic.
#[derive(Debug)]
pub struct MemoStore<K> {
    map: RwLock<HashMap<K, Rational>>,
}

impl<K> Default for MemoStore<K> {
    fn default() -> Self {
        MemoStore {
            map: RwLock::new(HashMap::new()),
        }
    }
}

impl<K: Eq + Hash + Clone + Display> MemoStore<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &K) -> Option<Rational> {
        self.map.read().get(key).cloned()
    }

    pub fn insert(&self, key: K, value: Rational) -> Result<()> {
        let mut map = self.map.write();
        match map.get(&key) {
            Some(stored) if *stored != value => Err(GwError::MemoConflict {
                key: key.to_string(),
                stored: stored.to_string(),
                new: value.to_string(),
            }),
            Some(_) => Ok(()),
            None => {
                map.insert(key, value);
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.map.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.map.write().clear();
    }

    /// Snapshot of all entries, unordered.
    pub fn entries(&self) -> Vec<(K, Rational)> {
        self.map
            .read()
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn insert_once_semantics() {
        let m: MemoStore<String> = MemoStore::new();
        m.insert("a".into(), int(1)).unwrap();
        m.insert("a".into(), int(1)).unwrap();
        assert!(matches!(
            m.insert("a".into(), int(2)),
            Err(GwError::MemoConflict { .. })
        ));
        assert_eq!(m.get(&"a".to_string()), Some(int(1)));
        assert_eq!(m.len(), 1);
    }
}
