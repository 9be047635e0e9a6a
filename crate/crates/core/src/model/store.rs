//! The axiom store and the buffered-change queue.
//!
//! A store is a set of axioms plus an index from every entity name to the
//! axioms that mention it. Mutations are grouped into batches; each batch
//! that changes the axiom set bumps the revision by exactly one.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::model::{Axiom, EntityName};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChangeOp {
    Add,
    Remove,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Change {
    pub op: ChangeOp,
    pub axiom: Axiom,
}

impl Change {
    pub fn add(axiom: Axiom) -> Self {
        Change {
            op: ChangeOp::Add,
            axiom,
        }
    }

    pub fn remove(axiom: Axiom) -> Self {
        Change {
            op: ChangeOp::Remove,
            axiom,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct AxiomStore {
    axioms: BTreeSet<Axiom>,
    index: BTreeMap<EntityName, BTreeSet<Axiom>>,
    revision: u64,
}

impl AxiomStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    pub fn contains(&self, axiom: &Axiom) -> bool {
        self.axioms.contains(axiom)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Axiom> {
        self.axioms.iter()
    }

    pub fn axioms(&self) -> &BTreeSet<Axiom> {
        &self.axioms
    }

    /// Axioms mentioning `name`, if any.
    pub fn mentioning(&self, name: &EntityName) -> Option<&BTreeSet<Axiom>> {
        self.index.get(name)
    }

    pub fn signature_index(&self) -> &BTreeMap<EntityName, BTreeSet<Axiom>> {
        &self.index
    }

    /// Same axiom set, ignoring revisions.
    pub fn same_axioms(&self, other: &AxiomStore) -> bool {
        self.axioms == other.axioms
    }

    /// True if the index equals one rebuilt from scratch.
    pub fn index_is_consistent(&self) -> bool {
        let mut rebuilt: BTreeMap<EntityName, BTreeSet<Axiom>> = BTreeMap::new();
        for ax in &self.axioms {
            for name in ax.signature().all() {
                rebuilt.entry(name).or_default().insert(ax.clone());
            }
        }
        rebuilt == self.index
    }

    pub fn add_axiom(&mut self, axiom: Axiom) -> Result<bool> {
        axiom.validate()?;
        let changed = self.insert(axiom);
        self.bump_if(changed);
        Ok(changed)
    }

    pub fn remove_axiom(&mut self, axiom: &Axiom) -> bool {
        let changed = self.delete(axiom);
        self.bump_if(changed);
        changed
    }

    /// Swaps the object of one property assertion as a single batch.
    /// `changed` reports the net effect on the axiom set.
    pub fn replace_property_value(
        &mut self,
        role: &EntityName,
        subject: &EntityName,
        new_object: &EntityName,
        old_object: &EntityName,
    ) -> Result<bool> {
        let old = Axiom::property_assertion(role.clone(), subject.clone(), old_object.clone());
        let new = Axiom::property_assertion(role.clone(), subject.clone(), new_object.clone());
        new.validate()?;
        let changed = if old == new {
            self.insert(new)
        } else {
            let removed = self.delete(&old);
            let added = self.insert(new);
            removed || added
        };
        self.bump_if(changed);
        Ok(changed)
    }

    /// Applies `changes` in order as one batch. Stops at the first invalid
    /// change; the changes before it stay applied. Returns the number of
    /// entries that took effect.
    pub fn apply_batch<'a>(
        &mut self,
        changes: impl IntoIterator<Item = &'a Change>,
    ) -> Result<usize, BatchError> {
        let mut effective = 0;
        let mut processed = 0;
        let mut failure = None;
        for change in changes {
            match self.apply_one(change) {
                Ok(true) => effective += 1,
                Ok(false) => {}
                Err(e) => {
                    failure = Some(e);
                    break;
                }
            }
            processed += 1;
        }
        self.bump_if(effective > 0);
        match failure {
            None => Ok(effective),
            Some(error) => Err(BatchError {
                failed_at: processed,
                error,
            }),
        }
    }

    fn apply_one(&mut self, change: &Change) -> Result<bool> {
        match change.op {
            ChangeOp::Add => {
                change.axiom.validate()?;
                Ok(self.insert(change.axiom.clone()))
            }
            ChangeOp::Remove => Ok(self.delete(&change.axiom)),
        }
    }

    fn insert(&mut self, axiom: Axiom) -> bool {
        if self.axioms.contains(&axiom) {
            return false;
        }
        for name in axiom.signature().all() {
            self.index.entry(name).or_default().insert(axiom.clone());
        }
        self.axioms.insert(axiom);
        true
    }

    fn delete(&mut self, axiom: &Axiom) -> bool {
        if !self.axioms.remove(axiom) {
            return false;
        }
        for name in axiom.signature().all() {
            if let Some(set) = self.index.get_mut(&name) {
                set.remove(axiom);
                if set.is_empty() {
                    self.index.remove(&name);
                }
            }
        }
        true
    }

    fn bump_if(&mut self, changed: bool) {
        if changed {
            self.revision += 1;
        }
    }
}

/// A batch that stopped part-way through.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchError {
    /// Index of the failing change within the batch.
    pub failed_at: usize,
    pub error: Error,
}

/// Pending manipulations, kept in submission order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChangeBuffer {
    pending: VecDeque<Change>,
}

impl ChangeBuffer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, change: Change) {
        self.pending.push_back(change);
    }

    pub fn len(&self) -> usize {
        self.pending.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pending.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Change> {
        self.pending.iter()
    }
}

/// Either queues `change` or applies it right away. Returns whether it was
/// applied.
pub fn buffer_or_apply(
    store: &mut AxiomStore,
    buf: &mut ChangeBuffer,
    buffered: bool,
    change: Change,
) -> Result<bool> {
    if buffered {
        buf.push(change);
        return Ok(false);
    }
    store
        .apply_batch(std::iter::once(&change))
        .map(|_| true)
        .map_err(|e| e.error)
}

/// Applies every pending change in order as one batch and empties the
/// buffer. On failure the entries before the failing one stay applied and
/// the buffer keeps the failing entry onward.
pub fn flush(store: &mut AxiomStore, buf: &mut ChangeBuffer) -> Result<usize> {
    let count = buf.len();
    match store.apply_batch(buf.pending.iter()) {
        Ok(_) => {
            buf.pending.clear();
            Ok(count)
        }
        Err(BatchError { failed_at, error }) => {
            buf.pending.drain(..failed_at);
            Err(error)
        }
    }
}
