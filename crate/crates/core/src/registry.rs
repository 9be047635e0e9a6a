//! Named ontology references with mount leases, flags and published
//! inference snapshots.
//!
//! Each reference has two locks. The state mutex serializes manipulations,
//! flag changes, mounts and reasoner updates. The snapshot lock only guards
//! an `Arc` swap, so queries read the last published snapshot without ever
//! waiting for a manipulation or a saturation to finish.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::str::FromStr;
use std::sync::{Arc, Mutex, MutexGuard, RwLock};

use crate::error::{Error, Result};
use crate::model::{AxiomStore, Change, ChangeBuffer, ChangeOp, ClassExpression, EntityName};
use crate::ofn::{self, DocumentModel};
use crate::reasoner::{Inference, Relation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Flags {
    pub buffered_manipulation: bool,
    pub continuous_reasoner_update: bool,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            buffered_manipulation: false,
            continuous_reasoner_update: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flag {
    BufferedManipulation,
    ContinuousReasonerUpdate,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::BufferedManipulation => "buffered_manipulation",
            Flag::ContinuousReasonerUpdate => "continuous_reasoner_update",
        }
    }
}

impl FromStr for Flag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "buffered_manipulation" => Ok(Flag::BufferedManipulation),
            "continuous_reasoner_update" => Ok(Flag::ContinuousReasonerUpdate),
            _ => Err(Error::Malformed(format!("unknown flag `{s}`"))),
        }
    }
}

impl Flags {
    pub fn set(&mut self, flag: Flag, value: bool) {
        match flag {
            Flag::BufferedManipulation => self.buffered_manipulation = value,
            Flag::ContinuousReasonerUpdate => self.continuous_reasoner_update = value,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RegistryConfig {
    pub default_flags: Flags,
    /// Refuse manipulations from clients that do not hold the lease.
    pub mandatory_mount: bool,
}

/// What one published state of a reference looks like to readers.
#[derive(Debug)]
pub struct Snapshot {
    /// Store revision; may be ahead of `inference.revision()` when the
    /// continuous reasoner update is off.
    pub revision: u64,
    pub store: Arc<AxiomStore>,
    pub inference: Arc<Inference>,
    pub pending: usize,
}

impl Snapshot {
    pub fn consistent(&self) -> bool {
        self.inference.is_consistent()
    }

    pub fn is_stale(&self) -> bool {
        self.inference.revision() < self.revision
    }
}

/// Result of a state-changing operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub consistent: bool,
    pub applied: bool,
    pub revision: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Instances {
        class: ClassExpression,
        direct: bool,
    },
    Types {
        individual: EntityName,
        direct: bool,
        include_top: bool,
    },
    Hierarchy {
        class: ClassExpression,
        relation: Relation,
    },
    PropertyValues {
        role: EntityName,
        subject: EntityName,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryResult {
    pub names: Vec<String>,
    pub consistent: bool,
    pub revision: u64,
}

struct RefState {
    store: Arc<AxiomStore>,
    inference: Arc<Inference>,
    buffer: ChangeBuffer,
    flags: Flags,
    lease: Option<String>,
    prefixes: BTreeMap<String, String>,
    ontology_name: Option<String>,
    dropped: bool,
}

pub struct OntologyRef {
    name: String,
    state: Mutex<RefState>,
    published: RwLock<Arc<Snapshot>>,
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|e| e.into_inner())
}

impl OntologyRef {
    fn new(name: &str, flags: Flags) -> Self {
        let store = Arc::new(AxiomStore::new());
        let inference = Arc::new(Inference::compute(&store));
        let snapshot = Arc::new(Snapshot {
            revision: 0,
            store: store.clone(),
            inference: inference.clone(),
            pending: 0,
        });
        OntologyRef {
            name: name.to_owned(),
            state: Mutex::new(RefState {
                store,
                inference,
                buffer: ChangeBuffer::new(),
                flags,
                lease: None,
                prefixes: DocumentModel::new().prefixes,
                ontology_name: None,
                dropped: false,
            }),
            published: RwLock::new(snapshot),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.published
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .clone()
    }

    pub fn flags(&self) -> Flags {
        lock(&self.state).flags
    }

    pub fn lease(&self) -> Option<String> {
        lock(&self.state).lease.clone()
    }

    fn state(&self) -> Result<MutexGuard<'_, RefState>> {
        let st = lock(&self.state);
        if st.dropped {
            return Err(Error::UnknownReference(self.name.clone()));
        }
        Ok(st)
    }

    fn publish(&self, st: &RefState) {
        let snap = Arc::new(Snapshot {
            revision: st.store.revision(),
            store: st.store.clone(),
            inference: st.inference.clone(),
            pending: st.buffer.len(),
        });
        *self.published.write().unwrap_or_else(|e| e.into_inner()) = snap;
    }

    fn outcome(st: &RefState, applied: bool) -> Outcome {
        Outcome {
            consistent: st.inference.is_consistent(),
            applied,
            revision: st.store.revision(),
        }
    }

    fn check_writer(&self, st: &RefState, client: &str, mandatory_mount: bool) -> Result<()> {
        match &st.lease {
            Some(holder) if holder != client => Err(Error::ReferenceBusy {
                reference: self.name.clone(),
                reason: format!("mounted by `{holder}`"),
            }),
            None if mandatory_mount => Err(Error::ReferenceBusy {
                reference: self.name.clone(),
                reason: "mounting is mandatory before manipulating".into(),
            }),
            _ => Ok(()),
        }
    }

    fn reason_locked(st: &mut RefState) {
        if st.inference.revision() != st.store.revision() {
            st.inference = Arc::new(Inference::compute(&st.store));
        }
    }

    fn flush_locked(st: &mut RefState) -> Result<usize> {
        if st.buffer.is_empty() {
            return Ok(0);
        }
        let RefState { store, buffer, .. } = st;
        crate::model::flush(Arc::make_mut(store), buffer)
    }
}

/// The registry of named references.
#[derive(Default)]
pub struct ReferenceMap {
    refs: RwLock<HashMap<String, Arc<OntologyRef>>>,
    config: RegistryConfig,
}

impl ReferenceMap {
    pub fn new(config: RegistryConfig) -> Self {
        ReferenceMap {
            refs: RwLock::new(HashMap::new()),
            config,
        }
    }

    pub fn config(&self) -> RegistryConfig {
        self.config
    }

    pub fn get(&self, name: &str) -> Result<Arc<OntologyRef>> {
        self.refs
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownReference(name.to_owned()))
    }

    pub fn names(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .refs
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .keys()
            .cloned()
            .collect();
        v.sort();
        v
    }

    pub fn create(&self, name: &str, flags: Option<Flags>) -> Result<Outcome> {
        let mut refs = self.refs.write().unwrap_or_else(|e| e.into_inner());
        if refs.contains_key(name) {
            return Err(Error::DuplicateReference(name.to_owned()));
        }
        let r = Arc::new(OntologyRef::new(
            name,
            flags.unwrap_or(self.config.default_flags),
        ));
        refs.insert(name.to_owned(), r);
        Ok(Outcome {
            consistent: true,
            applied: false,
            revision: 0,
        })
    }

    pub fn drop_ref(&self, client: &str, name: &str) -> Result<()> {
        let mut refs = self.refs.write().unwrap_or_else(|e| e.into_inner());
        let r = refs
            .get(name)
            .ok_or_else(|| Error::UnknownReference(name.to_owned()))?;
        let mut st = lock(&r.state);
        if let Some(holder) = &st.lease {
            if holder != client {
                return Err(Error::ReferenceBusy {
                    reference: name.to_owned(),
                    reason: format!("mounted by `{holder}`"),
                });
            }
        }
        st.dropped = true;
        drop(st);
        refs.remove(name);
        Ok(())
    }

    pub fn mount(&self, client: &str, name: &str) -> Result<Outcome> {
        let r = self.get(name)?;
        let mut st = r.state()?;
        match &st.lease {
            Some(holder) if holder != client => Err(Error::ReferenceBusy {
                reference: name.to_owned(),
                reason: format!("mounted by `{holder}`"),
            }),
            _ => {
                st.lease = Some(client.to_owned());
                Ok(OntologyRef::outcome(&st, false))
            }
        }
    }

    pub fn unmount(&self, client: &str, name: &str) -> Result<Outcome> {
        let r = self.get(name)?;
        let mut st = r.state()?;
        if st.lease.as_deref() != Some(client) {
            return Err(Error::NotLeaseHolder {
                reference: name.to_owned(),
                client: client.to_owned(),
            });
        }
        st.lease = None;
        Ok(OntologyRef::outcome(&st, false))
    }

    /// Takes the lease if it is free; returns whether this call acquired it.
    pub fn try_acquire(&self, client: &str, name: &str) -> Result<bool> {
        let r = self.get(name)?;
        let mut st = r.state()?;
        match &st.lease {
            Some(holder) if holder == client => Ok(false),
            Some(holder) => Err(Error::ReferenceBusy {
                reference: name.to_owned(),
                reason: format!("mounted by `{holder}`"),
            }),
            None => {
                st.lease = Some(client.to_owned());
                Ok(true)
            }
        }
    }

    /// Clears the lease whoever holds it.
    pub fn force_unmount(&self, name: &str) -> Result<Outcome> {
        let r = self.get(name)?;
        let mut st = r.state()?;
        if let Some(holder) = st.lease.take() {
            log::warn!("lease of `{holder}` on `{name}` cleared by force");
        }
        Ok(OntologyRef::outcome(&st, false))
    }

    /// Routes `changes` as one batch through the buffer or straight into the
    /// store, then re-saturates if the continuous update is on.
    pub fn manipulate(&self, client: &str, name: &str, changes: Vec<Change>) -> Result<Outcome> {
        for c in &changes {
            if c.op == ChangeOp::Add {
                c.axiom.validate()?;
            }
        }
        let r = self.get(name)?;
        let mut st = r.state()?;
        r.check_writer(&st, client, self.config.mandatory_mount)?;
        if st.flags.buffered_manipulation {
            for c in changes {
                st.buffer.push(c);
            }
            r.publish(&st);
            return Ok(OntologyRef::outcome(&st, false));
        }
        Arc::make_mut(&mut st.store)
            .apply_batch(changes.iter())
            .map_err(|e| e.error)?;
        if st.flags.continuous_reasoner_update {
            OntologyRef::reason_locked(&mut st);
        }
        r.publish(&st);
        Ok(OntologyRef::outcome(&st, true))
    }

    /// Flushes the buffer and brings the inference up to date. Not subject
    /// to leases.
    pub fn reason(&self, name: &str) -> Result<Outcome> {
        let r = self.get(name)?;
        let mut st = r.state()?;
        let flushed = OntologyRef::flush_locked(&mut st);
        OntologyRef::reason_locked(&mut st);
        r.publish(&st);
        flushed?;
        Ok(OntologyRef::outcome(&st, true))
    }

    /// Flushes the buffer; re-saturates if the continuous update is on.
    pub fn apply(&self, client: &str, name: &str) -> Result<Outcome> {
        let r = self.get(name)?;
        let mut st = r.state()?;
        r.check_writer(&st, client, self.config.mandatory_mount)?;
        let flushed = OntologyRef::flush_locked(&mut st);
        if st.flags.continuous_reasoner_update {
            OntologyRef::reason_locked(&mut st);
        }
        r.publish(&st);
        flushed?;
        Ok(OntologyRef::outcome(&st, true))
    }

    pub fn set_flag(&self, client: &str, name: &str, flag: Flag, value: bool) -> Result<Outcome> {
        let r = self.get(name)?;
        let mut st = r.state()?;
        r.check_writer(&st, client, self.config.mandatory_mount)?;
        st.flags.set(flag, value);
        Ok(OntologyRef::outcome(&st, false))
    }

    /// Adds every axiom of an ontology document as one manipulation batch.
    pub fn load(&self, client: &str, name: &str, path: &Path) -> Result<Outcome> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::FileIo(format!("{}: {e}", path.display())))?;
        let doc = ofn::parse(&text)?;
        let changes = doc.axioms.iter().cloned().map(Change::add).collect();
        let outcome = self.manipulate(client, name, changes)?;
        let r = self.get(name)?;
        let mut st = r.state()?;
        st.prefixes.extend(doc.prefixes);
        if st.ontology_name.is_none() {
            st.ontology_name = doc.ontology_name;
        }
        Ok(outcome)
    }

    /// The applied axioms (not the buffer) as a canonical document.
    pub fn dump(&self, name: &str) -> Result<String> {
        let r = self.get(name)?;
        let (prefixes, ontology_name) = {
            let st = r.state()?;
            (st.prefixes.clone(), st.ontology_name.clone())
        };
        let snap = r.snapshot();
        let doc = DocumentModel::from_axioms(&prefixes, ontology_name, snap.store.iter().cloned());
        Ok(ofn::serialize(&doc))
    }

    pub fn save(&self, name: &str, path: &Path) -> Result<Outcome> {
        let text = self.dump(name)?;
        std::fs::write(path, text)
            .map_err(|e| Error::FileIo(format!("{}: {e}", path.display())))?;
        let snap = self.get(name)?.snapshot();
        Ok(Outcome {
            consistent: snap.consistent(),
            applied: false,
            revision: snap.revision,
        })
    }

    pub fn snapshot(&self, name: &str) -> Result<Arc<Snapshot>> {
        Ok(self.get(name)?.snapshot())
    }

    /// Answers `q` from the published snapshot; never waits for a lease.
    pub fn query(&self, name: &str, q: &Query) -> Result<QueryResult> {
        let snap = self.snapshot(name)?;
        let inf = &snap.inference;
        let names = match q {
            Query::Instances { class, direct } => inf.instances_of(class, *direct)?,
            Query::Types {
                individual,
                direct,
                include_top,
            } => inf.types_of(individual, *direct, *include_top)?,
            Query::Hierarchy { class, relation } => inf.neighbors(class, *relation)?,
            Query::PropertyValues { role, subject } => inf.property_values(subject, role)?,
        };
        Ok(QueryResult {
            names: names.iter().map(|n| n.to_string()).collect(),
            consistent: snap.consistent(),
            revision: snap.revision,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Axiom;

    fn n(s: &str) -> EntityName {
        s.parse().unwrap()
    }

    fn c(s: &str) -> ClassExpression {
        ClassExpression::Named(n(s))
    }

    fn add(ax: Axiom) -> Vec<Change> {
        vec![Change::add(ax)]
    }

    #[test]
    fn lifecycle_errors() {
        let m = ReferenceMap::default();
        m.create("map", None).unwrap();
        assert_eq!(
            m.create("map", None).unwrap_err(),
            Error::DuplicateReference("map".into())
        );
        m.drop_ref("a", "map").unwrap();
        let q = Query::Instances {
            class: ClassExpression::Top,
            direct: false,
        };
        assert_eq!(
            m.query("map", &q).unwrap_err(),
            Error::UnknownReference("map".into())
        );
    }

    #[test]
    fn leases() {
        let m = ReferenceMap::default();
        m.create("map", None).unwrap();
        m.mount("clientA", "map").unwrap();
        m.mount("clientA", "map").unwrap();
        let err = m
            .manipulate(
                "clientB",
                "map",
                add(Axiom::declare(
                    crate::model::EntityKind::Class,
                    n("ex:Sphere"),
                )),
            )
            .unwrap_err();
        assert!(matches!(err, Error::ReferenceBusy { .. }));
        assert!(matches!(
            m.mount("clientB", "map").unwrap_err(),
            Error::ReferenceBusy { .. }
        ));
        assert!(matches!(
            m.unmount("clientB", "map").unwrap_err(),
            Error::NotLeaseHolder { .. }
        ));
        assert!(matches!(
            m.drop_ref("clientB", "map").unwrap_err(),
            Error::ReferenceBusy { .. }
        ));
        m.manipulate(
            "clientA",
            "map",
            add(Axiom::sub_class(c("ex:A"), c("ex:B"))),
        )
        .unwrap();
        m.unmount("clientA", "map").unwrap();
        m.manipulate(
            "clientB",
            "map",
            add(Axiom::sub_class(c("ex:B"), c("ex:C"))),
        )
        .unwrap();
        assert_eq!(m.snapshot("map").unwrap().revision, 2);
    }

    #[test]
    fn types_query_through_registry() {
        let m = ReferenceMap::default();
        m.create("kb", None).unwrap();
        m.manipulate(
            "c",
            "kb",
            add(Axiom::class_assertion(c("ex:Dog"), n("ex:rex"))),
        )
        .unwrap();
        m.manipulate(
            "c",
            "kb",
            add(Axiom::sub_class(c("ex:Dog"), c("ex:Animal"))),
        )
        .unwrap();
        let q = Query::Types {
            individual: n("ex:rex"),
            direct: false,
            include_top: false,
        };
        assert_eq!(m.query("kb", &q).unwrap().names, ["ex:Animal", "ex:Dog"]);
    }

    #[test]
    fn continuous_update_reports_inconsistency() {
        let m = ReferenceMap::default();
        m.create("kb", None).unwrap();
        m.manipulate(
            "c",
            "kb",
            add(Axiom::disjoint(vec![c("ex:A"), c("ex:B")]).unwrap()),
        )
        .unwrap();
        m.manipulate("c", "kb", add(Axiom::class_assertion(c("ex:A"), n("ex:a"))))
            .unwrap();
        let out = m
            .manipulate("c", "kb", add(Axiom::class_assertion(c("ex:B"), n("ex:a"))))
            .unwrap();
        assert!(!out.consistent);
    }

    #[test]
    fn stale_until_reason() {
        let m = ReferenceMap::default();
        m.create("kb", None).unwrap();
        m.set_flag("c", "kb", Flag::ContinuousReasonerUpdate, false)
            .unwrap();
        m.manipulate(
            "c",
            "kb",
            add(Axiom::disjoint(vec![c("ex:A"), c("ex:B")]).unwrap()),
        )
        .unwrap();
        m.manipulate("c", "kb", add(Axiom::class_assertion(c("ex:A"), n("ex:a"))))
            .unwrap();
        let out = m
            .manipulate("c", "kb", add(Axiom::class_assertion(c("ex:B"), n("ex:a"))))
            .unwrap();
        assert!(out.consistent);
        assert!(m.snapshot("kb").unwrap().is_stale());
        let out = m.reason("kb").unwrap();
        assert!(!out.consistent);
        assert_eq!(out.revision, 3);
        assert_eq!(m.reason("kb").unwrap(), out);
    }

    #[test]
    fn buffered_changes_wait_for_reason() {
        let m = ReferenceMap::default();
        m.create("kb", None).unwrap();
        m.set_flag("c", "kb", Flag::BufferedManipulation, true)
            .unwrap();
        let out = m
            .manipulate(
                "c",
                "kb",
                add(Axiom::class_assertion(c("ex:Dog"), n("ex:rex"))),
            )
            .unwrap();
        assert!(!out.applied);
        assert_eq!(out.revision, 0);
        assert_eq!(m.snapshot("kb").unwrap().pending, 1);
        let q = Query::Instances {
            class: c("ex:Dog"),
            direct: false,
        };
        assert!(m.query("kb", &q).unwrap().names.is_empty());
        let out = m.reason("kb").unwrap();
        assert_eq!(out.revision, 1);
        assert_eq!(m.query("kb", &q).unwrap().names, ["ex:rex"]);
    }

    #[test]
    fn drop_then_create_is_fresh() {
        let m = ReferenceMap::default();
        m.create("kb", None).unwrap();
        m.manipulate(
            "c",
            "kb",
            add(Axiom::class_assertion(c("ex:Dog"), n("ex:rex"))),
        )
        .unwrap();
        m.mount("c", "kb").unwrap();
        m.drop_ref("c", "kb").unwrap();
        m.create("kb", None).unwrap();
        let snap = m.snapshot("kb").unwrap();
        assert_eq!(snap.revision, 0);
        assert!(snap.store.is_empty());
        assert_eq!(m.get("kb").unwrap().lease(), None);
    }

    #[test]
    fn mandatory_mount() {
        let m = ReferenceMap::new(RegistryConfig {
            mandatory_mount: true,
            ..RegistryConfig::default()
        });
        m.create("kb", None).unwrap();
        let ax = add(Axiom::sub_class(c("ex:A"), c("ex:B")));
        assert!(matches!(
            m.manipulate("c", "kb", ax.clone()).unwrap_err(),
            Error::ReferenceBusy { .. }
        ));
        m.mount("c", "kb").unwrap();
        m.manipulate("c", "kb", ax).unwrap();
    }

    #[test]
    fn save_and_load_round_trip() {
        let dir = std::env::temp_dir().join(format!("armordb-registry-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("kb.ofn");
        let m = ReferenceMap::default();
        m.create("kb", None).unwrap();
        m.manipulate(
            "c",
            "kb",
            add(Axiom::sub_class(c("ex:Dog"), c("ex:Animal"))),
        )
        .unwrap();
        m.save("kb", &path).unwrap();
        m.create("copy", None).unwrap();
        m.load("c", "copy", &path).unwrap();
        assert_eq!(m.dump("kb").unwrap(), m.dump("copy").unwrap());
        assert!(matches!(
            m.load("c", "copy", &dir.join("missing.ofn")).unwrap_err(),
            Error::FileIo(_)
        ));
        std::fs::remove_dir_all(&dir).ok();
    }
}
