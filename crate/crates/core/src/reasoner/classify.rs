use std::collections::{BTreeMap, BTreeSet};

use crate::model::ClassExpression;
use crate::reasoner::SubsumptionSet;

/// The class hierarchy as equivalence groups plus direct (transitively
/// reduced) edges between groups.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Hierarchy {
    groups: Vec<Vec<ClassExpression>>,
    group_of: BTreeMap<ClassExpression, usize>,
    direct_supers: Vec<BTreeSet<usize>>,
    direct_subs: Vec<BTreeSet<usize>>,
}

/// Computes direct edges from a transitively closed subsumption set.
pub fn classify(set: &SubsumptionSet) -> Hierarchy {
    let nodes: Vec<ClassExpression> = set
        .subsumptions
        .iter()
        .flat_map(|(a, b)| [a, b])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .cloned()
        .collect();
    let index: BTreeMap<&ClassExpression, usize> =
        nodes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut supers = vec![Vec::new(); nodes.len()];
    for (a, b) in &set.subsumptions {
        supers[index[a]].push(index[b]);
    }
    Hierarchy::from_supers(nodes, &supers)
}

struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }

    fn union_with(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }
}

impl Hierarchy {
    /// Builds the hierarchy over sorted, distinct `nodes`, where
    /// `supers[i]` lists every `j` with `nodes[i] ⊑ nodes[j]` (closed under
    /// transitivity, reflexive entries optional).
    pub fn from_supers(nodes: Vec<ClassExpression>, supers: &[Vec<usize>]) -> Hierarchy {
        let m = nodes.len();
        let mut bits: Vec<Bits> = Vec::with_capacity(m);
        for (i, s) in supers.iter().enumerate() {
            let mut b = Bits::new(m);
            b.insert(i);
            for &j in s {
                b.insert(j);
            }
            bits.push(b);
        }

        let mut group_id = vec![usize::MAX; m];
        let mut groups: Vec<Vec<ClassExpression>> = Vec::new();
        let mut reps = Vec::new();
        for i in 0..m {
            if group_id[i] != usize::MAX {
                continue;
            }
            let id = groups.len();
            let mut members = vec![i];
            members.extend(
                supers[i]
                    .iter()
                    .copied()
                    .filter(|&j| j != i && bits[j].contains(i)),
            );
            members.sort_unstable();
            members.dedup();
            for &j in &members {
                group_id[j] = id;
            }
            groups.push(members.iter().map(|&j| nodes[j].clone()).collect());
            reps.push(i);
        }

        let n = groups.len();
        let strict: Vec<Vec<usize>> = reps
            .iter()
            .enumerate()
            .map(|(g, &r)| {
                let mut s: Vec<usize> = supers[r]
                    .iter()
                    .map(|&j| group_id[j])
                    .filter(|&h| h != g)
                    .collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        let strict_bits: Vec<Bits> = strict
            .iter()
            .map(|s| {
                let mut b = Bits::new(n);
                s.iter().for_each(|&h| b.insert(h));
                b
            })
            .collect();

        // a strictly lower candidate has strictly more supers, so it is
        // visited first and covers everything above it
        let mut direct_supers = vec![BTreeSet::new(); n];
        let mut direct_subs = vec![BTreeSet::new(); n];
        for g in 0..n {
            let mut candidates = strict[g].clone();
            candidates.sort_by_key(|&h| std::cmp::Reverse(strict[h].len()));
            let mut covered = Bits::new(n);
            for h in candidates {
                if covered.contains(h) {
                    continue;
                }
                direct_supers[g].insert(h);
                direct_subs[h].insert(g);
                covered.union_with(&strict_bits[h]);
            }
        }
        let group_of = nodes.into_iter().zip(group_id).collect();
        Hierarchy {
            groups,
            group_of,
            direct_supers,
            direct_subs,
        }
    }

    pub fn groups(&self) -> &[Vec<ClassExpression>] {
        &self.groups
    }

    pub fn contains(&self, class: &ClassExpression) -> bool {
        self.group_of.contains_key(class)
    }

    /// Classes equivalent to `class`, itself excluded.
    pub fn equivalents(&self, class: &ClassExpression) -> Vec<ClassExpression> {
        match self.group_of.get(class) {
            Some(&g) => self.groups[g]
                .iter()
                .filter(|m| *m != class)
                .cloned()
                .collect(),
            None => Vec::new(),
        }
    }

    pub fn direct_supers(&self, class: &ClassExpression) -> Vec<ClassExpression> {
        self.expand(class, &self.direct_supers)
    }

    pub fn direct_subs(&self, class: &ClassExpression) -> Vec<ClassExpression> {
        self.expand(class, &self.direct_subs)
    }

    fn expand(&self, class: &ClassExpression, edges: &[BTreeSet<usize>]) -> Vec<ClassExpression> {
        let Some(&g) = self.group_of.get(class) else {
            return Vec::new();
        };
        let mut out: Vec<ClassExpression> = edges[g]
            .iter()
            .flat_map(|&h| self.groups[h].iter().cloned())
            .collect();
        out.sort();
        out
    }

    /// Every direct edge between members of the connected groups.
    pub fn direct_edges(&self) -> BTreeSet<(ClassExpression, ClassExpression)> {
        let mut out = BTreeSet::new();
        for (g, supers) in self.direct_supers.iter().enumerate() {
            for &h in supers {
                for a in &self.groups[g] {
                    for b in &self.groups[h] {
                        out.insert((a.clone(), b.clone()));
                    }
                }
            }
        }
        out
    }
}
