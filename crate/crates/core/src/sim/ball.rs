use super::Outbox;
use std::collections::BTreeMap;

/// Flooding helper: after `r` rounds of `send` and `receive`, `known` holds
/// the record of every vertex within distance `r`.
#[derive(Debug, Clone)]
pub struct BallGather<R> {
    known: BTreeMap<usize, R>,
    fresh: Vec<(usize, R)>,
}

impl<R: Clone> BallGather<R> {
    pub fn new(id: usize, record: R) -> Self {
        let mut known = BTreeMap::new();
        known.insert(id, record.clone());
        BallGather { known, fresh: vec![(id, record)] }
    }

    /// Forwards records learned since the previous call to every neighbor.
    pub fn send(&mut self, out: &mut Outbox<Vec<(usize, R)>>) {
        if !self.fresh.is_empty() {
            let batch = std::mem::take(&mut self.fresh);
            out.broadcast(batch);
        }
    }

    pub fn receive(&mut self, inbox: &[(usize, Vec<(usize, R)>)]) {
        for (_, batch) in inbox {
            for (id, rec) in batch {
                if !self.known.contains_key(id) {
                    self.known.insert(*id, rec.clone());
                    self.fresh.push((*id, rec.clone()));
                }
            }
        }
    }

    pub fn known(&self) -> &BTreeMap<usize, R> {
        &self.known
    }

    pub fn into_known(self) -> BTreeMap<usize, R> {
        self.known
    }
}
