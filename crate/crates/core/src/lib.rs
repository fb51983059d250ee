//! Cut edges, cut pairs, cut vertices and small-cut structure found by
//! sampling random circulations, both sequentially and as CONGEST protocols
//! run in a round-synchronous simulator.

pub mod bits;
pub mod blocks;
pub mod cactus;
pub mod circulation;
pub mod congest;
pub mod dist;
pub mod dsu;
pub mod generators;
pub mod gf2;
pub mod graph;
pub mod lv;
pub mod oracle;
pub mod report;
pub mod rng;
pub mod seq;

/// Outcome of a certifier: accept with a witness, or reject with a reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<T> {
    Accept(T),
    Reject(String),
}

impl<T> Verdict<T> {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept(_))
    }

    pub fn accepted(self) -> Option<T> {
        match self {
            Verdict::Accept(t) => Some(t),
            Verdict::Reject(_) => None,
        }
    }
}
