//! A synchronous CONGEST-model simulator.
//!
//! Each round every node reads the messages sent to it in the previous round,
//! runs its step function and emits at most one message per incident edge.
//! Payloads are explicit bit strings checked against a budget `B`. The
//! simulator is sequential and deterministic for a fixed seed.
//!
//! Node programs only ever see their own state, a [`NodeView`] of their ID and
//! incident edges, and their inbox. Per-node inputs are handed over when a
//! [`Protocol`] spawns the node, which models preloading the node's memory.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::circulation::ceil_log2;
use crate::graph::{EdgeId, Graph, Vertex};
use crate::rng::derive_seed;

/// A message payload: an explicit string of bits.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Payload {
    bits: usize,
    words: Vec<u64>,
}

impl Payload {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len_bits(&self) -> usize {
        self.bits
    }

    fn push_bit(&mut self, bit: bool) {
        if self.bits % 64 == 0 {
            self.words.push(0);
        }
        if bit {
            self.words[self.bits / 64] |= 1 << (self.bits % 64);
        }
        self.bits += 1;
    }

    pub fn push_bool(&mut self, bit: bool) -> &mut Self {
        self.push_bit(bit);
        self
    }

    /// Append the low `width` bits of `value`, least significant first.
    pub fn push_uint(&mut self, value: u64, width: usize) -> &mut Self {
        debug_assert!(width >= 64 || value >> width == 0, "{value} does not fit {width} bits");
        for i in 0..width {
            self.push_bit(i < 64 && value >> i & 1 == 1);
        }
        self
    }

    /// Append `width` bits taken from packed words.
    pub fn push_words(&mut self, words: &[u64], width: usize) -> &mut Self {
        for i in 0..width {
            self.push_bit(words[i / 64] >> (i % 64) & 1 == 1);
        }
        self
    }

    pub fn reader(&self) -> PayloadReader<'_> {
        PayloadReader { p: self, pos: 0 }
    }

    /// Hex rendering: bits in order, four per digit, first bit most significant.
    pub fn to_hex(&self) -> String {
        let mut out = String::with_capacity(self.bits.div_ceil(4));
        for chunk in 0..self.bits.div_ceil(4) {
            let mut nib = 0u8;
            for k in 0..4 {
                let i = chunk * 4 + k;
                let bit = i < self.bits && self.words[i / 64] >> (i % 64) & 1 == 1;
                nib = nib << 1 | u8::from(bit);
            }
            let _ = write!(out, "{nib:x}");
        }
        out
    }
}

impl fmt::Debug for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Payload({}b:{})", self.bits, self.to_hex())
    }
}

/// Sequential decoder over a payload.
pub struct PayloadReader<'a> {
    p: &'a Payload,
    pos: usize,
}

impl PayloadReader<'_> {
    fn bit(&mut self) -> bool {
        assert!(self.pos < self.p.bits, "payload underrun");
        let b = self.p.words[self.pos / 64] >> (self.pos % 64) & 1 == 1;
        self.pos += 1;
        b
    }

    pub fn read_bool(&mut self) -> bool {
        self.bit()
    }

    pub fn read_uint(&mut self, width: usize) -> u64 {
        (0..width).fold(0u64, |acc, i| acc | u64::from(self.bit()) << i)
    }

    pub fn read_words(&mut self, width: usize) -> Vec<u64> {
        let mut out = vec![0u64; width.div_ceil(64)];
        for i in 0..width {
            if self.bit() {
                out[i / 64] |= 1 << (i % 64);
            }
        }
        out
    }

    pub fn remaining(&self) -> usize {
        self.p.bits - self.pos
    }
}

/// What a node knows about itself when it starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeView {
    pub id: Vertex,
    /// `(neighbour, edge)` in edge-index order.
    pub incident: Vec<(Vertex, EdgeId)>,
    pub is_leader: bool,
    /// Bits needed to write any vertex ID (`⌈log₂ n⌉`, at least 1).
    pub id_bits: usize,
    /// Message budget `B`.
    pub budget_bits: usize,
    /// Seed of this node's private random stream.
    pub node_seed: u64,
}

impl NodeView {
    pub fn degree(&self) -> usize {
        self.incident.len()
    }
}

/// A message as delivered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Incoming {
    pub from: Vertex,
    /// Pipeline instance tag; 0 outside pipelines.
    pub lane: u32,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Outgoing {
    to: Vertex,
    lane: u32,
    payload: Payload,
}

/// The handle a node step function acts through.
pub struct Ctx<'a> {
    round: u64,
    lane: u32,
    view: &'a NodeView,
    out: &'a mut Vec<Outgoing>,
    done: &'a mut bool,
}

impl Ctx<'_> {
    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn view(&self) -> &NodeView {
        self.view
    }

    pub fn id(&self) -> Vertex {
        self.view.id
    }

    pub fn send(&mut self, to: Vertex, payload: Payload) {
        self.out.push(Outgoing {
            to,
            lane: self.lane,
            payload,
        });
    }

    /// Leader only: end the run after this round.
    pub fn signal_done(&mut self) {
        if self.view.is_leader {
            *self.done = true;
        }
    }
}

/// Per-node state machine.
pub trait NodeProgram: Clone + fmt::Debug + PartialEq {
    fn step(&mut self, ctx: &mut Ctx<'_>, inbox: &[Incoming]);
}

/// A distributed protocol: a factory for node programs.
pub trait Protocol {
    type Node: NodeProgram;

    fn spawn(&self, view: &NodeView) -> Self::Node;

    /// Most messages this protocol sends over one edge in one direction
    /// during a whole run; bounds the per-round concatenation when pipelined.
    fn max_messages_per_edge(&self) -> usize {
        1
    }

    /// Non-leaders must stay quiescent until their first message arrives.
    fn single_initiator(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimFault {
    #[error("round {round}: {src}->{dst} payload of {bits} bits exceeds budget {budget}")]
    OverBudget {
        round: u64,
        src: Vertex,
        dst: Vertex,
        bits: usize,
        budget: usize,
    },
    #[error("round {round}: {src} sent to non-neighbour {dst}")]
    NotAdjacent { round: u64, src: Vertex, dst: Vertex },
    #[error("round {round}: {src}->{dst} carries {parts} messages, limit {limit}")]
    TooManyMessages {
        round: u64,
        src: Vertex,
        dst: Vertex,
        parts: usize,
        limit: usize,
    },
    #[error("round {round}: vertex {node} acted before receiving a message")]
    NotQuiescent { round: u64, node: Vertex },
    #[error("no termination within {0} rounds")]
    Timeout(u64),
    #[error("leader {0} out of range")]
    NoSuchLeader(Vertex),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimConfig {
    pub leader: Vertex,
    pub budget_bits: usize,
    pub max_rounds: u64,
    pub seed: u64,
    pub record_trace: bool,
    pub probe: Option<Vertex>,
}

/// `⌈log₂ n⌉`, at least 1.
pub fn id_bits(n: usize) -> usize {
    ceil_log2(n as u128).max(1)
}

/// Default budget `8·⌈log₂ n⌉`.
pub fn default_budget(n: usize) -> usize {
    8 * id_bits(n)
}

impl SimConfig {
    pub fn for_graph(g: &Graph, seed: u64) -> Self {
        SimConfig {
            leader: 0,
            budget_bits: default_budget(g.n()),
            max_rounds: 100 * (g.n() as u64 + 10),
            seed,
            record_trace: false,
            probe: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub round: u64,
    pub src: Vertex,
    pub dst: Vertex,
    pub lane: u32,
    pub payload: Payload,
}

impl TraceEntry {
    pub fn line(&self) -> String {
        format!("{} {} {} {}", self.round, self.src, self.dst, self.payload.to_hex())
    }
}

/// Rounds, messages and largest payload of one or more runs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Metrics {
    pub rounds: u64,
    pub messages: u64,
    pub max_payload_bits: usize,
}

impl Metrics {
    /// Account for a run executed after the ones already counted.
    pub fn then(&mut self, other: Metrics) {
        self.rounds += other.rounds;
        self.messages += other.messages;
        self.max_payload_bits = self.max_payload_bits.max(other.max_payload_bits);
    }
}

/// Outcome of one simulated run.
#[derive(Debug, Clone)]
pub struct CongestRun<N> {
    pub metrics: Metrics,
    /// Round in which the leader signalled done.
    pub done_round: u64,
    pub terminated: bool,
    /// Final per-node programs (their stores).
    pub nodes: Vec<N>,
    pub trace: Vec<TraceEntry>,
    /// Messages sent in each round.
    pub per_round_messages: Vec<u64>,
    /// Debug snapshot of the probe vertex after each round.
    pub probe_snapshots: Vec<String>,
}

/// Build the views handed to each node.
pub fn node_views(g: &Graph, cfg: &SimConfig) -> Vec<NodeView> {
    (0..g.n())
        .map(|v| NodeView {
            id: v,
            incident: g.incident(v).iter().map(|i| (i.neighbor, i.edge)).collect(),
            is_leader: v == cfg.leader,
            id_bits: id_bits(g.n()),
            budget_bits: cfg.budget_bits,
            node_seed: derive_seed(cfg.seed, v as u64),
        })
        .collect()
}

/// Execute `protocol` on `g` until the leader signals done.
pub fn run<P: Protocol>(
    g: &Graph,
    protocol: &P,
    cfg: &SimConfig,
) -> Result<CongestRun<P::Node>, SimFault> {
    let n = g.n();
    if cfg.leader >= n {
        return Err(SimFault::NoSuchLeader(cfg.leader));
    }
    let views = node_views(g, cfg);
    let mut nodes: Vec<P::Node> = views.iter().map(|v| protocol.spawn(v)).collect();
    let single = protocol.single_initiator();
    let limit = protocol.max_messages_per_edge();
    let mut woken: Vec<bool> = (0..n).map(|v| !single || v == cfg.leader).collect();
    let mut inbox: Vec<Vec<Incoming>> = vec![Vec::new(); n];
    let mut metrics = Metrics::default();
    let mut trace = Vec::new();
    let mut per_round = Vec::new();
    let mut snapshots = Vec::new();
    let mut out = Vec::new();
    for round in 0..=cfg.max_rounds {
        let mut next: Vec<Vec<Incoming>> = vec![Vec::new(); n];
        let mut done = false;
        let mut sent = 0u64;
        for v in 0..n {
            let msgs = std::mem::take(&mut inbox[v]);
            let asleep = !woken[v] && msgs.is_empty();
            woken[v] |= !msgs.is_empty();
            let before = asleep.then(|| nodes[v].clone());
            let mut leader_done = false;
            out.clear();
            {
                let mut ctx = Ctx {
                    round,
                    lane: 0,
                    view: &views[v],
                    out: &mut out,
                    done: &mut leader_done,
                };
                nodes[v].step(&mut ctx, &msgs);
            }
            if let Some(before) = before {
                if !out.is_empty() || before != nodes[v] || leader_done {
                    return Err(SimFault::NotQuiescent { round, node: v });
                }
            }
            done |= leader_done;
            check_outbox(&views[v], &out, round, cfg.budget_bits, limit)?;
            for o in out.drain(..) {
                sent += 1;
                metrics.max_payload_bits = metrics.max_payload_bits.max(o.payload.len_bits());
                if cfg.record_trace {
                    trace.push(TraceEntry {
                        round,
                        src: v,
                        dst: o.to,
                        lane: o.lane,
                        payload: o.payload.clone(),
                    });
                }
                next[o.to].push(Incoming {
                    from: v,
                    lane: o.lane,
                    payload: o.payload,
                });
            }
        }
        metrics.messages += sent;
        per_round.push(sent);
        if let Some(p) = cfg.probe {
            snapshots.push(format!("{:?}", nodes[p]));
        }
        if done {
            metrics.rounds = round;
            return Ok(CongestRun {
                metrics,
                done_round: round,
                terminated: true,
                nodes,
                trace,
                per_round_messages: per_round,
                probe_snapshots: snapshots,
            });
        }
        inbox = next;
    }
    Err(SimFault::Timeout(cfg.max_rounds))
}

fn check_outbox(
    view: &NodeView,
    out: &[Outgoing],
    round: u64,
    budget: usize,
    limit: usize,
) -> Result<(), SimFault> {
    let src = view.id;
    let mut per_dst: Vec<(Vertex, u32)> = Vec::with_capacity(out.len());
    for o in out {
        if !view.incident.iter().any(|&(w, _)| w == o.to) {
            return Err(SimFault::NotAdjacent { round, src, dst: o.to });
        }
        if o.payload.len_bits() > budget {
            return Err(SimFault::OverBudget {
                round,
                src,
                dst: o.to,
                bits: o.payload.len_bits(),
                budget,
            });
        }
        per_dst.push((o.to, o.lane));
    }
    per_dst.sort_unstable();
    let same_lane = per_dst.windows(2).find(|w| w[0] == w[1]);
    if let Some(w) = same_lane {
        return Err(SimFault::TooManyMessages {
            round,
            src,
            dst: w[0].0,
            parts: 2,
            limit: 1,
        });
    }
    let mut i = 0;
    while i < per_dst.len() {
        let j = i + per_dst[i..].iter().take_while(|x| x.0 == per_dst[i].0).count();
        if j - i > limit {
            return Err(SimFault::TooManyMessages {
                round,
                src,
                dst: per_dst[i].0,
                parts: j - i,
                limit,
            });
        }
        i = j;
    }
    Ok(())
}

/// `s` instances of a protocol, instance `i` delayed by `i` rounds. Messages of
/// different instances on one edge in one round are concatenated, tagged by
/// instance.
#[derive(Debug, Clone)]
pub struct Pipeline<P> {
    instances: Vec<P>,
}

pub fn pipeline<P: Protocol>(instances: Vec<P>) -> Pipeline<P> {
    assert!(!instances.is_empty(), "pipeline needs at least one instance");
    Pipeline { instances }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineNode<N> {
    pub instances: Vec<N>,
    finished: Vec<bool>,
}

impl<P: Protocol> Protocol for Pipeline<P> {
    type Node = PipelineNode<P::Node>;

    fn spawn(&self, view: &NodeView) -> Self::Node {
        PipelineNode {
            instances: self.instances.iter().map(|p| p.spawn(view)).collect(),
            finished: vec![false; self.instances.len()],
        }
    }

    fn max_messages_per_edge(&self) -> usize {
        self.instances[0].max_messages_per_edge()
    }

    fn single_initiator(&self) -> bool {
        self.instances[0].single_initiator()
    }
}

impl<N: NodeProgram> NodeProgram for PipelineNode<N> {
    fn step(&mut self, ctx: &mut Ctx<'_>, inbox: &[Incoming]) {
        let round = ctx.round;
        for (i, node) in self.instances.iter_mut().enumerate() {
            let lane = i as u32;
            if round < u64::from(lane) {
                break;
            }
            let mine: Vec<Incoming> = inbox
                .iter()
                .filter(|m| m.lane == lane)
                .map(|m| Incoming {
                    lane: 0,
                    ..m.clone()
                })
                .collect();
            let mut done = false;
            let mut sub = Ctx {
                round: round - u64::from(lane),
                lane,
                view: ctx.view,
                out: ctx.out,
                done: &mut done,
            };
            node.step(&mut sub, &mine);
            self.finished[i] |= done;
        }
        if self.finished.iter().all(|&f| f) {
            ctx.signal_done();
        }
    }
}
