//! Synchronous-round flooding on a graph's largest component.
//!
//! A node that first receives the item at round `t` decides once, independently
//! for every incident edge (including the one it arrived on and any self-loop),
//! whether to forward; each forwarded copy is one message and arrives at round
//! `t + 1`. Decisions for node `v` come from a dedicated stream keyed by
//! `(instance key, v)`, so two rules run with the same rng see the same uniform
//! per incidence slot.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{FloodError, Result};
use crate::graph::{largest_component, ComponentLabeling, Graph};
use crate::rule::FloodRule;
use crate::seed::child_rng;

const NOT_REACHED: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloodOutcome {
    /// Component nodes that received the item, originator included.
    pub reached: usize,
    /// Forwarded copies, including sends back to the sender and over self-loops.
    pub messages: usize,
    /// Sum of first-receipt rounds over reached non-originator nodes.
    pub waiting_sum: u64,
    /// Last round in which any copy was delivered.
    pub rounds: u32,
}

/// Outcome plus the first-receipt round of every node (`u32::MAX` if never reached).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloodTrace {
    pub outcome: FloodOutcome,
    pub first_receipt: Vec<u32>,
}

/// Forwarding probabilities tabulated by min degree for one graph.
struct Forwarder {
    rule: FloodRule,
    by_min: Vec<f64>,
}

impl Forwarder {
    fn new(rule: FloodRule, graph: &Graph) -> Self {
        Forwarder {
            rule,
            by_min: rule.min_degree_table(graph.max_degree()),
        }
    }

    fn probability(&self, a: usize, b: usize) -> f64 {
        self.by_min[a.min(b)]
    }
}

pub fn run_flood<R: Rng + ?Sized>(
    graph: &Graph,
    component: &ComponentLabeling,
    originator: usize,
    rule: FloodRule,
    rng: &mut R,
) -> Result<FloodOutcome> {
    run_flood_traced(graph, component, originator, rule, rng).map(|t| t.outcome)
}

pub fn run_flood_traced<R: Rng + ?Sized>(
    graph: &Graph,
    component: &ComponentLabeling,
    originator: usize,
    rule: FloodRule,
    rng: &mut R,
) -> Result<FloodTrace> {
    rule.validate()?;
    if originator >= graph.node_count() || !component.in_largest(originator) {
        return Err(FloodError::OriginatorOutsideComponent(originator));
    }
    let forwarder = Forwarder::new(rule, graph);
    Ok(flood(graph, originator, &forwarder, rng.gen()))
}

fn flood(graph: &Graph, originator: usize, forwarder: &Forwarder, key: [u8; 32]) -> FloodTrace {
    let mut first_receipt = vec![NOT_REACHED; graph.node_count()];
    first_receipt[originator] = 0;
    let mut frontier = vec![originator];
    let mut next = Vec::new();
    let mut outcome = FloodOutcome {
        reached: 1,
        messages: 0,
        waiting_sum: 0,
        rounds: 0,
    };
    let deterministic = matches!(forwarder.rule, FloodRule::Uninformed);
    let mut round = 0u32;
    while !frontier.is_empty() {
        let arrival = round + 1;
        for &u in &frontier {
            let deg_u = graph.degree(u);
            let mut decisions = (!deterministic).then(|| {
                let mut stream = ChaCha8Rng::from_seed(key);
                stream.set_stream(u as u64);
                stream
            });
            for &w in graph.neighbors(u) {
                let send = match decisions.as_mut() {
                    None => true,
                    Some(stream) => {
                        let draw: f64 = stream.gen();
                        draw < forwarder.probability(deg_u, graph.degree(w))
                    }
                };
                if !send {
                    continue;
                }
                outcome.messages += 1;
                outcome.rounds = arrival;
                if first_receipt[w] == NOT_REACHED {
                    first_receipt[w] = arrival;
                    outcome.reached += 1;
                    outcome.waiting_sum += u64::from(arrival);
                    next.push(w);
                }
            }
        }
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
        round = arrival;
    }
    FloodTrace { outcome, first_receipt }
}

/// Mean and standard error of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
    pub count: usize,
}

impl Estimate {
    /// `None` for an empty sample. Summation runs in slice order.
    pub fn from_samples(samples: &[f64]) -> Option<Self> {
        let count = samples.len();
        if count == 0 {
            return None;
        }
        let mean = samples.iter().sum::<f64>() / count as f64;
        let std_err = if count > 1 {
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64;
            (var / count as f64).sqrt()
        } else {
            0.0
        };
        Some(Estimate { mean, std_err, count })
    }
}

/// Normalized ratios from a single flooding instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceSample {
    pub originator: usize,
    pub outcome: FloodOutcome,
    /// reached / component size
    pub pn: f64,
    /// messages / (sum of component degrees)
    pub pm: f64,
    /// mean waiting time / mean BFS distance; `None` when only the originator was reached
    pub pt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchStats {
    pub pn: Estimate,
    pub pm: Estimate,
    pub pt: Option<Estimate>,
    pub instances: usize,
    pub component_size: usize,
}

impl BatchStats {
    /// Pools samples, possibly drawn from several graphs.
    pub fn from_samples(samples: &[InstanceSample], component_size: usize) -> Result<Self> {
        let pn: Vec<f64> = samples.iter().map(|s| s.pn).collect();
        let pm: Vec<f64> = samples.iter().map(|s| s.pm).collect();
        let pt: Vec<f64> = samples.iter().filter_map(|s| s.pt).collect();
        let empty = || FloodError::InvalidBatch("no instances".into());
        Ok(BatchStats {
            pn: Estimate::from_samples(&pn).ok_or_else(empty)?,
            pm: Estimate::from_samples(&pm).ok_or_else(empty)?,
            pt: Estimate::from_samples(&pt),
            instances: samples.len(),
            component_size,
        })
    }
}

/// Runs `instances` floods on the largest component, instance `i` driven by
/// `child_rng(base_seed, [i])`. The originator is the first draw of that stream,
/// so the same base seed gives the same originators under every rule.
pub fn sample_instances(
    graph: &Graph,
    component: &ComponentLabeling,
    rule: FloodRule,
    instances: usize,
    base_seed: u64,
) -> Result<Vec<InstanceSample>> {
    rule.validate()?;
    if instances == 0 {
        return Err(FloodError::InvalidBatch("instances must be at least 1".into()));
    }
    let members = component.largest_nodes();
    if members.is_empty() {
        return Err(FloodError::EmptyComponent);
    }
    let size = members.len();
    let degree_total: usize = members.iter().map(|&v| graph.degree(v)).sum();
    let forwarder = Forwarder::new(rule, graph);
    let samples = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = child_rng(base_seed, &[i as u64]);
            let originator = members[rng.gen_range(0..size)];
            let trace = flood(graph, originator, &forwarder, rng.gen());
            let outcome = trace.outcome;
            let pn = outcome.reached as f64 / size as f64;
            let pm = if degree_total == 0 {
                0.0
            } else {
                outcome.messages as f64 / degree_total as f64
            };
            let pt = (outcome.reached > 1).then(|| {
                let distances = graph.bfs_distances(originator);
                let distance_sum: u64 = members.iter().map(|&v| u64::from(distances[v])).sum();
                let mean_wait = outcome.waiting_sum as f64 / (outcome.reached - 1) as f64;
                let mean_distance = distance_sum as f64 / (size - 1) as f64;
                mean_wait / mean_distance
            });
            InstanceSample {
                originator,
                outcome,
                pn,
                pm,
                pt,
            }
        })
        .collect();
    Ok(samples)
}

/// Floods `instances` times from uniformly chosen originators in the largest component.
pub fn run_batch<R: Rng + ?Sized>(graph: &Graph, rule: FloodRule, instances: usize, rng: &mut R) -> Result<BatchStats> {
    let component = largest_component(graph);
    let samples = sample_instances(graph, &component, rule, instances, rng.gen())?;
    BatchStats::from_samples(&samples, component.largest_size())
}
