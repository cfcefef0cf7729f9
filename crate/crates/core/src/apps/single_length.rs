//! Single-length weighted interval selection steered by one extracted bit.
//!
//! The line splits into grid slots of the common length; an interval covers
//! exactly one grid multiple, whose parity classifies it. Serving one parity
//! with per-grid max-weight revoking is offline-optimal for that parity, so
//! the only decision is which parity to serve. The algorithm provisionally
//! serves the parity of the first arrival; when the first opposite-parity
//! interval arrives, the combined extraction process (order comparison of
//! the first two arrivals as `(start, finish, weight)` vectors, falling back
//! to the arrival-parity counter when they are identical) has resolved, and
//! a switch discards the entire held solution.
//!
//! Bit-to-parity mapping: bit 1 serves even grid indices, bit 0 odd ones.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::apps::{slot_key, AppError};
use crate::instance::Instance;
use crate::interval::IntervalId;
use crate::order::ArrivalOrder;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SlotAppEvent {
    Accept {
        id: IntervalId,
    },
    Replace {
        victim: IntervalId,
        id: IntervalId,
    },
    Reject {
        id: IntervalId,
    },
    Switch {
        discarded: Vec<IntervalId>,
        to_parity: u8,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingleLengthOutcome {
    pub weight: f64,
    pub final_solution: Vec<IntervalId>,
    pub provisional_parity: u8,
    pub served_parity: u8,
    pub switched: bool,
    pub resolved_bit: Option<u8>,
    pub events: Vec<SlotAppEvent>,
}

/// Per-grid max-weight holder for one parity class.
#[derive(Debug, Default)]
struct SlotServer {
    held: BTreeMap<i64, IntervalId>,
}

impl SlotServer {
    fn offer(&mut self, inst: &Instance, ell: f64, id: IntervalId, events: &mut Vec<SlotAppEvent>) {
        let iv = inst.get(id);
        let key = slot_key(iv, ell);
        match self.held.get(&key.index) {
            None => {
                self.held.insert(key.index, id);
                events.push(SlotAppEvent::Accept { id });
            }
            Some(&holder) => {
                if iv.weight > inst.get(holder).weight {
                    self.held.insert(key.index, id);
                    events.push(SlotAppEvent::Replace { victim: holder, id });
                } else {
                    events.push(SlotAppEvent::Reject { id });
                }
            }
        }
    }

    fn drain(&mut self) -> Vec<IntervalId> {
        let ids = self.held.values().copied().collect();
        self.held.clear();
        ids
    }

    fn solution(&self) -> Vec<IntervalId> {
        let mut ids: Vec<IntervalId> = self.held.values().copied().collect();
        ids.sort();
        ids
    }
}

/// Extraction state over arrival vectors with the parity counter fallback.
#[derive(Debug)]
enum BitState {
    BeforeSecond { first: Vec<f64>, first_parity: u8 },
    CountingParity { first_parity: u8 },
    Resolved(u8),
}

impl BitState {
    fn observe(&mut self, index: usize, vector: &[f64], parity: u8) {
        match self {
            BitState::BeforeSecond {
                first,
                first_parity,
            } => {
                if vector != first.as_slice() {
                    *self = BitState::Resolved(u8::from(vector < first.as_slice()));
                } else {
                    *self = BitState::CountingParity {
                        first_parity: *first_parity,
                    };
                }
            }
            BitState::CountingParity { first_parity } => {
                if parity != *first_parity {
                    // The identical opening pair advances the fallback
                    // counter by one, matching the combined process.
                    *self = BitState::Resolved((index % 2) as u8);
                }
            }
            BitState::Resolved(_) => {}
        }
    }

    fn bit(&self) -> Option<u8> {
        match self {
            BitState::Resolved(b) => Some(*b),
            _ => None,
        }
    }
}

fn common_length(inst: &Instance) -> Result<Option<f64>, AppError> {
    let mut ell = None;
    for iv in inst.intervals() {
        match ell {
            None => ell = Some(iv.length()),
            Some(l) if l == iv.length() => {}
            Some(_) => return Err(AppError::MixedLengths),
        }
    }
    Ok(ell)
}

pub fn select_single_length(
    inst: &Instance,
    order: &ArrivalOrder,
) -> Result<SingleLengthOutcome, AppError> {
    if !order.is_valid_for(inst) {
        return Err(AppError::InvalidOrder);
    }
    let Some(ell) = common_length(inst)? else {
        return Ok(SingleLengthOutcome {
            weight: 0.0,
            final_solution: vec![],
            provisional_parity: 0,
            served_parity: 0,
            switched: false,
            resolved_bit: None,
            events: vec![],
        });
    };

    let mut events = Vec::new();
    let mut server = SlotServer::default();
    let first = inst.get(order.0[0]);
    let provisional = slot_key(first, ell).parity;
    let mut serving = provisional;
    let mut decided = false;
    let mut bit_state = BitState::BeforeSecond {
        first: vec![first.start, first.finish, first.weight],
        first_parity: provisional,
    };

    for (i, &id) in order.0.iter().enumerate() {
        let index = i + 1;
        let iv = inst.get(id);
        let parity = slot_key(iv, ell).parity;
        if index > 1 {
            bit_state.observe(index, &[iv.start, iv.finish, iv.weight], parity);
        }
        if parity == serving {
            server.offer(inst, ell, id, &mut events);
            continue;
        }
        if decided {
            events.push(SlotAppEvent::Reject { id });
            continue;
        }
        // First arrival of the opposite parity: the bit has resolved by now
        // (an identical first pair delegates to the parity counter, which
        // fires exactly here).
        decided = true;
        let bit = bit_state
            .bit()
            .expect("bit resolves by the first opposite-parity arrival");
        let resolved_parity = if bit == 1 { 0 } else { 1 };
        if resolved_parity == serving {
            events.push(SlotAppEvent::Reject { id });
        } else {
            let discarded = server.drain();
            events.push(SlotAppEvent::Switch {
                discarded,
                to_parity: resolved_parity,
            });
            serving = resolved_parity;
            server.offer(inst, ell, id, &mut events);
        }
    }

    let final_solution = server.solution();
    let weight = final_solution.iter().map(|&id| inst.get(id).weight).sum();
    Ok(SingleLengthOutcome {
        weight,
        final_solution,
        provisional_parity: provisional,
        served_parity: serving,
        switched: serving != provisional,
        resolved_bit: bit_state.bit(),
        events,
    })
}

/// The parity sub-algorithm run alone: serve exactly one parity class with
/// per-grid max-weight revoking, ignoring the other class entirely.
pub fn serve_parity(
    inst: &Instance,
    order: &ArrivalOrder,
    parity: u8,
) -> Result<SingleLengthOutcome, AppError> {
    if !order.is_valid_for(inst) {
        return Err(AppError::InvalidOrder);
    }
    let Some(ell) = common_length(inst)? else {
        return Ok(SingleLengthOutcome {
            weight: 0.0,
            final_solution: vec![],
            provisional_parity: parity,
            served_parity: parity,
            switched: false,
            resolved_bit: None,
            events: vec![],
        });
    };
    let mut events = Vec::new();
    let mut server = SlotServer::default();
    for &id in &order.0 {
        if slot_key(inst.get(id), ell).parity == parity {
            server.offer(inst, ell, id, &mut events);
        } else {
            events.push(SlotAppEvent::Reject { id });
        }
    }
    let final_solution = server.solution();
    let weight = final_solution.iter().map(|&id| inst.get(id).weight).sum();
    Ok(SingleLengthOutcome {
        weight,
        final_solution,
        provisional_parity: parity,
        served_parity: parity,
        switched: false,
        resolved_bit: None,
        events,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Instance;
    use crate::interval::Interval;
    use crate::oracle;
    use crate::order::{for_each_order, ArrivalOrder};

    fn weighted(intervals: Vec<(f64, f64, f64)>) -> Instance {
        Instance::new(
            intervals
                .into_iter()
                .enumerate()
                .map(|(i, (s, f, w))| Interval::weighted(i, s, f, w))
                .collect(),
        )
    }

    #[test]
    fn same_parity_instances_reach_parity_optimum() {
        // Grid indices 0, 2, 4 with length 2: all even.
        let inst = weighted(vec![
            (0.0, 2.0, 4.0),
            (3.5, 5.5, 2.0),
            (8.0, 10.0, 7.0),
            (-0.5, 1.5, 9.0),
        ]);
        let optimum = oracle::opt_weighted(&inst).weight;
        for_each_order(&inst, |order| {
            let out = select_single_length(&inst, order).unwrap();
            assert_eq!(out.weight, optimum);
            assert!(!out.switched);
        });
    }

    #[test]
    fn revoking_upgrades_within_a_grid_index() {
        let inst = weighted(vec![(0.0, 1.0, 3.0), (0.0, 1.0, 5.0)]);
        let order = ArrivalOrder(vec![IntervalId(0), IntervalId(1)]);
        let out = select_single_length(&inst, &order).unwrap();
        assert_eq!(out.weight, 5.0);
        assert_eq!(out.final_solution, vec![IntervalId(1)]);
        // Equal weight keeps the incumbent.
        let tie = weighted(vec![(0.0, 1.0, 5.0), (0.0, 1.0, 5.0)]);
        let out = select_single_length(&tie, &order).unwrap();
        assert_eq!(out.final_solution, vec![IntervalId(0)]);
    }

    #[test]
    fn mixed_lengths_are_rejected() {
        let inst = weighted(vec![(0.0, 1.0, 1.0), (2.0, 5.0, 1.0)]);
        let order = ArrivalOrder::identity(&inst);
        assert_eq!(
            select_single_length(&inst, &order).unwrap_err(),
            AppError::MixedLengths
        );
    }

    #[test]
    fn empty_instance_scores_zero() {
        let inst = Instance::new(vec![]);
        let out = select_single_length(&inst, &ArrivalOrder(vec![])).unwrap();
        assert_eq!(out.weight, 0.0);
    }

    #[test]
    fn parity_restriction_is_offline_optimal_on_every_order() {
        let inst = weighted(vec![
            (0.0, 2.0, 4.0), // grid 0 even
            (1.0, 3.0, 6.0), // grid 1 odd
            (4.0, 6.0, 2.0), // grid 2 even
            (5.0, 7.0, 3.0), // grid 3 odd
            (4.5, 6.5, 9.0), // grid 3 odd
        ]);
        for parity in [0u8, 1] {
            // Offline optimum of the parity's sub-instance.
            let sub = Instance::new(
                inst.intervals()
                    .iter()
                    .filter(|iv| slot_key(iv, 2.0).parity == parity)
                    .cloned()
                    .collect(),
            );
            let want = oracle::opt_weighted(&sub).weight;
            for_each_order(&inst, |order| {
                let out = serve_parity(&inst, order, parity).unwrap();
                assert_eq!(out.weight, want);
            });
        }
    }

    #[test]
    fn switched_runs_match_the_standalone_parity_algorithm() {
        let inst = weighted(vec![
            (0.0, 2.0, 4.0),
            (1.0, 3.0, 6.0),
            (4.0, 6.0, 2.0),
            (5.0, 7.0, 3.0),
        ]);
        for_each_order(&inst, |order| {
            let combined = select_single_length(&inst, order).unwrap();
            let standalone = serve_parity(&inst, order, combined.served_parity).unwrap();
            assert_eq!(combined.final_solution, standalone.final_solution);
            assert_eq!(combined.weight, standalone.weight);
        });
    }
}
