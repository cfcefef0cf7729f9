//! Two-length distinct-interval weighted selection steered by two extracted
//! bits.
//!
//! The order comparison of the first two arrivals (all items are distinct,
//! so it is unbiased) selects the length class: bit 1 picks the smaller
//! length, bit 0 the larger. Until the second length has been observed, the
//! first arrival's length is served provisionally; at the first arrival of
//! the other length both lengths are known, and if the selected class
//! differs from the provisional one the entire held solution is discarded.
//! Within the serving class, grid slots of the class length are served with
//! per-grid max-weight revoking, with the arrival-parity counter restarted
//! on the class sub-stream deciding the parity: its bit says whether to stay
//! with the class's first-seen parity (1) or switch to the other (0) at the
//! first opposite-parity class arrival.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::apps::{slot_key, AppError, SlotAppEvent};
use crate::instance::Instance;
use crate::interval::{Interval, IntervalId};
use crate::order::ArrivalOrder;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwoLengthOutcome {
    pub value: f64,
    pub final_solution: Vec<IntervalId>,
    /// Length class the run ended on, if any interval arrived.
    pub served_length: Option<f64>,
    /// Parity served within the final class.
    pub served_parity: Option<u8>,
    /// The class-selection bit, once the first two arrivals resolved it.
    pub class_bit: Option<u8>,
    pub events: Vec<SlotAppEvent>,
}

/// Parity machinery of one length class over its sub-stream.
#[derive(Debug)]
struct ClassState {
    length: f64,
    count: usize,
    first_parity: u8,
    serving_parity: u8,
    parity_decided: bool,
    held: BTreeMap<i64, IntervalId>,
}

impl ClassState {
    fn new(length: f64) -> Self {
        ClassState {
            length,
            count: 0,
            first_parity: 0,
            serving_parity: 0,
            parity_decided: false,
            held: BTreeMap::new(),
        }
    }

    fn offer(&mut self, inst: &Instance, id: IntervalId, events: &mut Vec<SlotAppEvent>) {
        let iv = inst.get(id);
        let key = slot_key(iv, self.length);
        self.count += 1;
        if self.count == 1 {
            self.first_parity = key.parity;
            self.serving_parity = key.parity;
        }
        if key.parity == self.serving_parity {
            self.serve(inst, id, key.index, events);
            return;
        }
        if self.parity_decided {
            events.push(SlotAppEvent::Reject { id });
            return;
        }
        // First opposite-parity arrival in this class: the counter fires at
        // the class sub-stream index, bit 1 staying with the first-seen
        // parity.
        self.parity_decided = true;
        let bit = 1 - (self.count % 2) as u8;
        if bit == 1 {
            events.push(SlotAppEvent::Reject { id });
        } else {
            let discarded: Vec<IntervalId> = self.held.values().copied().collect();
            self.held.clear();
            let to_parity = key.parity;
            events.push(SlotAppEvent::Switch {
                discarded,
                to_parity,
            });
            self.serving_parity = to_parity;
            self.serve(inst, id, key.index, events);
        }
    }

    fn serve(
        &mut self,
        inst: &Instance,
        id: IntervalId,
        grid: i64,
        events: &mut Vec<SlotAppEvent>,
    ) {
        match self.held.get(&grid) {
            None => {
                self.held.insert(grid, id);
                events.push(SlotAppEvent::Accept { id });
            }
            Some(&holder) => {
                if inst.get(id).weight > inst.get(holder).weight {
                    self.held.insert(grid, id);
                    events.push(SlotAppEvent::Replace { victim: holder, id });
                } else {
                    events.push(SlotAppEvent::Reject { id });
                }
            }
        }
    }

    fn solution(&self) -> Vec<IntervalId> {
        let mut ids: Vec<IntervalId> = self.held.values().copied().collect();
        ids.sort();
        ids
    }
}

fn vector(iv: &Interval) -> [f64; 3] {
    [iv.start, iv.finish, iv.weight]
}

pub fn select_two_length(
    inst: &Instance,
    order: &ArrivalOrder,
) -> Result<TwoLengthOutcome, AppError> {
    if !order.is_valid_for(inst) {
        return Err(AppError::InvalidOrder);
    }
    if inst.stats().k > 2 {
        return Err(AppError::NotTwoLengths);
    }
    if inst.is_empty() {
        return Ok(TwoLengthOutcome {
            value: 0.0,
            final_solution: vec![],
            served_length: None,
            served_parity: None,
            class_bit: None,
            events: vec![],
        });
    }

    let mut events = Vec::new();
    let mut class_bit: Option<u8> = None;
    let mut first_vec: Option<[f64; 3]> = None;
    let mut serving = ClassState::new(inst.get(order.0[0]).length());
    let mut class_decided = false;

    for (i, &id) in order.0.iter().enumerate() {
        let iv = inst.get(id);
        match i {
            0 => first_vec = Some(vector(iv)),
            1 => {
                let first = first_vec.expect("first arrival recorded");
                if vector(iv) == first {
                    return Err(AppError::DuplicateItems);
                }
                class_bit = Some(u8::from(first < vector(iv)));
            }
            _ => {}
        }

        if iv.length() == serving.length {
            serving.offer(inst, id, &mut events);
            continue;
        }
        if class_decided {
            events.push(SlotAppEvent::Reject { id });
            continue;
        }
        // First arrival of the second length: both lengths are now known and
        // the class bit has resolved (it resolves at arrival two, and a
        // second length cannot appear before that).
        class_decided = true;
        let bit = class_bit.expect("class bit resolves by the second arrival");
        let smaller = serving.length.min(iv.length());
        let larger = serving.length.max(iv.length());
        let chosen = if bit == 1 { smaller } else { larger };
        if chosen == serving.length {
            events.push(SlotAppEvent::Reject { id });
        } else {
            let discarded = serving.solution();
            events.push(SlotAppEvent::Switch {
                discarded,
                to_parity: slot_key(iv, iv.length()).parity,
            });
            let mut fresh = ClassState::new(iv.length());
            fresh.offer(inst, id, &mut events);
            serving = fresh;
        }
    }

    let final_solution = serving.solution();
    let value = final_solution.iter().map(|&id| inst.get(id).weight).sum();
    Ok(TwoLengthOutcome {
        value,
        final_solution,
        served_length: (serving.count > 0).then_some(serving.length),
        served_parity: (serving.count > 0).then_some(serving.serving_parity),
        class_bit,
        events,
    })
}

/// The cell sub-algorithm run alone: serve one `(length, parity)` cell with
/// per-grid max-weight revoking, ignoring everything else.
pub fn serve_cell(
    inst: &Instance,
    order: &ArrivalOrder,
    length: f64,
    parity: u8,
) -> Result<TwoLengthOutcome, AppError> {
    if !order.is_valid_for(inst) {
        return Err(AppError::InvalidOrder);
    }
    let mut events = Vec::new();
    let mut held: BTreeMap<i64, IntervalId> = BTreeMap::new();
    for &id in &order.0 {
        let iv = inst.get(id);
        if iv.length() != length || slot_key(iv, length).parity != parity {
            events.push(SlotAppEvent::Reject { id });
            continue;
        }
        let grid = slot_key(iv, length).index;
        match held.get(&grid) {
            None => {
                held.insert(grid, id);
                events.push(SlotAppEvent::Accept { id });
            }
            Some(&holder) => {
                if iv.weight > inst.get(holder).weight {
                    held.insert(grid, id);
                    events.push(SlotAppEvent::Replace { victim: holder, id });
                } else {
                    events.push(SlotAppEvent::Reject { id });
                }
            }
        }
    }
    let mut final_solution: Vec<IntervalId> = held.values().copied().collect();
    final_solution.sort();
    let value = final_solution.iter().map(|&id| inst.get(id).weight).sum();
    Ok(TwoLengthOutcome {
        value,
        final_solution,
        served_length: Some(length),
        served_parity: Some(parity),
        class_bit: None,
        events,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::for_each_order;

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
    fn empty_instance_scores_zero() {
        let inst = Instance::new(vec![]);
        let out = select_two_length(&inst, &ArrivalOrder(vec![])).unwrap();
        assert_eq!(out.value, 0.0);
    }

    #[test]
    fn three_or_more_lengths_are_rejected() {
        let inst = weighted(vec![(0.0, 1.0, 1.0), (2.0, 4.0, 1.0), (5.0, 8.0, 1.0)]);
        assert_eq!(
            select_two_length(&inst, &ArrivalOrder::identity(&inst)).unwrap_err(),
            AppError::NotTwoLengths
        );
    }

    #[test]
    fn duplicate_first_pair_is_detected() {
        let inst = weighted(vec![(0.0, 1.0, 1.0), (0.0, 1.0, 1.0), (2.0, 4.0, 1.0)]);
        let order = ArrivalOrder(vec![IntervalId(0), IntervalId(1), IntervalId(2)]);
        assert_eq!(
            select_two_length(&inst, &order).unwrap_err(),
            AppError::DuplicateItems
        );
    }

    #[test]
    fn single_length_degenerates_to_provisional_class() {
        // Only one length ever arrives: the class decision point never
        // comes, so the provisional class serves throughout.
        let inst = weighted(vec![(0.0, 2.0, 4.0), (4.0, 6.0, 2.0), (1.0, 3.0, 5.0)]);
        for_each_order(&inst, |order| {
            let out = select_two_length(&inst, order).unwrap();
            assert_eq!(out.served_length, Some(2.0));
            assert!(out.value > 0.0);
        });
    }

    #[test]
    fn final_solution_matches_the_standalone_cell_algorithm() {
        let inst = weighted(vec![
            (0.0, 2.0, 5.0),  // len 2, grid 0 even
            (1.0, 3.0, 2.0),  // len 2, grid 1 odd
            (4.0, 6.0, 3.0),  // len 2, grid 2 even
            (0.0, 5.0, 1.0),  // len 5, grid 0 even
            (5.0, 10.0, 6.0), // len 5, grid 1 odd
        ]);
        for_each_order(&inst, |order| {
            let out = select_two_length(&inst, order).unwrap();
            let (len, parity) = (out.served_length.unwrap(), out.served_parity.unwrap());
            let alone = serve_cell(&inst, order, len, parity).unwrap();
            assert_eq!(out.final_solution, alone.final_solution);
            assert_eq!(out.value, alone.value);
        });
    }

    #[test]
    fn feasible_final_solutions_always() {
        let inst = weighted(vec![
            (0.0, 2.0, 5.0),
            (1.0, 3.0, 2.0),
            (4.0, 6.0, 3.0),
            (3.0, 8.0, 4.0),
            (8.0, 13.0, 6.0),
        ]);
        for_each_order(&inst, |order| {
            let out = select_two_length(&inst, order).unwrap();
            let refs: Vec<&Interval> = out.final_solution.iter().map(|&id| inst.get(id)).collect();
            assert!(crate::interval::is_feasible_set(&refs));
        });
    }
}
