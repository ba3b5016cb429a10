use std::collections::{HashMap, HashSet, VecDeque};

use super::decompose::is_cut_prefix;
use super::{FlcError, PieceSet, Result};
use crate::exact::{sort_by_length, ExactLength};
use crate::measure::{restrict, MeasureWindow, PieceContent};

const MAX_STATES: usize = 200_000;

#[derive(Debug, Clone, PartialEq)]
pub struct UdpWitness {
    pub y: ExactLength,
    pub z: ExactLength,
    pub piece_at_y: String,
    pub piece_at_z: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UdpVerdict {
    pub holds: bool,
    /// Grid positions lying on at least one complete decomposition.
    pub positions: usize,
    /// Of those, how many had the full `[x - R, x + R)` inside the window.
    pub tested: usize,
    pub witness: Option<UdpWitness>,
}

/// Unique, locally recognizable decomposition test.
///
/// Explores every decomposition of the tail from `x0` at once (as a DAG of
/// grid positions). Fails when two pieces start at grid positions, possibly
/// the same one, whose surroundings `[x - R, x + R)` carry equal measures
/// but the pieces differ.
pub fn check_udp(w: &MeasureWindow, set: &PieceSet, x0: &ExactLength, r: &ExactLength) -> Result<UdpVerdict> {
    if !r.is_positive()? {
        return Err(FlcError::InvalidParameter(format!("R = {r} must be positive")));
    }
    if x0.try_lt(w.origin())? || !x0.try_lt(&w.end())? {
        return Err(FlcError::InvalidParameter(format!("x0 = {x0} outside the window")));
    }
    let end = w.end();
    let lp = set.min_len()?;

    let mut edges: HashMap<ExactLength, Vec<(usize, ExactLength)>> = HashMap::new();
    let mut terminal: HashSet<ExactLength> = HashSet::new();
    let mut queue = VecDeque::from([x0.clone()]);
    let mut enqueued: HashSet<ExactLength> = HashSet::from([x0.clone()]);
    while let Some(pos) = queue.pop_front() {
        if enqueued.len() > MAX_STATES {
            return Err(FlcError::SearchLimit(MAX_STATES));
        }
        if (&end - &pos).try_lt(&lp)? {
            terminal.insert(pos);
            continue;
        }
        let mut out = Vec::new();
        for (j, p) in set.pieces().iter().enumerate() {
            let to = &pos + p.len();
            if end.try_lt(&to)? {
                continue;
            }
            if restrict(w, &pos, p.len())?.content() == p.content() {
                if enqueued.insert(to.clone()) {
                    queue.push_back(to.clone());
                }
                out.push((j, to));
            }
        }
        if out.is_empty() && is_cut_prefix(w, set, &pos)? {
            terminal.insert(pos.clone());
        }
        edges.insert(pos, out);
    }

    // co-reachability of a terminal position, right to left
    let mut order: Vec<ExactLength> = enqueued.into_iter().collect();
    sort_by_length(&mut order, |x| x)?;
    let mut good: HashSet<ExactLength> = HashSet::new();
    for pos in order.iter().rev() {
        let ok = terminal.contains(pos)
            || edges.get(pos).is_some_and(|es| es.iter().any(|(_, to)| good.contains(to)));
        if ok {
            good.insert(pos.clone());
        }
    }
    if !good.contains(x0) {
        return Err(FlcError::NoDecomposition { from: x0.clone() });
    }

    let two_r = r + r;
    let mut seen: HashMap<PieceContent, (ExactLength, usize)> = HashMap::new();
    let mut positions = 0;
    let mut tested = 0;
    for pos in order.iter().filter(|p| good.contains(*p)) {
        positions += 1;
        let lo = pos - r;
        let hi = pos + r;
        if lo.try_lt(w.origin())? || end.try_lt(&hi)? {
            continue;
        }
        let live: Vec<usize> = edges
            .get(pos)
            .map(|es| es.iter().filter(|(_, to)| good.contains(to)).map(|(j, _)| *j).collect())
            .unwrap_or_default();
        if live.is_empty() {
            continue;
        }
        tested += 1;
        let key = restrict(w, &lo, &two_r)?.content().clone();
        for &j in &live {
            match seen.get(&key) {
                None => {
                    seen.insert(key.clone(), (pos.clone(), j));
                }
                Some((y, i)) if set.get(*i) != set.get(j) => {
                    return Ok(UdpVerdict {
                        holds: false,
                        positions,
                        tested,
                        witness: Some(UdpWitness {
                            y: y.clone(),
                            z: pos.clone(),
                            piece_at_y: set.label(*i).to_string(),
                            piece_at_z: set.label(j).to_string(),
                        }),
                    });
                }
                Some(_) => {}
            }
        }
    }
    Ok(UdpVerdict { holds: true, positions, tested, witness: None })
}
