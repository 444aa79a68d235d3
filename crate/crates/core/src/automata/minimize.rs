use std::collections::VecDeque;

use super::nfa::{Dfa, State};

/// Hopcroft partition refinement on the reachable part of a complete DFA.
pub fn minimize(d: &Dfa) -> Dfa {
    let k = d.alphabet().len();
    // Reachable states, renumbered in BFS order.
    let mut map = vec![State::MAX; d.num_states()];
    let mut order = vec![d.start()];
    map[d.start() as usize] = 0;
    let mut i = 0;
    while i < order.len() {
        let q = order[i];
        for a in 0..k as u32 {
            let t = d.next(q, a);
            if map[t as usize] == State::MAX {
                map[t as usize] = order.len() as State;
                order.push(t);
            }
        }
        i += 1;
    }
    let n = order.len();
    let next = |q: usize, a: usize| map[d.next(order[q], a as u32) as usize] as usize;

    // Inverse transitions in CSR form, indexed by target * k + symbol.
    let mut counts = vec![0u32; n * k + 1];
    for q in 0..n {
        for a in 0..k {
            counts[next(q, a) * k + a + 1] += 1;
        }
    }
    for i in 1..counts.len() {
        counts[i] += counts[i - 1];
    }
    let mut fill = counts.clone();
    let mut preds = vec![0u32; n * k];
    for q in 0..n {
        for a in 0..k {
            let slot = next(q, a) * k + a;
            preds[fill[slot] as usize] = q as u32;
            fill[slot] += 1;
        }
    }

    let accepting: Vec<bool> = order.iter().map(|&q| d.is_accepting(q)).collect();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of = vec![0usize; n];
    let (acc, rej): (Vec<usize>, Vec<usize>) = (0..n).partition(|&q| accepting[q]);
    for part in [acc, rej] {
        if !part.is_empty() {
            for &q in &part {
                block_of[q] = blocks.len();
            }
            blocks.push(part);
        }
    }

    let mut queued: Vec<Vec<bool>> = Vec::new();
    let mut work: VecDeque<(usize, usize)> = VecDeque::new();
    for _ in &blocks {
        queued.push(vec![false; k]);
    }
    if blocks.len() == 2 {
        let small = if blocks[0].len() <= blocks[1].len() { 0 } else { 1 };
        for a in 0..k {
            queued[small][a] = true;
            work.push_back((small, a));
        }
    }

    let mut marked = vec![false; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut hits: Vec<usize> = vec![0; n.max(1)];
    while let Some((b, a)) = work.pop_front() {
        queued[b][a] = false;
        let splitter = blocks[b].clone();
        for &q in &splitter {
            let slot = q * k + a;
            for &p in &preds[counts[slot] as usize..counts[slot + 1] as usize] {
                let p = p as usize;
                if !marked[p] {
                    marked[p] = true;
                    let blk = block_of[p];
                    if hits[blk] == 0 {
                        touched.push(blk);
                    }
                    hits[blk] += 1;
                }
            }
        }
        for &blk in &touched {
            if hits[blk] < blocks[blk].len() {
                let (inside, outside): (Vec<usize>, Vec<usize>) = blocks[blk].iter().partition(|&&q| marked[q]);
                let nb = blocks.len();
                let (keep, moved) = if inside.len() <= outside.len() {
                    (outside, inside)
                } else {
                    (inside, outside)
                };
                for &q in &moved {
                    block_of[q] = nb;
                }
                blocks[blk] = keep;
                blocks.push(moved);
                queued.push(vec![false; k]);
                if hits.len() < blocks.len() {
                    hits.push(0);
                }
                for c in 0..k {
                    if queued[blk][c] {
                        queued[nb][c] = true;
                        work.push_back((nb, c));
                    } else {
                        let target = if blocks[nb].len() <= blocks[blk].len() { nb } else { blk };
                        queued[target][c] = true;
                        work.push_back((target, c));
                    }
                }
            }
        }
        for &blk in &touched {
            hits[blk] = 0;
        }
        touched.clear();
        for &q in &splitter {
            let slot = q * k + a;
            for &p in &preds[counts[slot] as usize..counts[slot + 1] as usize] {
                marked[p as usize] = false;
            }
        }
    }

    // Number blocks in BFS order from the start block for a canonical result.
    let mut id = vec![State::MAX; blocks.len()];
    let mut reps: Vec<usize> = Vec::new();
    let start_block = block_of[0];
    id[start_block] = 0;
    reps.push(blocks[start_block][0]);
    let mut i = 0;
    while i < reps.len() {
        let q = reps[i];
        for a in 0..k {
            let b = block_of[next(q, a)];
            if id[b] == State::MAX {
                id[b] = reps.len() as State;
                reps.push(blocks[b][0]);
            }
        }
        i += 1;
    }
    let mut delta = Vec::with_capacity(reps.len() * k);
    for &q in &reps {
        for a in 0..k {
            delta.push(id[block_of[next(q, a)]]);
        }
    }
    let acc = reps.iter().map(|&q| accepting[q]).collect();
    Dfa::from_table(d.alphabet(), 0, delta, acc)
}
