use std::collections::{HashMap, VecDeque};

/// Hopcroft partition refinement on a complete DFA. Returns the class index
/// of every state; classes are numbered by their least member.
pub(super) fn hopcroft(delta: &[Vec<usize>], accept: &[bool]) -> Vec<usize> {
    let n = delta.len();
    let m = delta.first().map_or(0, |r| r.len());
    let mut inv: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; m];
    for (s, row) in delta.iter().enumerate() {
        for (a, &t) in row.iter().enumerate() {
            inv[a][t].push(s);
        }
    }

    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of = vec![0usize; n];
    for want in [true, false] {
        let members: Vec<usize> = (0..n).filter(|&s| accept[s] == want).collect();
        if !members.is_empty() {
            for &s in &members {
                block_of[s] = blocks.len();
            }
            blocks.push(members);
        }
    }

    let mut work: VecDeque<usize> = (0..blocks.len()).collect();
    let mut in_work = vec![true; blocks.len()];
    while let Some(b) = work.pop_front() {
        in_work[b] = false;
        let splitter = blocks[b].clone();
        for inv_a in &inv {
            let mut hit: HashMap<usize, Vec<usize>> = HashMap::new();
            for &t in &splitter {
                for &s in &inv_a[t] {
                    hit.entry(block_of[s]).or_default().push(s);
                }
            }
            let mut touched: Vec<usize> = hit.keys().copied().collect();
            touched.sort_unstable();
            for blk in touched {
                let members = hit.remove(&blk).unwrap_or_default();
                if members.len() == blocks[blk].len() {
                    continue;
                }
                let new_id = blocks.len();
                let mut moved = vec![false; n];
                for &s in &members {
                    moved[s] = true;
                    block_of[s] = new_id;
                }
                blocks[blk].retain(|&s| !moved[s]);
                blocks.push(members);
                in_work.push(false);
                if in_work[blk] {
                    work.push_back(new_id);
                    in_work[new_id] = true;
                } else {
                    let smaller = if blocks[blk].len() <= blocks[new_id].len() {
                        blk
                    } else {
                        new_id
                    };
                    work.push_back(smaller);
                    in_work[smaller] = true;
                }
            }
        }
    }

    let mut rename: HashMap<usize, usize> = HashMap::new();
    let mut class = vec![0usize; n];
    for s in 0..n {
        let next = rename.len();
        class[s] = *rename.entry(block_of[s]).or_insert(next);
    }
    class
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_equivalent_states() {
        // 0 -a-> 1, 1 -a-> 2, 2 -a-> 2 with 1,2 accepting: 1 and 2 merge.
        let delta = vec![vec![1], vec![2], vec![2]];
        let class = hopcroft(&delta, &[false, true, true]);
        assert_eq!(class[1], class[2]);
        assert_ne!(class[0], class[1]);
    }

    #[test]
    fn separates_by_distance_to_accept() {
        // chain 0->1->2->3(acc)->3
        let delta = vec![vec![1], vec![2], vec![3], vec![4], vec![4]];
        let class = hopcroft(&delta, &[false, false, false, true, false]);
        let mut distinct = class.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), 5);
    }
}
