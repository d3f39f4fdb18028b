//! Merge-and-sort normal form shared by the 1D and multivariate mixtures.

use std::cmp::Ordering;

/// A component reduced to a flat parameter tuple. Components may only merge
/// when their `group` (degrees of freedom, or 0 for Gaussians) matches.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct FlatComponent {
    pub weight: f64,
    pub group: u32,
    pub params: Vec<f64>,
}

fn order(a: &FlatComponent, b: &FlatComponent) -> Ordering {
    a.group
        .cmp(&b.group)
        .then_with(|| {
            a.params
                .iter()
                .zip(&b.params)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
        .then_with(|| a.weight.total_cmp(&b.weight))
}

fn max_norm(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Single-linkage merge of components within `tol` (max-norm), repeated until
/// no two survivors are within `tol`, then sorted by `(group, params)`.
///
/// Input order never affects the result: components are sorted before any
/// floating-point accumulation happens.
pub(crate) fn merge_and_sort(mut items: Vec<FlatComponent>, tol: f64) -> Vec<FlatComponent> {
    items.sort_by(order);
    loop {
        let n = items.len();
        let mut parent: Vec<usize> = (0..n).collect();
        let mut merged_any = false;
        for i in 0..n {
            for j in (i + 1)..n {
                if items[i].group == items[j].group
                    && max_norm(&items[i].params, &items[j].params) <= tol
                {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                        merged_any = true;
                    }
                }
            }
        }
        if !merged_any {
            return items;
        }

        let mut clusters: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for i in 0..n {
            let root = find(&mut parent, i);
            if slot[root] == usize::MAX {
                slot[root] = clusters.len();
                clusters.push(Vec::new());
            }
            clusters[slot[root]].push(i);
        }

        let mut next: Vec<FlatComponent> = clusters
            .into_iter()
            .map(|members| {
                let first = &items[members[0]];
                let total: f64 = members.iter().map(|&k| items[k].weight).sum();
                let params = (0..first.params.len())
                    .map(|p| {
                        let base = first.params[p];
                        let shift: f64 = members
                            .iter()
                            .map(|&k| items[k].weight * (items[k].params[p] - base))
                            .sum();
                        base + shift / total
                    })
                    .collect();
                FlatComponent {
                    weight: total,
                    group: first.group,
                    params,
                }
            })
            .collect();
        next.sort_by(order);
        items = next;
    }
}
