use std::collections::HashMap;

use super::diagram::PersistenceDiagram;
use super::filtration::Filtration;

/// Pairs `(birth index, death index)` and unpaired essential indices from the
/// standard Z2 reduction of the boundary matrix, with clearing.
pub(crate) struct Reduction {
    pub pairs: Vec<(usize, usize)>,
    pub essential: Vec<usize>,
}

fn xor_into(target: &mut Vec<usize>, other: &[usize], scratch: &mut Vec<usize>) {
    scratch.clear();
    let (mut i, mut j) = (0, 0);
    while i < target.len() && j < other.len() {
        match target[i].cmp(&other[j]) {
            std::cmp::Ordering::Less => {
                scratch.push(target[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                scratch.push(other[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    scratch.extend_from_slice(&target[i..]);
    scratch.extend_from_slice(&other[j..]);
    std::mem::swap(target, scratch);
}

pub(crate) fn reduce(filt: &Filtration) -> Reduction {
    let simplices = filt.simplices();
    let index: HashMap<&[usize], usize> = simplices
        .iter()
        .enumerate()
        .map(|(i, s)| (s.vertices(), i))
        .collect();
    let mut columns: Vec<Vec<usize>> = simplices
        .iter()
        .map(|s| {
            let mut c: Vec<usize> = s.facets().map(|f| index[f.as_slice()]).collect();
            c.sort_unstable();
            c
        })
        .collect();

    let n = simplices.len();
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; n];
    let mut cleared = vec![false; n];
    let mut scratch = Vec::new();
    let top = simplices.iter().map(|s| s.dim()).max().unwrap_or(0);

    // high dimensions first, so that every pivot row can be cleared
    for dim in (1..=top).rev() {
        for j in 0..n {
            if simplices[j].dim() != dim || cleared[j] {
                continue;
            }
            while let Some(&low) = columns[j].last() {
                match pivot_of_row[low] {
                    Some(k) => {
                        let other = std::mem::take(&mut columns[k]);
                        xor_into(&mut columns[j], &other, &mut scratch);
                        columns[k] = other;
                    }
                    None => {
                        pivot_of_row[low] = Some(j);
                        cleared[low] = true;
                        break;
                    }
                }
            }
        }
    }

    let mut pairs = Vec::new();
    let mut essential = Vec::new();
    for i in 0..n {
        match pivot_of_row[i] {
            Some(j) => pairs.push((i, j)),
            None if !cleared[i] && columns[i].is_empty() => essential.push(i),
            None => {}
        }
    }
    Reduction { pairs, essential }
}

/// Persistence diagram of a monotone filtration. Zero-length pairs are
/// dropped; only dimensions below [`Filtration::homology_dims`] are reported.
pub fn persistence_diagram(filt: &Filtration) -> PersistenceDiagram {
    let red = reduce(filt);
    let s = filt.simplices();
    let dims = filt.homology_dims();
    let mut d = PersistenceDiagram::new();
    for &(i, j) in &red.pairs {
        let dim = s[i].dim();
        if dim < dims && s[j].value() > s[i].value() {
            d.push(dim, s[i].value(), s[j].value());
        }
    }
    for &i in &red.essential {
        if s[i].dim() < dims {
            d.push(s[i].dim(), s[i].value(), f64::INFINITY);
        }
    }
    d.finish()
}
