//! Cartan-type strings and the Coxeter/Cartan matrices they denote.
//!
//! Node numbering is Bourbaki's. For a product such as `A2xB2` the nodes of
//! the factors are concatenated in order.

use super::WeylError;

/// Coxeter matrix of one irreducible factor, Bourbaki numbering.
fn irreducible(family: char, rank: usize) -> Option<Vec<Vec<u32>>> {
    let valid = match family {
        'A' => rank >= 1,
        'B' | 'C' => rank >= 2,
        'D' => rank >= 4,
        'G' => rank == 2,
        'F' => rank == 4,
        _ => false,
    };
    if !valid {
        return None;
    }
    let mut m = vec![vec![2u32; rank]; rank];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    let mut edge = |i: usize, j: usize, label: u32| {
        m[i][j] = label;
        m[j][i] = label;
    };
    match family {
        'A' => (1..rank).for_each(|i| edge(i - 1, i, 3)),
        'B' | 'C' => {
            (1..rank - 1).for_each(|i| edge(i - 1, i, 3));
            edge(rank - 2, rank - 1, 4);
        }
        'D' => {
            (1..rank - 1).for_each(|i| edge(i - 1, i, 3));
            edge(rank - 3, rank - 1, 3);
        }
        'G' => edge(0, 1, 6),
        'F' => {
            edge(0, 1, 3);
            edge(1, 2, 4);
            edge(2, 3, 3);
        }
        _ => unreachable!(),
    }
    Some(m)
}

/// Parses `"A2"`, `"B3"`, `"A1xA1"`, ... into a block-diagonal Coxeter matrix.
pub fn parse_type(spec: &str) -> Result<Vec<Vec<u32>>, WeylError> {
    let bad = || WeylError::ParseType(spec.to_string());
    let mut blocks = Vec::new();
    for part in spec.trim().split(['x', 'X', '*']) {
        let part = part.trim();
        let mut chars = part.chars();
        let family = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        blocks.push(irreducible(family, rank).ok_or_else(bad)?);
    }
    let total: usize = blocks.iter().map(Vec::len).sum();
    if total == 0 || total > 16 {
        return Err(bad());
    }
    let mut m = vec![vec![2u32; total]; total];
    let mut offset = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m[offset + i][offset + j] = x;
            }
        }
        offset += b.len();
    }
    Ok(m)
}

/// A crystallographic Cartan matrix realizing a Coxeter matrix whose
/// labels are in {2, 3, 4, 6} and whose graph is a forest.
///
/// For a 4- or 6-edge the lower-indexed node carries the long root, so
/// `A[i][j] = -1` and `A[j][i] = -2` (resp. `-3`) when `i < j`.
pub fn cartan_from_coxeter(m: &[Vec<u32>]) -> Result<Vec<Vec<i32>>, WeylError> {
    let n = m.len();
    let mut a = vec![vec![0i32; n]; n];
    for i in 0..n {
        if m[i].len() != n || m[i][i] != 1 {
            return Err(WeylError::BadMatrix("diagonal must be 1 and the matrix square".into()));
        }
        a[i][i] = 2;
        for j in 0..n {
            if m[i][j] != m[j][i] {
                return Err(WeylError::BadMatrix("matrix is not symmetric".into()));
            }
            if i == j {
                continue;
            }
            let (lo, hi) = match m[i][j] {
                2 => (0, 0),
                3 => (-1, -1),
                4 => (-1, -2),
                6 => (-1, -3),
                other => {
                    return Err(WeylError::BadMatrix(format!(
                        "label {other} is not in {{2,3,4,6}}"
                    )))
                }
            };
            a[i][j] = if i < j { lo } else { hi };
        }
    }
    // finite Coxeter graphs are forests: edges = nodes - components
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| m[i][j] != 2);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (i, j) in edges {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri == rj {
            return Err(WeylError::NonFiniteType("Coxeter graph contains a cycle".into()));
        }
        parent[ri] = rj;
    }
    Ok(a)
}
