//! Linear algebra over the field with two elements.
//!
//! Vectors of `Z_2^r` are packed into a `u64`, bit `k` holding the
//! coordinate along `e_{k+1}`. This caps the ambient dimension at 64.

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 64;

/// Unit vector `e_{k+1}`.
pub fn unit(k: usize) -> u64 {
    1u64 << k
}

/// Hamming weight.
pub fn weight(v: u64) -> u32 {
    v.count_ones()
}

/// Mask with the lowest `r` bits set.
pub fn low_mask(r: usize) -> u64 {
    if r >= 64 {
        u64::MAX
    } else {
        (1u64 << r) - 1
    }
}

/// A linear subspace kept in reduced row echelon form.
///
/// Each basis vector owns a pivot (its highest set bit) and no other basis
/// vector has that bit set, so [`Subspace::reduce`] gives a canonical
/// representative of every coset.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subspace {
    rows: Vec<u64>,
}

impl Subspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn spanned_by<I: IntoIterator<Item = u64>>(vectors: I) -> Self {
        let mut s = Self::new();
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Basis in echelon form, sorted by decreasing pivot.
    pub fn basis(&self) -> &[u64] {
        &self.rows
    }

    /// Canonical coset representative of `v` modulo this subspace.
    pub fn reduce(&self, mut v: u64) -> u64 {
        for &row in &self.rows {
            let pivot = 63 - row.leading_zeros();
            if v >> pivot & 1 == 1 {
                v ^= row;
            }
        }
        v
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: u64) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        let pivot = 63 - v.leading_zeros();
        for row in &mut self.rows {
            if *row >> pivot & 1 == 1 {
                *row ^= v;
            }
        }
        let at = self.rows.partition_point(|&r| r.leading_zeros() < v.leading_zeros());
        self.rows.insert(at, v);
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|&r| other.contains(r))
    }
}

/// Dimension of the span of `vectors`.
pub fn rank<I: IntoIterator<Item = u64>>(vectors: I) -> usize {
    Subspace::spanned_by(vectors).dim()
}

/// A chosen basis together with the ability to write vectors in its
/// coordinates.
#[derive(Clone, Debug)]
pub struct CoordinateBasis {
    vectors: Vec<u64>,
    // (reduced vector, combination of basis indices producing it)
    echelon: Vec<(u64, u64)>,
}

impl CoordinateBasis {
    /// Builds a basis from independent vectors. Returns `None` when they are
    /// dependent.
    pub fn new(vectors: &[u64]) -> Option<Self> {
        let mut b = CoordinateBasis { vectors: Vec::new(), echelon: Vec::new() };
        for &v in vectors {
            if !b.push(v) {
                return None;
            }
        }
        Some(b)
    }

    fn push(&mut self, v: u64) -> bool {
        let idx = self.vectors.len();
        let (red, combo) = self.eliminate(v, 1u64 << idx);
        if red == 0 {
            return false;
        }
        self.vectors.push(v);
        self.echelon.push((red, combo));
        true
    }

    fn eliminate(&self, mut v: u64, mut combo: u64) -> (u64, u64) {
        loop {
            let mut changed = false;
            for &(row, c) in &self.echelon {
                let pivot = 63 - row.leading_zeros();
                if v != 0 && v >> pivot & 1 == 1 {
                    v ^= row;
                    combo ^= c;
                    changed = true;
                }
            }
            if !changed {
                return (v, combo);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[u64] {
        &self.vectors
    }

    /// Coordinates of `v`: bit `t` is set when basis vector `t` occurs.
    pub fn coordinates(&self, v: u64) -> Option<u64> {
        let (red, combo) = self.eliminate(v, 0);
        (red == 0).then_some(combo)
    }
}

/// Greedy basis: scans `vectors` in order and keeps each one independent of
/// those kept before. Returns the kept positions.
pub fn greedy_basis_positions(vectors: &[u64]) -> Vec<usize> {
    let mut s = Subspace::new();
    vectors
        .iter()
        .enumerate()
        .filter_map(|(i, &v)| s.insert(v).then_some(i))
        .collect()
}

/// Solves `<phi, v_i> = 1` for all `i`, returning some `phi` if one exists.
pub fn solve_all_ones(vectors: &[u64]) -> Option<u64> {
    // Each row is (v, rhs). Gaussian elimination on the augmented rows.
    let mut rows: Vec<(u64, bool)> = vectors.iter().map(|&v| (v, true)).collect();
    let mut pivots: Vec<(u32, usize)> = Vec::new();
    let mut next = 0;
    for bit in (0..64u32).rev() {
        let Some(p) = (next..rows.len()).find(|&i| rows[i].0 >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(next, p);
        let (pv, pr) = rows[next];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != next && row.0 >> bit & 1 == 1 {
                row.0 ^= pv;
                row.1 ^= pr;
            }
        }
        pivots.push((bit, next));
        next += 1;
    }
    if rows[next..].iter().any(|&(v, r)| v == 0 && r) {
        return None;
    }
    let mut phi = 0u64;
    for &(bit, i) in &pivots {
        // fully reduced: row i has only its pivot among pivot columns, so
        // setting free variables to zero gives phi_bit = rhs.
        if rows[i].1 {
            phi |= 1u64 << bit;
        }
    }
    Some(phi)
}

/// Inner product over `Z_2`.
pub fn dot(a: u64, b: u64) -> bool {
    (a & b).count_ones() % 2 == 1
}
