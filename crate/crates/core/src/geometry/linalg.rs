//! Row reduction and null spaces over a finite field.

use crate::field::{Fe, FieldSpec};

pub type Vector = Vec<Fe>;

/// Reduces `rows` to reduced row echelon form in place, dropping zero rows.
/// Returns the pivot column of each remaining row.
pub fn rref(field: &FieldSpec, rows: &mut Vec<Vector>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = field.inv_unchecked(rows[r][col]);
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col];
            for j in 0..ncols {
                let t = field.mul(factor, rows[r][j]);
                rows[i][j] = field.sub(rows[i][j], t);
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(field: &FieldSpec, rows: &[Vector]) -> usize {
    let mut m = rows.to_vec();
    rref(field, &mut m).len()
}

/// Basis of `{x : row · x = 0 for every row}` in RREF.
pub fn null_space(field: &FieldSpec, rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut m = rows.to_vec();
    let pivots = rref(field, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Fe::ZERO; ncols];
        v[f] = Fe::ONE;
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = field.neg(row[f]);
        }
        basis.push(v);
    }
    rref(field, &mut basis);
    basis
}

pub fn dot(field: &FieldSpec, a: &[Fe], b: &[Fe]) -> Fe {
    a.iter().zip(b).fold(Fe::ZERO, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

/// Row vector times matrix.
pub fn vec_mat(field: &FieldSpec, v: &[Fe], m: &[Vector]) -> Vector {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut out = vec![Fe::ZERO; ncols];
    for (i, &vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for j in 0..ncols {
            out[j] = field.add(out[j], field.mul(vi, m[i][j]));
        }
    }
    out
}

pub fn mat_mul(field: &FieldSpec, a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    a.iter().map(|row| vec_mat(field, row, b)).collect()
}

/// Scales `v` so that its first nonzero coordinate is 1. Returns false for the zero vector.
pub fn normalize(field: &FieldSpec, v: &mut [Fe]) -> bool {
    let Some(lead) = v.iter().copied().find(|x| !x.is_zero()) else {
        return false;
    };
    if lead != Fe::ONE {
        let inv = field.inv_unchecked(lead);
        for x in v.iter_mut() {
            *x = field.mul(*x, inv);
        }
    }
    true
}

/// All linear combinations of `basis`, one per projective point, normalized.
pub fn projective_points_of(field: &FieldSpec, basis: &[Vector]) -> Vec<Vector> {
    let k = basis.len();
    if k == 0 {
        return Vec::new();
    }
    let n = basis[0].len();
    let q = field.q() as usize;
    let mut out = Vec::new();
    // coefficient vectors whose first nonzero entry is 1
    for lead in 0..k {
        let free = k - lead - 1;
        let total = q.pow(free as u32);
        for mut code in 0..total {
            let mut v = basis[lead].clone();
            for b in basis.iter().skip(lead + 1) {
                let c = Fe((code % q) as u16);
                code /= q;
                if c.is_zero() {
                    continue;
                }
                for j in 0..n {
                    v[j] = field.add(v[j], field.mul(c, b[j]));
                }
            }
            normalize(field, &mut v);
            out.push(v);
        }
    }
    out
}
