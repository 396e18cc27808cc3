//! Equality tests in the braid group, used to check rewrite steps one at a time.
//!
//! Letters are signed generator indices: `3` is σ₃ and `-3` is σ₃⁻¹.

/// Free-group words in x₁…x_m, same signed encoding as braid letters.
type FreeWord = Vec<i32>;

fn free_push(w: &mut FreeWord, x: i32) {
    if w.last() == Some(&-x) {
        w.pop();
    } else {
        w.push(x);
    }
}

fn concat(parts: &[&FreeWord]) -> FreeWord {
    let mut out = Vec::new();
    for p in parts {
        for &x in p.iter() {
            free_push(&mut out, x);
        }
    }
    out
}

fn inverse(w: &FreeWord) -> FreeWord {
    w.iter().rev().map(|x| -x).collect()
}

/// Images of x₁…x_m under the Artin action of the word, or `None` once the
/// total image length exceeds `cap`.
pub fn artin_images(strands: usize, word: &[i32], cap: usize) -> Option<Vec<FreeWord>> {
    let mut images: Vec<FreeWord> = (1..=strands as i32).map(|k| vec![k]).collect();
    for &l in word {
        let i = l.unsigned_abs() as usize - 1;
        let a = images[i].clone();
        let b = images[i + 1].clone();
        if l > 0 {
            // x_i -> x_i x_{i+1} x_i^-1, x_{i+1} -> x_i
            images[i] = concat(&[&a, &b, &inverse(&a)]);
            images[i + 1] = a;
        } else {
            // x_i -> x_{i+1}, x_{i+1} -> x_{i+1}^-1 x_i x_{i+1}
            images[i] = b.clone();
            images[i + 1] = concat(&[&inverse(&b), &a, &b]);
        }
        if images.iter().map(Vec::len).sum::<usize>() > cap {
            return None;
        }
    }
    Some(images)
}

const P: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

/// Unreduced Burau matrix of the word evaluated at `t` over GF(2⁶¹−1).
pub fn burau_mod_p(strands: usize, word: &[i32], t: u64) -> Vec<Vec<u64>> {
    let m = strands;
    let mut mat = vec![vec![0u64; m]; m];
    for (k, row) in mat.iter_mut().enumerate() {
        row[k] = 1;
    }
    let t_inv = powmod(t, P - 2);
    for &l in word {
        let i = l.unsigned_abs() as usize - 1;
        let block = if l > 0 {
            [[(1 + P - t) % P, t], [1, 0]]
        } else {
            [[0, 1], [t_inv, (1 + P - t_inv) % P]]
        };
        // right-multiply by the block acting on columns i, i+1
        for row in mat.iter_mut() {
            let (a, b) = (row[i], row[i + 1]);
            row[i] = (mulmod(a, block[0][0]) + mulmod(b, block[1][0])) % P;
            row[i + 1] = (mulmod(a, block[0][1]) + mulmod(b, block[1][1])) % P;
        }
    }
    mat
}

/// Whether two words on `strands` strands represent the same braid.
///
/// Uses the faithful Artin action when images stay small, otherwise Burau
/// matrices at several evaluation points.
pub fn group_equal(strands: usize, a: &[i32], b: &[i32]) -> bool {
    const CAP: usize = 200_000;
    if let (Some(x), Some(y)) = (
        artin_images(strands, a, CAP),
        artin_images(strands, b, CAP),
    ) {
        return x == y;
    }
    [3u64, 7919, 1_000_003, 123_456_789]
        .iter()
        .all(|&t| burau_mod_p(strands, a, t) == burau_mod_p(strands, b, t))
}
