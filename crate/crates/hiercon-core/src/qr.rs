//! Dense real nonsymmetric eigenvalue computation.
//!
//! Classical pipeline: balance the matrix with an exact diagonal
//! similarity, reduce to upper Hessenberg form with pivoted elementary
//! transformations, then run implicit double-shift QR iteration on the
//! Hessenberg matrix. Only eigenvalues are extracted, so no transformation
//! accumulators are kept and each sweep touches the active block only.
//! Every step is a plain sequential float computation, which makes the
//! result deterministic for a given input.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix};

use crate::scalar::{abs, copysign, sqrt};
use crate::{Error, Result};

/// Total QR sweeps allowed, per matrix dimension. Tight eigenvalue
/// clusters (nearly decoupled units) can hold one deflation up for dozens
/// of sweeps, so the budget is global rather than per eigenvalue.
const SWEEPS_PER_DIMENSION: usize = 30;

/// Consecutive non-deflating sweeps before an exceptional shift breaks a
/// stalled or cycling shift pattern.
const EXCEPTIONAL_EVERY: usize = 10;

const RADIX: f64 = 2.0;

/// Eigenvalues of a square real matrix, in no particular order.
pub(crate) fn eigenvalues(matrix: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    let n = matrix.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = matrix.clone();
    balance(&mut a);
    hessenberg(&mut a);
    hqr(&mut a)
}

/// Diagonal similarity that roughly equalizes row and column 1-norms.
/// Scale factors are powers of the radix, so the scaling itself is exact
/// and only the eigenvalue problem's conditioning changes.
fn balance(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += abs(a[(j, i)]);
                    r += abs(a[(i, j)]);
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        a[(i, j)] *= g;
                    }
                    for j in 0..n {
                        a[(j, i)] *= f;
                    }
                }
            }
        }
    }
}

/// In-place reduction to upper Hessenberg form by pivoted elementary
/// similarity transformations. Entries below the subdiagonal are zeroed
/// rather than kept as multiplier storage: nothing downstream needs them.
fn hessenberg(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    for m in 1..n.saturating_sub(1) {
        // Pivot: bring the largest entry of the subcolumn onto the
        // subdiagonal so the multipliers below stay bounded by one.
        let mut x = 0.0;
        let mut pivot = m;
        for j in m..n {
            if abs(a[(j, m - 1)]) > abs(x) {
                x = a[(j, m - 1)];
                pivot = j;
            }
        }
        if pivot != m {
            for j in m - 1..n {
                a.swap((pivot, j), (m, j));
            }
            for j in 0..n {
                a.swap((j, pivot), (j, m));
            }
        }
        if x != 0.0 {
            for i in m + 1..n {
                let mut y = a[(i, m - 1)];
                if y != 0.0 {
                    y /= x;
                    a[(i, m - 1)] = 0.0;
                    for j in m..n {
                        let delta = y * a[(m, j)];
                        a[(i, j)] -= delta;
                    }
                    for j in 0..n {
                        let delta = y * a[(j, i)];
                        a[(j, m)] += delta;
                    }
                }
            }
        }
    }
}

/// Implicit double-shift QR iteration on an upper Hessenberg matrix.
/// Deflates eigenvalues off the bottom of the active block one or two at
/// a time; errors with `NoConvergence` if a block refuses to deflate.
fn hqr(a: &mut DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    let n = a.nrows();
    let eps = f64::EPSILON;
    let mut re = vec![0.0_f64; n];
    let mut im = vec![0.0_f64; n];

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += abs(a[(i, j)]);
        }
    }

    let mut budget = SWEEPS_PER_DIMENSION * n.max(10);
    let mut nn = n - 1;
    let mut t = 0.0;
    'deflate: loop {
        let mut its = 0;
        loop {
            // Split at the lowest negligible subdiagonal entry.
            let mut l = nn;
            while l > 0 {
                let mut s = abs(a[(l - 1, l - 1)]) + abs(a[(l, l)]);
                if s == 0.0 {
                    s = anorm;
                }
                if abs(a[(l, l - 1)]) <= eps * s {
                    a[(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[(nn, nn)];
            if l == nn {
                // A real eigenvalue has converged in the corner.
                re[nn] = x + t;
                if nn == 0 {
                    break 'deflate;
                }
                nn -= 1;
            } else {
                let mut y = a[(nn - 1, nn - 1)];
                let mut w = a[(nn, nn - 1)] * a[(nn - 1, nn)];
                if l == nn - 1 {
                    // A trailing 2x2 block has decoupled; its eigenvalues
                    // come from the quadratic directly.
                    let p = 0.5 * (y - x);
                    let q = p * p + w;
                    let mut z = sqrt(abs(q));
                    x += t;
                    if q >= 0.0 {
                        z = p + copysign(z, p);
                        re[nn - 1] = x + z;
                        re[nn] = re[nn - 1];
                        if z != 0.0 {
                            re[nn] = x - w / z;
                        }
                    } else {
                        re[nn] = x + p;
                        re[nn - 1] = x + p;
                        im[nn] = -z;
                        im[nn - 1] = z;
                    }
                    if nn <= 1 {
                        break 'deflate;
                    }
                    nn -= 2;
                } else {
                    if budget == 0 {
                        return Err(Error::NoConvergence);
                    }
                    budget -= 1;
                    if its > 0 && its % EXCEPTIONAL_EVERY == 0 {
                        // Exceptional shift: perturb away from a cycling
                        // shift pattern without changing the spectrum of
                        // the restored matrix (the offset lives in `t`).
                        t += x;
                        for i in 0..=nn {
                            a[(i, i)] -= x;
                        }
                        let s = abs(a[(nn, nn - 1)]) + abs(a[(nn - 1, nn - 2)]);
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    // Find two consecutive small subdiagonals so the sweep
                    // can start below them instead of at the top; the break
                    // hands the leading reflector column to the sweep.
                    let (m, mut p, mut q, mut r) = {
                        let mut m = nn - 2;
                        loop {
                            let z = a[(m, m)];
                            let r = x - z;
                            let s = y - z;
                            let mut p = (r * s - w) / a[(m + 1, m)] + a[(m, m + 1)];
                            let mut q = a[(m + 1, m + 1)] - z - r - s;
                            let mut r = a[(m + 2, m + 1)];
                            let s = abs(p) + abs(q) + abs(r);
                            p /= s;
                            q /= s;
                            r /= s;
                            if m == l {
                                break (m, p, q, r);
                            }
                            let u = abs(a[(m, m - 1)]) * (abs(q) + abs(r));
                            let v =
                                abs(p) * (abs(a[(m - 1, m - 1)]) + abs(z) + abs(a[(m + 1, m + 1)]));
                            if u <= eps * v {
                                break (m, p, q, r);
                            }
                            m -= 1;
                        }
                    };
                    for i in m..nn - 1 {
                        a[(i + 2, i)] = 0.0;
                        if i != m {
                            a[(i + 2, i - 1)] = 0.0;
                        }
                    }
                    // Double QR sweep: chase the bulge from row m to the
                    // bottom of the active block with 3x3 reflections.
                    for k in m..nn {
                        let mut norm = 0.0;
                        if k != m {
                            p = a[(k, k - 1)];
                            q = a[(k + 1, k - 1)];
                            r = if k + 1 != nn { a[(k + 2, k - 1)] } else { 0.0 };
                            norm = abs(p) + abs(q) + abs(r);
                            if norm != 0.0 {
                                p /= norm;
                                q /= norm;
                                r /= norm;
                            }
                        }
                        let s = copysign(sqrt(p * p + q * q + r * r), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    a[(k, k - 1)] = -a[(k, k - 1)];
                                }
                            } else {
                                a[(k, k - 1)] = -s * norm;
                            }
                            p += s;
                            let x = p / s;
                            let y = q / s;
                            let z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nn {
                                p = a[(k, j)] + q * a[(k + 1, j)];
                                if k + 1 != nn {
                                    p += r * a[(k + 2, j)];
                                    a[(k + 2, j)] -= p * z;
                                }
                                a[(k + 1, j)] -= p * y;
                                a[(k, j)] -= p * x;
                            }
                            let mmin = if nn < k + 3 { nn } else { k + 3 };
                            for i in l..=mmin {
                                p = x * a[(i, k)] + y * a[(i, k + 1)];
                                if k + 1 != nn {
                                    p += z * a[(i, k + 2)];
                                    a[(i, k + 2)] -= p * r;
                                }
                                a[(i, k + 1)] -= p * q;
                                a[(i, k)] -= p;
                            }
                        }
                    }
                }
            }
            // Deflation shrank the block past the split point: restart the
            // sweep counter for the next block.
            if l + 1 >= nn {
                break;
            }
        }
    }

    Ok(re.into_iter().zip(im).map(|(re, im)| Complex::new(re, im)).collect())
}
