//! Layer primitives: GEMM-backed convolution (im2col), max pooling with
//! argmax routing, dense layers, ReLU. Single-threaded; callers parallelize
//! over image chunks and combine partial gradients in a fixed order.

/// C = A·B + beta·C, row-major. A is m×k, B is k×n, C is m×n.
pub fn gemm(m: usize, k: usize, n: usize, a: &[f64], b: &[f64], beta: f64, c: &mut [f64]) {
    debug_assert_eq!(a.len(), m * k);
    debug_assert_eq!(b.len(), k * n);
    debug_assert_eq!(c.len(), m * n);
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            1.0,
            a.as_ptr(),
            k as isize,
            1,
            b.as_ptr(),
            n as isize,
            1,
            beta,
            c.as_mut_ptr(),
            n as isize,
            1,
        );
    }
}

/// C = Aᵀ·B + beta·C where A is stored m×k row-major (used as k×m).
pub fn gemm_at(m: usize, k: usize, n: usize, a: &[f64], b: &[f64], beta: f64, c: &mut [f64]) {
    // A stored k×m row-major; transposed access via strides
    debug_assert_eq!(a.len(), k * m);
    debug_assert_eq!(b.len(), k * n);
    debug_assert_eq!(c.len(), m * n);
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            1.0,
            a.as_ptr(),
            1,
            m as isize,
            b.as_ptr(),
            n as isize,
            1,
            beta,
            c.as_mut_ptr(),
            n as isize,
            1,
        );
    }
}

/// C = A·Bᵀ + beta·C where B is stored n×k row-major (used as k×n).
pub fn gemm_bt(m: usize, k: usize, n: usize, a: &[f64], b: &[f64], beta: f64, c: &mut [f64]) {
    debug_assert_eq!(a.len(), m * k);
    debug_assert_eq!(b.len(), n * k);
    debug_assert_eq!(c.len(), m * n);
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            1.0,
            a.as_ptr(),
            k as isize,
            1,
            b.as_ptr(),
            1,
            k as isize,
            beta,
            c.as_mut_ptr(),
            n as isize,
            1,
        );
    }
}

/// Zero-padded im2col for a square k×k kernel with pad k/2 (same-size
/// output). `input` is [c][side][side]; `cols` is [c·k·k][side·side].
pub fn im2col(input: &[f64], channels: usize, side: usize, k: usize, cols: &mut [f64]) {
    let pad = k / 2;
    let s2 = side * side;
    debug_assert_eq!(input.len(), channels * s2);
    debug_assert_eq!(cols.len(), channels * k * k * s2);
    for c in 0..channels {
        let plane = &input[c * s2..(c + 1) * s2];
        for dy in 0..k {
            for dx in 0..k {
                let row = &mut cols[((c * k + dy) * k + dx) * s2..((c * k + dy) * k + dx + 1) * s2];
                for y in 0..side {
                    let sy = y as isize + dy as isize - pad as isize;
                    let dst = &mut row[y * side..(y + 1) * side];
                    if sy < 0 || sy >= side as isize {
                        dst.fill(0.0);
                        continue;
                    }
                    let src = &plane[sy as usize * side..(sy as usize + 1) * side];
                    // x + dx - pad in bounds: x in [lo, hi)
                    let lo = pad.saturating_sub(dx);
                    let hi = (side + pad - dx).min(side);
                    dst[..lo].fill(0.0);
                    dst[hi..].fill(0.0);
                    let shift = dx as isize - pad as isize;
                    for x in lo..hi {
                        dst[x] = src[(x as isize + shift) as usize];
                    }
                }
            }
        }
    }
}

/// Adjoint of [`im2col`]: scatter-add column gradients back to the input.
pub fn col2im(cols: &[f64], channels: usize, side: usize, k: usize, dinput: &mut [f64]) {
    let pad = k / 2;
    let s2 = side * side;
    debug_assert_eq!(dinput.len(), channels * s2);
    for c in 0..channels {
        let plane = &mut dinput[c * s2..(c + 1) * s2];
        for dy in 0..k {
            for dx in 0..k {
                let row = &cols[((c * k + dy) * k + dx) * s2..((c * k + dy) * k + dx + 1) * s2];
                for y in 0..side {
                    let sy = y as isize + dy as isize - pad as isize;
                    if sy < 0 || sy >= side as isize {
                        continue;
                    }
                    let lo = pad.saturating_sub(dx);
                    let hi = (side + pad - dx).min(side);
                    let shift = dx as isize - pad as isize;
                    let src = &row[y * side..(y + 1) * side];
                    for x in lo..hi {
                        plane[(sy as usize) * side + (x as isize + shift) as usize] += src[x];
                    }
                }
            }
        }
    }
}

/// 2×2 max pooling, stride 2. Writes pooled values and flat argmax indices
/// (into the input plane). Ties resolve to the first element in scan order.
pub fn maxpool2_forward(
    input: &[f64],
    channels: usize,
    side: usize,
    out: &mut [f64],
    argmax: &mut [u32],
) {
    let half = side / 2;
    let s2 = side * side;
    let o2 = half * half;
    debug_assert_eq!(out.len(), channels * o2);
    for c in 0..channels {
        let plane = &input[c * s2..(c + 1) * s2];
        for oy in 0..half {
            for ox in 0..half {
                let y0 = oy * 2;
                let x0 = ox * 2;
                let mut best_idx = y0 * side + x0;
                let mut best = plane[best_idx];
                for (dy, dx) in [(0usize, 1usize), (1, 0), (1, 1)] {
                    let idx = (y0 + dy) * side + x0 + dx;
                    if plane[idx] > best {
                        best = plane[idx];
                        best_idx = idx;
                    }
                }
                out[c * o2 + oy * half + ox] = best;
                argmax[c * o2 + oy * half + ox] = best_idx as u32;
            }
        }
    }
}

/// Backward of 2×2 max pooling: route gradients to the recorded argmax.
pub fn maxpool2_backward(
    dout: &[f64],
    argmax: &[u32],
    channels: usize,
    side: usize,
    dinput: &mut [f64],
) {
    let half = side / 2;
    let s2 = side * side;
    let o2 = half * half;
    dinput.fill(0.0);
    for c in 0..channels {
        let dplane = &mut dinput[c * s2..(c + 1) * s2];
        for i in 0..o2 {
            dplane[argmax[c * o2 + i] as usize] += dout[c * o2 + i];
        }
    }
}

#[inline]
pub fn relu_inplace(v: &mut [f64]) {
    for x in v {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
}

/// Gate gradients by the post-ReLU activations (zero where y == 0).
#[inline]
pub fn relu_backward(dy: &mut [f64], y: &[f64]) {
    for (g, &a) in dy.iter_mut().zip(y) {
        if a <= 0.0 {
            *g = 0.0;
        }
    }
}

/// Add a per-output-channel bias across a plane of `s2` pixels.
pub fn add_bias_per_channel(y: &mut [f64], bias: &[f64], s2: usize) {
    for (o, &b) in bias.iter().enumerate() {
        for v in &mut y[o * s2..(o + 1) * s2] {
            *v += b;
        }
    }
}
