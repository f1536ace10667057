//! Small shared helpers: deterministic RNG stream derivation and the
//! fixed-precision number formatting used by every CSV writer.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tags namespacing derived RNGs so that no two purposes ever share
/// a stream, no matter how reps and models are interleaved.
pub mod stream {
    pub const WORLD_LABELS: u64 = 0x01;
    pub const WORLD_SCORES: u64 = 0x02;
    pub const SUBSAMPLE_CAL: u64 = 0x03;
    pub const SUBSAMPLE_TEST: u64 = 0x04;
    pub const COPULA: u64 = 0x05;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive an independent ChaCha stream from a master seed and a tag path.
///
/// Repetitions and per-model draws each get their own stream, so results do
/// not depend on scheduling order or thread count.
pub fn derive_rng(seed: u64, tags: &[u64]) -> ChaCha8Rng {
    let mut s = splitmix64(seed ^ 0xA076_1D64_78BD_642F);
    for &t in tags {
        s = splitmix64(s ^ splitmix64(t));
    }
    ChaCha8Rng::seed_from_u64(s)
}

/// Draw `k` distinct indices from `0..n` uniformly without replacement,
/// returned in ascending order.
pub fn sample_indices(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    let (chosen, _) = idx.partial_shuffle(rng, k.min(n));
    let mut out = chosen.to_vec();
    out.sort_unstable();
    out
}

/// Format a float with 9 significant digits, printf `%.9g` style: plain
/// decimal for moderate exponents, scientific otherwise, trailing zeros
/// trimmed. Keeps CSV output byte-stable across runs.
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    // {:.8e} rounds to 9 significant digits and exposes the decimal exponent.
    let sci = format!("{:.8e}", x);
    let (mantissa, exp_str) = sci.split_once('e').expect("exponential format");
    let exp: i32 = exp_str.parse().expect("exponent");
    let neg = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), 9);

    let body = if (-4..9).contains(&exp) {
        let mut s = if exp >= 0 {
            let point = (exp + 1) as usize;
            format!("{}.{}", &digits[..point], &digits[point..])
        } else {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        };
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
        s
    } else {
        let mut m = digits.clone();
        while m.len() > 1 && m.ends_with('0') {
            m.pop();
        }
        if m.len() > 1 {
            m.insert(1, '.');
        }
        format!("{m}e{exp}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// `count` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2, "linspace needs at least two points");
    let step = (b - a) / (count - 1) as f64;
    (0..count).map(|i| a + step * i as f64).collect()
}
