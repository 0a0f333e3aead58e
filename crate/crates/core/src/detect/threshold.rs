//! Detection thresholds: a static rule and two data-driven searches that
//! calibrate on the reference character's known bit pattern.

use std::collections::HashSet;

/// How the decision threshold was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdMode {
    /// Fixed at `1 + alpha/2`, the midpoint of the ideal clean clusters.
    Static,
    /// Midpoint between the highest reference 0-bit ratio and the lowest
    /// reference 1-bit ratio.
    Midpoint,
    /// Midpoint start, then a coarse (half-step) and fine (tenth-step)
    /// iterative search scored on the reference character.
    Refined,
}

impl ThresholdMode {
    pub fn label(&self) -> &'static str {
        match self {
            ThresholdMode::Static => "static",
            ThresholdMode::Midpoint => "midpoint",
            ThresholdMode::Refined => "refined",
        }
    }
}

/// Chosen threshold plus how well it reads the reference character.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    pub mode: ThresholdMode,
    pub threshold: f64,
    /// Errors over the 7 reference bits at `threshold`, as a fraction.
    pub known_char_ber: f64,
    /// Threshold evaluations performed (0 when no search ran).
    pub iterations: usize,
    /// True when a search stopped because the reference character read back
    /// perfectly at the current threshold.
    pub flag: bool,
}

/// The fixed detection threshold for a given embedding intensity.
pub fn static_threshold(alpha: f64) -> f64 {
    1.0 + alpha / 2.0
}

/// Bit decisions for a ratio vector: 1 exactly when `ratio >= threshold`.
pub fn classify(ratios: &[f64], threshold: f64) -> Vec<u8> {
    ratios.iter().map(|&r| u8::from(r >= threshold)).collect()
}

/// Error rates of the reference bits at a candidate threshold.
///
/// Returns `(ze, oe, errors)`: the fraction of 1-bits read as zero, the
/// fraction of 0-bits read as one, and the total miss count.
pub(crate) fn reference_errors(ratios: &[f64], bits: &[u8], threshold: f64) -> (f64, f64, usize) {
    let mut ones = 0usize;
    let mut zeros = 0usize;
    let mut ze = 0usize;
    let mut oe = 0usize;
    for (&r, &b) in ratios.iter().zip(bits) {
        let detected = r >= threshold;
        if b == 1 {
            ones += 1;
            if !detected {
                ze += 1;
            }
        } else {
            zeros += 1;
            if detected {
                oe += 1;
            }
        }
    }
    assert!(
        ones > 0 && zeros > 0,
        "reference bits must contain both values"
    );
    (ze as f64 / ones as f64, oe as f64 / zeros as f64, ze + oe)
}

fn check_reference(ratios: &[f64], bits: &[u8]) {
    assert_eq!(
        ratios.len(),
        bits.len(),
        "one reference ratio per reference bit"
    );
    assert!(
        bits.contains(&1) && bits.contains(&0),
        "reference bits must contain both values"
    );
}

/// Midpoint threshold from the reference character's ratios.
pub fn midpoint_threshold(ratios: &[f64], bits: &[u8]) -> ThresholdReport {
    check_reference(ratios, bits);
    let mut min_one = f64::INFINITY;
    let mut max_zero = f64::NEG_INFINITY;
    for (&r, &b) in ratios.iter().zip(bits) {
        if b == 1 {
            min_one = min_one.min(r);
        } else {
            max_zero = max_zero.max(r);
        }
    }
    let threshold = max_zero + (min_one - max_zero) / 2.0;
    let (_, _, errors) = reference_errors(ratios, bits, threshold);
    ThresholdReport {
        mode: ThresholdMode::Midpoint,
        threshold,
        known_char_ber: errors as f64 / bits.len() as f64,
        iterations: 0,
        flag: false,
    }
}

const LEVEL_ITERATIONS: usize = 20;

struct Search {
    seen: HashSet<u64>,
    visited: Vec<(f64, usize)>,
    iterations: usize,
    flag: bool,
}

/// One search level: evaluate the current threshold, then step it by
/// `threshold/divisor` away from the dominant error kind. Stops early on a
/// perfect read (sets the flag) or when the next value was already tried.
fn run_level(state: &mut Search, th: &mut f64, ratios: &[f64], bits: &[u8], divisor: f64) {
    for _ in 0..LEVEL_ITERATIONS {
        let (ze, oe, errors) = reference_errors(ratios, bits, *th);
        state.seen.insert(th.to_bits());
        state.visited.push((*th, errors));
        state.iterations += 1;
        if errors == 0 {
            state.flag = true;
            return;
        }
        let next = if ze > oe {
            *th + *th / divisor
        } else {
            *th - *th / divisor
        };
        if state.seen.contains(&next.to_bits()) {
            return;
        }
        *th = next;
    }
}

/// Iteratively refined threshold. Starts from the midpoint value, runs a
/// half-step level and, unless that already read the reference perfectly, a
/// tenth-step level; answers with the best threshold visited anywhere
/// (fewest reference errors, ties broken toward the smaller value).
pub fn refined_threshold(ratios: &[f64], bits: &[u8]) -> ThresholdReport {
    check_reference(ratios, bits);
    let mut th = midpoint_threshold(ratios, bits).threshold;
    let mut state = Search {
        seen: HashSet::new(),
        visited: Vec::new(),
        iterations: 0,
        flag: false,
    };
    run_level(&mut state, &mut th, ratios, bits, 2.0);
    if !state.flag {
        run_level(&mut state, &mut th, ratios, bits, 10.0);
    }
    let (mut best_th, mut best_err) = state.visited[0];
    for &(t, e) in &state.visited[1..] {
        if e < best_err || (e == best_err && t < best_th) {
            best_th = t;
            best_err = e;
        }
    }
    ThresholdReport {
        mode: ThresholdMode::Refined,
        threshold: best_th,
        known_char_ber: best_err as f64 / bits.len() as f64,
        iterations: state.iterations,
        flag: state.flag,
    }
}
