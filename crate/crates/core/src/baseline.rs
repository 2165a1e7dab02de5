//! Zero-terminated K=9, rate-1/4 convolutional code with a soft-decision
//! Viterbi decoder, the reference system the IRA code is compared against.

use std::str::FromStr;

use crate::decoder::Llr;
use crate::{Bit, Error, Result};

/// Maximum free distance K=9, rate-1/4 generators (octal 463, 535, 733, 745;
/// free distance 24).
pub const DEFAULT_GENERATORS: [u32; 4] = [0o463, 0o535, 0o733, 0o745];

pub const BASELINE_PAYLOAD: usize = 192;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvCodeSpec {
    constraint_length: usize,
    generators: Vec<u32>,
}

impl Default for ConvCodeSpec {
    fn default() -> Self {
        Self::new(9, &DEFAULT_GENERATORS).expect("default generators are valid")
    }
}

impl ConvCodeSpec {
    /// Generator bit `K-1` taps the current input, bit 0 the oldest.
    pub fn new(constraint_length: usize, generators: &[u32]) -> Result<Self> {
        if !(2..=16).contains(&constraint_length) {
            return Err(Error::Parameter(format!(
                "constraint length {constraint_length} outside 2..=16"
            )));
        }
        if generators.is_empty() || generators.len() > 8 {
            return Err(Error::Parameter("between 1 and 8 generators required".into()));
        }
        let top = 1u32 << (constraint_length - 1);
        for (i, &g) in generators.iter().enumerate() {
            if g >= top << 1 {
                return Err(Error::Parameter(format!("generator {g:o} longer than K={constraint_length}")));
            }
            if g & 1 == 0 || g & top == 0 {
                return Err(Error::Parameter(format!(
                    "generator {g:o} must tap both ends of the register"
                )));
            }
            if generators[..i].contains(&g) {
                return Err(Error::Parameter(format!("generator {g:o} repeated")));
            }
        }
        Ok(Self {
            constraint_length,
            generators: generators.to_vec(),
        })
    }

    pub fn constraint_length(&self) -> usize {
        self.constraint_length
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn rate_inverse(&self) -> usize {
        self.generators.len()
    }

    /// Zero bits appended to flush the register.
    pub fn tail_bits(&self) -> usize {
        self.constraint_length - 1
    }

    pub fn coded_len(&self, payload: usize) -> usize {
        (payload + self.tail_bits()) * self.rate_inverse()
    }

    fn states(&self) -> usize {
        1 << self.tail_bits()
    }

    /// Output bits for `input` entering the register in `state` (bit i of the
    /// result is generator i), and the next state.
    #[inline]
    fn step(&self, state: usize, input: Bit) -> (u32, usize) {
        let m = self.tail_bits();
        let reg = ((input as u32) << m) | state as u32;
        let mut out = 0;
        for (i, &g) in self.generators.iter().enumerate() {
            out |= ((reg & g).count_ones() & 1) << i;
        }
        (out, (reg >> 1) as usize)
    }

    /// Octal, comma separated.
    pub fn generators_octal(&self) -> String {
        self.generators
            .iter()
            .map(|g| format!("{g:o}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl FromStr for ConvCodeSpec {
    type Err = Error;

    /// Comma-separated octal generators; K is taken from the longest.
    fn from_str(s: &str) -> Result<Self> {
        let gens = s
            .split(',')
            .map(|t| {
                u32::from_str_radix(t.trim(), 8)
                    .map_err(|_| Error::Parameter(format!("`{t}` is not an octal generator")))
            })
            .collect::<Result<Vec<_>>>()?;
        let k = gens.iter().map(|g| 32 - g.leading_zeros() as usize).max().unwrap_or(0);
        Self::new(k, &gens)
    }
}

/// Encodes `payload` followed by a zero tail.
pub fn conv_encode(spec: &ConvCodeSpec, payload: &[Bit]) -> Vec<Bit> {
    let mut out = Vec::with_capacity(spec.coded_len(payload.len()));
    let mut state = 0;
    let tail = std::iter::repeat_n(0u8, spec.tail_bits());
    for bit in payload.iter().copied().chain(tail) {
        let (bits, next) = spec.step(state, bit);
        for i in 0..spec.rate_inverse() {
            out.push(((bits >> i) & 1) as Bit);
        }
        state = next;
    }
    out
}

/// Length-checked encoder for the 192-bit frame.
pub fn conv_encode_frame(spec: &ConvCodeSpec, payload: &[Bit]) -> Result<Vec<Bit>> {
    if payload.len() != BASELINE_PAYLOAD {
        return Err(Error::Dimension {
            expected: BASELINE_PAYLOAD,
            actual: payload.len(),
        });
    }
    Ok(conv_encode(spec, payload))
}

/// Maximum-likelihood payload for a zero-terminated frame. The path metric is
/// the correlation `sum(±L / 2)` with the LLRs, equivalent to Euclidean
/// distance for BPSK.
pub fn viterbi_decode(spec: &ConvCodeSpec, llrs: &[Llr]) -> Result<Vec<Bit>> {
    let r = spec.rate_inverse();
    if llrs.len() % r != 0 || llrs.len() / r < spec.tail_bits() {
        return Err(Error::Dimension {
            expected: spec.coded_len(BASELINE_PAYLOAD),
            actual: llrs.len(),
        });
    }
    let steps = llrs.len() / r;
    let payload = steps - spec.tail_bits();
    let n_states = spec.states();
    let m = spec.tail_bits();

    // branch outputs for both predecessors of every state
    let mut outputs = vec![[0u32; 2]; n_states];
    for (next, o) in outputs.iter_mut().enumerate() {
        let input = (next >> (m - 1)) as Bit;
        for oldest in 0..2 {
            let prev = ((next << 1) & (n_states - 1)) | oldest;
            o[oldest] = spec.step(prev, input).0;
        }
    }

    let mut metric = vec![f64::NEG_INFINITY; n_states];
    metric[0] = 0.0;
    let mut next_metric = vec![f64::NEG_INFINITY; n_states];
    let mut decisions = vec![0u8; steps * n_states];
    let mut branch = vec![0.0; 1 << r];
    for t in 0..steps {
        let obs = &llrs[t * r..(t + 1) * r];
        for (pattern, b) in branch.iter_mut().enumerate() {
            *b = obs
                .iter()
                .enumerate()
                .map(|(i, &l)| if (pattern >> i) & 1 == 0 { 0.5 * l } else { -0.5 * l })
                .sum();
        }
        let row = &mut decisions[t * n_states..(t + 1) * n_states];
        // tail steps only allow the zero input
        let reachable = if t >= payload { n_states >> 1 } else { n_states };
        next_metric.fill(f64::NEG_INFINITY);
        for next in 0..reachable {
            let base = (next << 1) & (n_states - 1);
            let m0 = metric[base] + branch[outputs[next][0] as usize];
            let m1 = metric[base | 1] + branch[outputs[next][1] as usize];
            if m1 > m0 {
                next_metric[next] = m1;
                row[next] = 1;
            } else {
                next_metric[next] = m0;
                row[next] = 0;
            }
        }
        std::mem::swap(&mut metric, &mut next_metric);
    }

    let mut state = 0usize;
    let mut bits = vec![0u8; steps];
    for t in (0..steps).rev() {
        bits[t] = (state >> (m - 1)) as Bit;
        let oldest = decisions[t * n_states + state] as usize;
        state = ((state << 1) & (n_states - 1)) | oldest;
    }
    debug_assert_eq!(state, 0);
    bits.truncate(payload);
    Ok(bits)
}

/// Length-checked decoder for the 192-bit frame.
pub fn viterbi_decode_frame(spec: &ConvCodeSpec, llrs: &[Llr]) -> Result<Vec<Bit>> {
    let expected = spec.coded_len(BASELINE_PAYLOAD);
    if llrs.len() != expected {
        return Err(Error::Dimension {
            expected,
            actual: llrs.len(),
        });
    }
    viterbi_decode(spec, llrs)
}

/// Free distance: lightest path that leaves state 0 and returns to it.
pub fn free_distance(spec: &ConvCodeSpec) -> u32 {
    let n_states = spec.states();
    let mut dist = vec![u32::MAX; n_states];
    let (first, s1) = spec.step(0, 1);
    dist[s1] = first.count_ones();
    let mut best = u32::MAX;
    // weights are non-negative and every state is reachable within K-1 steps,
    // so a fixed number of relaxation rounds is enough for the code sizes here
    for _ in 0..8 * n_states.max(16) {
        let mut changed = false;
        let mut next = dist.clone();
        for s in 0..n_states {
            if dist[s] == u32::MAX || s == 0 {
                continue;
            }
            for input in 0..2 {
                let (out, ns) = spec.step(s, input);
                let w = dist[s] + out.count_ones();
                if ns == 0 {
                    best = best.min(w);
                } else if w < next[ns] {
                    next[ns] = w;
                    changed = true;
                }
            }
        }
        dist = next;
        if !changed {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clean(bits: &[Bit]) -> Vec<Llr> {
        bits.iter().map(|&b| if b == 0 { 4.0 } else { -4.0 }).collect()
    }

    #[test]
    fn default_code_has_free_distance_24() {
        let spec = ConvCodeSpec::default();
        assert_eq!(spec.tail_bits(), 8);
        assert_eq!(free_distance(&spec), 24);
    }

    #[test]
    fn free_distance_of_textbook_k3_code() {
        let spec: ConvCodeSpec = "7,5".parse().unwrap();
        assert_eq!(spec.constraint_length(), 3);
        assert_eq!(free_distance(&spec), 5);
    }

    #[test]
    fn lengths_and_zero_frame() {
        let spec = ConvCodeSpec::default();
        let out = conv_encode_frame(&spec, &[0; 192]).unwrap();
        assert_eq!(out.len(), 800);
        assert!(out.iter().all(|&b| b == 0));
        assert!(conv_encode_frame(&spec, &[0; 10]).is_err());
        assert!(viterbi_decode_frame(&spec, &[0.0; 799]).is_err());
    }

    #[test]
    fn impulse_response() {
        let spec = ConvCodeSpec::default();
        let mut payload = vec![0; 192];
        payload[0] = 1;
        let out = conv_encode(&spec, &payload);
        for t in 0..9 {
            for (i, &g) in spec.generators().iter().enumerate() {
                assert_eq!(out[t * 4 + i] as u32, (g >> (8 - t)) & 1, "t={t} g={i}");
            }
        }
        assert!(out[36..].iter().all(|&b| b == 0));
    }

    #[test]
    fn linearity() {
        let spec = ConvCodeSpec::default();
        let a: Vec<Bit> = (0..192).map(|i| (i % 3 == 0) as u8).collect();
        let b: Vec<Bit> = (0..192).map(|i| (i % 7 < 2) as u8).collect();
        let ab: Vec<Bit> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let ea = conv_encode(&spec, &a);
        let eb = conv_encode(&spec, &b);
        let eab = conv_encode(&spec, &ab);
        assert!(ea.iter().zip(&eb).zip(&eab).all(|((x, y), z)| x ^ y == *z));
    }

    #[test]
    fn clean_decode() {
        let spec = ConvCodeSpec::default();
        let payload: Vec<Bit> = (0..192).map(|i| ((i * 31 + 7) % 11 < 5) as u8).collect();
        let llrs = clean(&conv_encode(&spec, &payload));
        assert_eq!(viterbi_decode_frame(&spec, &llrs).unwrap(), payload);
    }

    #[test]
    fn bad_generators() {
        assert!(ConvCodeSpec::new(9, &[0o463, 0o463]).is_err());
        assert!(ConvCodeSpec::new(9, &[0o462]).is_err());
        assert!(ConvCodeSpec::new(9, &[0o063]).is_err());
        assert!("463,9".parse::<ConvCodeSpec>().is_err());
        assert_eq!("463,535,733,745".parse::<ConvCodeSpec>().unwrap(), ConvCodeSpec::default());
    }
}
