//! Iterative soft decoding of [`IraCode`].
//!
//! Both schedulings run sum-product on the same Tanner graph: information
//! nodes, combiner slots, and a chain of parity nodes where check `j` ties
//! parity `j` to parity `j - 1`. They differ only in update order.
//!
//! - Flooding: every variable-to-check message, then every check-to-variable
//!   message, per iteration.
//! - Turbo: the parity chain is a two-state trellis. Each iteration runs one
//!   forward and one backward recursion along it, so a check update reaches
//!   the next check within the same sweep, then sends extrinsic values back to
//!   the information nodes through the interleaver.
//!
//! LLRs are `ln(P(0) / P(1))`. Magnitudes are clamped to [`LLR_CLAMP`]; a
//! value at the clamp is treated as certain.

use std::str::FromStr;

use crate::code::{encode_info, IraCode};
use crate::{Bit, Error, Result};

/// Log-likelihood ratio, natural log, positive favors bit 0.
pub type Llr = f64;

pub const LLR_CLAMP: f64 = 25.0;

pub const DEFAULT_ITERATIONS: usize = 72;

#[inline]
fn clamp(x: Llr) -> Llr {
    x.clamp(-LLR_CLAMP, LLR_CLAMP)
}

/// Hard decision, ties to 0.
#[inline]
pub fn hard(x: Llr) -> Bit {
    u8::from(x < 0.0)
}

/// `2 atanh(tanh(a/2) tanh(b/2))` in the stable form
/// `sgn(a) sgn(b) min(|a|, |b|) + ln(1 + e^-|a+b|) - ln(1 + e^-|a-b|)`.
pub fn boxplus(a: Llr, b: Llr) -> Llr {
    let (a, b) = (clamp(a), clamp(b));
    if b.abs() >= LLR_CLAMP {
        return a * b.signum();
    }
    if a.abs() >= LLR_CLAMP {
        return b * a.signum();
    }
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    let min = a.abs().min(b.abs());
    sign * min + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

/// `sgn(a) sgn(b) min(|a|, |b|)`.
pub fn boxplus_min_sum(a: Llr, b: Llr) -> Llr {
    let (a, b) = (clamp(a), clamp(b));
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    sign * a.abs().min(b.abs())
}

/// `-ln tanh(x / 2)` for `x >= 0`; certain inputs map to 0, erasures to infinity.
#[inline]
fn phi_in(x: f64) -> f64 {
    if x >= LLR_CLAMP {
        0.0
    } else {
        (2.0 / x.exp_m1()).ln_1p()
    }
}

/// Inverse of [`phi_in`] (the map is an involution), saturated at the clamp.
#[inline]
fn phi_out(s: f64) -> f64 {
    if s == 0.0 {
        LLR_CLAMP
    } else {
        (2.0 / s.exp_m1()).ln_1p().min(LLR_CLAMP)
    }
}

/// Check-node combining rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckRule {
    #[default]
    Exact,
    MinSum,
}

impl CheckRule {
    fn pair(self, a: Llr, b: Llr) -> Llr {
        match self {
            CheckRule::Exact => boxplus(a, b),
            CheckRule::MinSum => boxplus_min_sum(a, b),
        }
    }
}

/// Writes into `out[i]` the combination of every input except `inputs[i]`.
/// `scratch` holds per-input magnitudes between the two passes.
fn extrinsic(rule: CheckRule, inputs: &[Llr], out: &mut [Llr], scratch: &mut Vec<f64>) {
    debug_assert_eq!(inputs.len(), out.len());
    let mut negative = false;
    for &x in inputs {
        negative ^= x < 0.0;
    }
    scratch.clear();
    match rule {
        CheckRule::Exact => {
            scratch.extend(inputs.iter().map(|&x| phi_in(x.abs().min(LLR_CLAMP))));
            // exclusive prefix sums, then add exclusive suffix sums; no subtraction
            let mut acc = 0.0;
            for (o, &p) in out.iter_mut().zip(scratch.iter()) {
                *o = acc;
                acc += p;
            }
            acc = 0.0;
            for (o, &p) in out.iter_mut().zip(scratch.iter()).rev() {
                *o += acc;
                acc += p;
            }
            for (o, &x) in out.iter_mut().zip(inputs) {
                let flip = negative ^ (x < 0.0);
                let mag = phi_out(*o);
                *o = if flip { -mag } else { mag };
            }
        }
        CheckRule::MinSum => {
            let (mut min1, mut min2, mut at) = (f64::INFINITY, f64::INFINITY, usize::MAX);
            for (i, &x) in inputs.iter().enumerate() {
                let a = x.abs().min(LLR_CLAMP);
                if a < min1 {
                    min2 = min1;
                    min1 = a;
                    at = i;
                } else if a < min2 {
                    min2 = a;
                }
            }
            for (i, (o, &x)) in out.iter_mut().zip(inputs).enumerate() {
                let flip = negative ^ (x < 0.0);
                let mag = if i == at { min2 } else { min1 }.min(LLR_CLAMP);
                *o = if flip { -mag } else { mag };
            }
        }
    }
}

/// Combination of all inputs.
fn combine_all(rule: CheckRule, inputs: &[Llr]) -> Llr {
    inputs.iter().fold(LLR_CLAMP, |acc, &x| rule.pair(acc, x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheduling {
    /// LDPC-like parallel updates.
    #[default]
    Flooding,
    /// Sequential forward-backward sweeps along the accumulator.
    Turbo,
}

impl FromStr for Scheduling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flooding" => Ok(Self::Flooding),
            "turbo" => Ok(Self::Turbo),
            other => Err(Error::Parameter(format!("unknown scheduling `{other}`"))),
        }
    }
}

impl std::fmt::Display for Scheduling {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Flooding => "flooding",
            Self::Turbo => "turbo",
        })
    }
}

/// When the turbo sweep refreshes information-node beliefs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InfoUpdate {
    /// Once per sweep, after the backward recursion.
    #[default]
    PerSweep,
    /// As soon as each check finishes in the backward recursion, so later
    /// checks of the same sweep see the new beliefs.
    PerCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecoderConfig {
    pub scheduling: Scheduling,
    pub max_iter: usize,
    /// Stop as soon as hard decisions satisfy every check.
    pub early_stop: bool,
    pub rule: CheckRule,
    pub info_update: InfoUpdate,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            scheduling: Scheduling::Flooding,
            max_iter: DEFAULT_ITERATIONS,
            early_stop: false,
            rule: CheckRule::Exact,
            info_update: InfoUpdate::PerSweep,
        }
    }
}

impl DecoderConfig {
    pub fn new(scheduling: Scheduling, max_iter: usize) -> Self {
        Self {
            scheduling,
            max_iter,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    /// Decided information bits, pinned positions included.
    pub hard_bits: Vec<Bit>,
    pub parity_bits: Vec<Bit>,
    pub iterations_used: usize,
    /// Hard decisions satisfy every parity constraint.
    pub converged: bool,
    /// Information-bit posteriors.
    pub posterior: Vec<Llr>,
}

pub fn decode_flooding(code: &IraCode, channel: &[Llr], max_iter: usize) -> Result<DecodeResult> {
    decode(code, channel, &DecoderConfig::new(Scheduling::Flooding, max_iter))
}

pub fn decode_turbo(code: &IraCode, channel: &[Llr], max_iter: usize) -> Result<DecodeResult> {
    decode(code, channel, &DecoderConfig::new(Scheduling::Turbo, max_iter))
}

pub fn decode(code: &IraCode, channel: &[Llr], config: &DecoderConfig) -> Result<DecodeResult> {
    if channel.len() != code.n() {
        return Err(Error::Dimension {
            expected: code.n(),
            actual: channel.len(),
        });
    }
    let mut state = State::new(code, channel, config.rule);
    let mut iterations_used = 0;
    let mut converged = false;
    for it in 0..config.max_iter {
        match config.scheduling {
            Scheduling::Flooding => state.flooding_iteration(),
            Scheduling::Turbo => state.turbo_iteration(config.info_update),
        }
        iterations_used = it + 1;
        if config.early_stop {
            converged = state.satisfied();
            if converged {
                break;
            }
        }
    }
    if !config.early_stop || iterations_used == 0 {
        converged = state.satisfied();
    }
    Ok(state.finish(iterations_used, converged))
}

/// Per-frame message state. Information edges are indexed by combiner slot.
struct State<'a> {
    code: &'a IraCode,
    rule: CheckRule,
    ch_info: Vec<Llr>,
    ch_par: Vec<Llr>,
    /// `Some(llr)` for pinned information nodes
    fixed: Vec<Option<Llr>>,
    /// check -> information node, per slot
    c2v: Vec<Llr>,
    /// information node -> check, per slot
    v2c: Vec<Llr>,
    /// channel plus all incoming check messages, per information node
    totals: Vec<Llr>,
    /// flooding: check `t` -> parity `t`; turbo: forward message into parity `t`
    down: Vec<Llr>,
    /// flooding: check `t + 1` -> parity `t`; turbo: backward message into parity `t`
    up: Vec<Llr>,
    /// turbo: combiner message of each check
    comb: Vec<Llr>,
    inputs: Vec<Llr>,
    outputs: Vec<Llr>,
    scratch: Vec<f64>,
}

impl<'a> State<'a> {
    fn new(code: &'a IraCode, channel: &[Llr], rule: CheckRule) -> Self {
        let k = code.k();
        let m = code.m();
        let mut fixed = vec![None; k];
        for &(pos, bit) in code.pinned() {
            fixed[pos] = Some(if bit == 0 { LLR_CLAMP } else { -LLR_CLAMP });
        }
        let ch_info: Vec<Llr> = channel[..k]
            .iter()
            .zip(&fixed)
            .map(|(&x, f)| f.unwrap_or_else(|| clamp(x)))
            .collect();
        let ch_par = channel[k..].iter().map(|&x| clamp(x)).collect();
        Self {
            code,
            rule,
            totals: ch_info.clone(),
            ch_info,
            ch_par,
            fixed,
            c2v: vec![0.0; code.edges()],
            v2c: vec![0.0; code.edges()],
            down: vec![0.0; m],
            up: vec![0.0; m],
            comb: vec![0.0; m],
            inputs: Vec::with_capacity(8),
            outputs: Vec::with_capacity(8),
            scratch: Vec::with_capacity(8),
        }
    }

    fn refresh_totals(&mut self) {
        for u in 0..self.code.k() {
            self.totals[u] = self.ch_info[u]
                + self.code.info_slots(u).iter().map(|&s| self.c2v[s]).sum::<f64>();
        }
    }

    #[inline]
    fn v2c_of(&self, slot: usize) -> Llr {
        let u = self.code.info_of_slot(slot);
        match self.fixed[u] {
            Some(v) => v,
            None => clamp(self.totals[u] - self.c2v[slot]),
        }
    }

    fn refresh_v2c(&mut self) {
        for slot in 0..self.v2c.len() {
            self.v2c[slot] = self.v2c_of(slot);
        }
    }

    fn flooding_iteration(&mut self) {
        let m = self.code.m();
        self.refresh_v2c();
        // parity-to-check messages from last iteration's check outputs
        let to_own: Vec<Llr> = (0..m)
            .map(|t| clamp(self.ch_par[t] + if t + 1 < m { self.up[t] } else { 0.0 }))
            .collect();
        let to_next: Vec<Llr> = (0..m).map(|t| clamp(self.ch_par[t] + self.down[t])).collect();
        for j in 0..m {
            let slots = self.code.check_slots(j);
            let d = slots.len();
            self.inputs.clear();
            self.inputs.extend_from_slice(&self.v2c[slots.clone()]);
            self.inputs.push(to_own[j]);
            if j > 0 {
                self.inputs.push(to_next[j - 1]);
            }
            self.outputs.clear();
            self.outputs.resize(self.inputs.len(), 0.0);
            extrinsic(self.rule, &self.inputs, &mut self.outputs, &mut self.scratch);
            self.c2v[slots].copy_from_slice(&self.outputs[..d]);
            self.down[j] = self.outputs[d];
            if j > 0 {
                self.up[j - 1] = self.outputs[d + 1];
            }
        }
        self.refresh_totals();
    }

    fn check_c2v(&mut self, j: usize, trellis: Llr) {
        let slots = self.code.check_slots(j);
        let d = slots.len();
        self.inputs.clear();
        self.inputs.extend_from_slice(&self.v2c[slots.clone()]);
        self.inputs.push(trellis);
        self.outputs.clear();
        self.outputs.resize(d + 1, 0.0);
        extrinsic(self.rule, &self.inputs, &mut self.outputs, &mut self.scratch);
        self.c2v[slots].copy_from_slice(&self.outputs[..d]);
    }

    fn turbo_iteration(&mut self, info_update: InfoUpdate) {
        let m = self.code.m();
        let rule = self.rule;
        self.refresh_v2c();
        for j in 0..m {
            self.comb[j] = combine_all(rule, &self.v2c[self.code.check_slots(j)]);
        }
        // forward: down[t] is what checks 0..=t say about parity t
        self.down[0] = self.comb[0];
        for t in 1..m {
            let past = clamp(self.ch_par[t - 1] + self.down[t - 1]);
            self.down[t] = rule.pair(past, self.comb[t]);
        }
        // backward: up[t] is what checks t+1.. say about parity t
        self.up[m - 1] = 0.0;
        for t in (0..m).rev() {
            if info_update == InfoUpdate::PerCheck {
                for slot in self.code.check_slots(t) {
                    self.v2c[slot] = self.v2c_of(slot);
                }
                self.comb[t] = combine_all(rule, &self.v2c[self.code.check_slots(t)]);
            }
            let future = clamp(self.ch_par[t] + self.up[t]);
            let to_comb = if t == 0 {
                future
            } else {
                rule.pair(clamp(self.ch_par[t - 1] + self.down[t - 1]), future)
            };
            if info_update == InfoUpdate::PerCheck {
                let old: Vec<Llr> = self.c2v[self.code.check_slots(t)].to_vec();
                self.check_c2v(t, to_comb);
                for (slot, before) in self.code.check_slots(t).zip(old) {
                    let u = self.code.info_of_slot(slot);
                    self.totals[u] += self.c2v[slot] - before;
                }
            }
            if t > 0 {
                self.up[t - 1] = rule.pair(future, self.comb[t]);
            }
            if info_update == InfoUpdate::PerSweep {
                // stash the trellis-to-combiner message until the sweep ends
                self.comb[t] = to_comb;
            }
        }
        if info_update == InfoUpdate::PerSweep {
            for j in 0..m {
                let to_comb = self.comb[j];
                self.check_c2v(j, to_comb);
            }
            self.refresh_totals();
        }
    }

    fn parity_posterior(&self, t: usize) -> Llr {
        self.ch_par[t] + self.down[t] + self.up[t]
    }

    fn info_posterior(&self, u: usize) -> Llr {
        match self.fixed[u] {
            Some(v) => v,
            None => self.totals[u],
        }
    }

    fn hard_decisions(&self) -> (Vec<Bit>, Vec<Bit>) {
        let info = (0..self.code.k()).map(|u| hard(self.info_posterior(u))).collect();
        let parity = (0..self.code.m()).map(|t| hard(self.parity_posterior(t))).collect();
        (info, parity)
    }

    fn satisfied(&self) -> bool {
        let (info, parity) = self.hard_decisions();
        let mut prev = 0;
        for (j, &p) in parity.iter().enumerate() {
            let c = self.code.check_info(j).iter().fold(0, |acc, &u| acc ^ info[u]);
            if c ^ p ^ prev != 0 {
                return false;
            }
            prev = p;
        }
        true
    }

    fn finish(self, iterations_used: usize, converged: bool) -> DecodeResult {
        let (hard_bits, parity_bits) = self.hard_decisions();
        let posterior = (0..self.code.k()).map(|u| self.info_posterior(u)).collect();
        DecodeResult {
            hard_bits,
            parity_bits,
            iterations_used,
            converged,
            posterior,
        }
    }
}

/// Largest payload the exhaustive oracle accepts.
pub const BRUTE_FORCE_MAX_PAYLOAD: usize = 16;

/// Exact bitwise MAP posteriors of the information bits by enumerating every
/// payload. Pinned positions report `±LLR_CLAMP`.
pub fn brute_force_posteriors(code: &IraCode, channel: &[Llr]) -> Result<Vec<Llr>> {
    if channel.len() != code.n() {
        return Err(Error::Dimension {
            expected: code.n(),
            actual: channel.len(),
        });
    }
    let free = code.payload_len();
    if free > BRUTE_FORCE_MAX_PAYLOAD {
        return Err(Error::Refused(format!(
            "{free} payload bits exceeds the exhaustive limit of {BRUTE_FORCE_MAX_PAYLOAD}"
        )));
    }
    let ch: Vec<Llr> = channel.iter().map(|&x| clamp(x)).collect();
    let k = code.k();
    // log-sum-exp accumulators per bit value
    let mut acc = vec![[f64::NEG_INFINITY; 2]; k];
    let mut payload = vec![0u8; free];
    for word in 0u64..(1u64 << free) {
        for (i, b) in payload.iter_mut().enumerate() {
            *b = ((word >> i) & 1) as u8;
        }
        let info = code.expand_payload(&payload)?;
        let cw = encode_info(code, &info).to_bits();
        let metric: f64 = cw
            .iter()
            .zip(&ch)
            .map(|(&b, &l)| if b == 0 { 0.5 * l } else { -0.5 * l })
            .sum();
        for (a, &bit) in acc.iter_mut().zip(&info) {
            let slot = &mut a[bit as usize];
            *slot = log_add(*slot, metric);
        }
    }
    Ok(acc
        .iter()
        .map(|&[zero, one]| clamp(if zero == one { 0.0 } else { zero - one }))
        .collect())
}

/// Bitwise MAP decisions (ties to 0).
pub fn brute_force_map(code: &IraCode, channel: &[Llr]) -> Result<Vec<Bit>> {
    Ok(brute_force_posteriors(code, channel)?.into_iter().map(hard).collect())
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{build_code, encode, paper_code, RealizedDegrees};
    use crate::interleaver::Permutation;
    use proptest::prelude::*;

    /// `ln((1 + e^(a+b)) / (e^a + e^b))`, the textbook form.
    fn boxplus_reference(a: f64, b: f64) -> f64 {
        ((1.0 + (a + b).exp()) / (a.exp() + b.exp())).ln()
    }

    #[test]
    fn boxplus_laws() {
        for &l in &[-7.5, -1.0, 0.0, 0.3, 4.0, 24.9] {
            assert_eq!(boxplus(l, LLR_CLAMP), l);
            assert_eq!(boxplus(l, -LLR_CLAMP), -l);
            assert_eq!(boxplus(l, 0.0), 0.0);
        }
        // ln((1+e^4)/(2e^2)) = 1.32500274735786443 (30-digit evaluation)
        assert!((boxplus(2.0, 2.0) - 1.325_002_747_357_864_4).abs() < 1e-12);
        assert!((boxplus(2.0, 2.0) - boxplus_reference(2.0, 2.0)).abs() < 1e-12);
    }

    #[test]
    fn extrinsic_matches_pairwise() {
        let inputs = [1.2, -0.4, 3.3, -7.0, 0.9];
        let mut out = [0.0; 5];
        let mut scratch = Vec::new();
        extrinsic(CheckRule::Exact, &inputs, &mut out, &mut scratch);
        for i in 0..inputs.len() {
            let expect = inputs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(LLR_CLAMP, |acc, (_, &x)| boxplus(acc, x));
            assert!((out[i] - expect).abs() < 1e-12, "{i}: {} vs {expect}", out[i]);
        }
        extrinsic(CheckRule::MinSum, &inputs, &mut out, &mut scratch);
        assert_eq!(out, [0.4, -0.9, 0.4, -0.4, 0.4]);
    }

    #[test]
    fn extrinsic_with_erasure_and_certainty() {
        let mut out = [0.0; 3];
        let mut scratch = Vec::new();
        extrinsic(CheckRule::Exact, &[0.0, 2.0, -3.0], &mut out, &mut scratch);
        assert_eq!(out[1], 0.0);
        assert_eq!(out[2], 0.0);
        assert!((out[0] - boxplus(2.0, -3.0)).abs() < 1e-12);
        extrinsic(CheckRule::Exact, &[LLR_CLAMP, -LLR_CLAMP, 1.5], &mut out, &mut scratch);
        assert_eq!(out[2], -LLR_CLAMP);
        assert!((out[0] + 1.5).abs() < 1e-12);
    }

    fn tiny_chain() -> IraCode {
        build_code(&RealizedDegrees { rep_degree: vec![1] }, &Permutation::identity(1), &[1], &[]).unwrap()
    }

    #[test]
    fn brute_force_repetition_example() {
        let code = tiny_chain();
        assert_eq!(brute_force_map(&code, &[1.0, -3.0]).unwrap(), vec![1]);
        let post = brute_force_posteriors(&code, &[1.0, -3.0]).unwrap();
        assert!((post[0] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn brute_force_refuses_large_payloads() {
        let code = paper_code();
        assert!(matches!(
            brute_force_map(&code, &vec![0.0; 768]),
            Err(Error::Refused(_))
        ));
    }

    #[test]
    fn dimension_mismatch() {
        let code = tiny_chain();
        assert!(matches!(
            decode_turbo(&code, &[1.0], 1),
            Err(Error::Dimension { .. })
        ));
    }

    fn clean_llrs(bits: &[Bit]) -> Vec<Llr> {
        bits.iter().map(|&b| if b == 0 { 20.0 } else { -20.0 }).collect()
    }

    #[test]
    fn noiseless_paper_frame() {
        let code = paper_code();
        let payload: Vec<Bit> = (0..184).map(|i| ((i * 7 + 3) % 5 == 0) as u8).collect();
        let cw = encode(&code, &payload).unwrap();
        let llrs = clean_llrs(&cw.to_bits());
        for scheduling in [Scheduling::Flooding, Scheduling::Turbo] {
            let cfg = DecoderConfig {
                early_stop: true,
                ..DecoderConfig::new(scheduling, 72)
            };
            let r = decode(&code, &llrs, &cfg).unwrap();
            assert!(r.converged);
            assert_eq!(r.iterations_used, 1);
            assert_eq!(r.hard_bits, cw.systematic);
            assert_eq!(r.parity_bits, cw.parity);
        }
    }

    #[test]
    fn erasure_fixpoint() {
        let code = paper_code();
        for scheduling in [Scheduling::Flooding, Scheduling::Turbo] {
            let r = decode(&code, &vec![0.0; 768], &DecoderConfig::new(scheduling, 5)).unwrap();
            for &(p, _) in code.pinned() {
                assert_eq!(r.posterior[p], -LLR_CLAMP);
            }
            assert!(!r.converged);
            assert_eq!(r.iterations_used, 5);
        }
    }

    #[test]
    fn per_check_turbo_decodes_clean_frame() {
        let code = paper_code();
        let cw = encode(&code, &vec![1; 184]).unwrap();
        let cfg = DecoderConfig {
            info_update: InfoUpdate::PerCheck,
            ..DecoderConfig::new(Scheduling::Turbo, 3)
        };
        let r = decode(&code, &clean_llrs(&cw.to_bits()), &cfg).unwrap();
        assert!(r.converged);
        assert_eq!(r.hard_bits, cw.systematic);
    }

    #[test]
    fn min_sum_decodes_clean_frame() {
        let code = paper_code();
        let cw = encode(&code, &vec![0; 184]).unwrap();
        let cfg = DecoderConfig {
            rule: CheckRule::MinSum,
            ..DecoderConfig::new(Scheduling::Flooding, 3)
        };
        let r = decode(&code, &clean_llrs(&cw.to_bits()), &cfg).unwrap();
        assert_eq!(r.hard_bits, cw.systematic);
    }

    proptest! {
        #[test]
        fn boxplus_matches_reference(a in -20.0f64..20.0, b in -20.0f64..20.0) {
            prop_assert!((boxplus(a, b) - boxplus_reference(a, b)).abs() < 1e-9);
        }

        #[test]
        fn boxplus_algebra(a in -24.0f64..24.0, b in -24.0f64..24.0, c in -24.0f64..24.0) {
            prop_assert!((boxplus(a, b) - boxplus(b, a)).abs() <= 1e-12);
            prop_assert!((boxplus(boxplus(a, b), c) - boxplus(a, boxplus(b, c))).abs() <= 1e-12);
            prop_assert!(boxplus(a, b).abs() <= a.abs().min(b.abs()) + 2f64.ln());
        }
    }
}
