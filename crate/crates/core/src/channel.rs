//! BPSK over AWGN with reproducible per-frame noise streams.

use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::decoder::{Llr, LLR_CLAMP};
use crate::{Bit, Error, Result};

/// Which bits count toward Eb.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EbAccounting {
    /// Only the free payload bits (pins and tails are overhead).
    #[default]
    Payload,
    /// All information bits of the frame, including pinned bits.
    Frame,
}

impl FromStr for EbAccounting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "payload" => Ok(Self::Payload),
            "frame" => Ok(Self::Frame),
            other => Err(Error::Config(format!("unknown eb_accounting `{other}`"))),
        }
    }
}

impl std::fmt::Display for EbAccounting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Payload => "payload",
            Self::Frame => "frame",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub ebno_db: f64,
    pub sigma: f64,
    pub info_bits: usize,
    pub channel_bits: usize,
}

impl ChannelParams {
    pub fn new(ebno_db: f64, info_bits: usize, channel_bits: usize) -> Self {
        Self {
            ebno_db,
            sigma: ebno_to_sigma(ebno_db, info_bits, channel_bits),
            info_bits,
            channel_bits,
        }
    }

    pub fn rate(&self) -> f64 {
        self.info_bits as f64 / self.channel_bits as f64
    }
}

/// Noise standard deviation for unit-energy symbols:
/// `sigma^2 = 1 / (2 R Eb/N0)` with `R = info_bits / channel_bits`.
pub fn ebno_to_sigma(ebno_db: f64, info_bits: usize, channel_bits: usize) -> f64 {
    let rate = info_bits as f64 / channel_bits as f64;
    let ebno = 10f64.powf(ebno_db / 10.0);
    (1.0 / (2.0 * rate * ebno)).sqrt()
}

/// 0 -> +1, 1 -> -1.
pub fn modulate(bits: &[Bit]) -> Vec<f64> {
    bits.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect()
}

pub fn add_noise<R: Rng + ?Sized>(symbols: &[f64], sigma: f64, rng: &mut R) -> Vec<f64> {
    if sigma == 0.0 {
        return symbols.to_vec();
    }
    symbols
        .iter()
        .map(|&x| {
            let n: f64 = rng.sample(StandardNormal);
            x + sigma * n
        })
        .collect()
}

/// `2y / sigma^2`; with `sigma == 0` the sign of `y` is taken as certain.
pub fn llr(y: f64, sigma: f64) -> Llr {
    if sigma == 0.0 {
        if y == 0.0 {
            0.0
        } else {
            LLR_CLAMP.copysign(y)
        }
    } else {
        2.0 * y / (sigma * sigma)
    }
}

pub fn llrs(observations: &[f64], sigma: f64) -> Vec<Llr> {
    observations.iter().map(|&y| llr(y, sigma)).collect()
}

/// Hard decision by sign (ties to 0).
pub fn slice(observations: &[f64]) -> Vec<Bit> {
    observations.iter().map(|&y| u8::from(y < 0.0)).collect()
}

/// Independent random stream for one frame of one SNR point.
///
/// The stream only depends on its coordinates, so frames can be simulated in
/// any order and on any number of workers.
pub fn frame_rng(seed: u64, point: usize, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point as u64) << 40) ^ frame);
    rng
}

pub fn random_bits<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<Bit> {
    (0..len).map(|_| rng.random_range(0..2u8)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulation() {
        assert_eq!(modulate(&[0, 1, 0]), vec![1.0, -1.0, 1.0]);
        assert_eq!(modulate(&[0; 3]), vec![1.0; 3]);
        let bits = vec![1, 0, 0, 1, 1];
        assert_eq!(slice(&add_noise(&modulate(&bits), 0.0, &mut frame_rng(1, 0, 0))), bits);
    }

    #[test]
    fn llr_examples() {
        assert!((llr(1.0, 0.5f64.sqrt()) - 4.0).abs() < 1e-12);
        assert_eq!(llr(0.0, 1.0), 0.0);
        assert_eq!(llr(-0.25, 1.0), -0.5);
        assert_eq!(llr(-0.1, 0.0), -LLR_CLAMP);
        assert_eq!(llr(0.3, 0.0), LLR_CLAMP);
        // odd in y, scales as 1 / sigma^2
        assert_eq!(llr(0.7, 0.8), -llr(-0.7, 0.8));
        assert!((llr(0.7, 0.4) - 4.0 * llr(0.7, 0.8)).abs() < 1e-12);
    }

    #[test]
    fn sigma_examples() {
        assert!((ebno_to_sigma(0.0, 1, 2) - 1.0).abs() < 1e-12);
        assert!((ebno_to_sigma(0.0, 1, 4) - 2f64.sqrt()).abs() < 1e-12);
        let ratio = ebno_to_sigma(1.0, 1, 4) / ebno_to_sigma(1.0 + 10.0 * 2f64.log10(), 1, 4);
        assert!((ratio - 2f64.sqrt()).abs() < 1e-12);
        let p = ChannelParams::new(0.0, 1, 4);
        assert_eq!(p.rate(), 0.25);
    }

    #[test]
    fn noise_statistics() {
        let sigma = 0.7;
        let n = 1_000_000;
        let mut rng = frame_rng(42, 0, 0);
        let y = add_noise(&vec![0.0; n], sigma, &mut rng);
        let mean = y.iter().sum::<f64>() / n as f64;
        let var = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 5.0 * sigma / 1e3, "mean {mean}");
        assert!((var / (sigma * sigma) - 1.0).abs() < 0.01, "var {var}");
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = random_bits(64, &mut frame_rng(7, 1, 3));
        let b = random_bits(64, &mut frame_rng(7, 1, 3));
        let c = random_bits(64, &mut frame_rng(7, 1, 4));
        let d = random_bits(64, &mut frame_rng(7, 2, 3));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn accounting_parse() {
        assert_eq!("payload".parse::<EbAccounting>().unwrap(), EbAccounting::Payload);
        assert_eq!("frame".parse::<EbAccounting>().unwrap(), EbAccounting::Frame);
        assert!("x".parse::<EbAccounting>().is_err());
    }
}
