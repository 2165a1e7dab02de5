use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ira_fec::baseline::{conv_encode_frame, viterbi_decode_frame, ConvCodeSpec};
use ira_fec::channel::{add_noise, ebno_to_sigma, llrs, modulate, random_bits};

#[test]
fn clean_random_payloads_decode() {
    let spec = ConvCodeSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..1000 {
        let payload = random_bits(192, &mut rng);
        let ch = llrs(&modulate(&conv_encode_frame(&spec, &payload).unwrap()), 0.0);
        assert_eq!(viterbi_decode_frame(&spec, &ch).unwrap(), payload);
    }
}

#[test]
fn every_single_flip_is_corrected() {
    let spec = ConvCodeSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..3 {
        let payload = random_bits(192, &mut rng);
        let clean: Vec<f64> = modulate(&conv_encode_frame(&spec, &payload).unwrap());
        for i in 0..800 {
            let mut ch = clean.clone();
            ch[i] = -ch[i];
            assert_eq!(viterbi_decode_frame(&spec, &ch).unwrap(), payload, "flip {i}");
        }
    }
}

#[test]
fn high_snr_frames_are_error_free() {
    let spec = ConvCodeSpec::default();
    let sigma = ebno_to_sigma(6.0, 192, 800);
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..200 {
        let payload = random_bits(192, &mut rng);
        let y = add_noise(&modulate(&conv_encode_frame(&spec, &payload).unwrap()), sigma, &mut rng);
        assert_eq!(viterbi_decode_frame(&spec, &llrs(&y, sigma)).unwrap(), payload);
    }
}
