//! Ground-truth multipath channels and the CIR <-> CFR transforms.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrixkit::C64;

/// Ground-truth channel pair for one trial: source-to-destination (intended)
/// and destination-to-destination (self-interference) impulse and frequency
/// responses.
#[derive(Clone, Debug)]
pub struct ChannelPair {
    pub h_sd: Vec<C64>,
    pub h_dd: Vec<C64>,
    pub cfr_sd: Vec<C64>,
    pub cfr_dd: Vec<C64>,
    pub n: usize,
    pub l: usize,
}

fn check_lengths(l: usize, n: usize) -> Result<()> {
    if l == 0 || n == 0 {
        return Err(Error::Dimension("channel sizes must be >= 1".into()));
    }
    if l > n {
        return Err(Error::Dimension(format!(
            "CP length L = {l} exceeds subcarrier count N = {n}"
        )));
    }
    Ok(())
}

/// Channel frequency response from an L-tap impulse response:
/// H = F_{NxL} h, computed directly without forming the DFT matrix.
pub fn cir_to_cfr(h: &[C64], n: usize) -> Result<Vec<C64>> {
    let l = h.len();
    check_lengths(l, n)?;
    let scale = 1.0 / (n as f64).sqrt();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (m, o) in out.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (k, &tap) in h.iter().enumerate() {
            let angle = -2.0 * PI * ((m * k) % n) as f64 / n as f64;
            acc += tap * C64::from_polar(1.0, angle);
        }
        *o = acc * scale;
    }
    Ok(out)
}

/// First L entries of the inverse DFT of a frequency response: the estimated
/// impulse response truncated to the cyclic-prefix length.
pub fn cfr_to_cir(cfr: &[C64], l: usize) -> Result<Vec<C64>> {
    let n = cfr.len();
    check_lengths(l, n)?;
    let scale = 1.0 / (n as f64).sqrt();
    let mut out = vec![C64::new(0.0, 0.0); l];
    for (k, o) in out.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (m, &x) in cfr.iter().enumerate() {
            let angle = 2.0 * PI * ((m * k) % n) as f64 / n as f64;
            acc += x * C64::from_polar(1.0, angle);
        }
        *o = acc * scale;
    }
    Ok(out)
}

fn sample_taps(l: usize, rng: &mut impl Rng) -> Vec<C64> {
    // i.i.d. circular complex Gaussian taps, total expected power 1
    // (uniform power-delay profile: variance 1/L per tap).
    let sigma = (0.5 / l as f64).sqrt();
    (0..l)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * sigma, im * sigma)
        })
        .collect()
}

/// Draw a fresh Rayleigh channel pair with unit expected total power per
/// channel. Channels are constant within a trial.
pub fn sample_channel_pair(n: usize, l: usize, rng: &mut impl Rng) -> Result<ChannelPair> {
    check_lengths(l, n)?;
    let h_sd = sample_taps(l, rng);
    let h_dd = sample_taps(l, rng);
    let cfr_sd = cir_to_cfr(&h_sd, n)?;
    let cfr_dd = cir_to_cfr(&h_dd, n)?;
    Ok(ChannelPair {
        h_sd,
        h_dd,
        cfr_sd,
        cfr_dd,
        n,
        l,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn energy(v: &[C64]) -> f64 {
        v.iter().map(|z| z.norm_sqr()).sum()
    }

    #[test]
    fn first_basis_tap_gives_flat_response() {
        let h = vec![c(1.0, 0.0)];
        let cfr = cir_to_cfr(&h, 8).unwrap();
        let expect = 1.0 / 8f64.sqrt();
        for z in cfr {
            assert!((z - c(expect, 0.0)).norm() <= 1e-12);
        }
    }

    #[test]
    fn zero_taps_give_zero_response() {
        let h = vec![c(0.0, 0.0); 3];
        let cfr = cir_to_cfr(&h, 6).unwrap();
        assert!(energy(&cfr) == 0.0);
    }

    #[test]
    fn two_tap_hand_oracle() {
        // h = [1, 1], N = 4: H = (1/2) [2, 1-j, 0, 1+j].
        let h = vec![c(1.0, 0.0), c(1.0, 0.0)];
        let cfr = cir_to_cfr(&h, 4).unwrap();
        let expected = [c(1.0, 0.0), c(0.5, -0.5), c(0.0, 0.0), c(0.5, 0.5)];
        for (got, want) in cfr.iter().zip(&expected) {
            assert!((got - want).norm() <= 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn rejects_too_many_taps() {
        assert!(cir_to_cfr(&[c(1.0, 0.0); 5], 4).is_err());
        assert!(cfr_to_cir(&[c(1.0, 0.0); 4], 5).is_err());
    }

    #[test]
    fn round_trip_recovers_taps() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (n, l) in [(4usize, 2usize), (16, 5), (64, 16), (256, 64)] {
            let pair = sample_channel_pair(n, l, &mut rng).unwrap();
            let back = cfr_to_cir(&pair.cfr_sd, l).unwrap();
            let err: f64 = back
                .iter()
                .zip(&pair.h_sd)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err <= 1e-10, "N={n} L={l}: {err}");
        }
    }

    #[test]
    fn dc_response_inverts_to_impulse() {
        let n = 9;
        let cfr = vec![c(1.0, 0.0); n];
        let cir = cfr_to_cir(&cfr, 4).unwrap();
        assert!((cir[0] - c((n as f64).sqrt(), 0.0)).norm() <= 1e-12);
        for z in &cir[1..] {
            assert!(z.norm() <= 1e-12);
        }
    }

    #[test]
    fn full_length_inverse_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 12;
        let cfr: Vec<C64> = (0..n)
            .map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let cir = cfr_to_cir(&cfr, n).unwrap();
        let f = crate::matrixkit::dft_matrix(n);
        let oracle = f.herm().matvec(&cfr).unwrap();
        for (a, b) in cir.iter().zip(&oracle) {
            assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn transform_preserves_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pair = sample_channel_pair(32, 7, &mut rng).unwrap();
        assert!((energy(&pair.cfr_dd) - energy(&pair.h_dd)).abs() <= 1e-10);
    }

    #[test]
    fn sampler_is_deterministic() {
        let a = sample_channel_pair(16, 4, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        let b = sample_channel_pair(16, 4, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        assert_eq!(a.h_sd, b.h_sd);
        assert_eq!(a.cfr_dd, b.cfr_dd);
    }

    #[test]
    fn sampler_has_unit_expected_power() {
        // Monte Carlo against the stated prior; 1e5 draws put the standard
        // error of the mean around 1/sqrt(1e5), so a 3-sigma band is ~1%.
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        let trials = 100_000;
        let l = 4;
        let mut acc_h = 0.0;
        let mut acc_cfr = 0.0;
        for _ in 0..trials {
            let taps = sample_taps(l, &mut rng);
            acc_h += energy(&taps);
            // Parseval: checking CFR energy on a subsample is enough.
        }
        acc_h /= trials as f64;
        assert!((acc_h - 1.0).abs() <= 0.01, "mean tap energy {acc_h}");

        let trials_cfr = 2_000;
        for _ in 0..trials_cfr {
            let pair = sample_channel_pair(16, l, &mut rng).unwrap();
            acc_cfr += energy(&pair.cfr_sd);
        }
        acc_cfr /= trials_cfr as f64;
        assert!((acc_cfr - 1.0).abs() <= 0.1, "mean CFR energy {acc_cfr}");
    }
}
