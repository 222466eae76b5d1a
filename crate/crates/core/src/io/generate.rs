//! Platform-stable random data.
//!
//! Generator: ChaCha8 seeded with `seed_from_u64`. Uniforms are
//! `(next_u64 >> 11) * 2^-53`, in `[0, 1)`. Normals come in pairs from the
//! Marsaglia polar method on `2U - 1`; the second value of each pair is used
//! before a new pair is drawn. The only non-elementary operation is `ln`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::PointCloud;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform01<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal variates by the polar method.
#[derive(Clone, Debug, Default)]
pub struct NormalStream {
    spare: Option<f64>,
}

impl NormalStream {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn next<R: RngCore + ?Sized>(&mut self, rng: &mut R) -> f64 {
        if let Some(v) = self.spare.take() {
            return v;
        }
        loop {
            let u = 2.0 * uniform01(rng) - 1.0;
            let v = 2.0 * uniform01(rng) - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }
}

/// `n` i.i.d. standard normal points in R^p, row by row.
pub fn generate_gaussian(n: usize, p: usize, seed: u64) -> Result<PointCloud> {
    let mut rng = seeded_rng(seed);
    let mut normals = NormalStream::new();
    let coords = (0..n * p).map(|_| normals.next(&mut rng)).collect();
    PointCloud::from_flat(p, coords)
}

/// Uniform direction on the unit sphere in R^p.
pub fn random_unit_vector<R: RngCore + ?Sized>(rng: &mut R, p: usize) -> Vec<f64> {
    let mut normals = NormalStream::new();
    loop {
        let v: Vec<f64> = (0..p).map(|_| normals.next(rng)).collect();
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 1e-8 {
            return v.into_iter().map(|x| x / len).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_cloud() {
        let a = generate_gaussian(40, 3, 1).unwrap();
        let b = generate_gaussian(40, 3, 1).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate_gaussian(40, 3, 2).unwrap());
    }

    #[test]
    fn sample_means_are_small() {
        let n = 5120;
        let cloud = generate_gaussian(n, 3, 11).unwrap();
        for j in 0..3 {
            let mean = cloud.points().map(|x| x[j]).sum::<f64>() / n as f64;
            assert!(mean.abs() < 5.0 / (n as f64).sqrt());
        }
    }

    #[test]
    fn unit_vectors_have_unit_length() {
        let mut rng = seeded_rng(3);
        for p in 2..6 {
            let v = random_unit_vector(&mut rng, p);
            let len: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((len - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn uniforms_in_unit_interval() {
        let mut rng = seeded_rng(0);
        for _ in 0..1000 {
            let u = uniform01(&mut rng);
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn frozen_stream() {
        // Bit patterns of the documented generator at seed 42; a change here
        // breaks reproducibility of every published run.
        let a = generate_gaussian(3, 2, 42).unwrap();
        let bits: Vec<u64> = a.points().flat_map(|x| x.iter().map(|v| v.to_bits())).collect();
        assert_eq!(
            bits,
            vec![
                4593777358611831395,
                4599376719253418024,
                13830986477247399585,
                4611351171481053936,
                13825395772567733866,
                13828461871824831051,
            ]
        );
    }
}
