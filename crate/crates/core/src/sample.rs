//! Deterministic seeded sampling of points, pairs and triples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GeomError, Result};
use crate::point::{Aabb, Point};

/// Everything a sampling run depends on. Identical configs produce
/// identical samples.
#[derive(Clone, Debug)]
pub struct SampleConfig {
    pub seed: u64,
    pub n_points: usize,
    pub n_pairs: usize,
    pub n_triples: usize,
    pub bbox: Aabb,
}

/// A seeded sample: a point pool plus pair/triple index draws into it.
/// Within each draw the indices are distinct (drawn without
/// replacement).
#[derive(Clone, Debug)]
pub struct SampleSet {
    pub points: Vec<Point>,
    pub pairs: Vec<(usize, usize)>,
    pub triples: Vec<(usize, usize, usize)>,
}

impl SampleSet {
    pub fn pair(&self, k: usize) -> (&Point, &Point) {
        let (i, j) = self.pairs[k];
        (&self.points[i], &self.points[j])
    }

    pub fn triple(&self, k: usize) -> (&Point, &Point, &Point) {
        let (i, j, l) = self.triples[k];
        (&self.points[i], &self.points[j], &self.points[l])
    }

    pub fn pair_points(&self) -> Vec<(Point, Point)> {
        self.pairs
            .iter()
            .map(|&(i, j)| (self.points[i].clone(), self.points[j].clone()))
            .collect()
    }

    pub fn triple_points(&self) -> Vec<(Point, Point, Point)> {
        self.triples
            .iter()
            .map(|&(i, j, l)| {
                (
                    self.points[i].clone(),
                    self.points[j].clone(),
                    self.points[l].clone(),
                )
            })
            .collect()
    }
}

/// Draw uniform points in the box from a seeded generator, then draw
/// pair and triple indices from the pool.
pub fn sample(config: &SampleConfig) -> Result<SampleSet> {
    if config.n_pairs > 0 && config.n_points < 2 {
        return Err(GeomError::InvalidArgument(
            "pair draws need a pool of at least 2 points".into(),
        ));
    }
    if config.n_triples > 0 && config.n_points < 3 {
        return Err(GeomError::InvalidArgument(
            "triple draws need a pool of at least 3 points".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let dim = config.bbox.dim();
    let mut points = Vec::with_capacity(config.n_points);
    for _ in 0..config.n_points {
        let coords = (0..dim)
            .map(|axis| {
                let (lo, hi) = config.bbox.interval(axis);
                rng.gen_range(lo..=hi)
            })
            .collect();
        points.push(Point::new(coords)?);
    }

    let n = config.n_points;
    let mut pairs = Vec::with_capacity(config.n_pairs);
    for _ in 0..config.n_pairs {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        pairs.push((i, j));
    }

    let mut triples = Vec::with_capacity(config.n_triples);
    for _ in 0..config.n_triples {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let mut l = rng.gen_range(0..n - 2);
        for taken in [i.min(j), i.max(j)] {
            if l >= taken {
                l += 1;
            }
        }
        triples.push((i, j, l));
    }

    Ok(SampleSet {
        points,
        pairs,
        triples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::aabb2;

    fn config(seed: u64) -> SampleConfig {
        SampleConfig {
            seed,
            n_points: 30,
            n_pairs: 50,
            n_triples: 50,
            bbox: aabb2((0.0, 1.0), (0.0, 1.0)),
        }
    }

    #[test]
    fn identical_configs_reproduce() {
        let a = sample(&config(42)).unwrap();
        let b = sample(&config(42)).unwrap();
        assert_eq!(a.points, b.points);
        assert_eq!(a.pairs, b.pairs);
        assert_eq!(a.triples, b.triples);
    }

    #[test]
    fn different_seeds_differ() {
        let a = sample(&config(42)).unwrap();
        let b = sample(&config(43)).unwrap();
        assert_ne!(a.points[0], b.points[0]);
    }

    #[test]
    fn draws_are_without_replacement() {
        let s = sample(&config(7)).unwrap();
        assert!(s.pairs.iter().all(|(i, j)| i != j));
        assert!(s
            .triples
            .iter()
            .all(|(i, j, l)| i != j && j != l && i != l));
    }

    #[test]
    fn counts_are_respected_and_zero_is_fine() {
        let mut c = config(1);
        c.n_pairs = 0;
        c.n_triples = 0;
        let s = sample(&c).unwrap();
        assert_eq!(s.points.len(), 30);
        assert!(s.pairs.is_empty());
        assert!(s.triples.is_empty());
    }

    #[test]
    fn points_stay_in_the_box() {
        let s = sample(&config(9)).unwrap();
        for p in &s.points {
            assert!(p.coord(0) >= 0.0 && p.coord(0) <= 1.0);
            assert!(p.coord(1) >= 0.0 && p.coord(1) <= 1.0);
        }
    }

    #[test]
    fn tiny_pools_are_rejected() {
        let mut c = config(1);
        c.n_points = 1;
        assert!(sample(&c).is_err());
        c.n_points = 2;
        c.n_pairs = 1;
        c.n_triples = 0;
        assert!(sample(&c).is_ok());
    }
}
