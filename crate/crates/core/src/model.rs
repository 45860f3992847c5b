//! Binary strings under the null, planted and deletion-channel laws.
//!
//! Every sampler is a pure function of its arguments and a [`Seed`]. A seed
//! selects one ChaCha8 keystream: the master value keys the generator and the
//! stream value picks one of its 2^64 independent streams.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alignment::displacement;
use crate::bitstring::BitString;
use crate::error::{check_closed_unit, Error, Result};

/// Identifies one reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Seed {
    pub master: u64,
    pub stream: u64,
}

impl Seed {
    pub fn new(master: u64, stream: u64) -> Self {
        Self { master, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }

    /// A seed for item `index` nested under this one.
    ///
    /// Children of distinct parents land on distinct master keys, so nested
    /// indices never collide with the parent's own stream.
    pub fn child(&self, index: u64) -> Seed {
        Seed { master: splitmix64(self.master ^ splitmix64(self.stream.wrapping_add(1))), stream: index }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The law a [`Disorder`] was drawn from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Law {
    Null,
    Planted,
    Channel { p: f64 },
}

/// An ambient string `x`, a candidate subsequence `y` and the law that produced them.
///
/// For the planted law `planted_embedding` holds the hidden positions and
/// `y == x.select(planted_embedding)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Disorder {
    x: BitString,
    y: BitString,
    law: Law,
    planted_embedding: Option<Vec<usize>>,
}

impl Disorder {
    pub fn x(&self) -> &BitString {
        &self.x
    }

    pub fn y(&self) -> &BitString {
        &self.y
    }

    pub fn law(&self) -> Law {
        self.law
    }

    pub fn planted_embedding(&self) -> Option<&[usize]> {
        self.planted_embedding.as_deref()
    }

    pub fn into_strings(self) -> (BitString, BitString) {
        (self.x, self.y)
    }
}

pub(crate) fn uniform_string(n: usize, rng: &mut impl RngCore) -> BitString {
    let words = (0..n.div_ceil(64)).map(|_| rng.next_u64()).collect();
    BitString::from_words(words, n)
}

/// Uniform `m`-subset of `0..n` in increasing order: partial Fisher–Yates, then sort.
pub(crate) fn uniform_subset(n: usize, m: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..m {
        let j = rng.random_range(i..n);
        idx.swap(i, j);
    }
    idx.truncate(m);
    idx.sort_unstable();
    idx
}

fn check_dims(n: usize, m: usize) -> Result<()> {
    if m > n {
        Err(Error::InvalidDimensions { n, m })
    } else {
        Ok(())
    }
}

pub fn sample_uniform_string(n: usize, seed: Seed) -> BitString {
    uniform_string(n, &mut seed.rng())
}

/// Independent uniform `x` of length `n` and `y` of length `m`.
pub fn sample_null(n: usize, m: usize, seed: Seed) -> Result<Disorder> {
    check_dims(n, m)?;
    let mut rng = seed.rng();
    let x = uniform_string(n, &mut rng);
    let y = uniform_string(m, &mut rng);
    Ok(Disorder { x, y, law: Law::Null, planted_embedding: None })
}

/// Uniform `x` and `y = x` restricted to a uniform `m`-subset of positions.
pub fn sample_planted(n: usize, m: usize, seed: Seed) -> Result<Disorder> {
    check_dims(n, m)?;
    let mut rng = seed.rng();
    let x = uniform_string(n, &mut rng);
    let sigma = uniform_subset(n, m, &mut rng);
    let y = x.select(&sigma);
    Ok(Disorder { x, y, law: Law::Planted, planted_embedding: Some(sigma) })
}

fn delete_bits(x: &BitString, p: f64, rng: &mut impl Rng) -> BitString {
    x.iter().filter(|_| rng.random::<f64>() >= p).collect()
}

/// Pass `x` through a binary deletion channel with deletion probability `p`.
pub fn deletion_channel(x: &BitString, p: f64, seed: Seed) -> Result<BitString> {
    check_closed_unit("deletion probability", p)?;
    Ok(delete_bits(x, p, &mut seed.rng()))
}

/// Uniform `x` of length `n` and its deletion-channel output `y`.
pub fn sample_channel(n: usize, p: f64, seed: Seed) -> Result<Disorder> {
    check_closed_unit("deletion probability", p)?;
    let mut rng = seed.rng();
    let x = uniform_string(n, &mut rng);
    let y = delete_bits(&x, p, &mut rng);
    Ok(Disorder { x, y, law: Law::Channel { p }, planted_embedding: None })
}

/// Whether at least a tenth of the `floor(|x| / b)` length-`b` blocks have displacement at least `sqrt(b)`.
///
/// Trailing bits past the last full block are ignored. The threshold is
/// checked as `Δ² >= b` in integers.
pub fn is_typical(x: &BitString, b: usize) -> Result<bool> {
    if b == 0 || b > x.len() {
        return Err(Error::InvalidBlockLength { b, len: x.len() });
    }
    let blocks = x.len() / b;
    let strong = (0..blocks)
        .filter(|&i| {
            let d = displacement(&x.slice(i * b, (i + 1) * b));
            d * d >= b
        })
        .count();
    Ok(10 * strong >= blocks)
}
