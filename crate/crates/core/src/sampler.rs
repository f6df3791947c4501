//! Uniform sampling of models from a count-annotated diagram.
//!
//! Randomness comes from a [`Coin`]. The default coin wraps ChaCha20
//! seeded with a `u64`, so a seed fixes the whole sample stream on every
//! platform.

use num_bigint::BigUint;
use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::counter::{ct, CountAnnotation, CountError, ModelCount};
use crate::diagram::{Diagram, Node, NodeId};
use crate::formula::{Assignment, Lit, Var};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SampleError {
    #[error("diagram has no models")]
    Inconsistent,
    #[error("Bernoulli denominator is zero")]
    ZeroDenominator,
    #[error("Bernoulli numerator exceeds denominator")]
    NotAProbability,
    #[error("sampling reached node {0} with zero count")]
    ZeroCount(NodeId),
    #[error("variable {0} bound twice")]
    Rebound(Var),
    #[error(transparent)]
    Count(#[from] CountError),
}

/// Source of random choices.
pub trait Coin {
    fn fair(&mut self) -> bool;
    /// True with probability exactly `num / den`.
    fn bernoulli(&mut self, num: &ModelCount, den: &ModelCount) -> Result<bool, SampleError>;
}

/// Generator used for seeded sampling.
pub type SampleRng = ChaCha20Rng;

pub fn seeded_rng(seed: u64) -> SampleRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Coin backed by a random number generator. A fair bit is the low bit of
/// one `u64` draw.
#[derive(Clone, Debug)]
pub struct RngCoin<R>(pub R);

impl RngCoin<SampleRng> {
    pub fn seeded(seed: u64) -> RngCoin<SampleRng> {
        RngCoin(seeded_rng(seed))
    }
}

impl<R: RngCore> Coin for RngCoin<R> {
    fn fair(&mut self) -> bool {
        self.0.next_u64() & 1 == 1
    }

    fn bernoulli(&mut self, num: &ModelCount, den: &ModelCount) -> Result<bool, SampleError> {
        exact_bernoulli(&mut self.0, num, den)
    }
}

/// Uniform integer in `[0, bound)` by rejection. Each attempt draws
/// `ceil(bits / 64)` words, least significant first, and masks the top
/// word to the bit length of `bound`.
pub fn uniform_below<R: RngCore>(rng: &mut R, bound: &BigUint) -> BigUint {
    let bits = bound.bits();
    let words = bits.div_ceil(64) as usize;
    let top_bits = bits - 64 * (words as u64 - 1);
    let mask = if top_bits == 64 { u64::MAX } else { (1u64 << top_bits) - 1 };
    loop {
        let mut digits: Vec<u64> = (0..words).map(|_| rng.next_u64()).collect();
        digits[words - 1] &= mask;
        let candidate = BigUint::from_slice(
            &digits
                .iter()
                .flat_map(|d| [*d as u32, (*d >> 32) as u32])
                .collect::<Vec<u32>>(),
        );
        if &candidate < bound {
            return candidate;
        }
    }
}

/// True with probability exactly `num / den`, without floating point.
pub fn exact_bernoulli<R: RngCore>(rng: &mut R, num: &ModelCount, den: &ModelCount) -> Result<bool, SampleError> {
    if den.is_zero() {
        return Err(SampleError::ZeroDenominator);
    }
    if num > den {
        return Err(SampleError::NotAProbability);
    }
    if num.is_zero() {
        return Ok(false);
    }
    if num == den {
        return Ok(true);
    }
    let e = num.exp2().min(den.exp2());
    let a = num.mantissa() << (num.exp2() - e) as u64;
    let b = den.mantissa() << (den.exp2() - e) as u64;
    Ok(uniform_below(rng, &b) < a)
}

/// Draws models of a diagram over its declared variables, each with
/// probability `1 / CT(root)`.
#[derive(Clone, Debug)]
pub struct Sampler<'d> {
    diagram: &'d Diagram,
    counts: CountAnnotation,
}

impl<'d> Sampler<'d> {
    pub fn new(diagram: &'d Diagram) -> Result<Sampler<'d>, SampleError> {
        let counts = ct(diagram, diagram.num_vars())?;
        Ok(Sampler { diagram, counts })
    }

    pub fn counts(&self) -> &CountAnnotation {
        &self.counts
    }

    pub fn root_count(&self) -> &ModelCount {
        self.counts.get(self.diagram.root())
    }

    /// One model; variables not bound by the traversal get a fair bit each
    /// in ascending order.
    pub fn sample<C: Coin>(&self, coin: &mut C) -> Result<Assignment, SampleError> {
        let root = self.diagram.root();
        if self.counts.get(root).is_zero() {
            return Err(SampleError::Inconsistent);
        }
        let mut omega = Assignment::new(self.diagram.num_vars());
        self.sample_sub(root, coin, &mut omega)?;
        for v in 1..=self.diagram.num_vars() {
            let v = Var::new(v);
            if omega.get(v).is_none() {
                omega.set(v, coin.fair());
            }
        }
        Ok(omega)
    }

    /// Extends `omega` with a model of node `u` over the variables `u`
    /// mentions.
    pub fn sample_sub<C: Coin>(&self, u: NodeId, coin: &mut C, omega: &mut Assignment) -> Result<(), SampleError> {
        if self.counts.get(u).is_zero() {
            return Err(SampleError::ZeroCount(u));
        }
        match self.diagram.node(u) {
            Node::False => Err(SampleError::ZeroCount(u)),
            Node::True => Ok(()),
            Node::Equiv { var, lit } => {
                let value = coin.fair();
                bind(omega, *var, value)?;
                bind_lit(omega, *lit, value)
            }
            Node::DecomposedAnd(children) => {
                for &c in children {
                    self.sample_sub(c, coin, omega)?;
                }
                Ok(())
            }
            Node::KernelizedAnd { core, equivs } => {
                self.sample_sub(*core, coin, omega)?;
                for &e in equivs {
                    let Node::Equiv { var, lit } = *self.diagram.node(e) else {
                        unreachable!("validated kernelized node");
                    };
                    match omega.get(var) {
                        Some(value) => bind_lit(omega, lit, value)?,
                        None => self.sample_sub(e, coin, omega)?,
                    }
                }
                Ok(())
            }
            Node::Decision { var, lo, hi } => {
                let c_lo = self.counts.get(*lo);
                let c_hi = self.counts.get(*hi);
                let take_hi = if c_lo.is_zero() {
                    true
                } else if c_hi.is_zero() {
                    false
                } else {
                    coin.bernoulli(c_hi, &c_lo.add(c_hi))?
                };
                bind(omega, *var, take_hi)?;
                self.sample_sub(if take_hi { *hi } else { *lo }, coin, omega)
            }
        }
    }
}

fn bind(omega: &mut Assignment, var: Var, value: bool) -> Result<(), SampleError> {
    if omega.get(var).is_some() {
        return Err(SampleError::Rebound(var));
    }
    omega.set(var, value);
    Ok(())
}

/// Binds `var(lit)` so that `lit` has truth value `value`.
fn bind_lit(omega: &mut Assignment, lit: Lit, value: bool) -> Result<(), SampleError> {
    bind(omega, lit.var(), value == lit.polarity())
}

/// `n` samples from a fresh seeded coin, one DIMACS line each.
pub fn sample_lines(diagram: &Diagram, n: usize, seed: u64) -> Result<Vec<String>, SampleError> {
    let sampler = Sampler::new(diagram)?;
    let mut coin = RngCoin::seeded(seed);
    (0..n)
        .map(|_| sampler.sample(&mut coin).map(|omega| omega.to_dimacs_line()))
        .collect()
}
