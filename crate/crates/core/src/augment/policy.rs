use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use super::operator::{AugKind, AugOperator, Fill};
use crate::error::{Error, Result};
use crate::wavelet::TransformPair;

/// Random flip-and-shift augmentation, as used per mini-batch during training.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AugPolicy {
    pub seed: u64,
    pub p_hflip: f64,
    /// Shifts are drawn uniformly from `-max_shift..=max_shift` on each axis.
    pub max_shift: usize,
    pub fill: Fill,
}

impl Default for AugPolicy {
    fn default() -> Self {
        AugPolicy {
            seed: 0,
            p_hflip: 0.5,
            max_shift: 0,
            fill: Fill::Zero,
        }
    }
}

impl AugPolicy {
    pub fn validate(&self, n: usize) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p_hflip) {
            return Err(Error::Validation(format!(
                "p_hflip must be in [0, 1], got {}",
                self.p_hflip
            )));
        }
        if self.max_shift >= n / 2 {
            return Err(Error::Range(format!(
                "max_shift {} must be below half the side ({})",
                self.max_shift,
                n / 2
            )));
        }
        Ok(())
    }
}

/// Memoizes conjugated operators per kind for one transform size.
#[derive(Debug)]
pub struct OperatorCache {
    pair: Arc<TransformPair>,
    ops: HashMap<AugKind, Arc<AugOperator>>,
}

impl OperatorCache {
    pub fn new(pair: Arc<TransformPair>) -> Self {
        OperatorCache {
            pair,
            ops: HashMap::new(),
        }
    }

    pub fn get(&mut self, kind: AugKind) -> Result<Arc<AugOperator>> {
        if kind == AugKind::Custom {
            return Err(Error::Validation("custom operators cannot be cached".into()));
        }
        if let Some(op) = self.ops.get(&kind) {
            return Ok(Arc::clone(op));
        }
        let op = Arc::new(AugOperator::new(kind.clone(), &self.pair)?);
        self.ops.insert(kind, Arc::clone(&op));
        Ok(op)
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

/// Sequential operator generator. Use one per data-loading worker, each with
/// its own seed.
#[derive(Debug)]
pub struct PolicySampler {
    policy: AugPolicy,
    rng: ChaCha8Rng,
    cache: OperatorCache,
}

impl PolicySampler {
    pub fn new(policy: AugPolicy, pair: Arc<TransformPair>) -> Result<Self> {
        policy.validate(pair.n())?;
        Ok(PolicySampler {
            rng: ChaCha8Rng::seed_from_u64(policy.seed),
            policy,
            cache: OperatorCache::new(pair),
        })
    }

    /// The kind of the next draw. Draw order per operator: flip, dx, dy.
    pub fn next_kind(&mut self) -> AugKind {
        let flip = self.rng.random_bool(self.policy.p_hflip);
        let m = self.policy.max_shift as i64;
        let (dx, dy) = if m == 0 {
            (0, 0)
        } else {
            (
                self.rng.random_range(-m..=m) as isize,
                self.rng.random_range(-m..=m) as isize,
            )
        };
        let mut parts = Vec::new();
        if flip {
            parts.push(AugKind::HFlip);
        }
        if dx != 0 {
            parts.push(AugKind::HShift {
                by: dx,
                fill: self.policy.fill,
            });
        }
        if dy != 0 {
            parts.push(AugKind::VShift {
                by: dy,
                fill: self.policy.fill,
            });
        }
        match parts.len() {
            0 => AugKind::Identity,
            1 => parts.pop().expect("one part"),
            _ => AugKind::Compose(parts),
        }
    }

    pub fn next_operator(&mut self) -> Result<Arc<AugOperator>> {
        let kind = self.next_kind();
        self.cache.get(kind)
    }

    pub fn cached_operators(&self) -> usize {
        self.cache.len()
    }
}

/// `count` operators drawn from `policy`; a pure function of its arguments.
pub fn sample_policy(policy: &AugPolicy, pair: Arc<TransformPair>, count: usize) -> Result<Vec<Arc<AugOperator>>> {
    let mut sampler = PolicySampler::new(policy.clone(), pair)?;
    (0..count).map(|_| sampler.next_operator()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavelet::{build_transform_pair, LiftingParams};

    fn pair() -> Arc<TransformPair> {
        Arc::new(build_transform_pair(16, &LiftingParams::default()).unwrap())
    }

    #[test]
    fn degenerate_policy_gives_identities() {
        let policy = AugPolicy {
            p_hflip: 0.0,
            ..AugPolicy::default()
        };
        let ops = sample_policy(&policy, pair(), 50).unwrap();
        assert!(ops.iter().all(|op| op.is_identity()));
    }

    #[test]
    fn forced_flip() {
        let policy = AugPolicy {
            p_hflip: 1.0,
            ..AugPolicy::default()
        };
        let ops = sample_policy(&policy, pair(), 100).unwrap();
        let flips = ops.iter().filter(|op| *op.kind() == AugKind::HFlip).count();
        assert_eq!(flips, 100);
    }

    #[test]
    fn same_seed_same_sequence() {
        let policy = AugPolicy {
            seed: 42,
            p_hflip: 0.5,
            max_shift: 3,
            fill: Fill::Zero,
        };
        let kinds = |p: &AugPolicy| -> Vec<AugKind> {
            sample_policy(p, pair(), 200)
                .unwrap()
                .iter()
                .map(|op| op.kind().clone())
                .collect()
        };
        assert_eq!(kinds(&policy), kinds(&policy));
        let other = AugPolicy {
            seed: 43,
            ..policy.clone()
        };
        assert_ne!(kinds(&policy), kinds(&other));
    }

    #[test]
    fn cache_is_bounded_by_distinct_kinds() {
        let policy = AugPolicy {
            seed: 1,
            p_hflip: 0.5,
            max_shift: 1,
            fill: Fill::Zero,
        };
        let mut sampler = PolicySampler::new(policy, pair()).unwrap();
        for _ in 0..500 {
            sampler.next_operator().unwrap();
        }
        // 2 flip states × 3 dx × 3 dy
        assert!(sampler.cached_operators() <= 18);
    }

    #[test]
    fn invalid_policies() {
        let bad_p = AugPolicy {
            p_hflip: 1.5,
            ..AugPolicy::default()
        };
        assert!(matches!(PolicySampler::new(bad_p, pair()), Err(Error::Validation(_))));
        let bad_shift = AugPolicy {
            max_shift: 8,
            ..AugPolicy::default()
        };
        assert!(matches!(PolicySampler::new(bad_shift, pair()), Err(Error::Range(_))));
    }
}
