use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::{self, Cx};
use crate::error::{Error, Result};
use crate::ideal::PrimeIdealKey;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiCase {
    /// Chosen to steer a class sum.
    Private,
    /// Fixed to 1.
    Default,
}

/// One row of the phase log.
#[derive(Clone, Debug, Serialize)]
pub struct PhiLogEntry {
    pub p: u128,
    pub root: u128,
    pub stage: u32,
    pub case: PhiCase,
    pub re: f64,
    pub im: f64,
    pub arg: f64,
}

/// Write-once map from prime ideals to unit complex numbers. Keys never
/// stored read as 1.
#[derive(Clone, Debug, Default)]
pub struct PhiAssignment<T> {
    phases: BTreeMap<PrimeIdealKey, Cx<T>>,
    log: Vec<PhiLogEntry>,
}

impl<T: Real> PhiAssignment<T> {
    pub fn new() -> Self {
        PhiAssignment { phases: BTreeMap::new(), log: Vec::new() }
    }

    pub fn get(&self, key: &PrimeIdealKey) -> Cx<T> {
        self.phases.get(key).cloned().unwrap_or_else(complex::one)
    }

    pub fn contains(&self, key: &PrimeIdealKey) -> bool {
        self.phases.contains_key(key)
    }

    fn record(&mut self, key: PrimeIdealKey, v: Cx<T>, stage: u32, case: PhiCase) {
        let z = complex::to_f64(&v);
        self.log.push(PhiLogEntry { p: key.p, root: key.root, stage, case, re: z.re, im: z.im, arg: z.arg() });
        self.phases.insert(key, v);
    }

    pub fn assign(&mut self, key: PrimeIdealKey, v: Cx<T>, stage: u32) -> Result<()> {
        if self.phases.contains_key(&key) {
            return Err(Error::PhiReassigned { p: key.p, root: key.root });
        }
        let dev = (complex::abs(&v) - T::one()).abs().to_f64();
        if dev >= 1e-14 {
            return Err(Error::PreconditionViolated(format!("phase for {key} has modulus off by {dev:e}")));
        }
        self.record(key, v, stage, PhiCase::Private);
        Ok(())
    }

    /// Stores 1 unless the key is already fixed; returns whether it stored.
    pub fn fix_default(&mut self, key: PrimeIdealKey, stage: u32) -> bool {
        if self.phases.contains_key(&key) {
            return false;
        }
        self.record(key, complex::one(), stage, PhiCase::Default);
        true
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn all_unimodular(&self, tol: f64) -> bool {
        self.phases.values().all(|v| (complex::abs(v) - T::one()).abs().to_f64() < tol)
    }

    /// Insertions in order.
    pub fn log(&self) -> &[PhiLogEntry] {
        &self.log
    }
}
