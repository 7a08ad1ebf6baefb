//! Binary snapshot of a [`GoodTrajectoryBuffer`].
//!
//! All integers little-endian; all reals `f64` little-endian.
//!
//! ```text
//! b"GASILB"
//! obs_dim: u32, act_dim: u32, capacity_steps: u64
//! episode_count: u64
//! per episode (best first):
//!   length: u64, return: f64
//!   per transition: observation[obs_dim], action[act_dim], reward
//! ```

use std::path::Path;

use super::GoodTrajectoryBuffer;
use crate::rollout::{Episode, Transition};
use crate::{Error, Result};

pub const MAGIC: &[u8; 6] = b"GASILB";

fn bad(reason: impl Into<String>) -> Error {
    Error::Format {
        what: "buffer snapshot",
        reason: reason.into(),
    }
}

/// Encodes the buffer. `obs_dim`/`act_dim` are needed for empty buffers.
pub fn encode(buffer: &GoodTrajectoryBuffer, obs_dim: usize, act_dim: usize) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(obs_dim as u32).to_le_bytes());
    out.extend_from_slice(&(act_dim as u32).to_le_bytes());
    out.extend_from_slice(&(buffer.capacity_steps() as u64).to_le_bytes());
    out.extend_from_slice(&(buffer.len() as u64).to_le_bytes());
    for ep in buffer.episodes() {
        out.extend_from_slice(&(ep.len() as u64).to_le_bytes());
        out.extend_from_slice(&ep.discounted_return().to_le_bytes());
        for t in ep.transitions() {
            for v in t.observation.iter().chain(&t.action).chain(std::iter::once(&t.reward)) {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
    }
    out
}

struct Cursor<'a>(&'a [u8]);

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.0.len() < n {
            return Err(bad("unexpected end of data"));
        }
        let (h, t) = self.0.split_at(n);
        self.0 = t;
        Ok(h)
    }
    fn u32(&mut self) -> Result<usize> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4")) as usize)
    }
    fn u64(&mut self) -> Result<usize> {
        usize::try_from(u64::from_le_bytes(self.take(8)?.try_into().expect("8"))).map_err(|_| bad("length overflow"))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8")))
    }
    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        (0..n).map(|_| self.f64()).collect()
    }
}

/// A decoded snapshot.
#[derive(Debug, Clone)]
pub struct BufferSnapshot {
    pub obs_dim: usize,
    pub act_dim: usize,
    pub buffer: GoodTrajectoryBuffer,
}

pub fn decode(bytes: &[u8]) -> Result<BufferSnapshot> {
    let mut c = Cursor(bytes);
    if c.take(MAGIC.len())? != MAGIC {
        return Err(bad("bad magic bytes"));
    }
    let obs_dim = c.u32()?;
    let act_dim = c.u32()?;
    let capacity = c.u64()?;
    if capacity == 0 {
        return Err(bad("zero capacity"));
    }
    let count = c.u64()?;
    let mut episodes = Vec::new();
    for _ in 0..count {
        let len = c.u64()?;
        let ret = c.f64()?;
        if c.0.len() / 8 < len.saturating_mul(obs_dim + act_dim + 1) {
            return Err(bad("episode longer than remaining data"));
        }
        let transitions = (0..len)
            .map(|_| {
                Ok(Transition {
                    observation: c.f64s(obs_dim)?,
                    action: c.f64s(act_dim)?,
                    reward: c.f64()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        episodes.push(Episode::with_return(transitions, true, ret));
    }
    if !c.0.is_empty() {
        return Err(bad(format!("{} trailing bytes", c.0.len())));
    }
    Ok(BufferSnapshot {
        obs_dim,
        act_dim,
        buffer: GoodTrajectoryBuffer::from_ranked(capacity, episodes),
    })
}

pub fn save(path: &Path, buffer: &GoodTrajectoryBuffer, obs_dim: usize, act_dim: usize) -> Result<()> {
    std::fs::write(path, encode(buffer, obs_dim, act_dim)).map_err(|e| Error::io(path, e))
}

pub fn load(path: &Path) -> Result<BufferSnapshot> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ep(ret_reward: f64, len: usize) -> Episode {
        let ts = (0..len)
            .map(|t| Transition {
                observation: vec![t as f64, -(t as f64)],
                action: vec![0.01 * t as f64],
                reward: if t == 0 { ret_reward } else { 0.5 },
            })
            .collect();
        Episode::new(ts, true, 0.99)
    }

    #[test]
    fn round_trip_preserves_order_and_contents() {
        let mut b = GoodTrajectoryBuffer::new(20);
        b.update([ep(3.0, 4), ep(9.0, 3), ep(-1.0, 5)]);
        let bytes = encode(&b, 2, 1);
        assert_eq!(&bytes[..6], MAGIC);
        let snap = decode(&bytes).unwrap();
        assert_eq!((snap.obs_dim, snap.act_dim), (2, 1));
        let a: Vec<&Episode> = b.episodes().collect();
        let c: Vec<&Episode> = snap.buffer.episodes().collect();
        assert_eq!(a, c);
        assert_eq!(snap.buffer.total_steps(), b.total_steps());
        assert_eq!(encode(&snap.buffer, 2, 1), bytes);
    }

    #[test]
    fn empty_buffer_round_trips() {
        let b = GoodTrajectoryBuffer::new(7);
        let snap = decode(&encode(&b, 3, 2)).unwrap();
        assert!(snap.buffer.is_empty());
        assert_eq!(snap.buffer.capacity_steps(), 7);
    }

    #[test]
    fn truncated_snapshot_rejected() {
        let mut b = GoodTrajectoryBuffer::new(20);
        b.update([ep(3.0, 4)]);
        let bytes = encode(&b, 2, 1);
        assert!(decode(&bytes[..bytes.len() - 3]).is_err());
    }
}
