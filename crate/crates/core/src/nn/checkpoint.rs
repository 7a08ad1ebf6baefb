//! Flat binary checkpoint format.
//!
//! Layout (all integers `u32` little-endian, all reals `f64` little-endian):
//!
//! ```text
//! b"GASIL1"
//! n_sizes, layer_sizes[n_sizes]
//! n_log_std
//! parameters in layer order (weights row-major (n_out, n_in), then biases)
//! log_std[n_log_std]
//! ```
//!
//! `n_log_std` is zero for networks without a policy log-std vector
//! (value and discriminator heads).

use std::path::Path;

use super::{GaussianPolicy, Mlp};
use crate::{Error, Result};

pub const MAGIC: &[u8; 6] = b"GASIL1";

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub net: Mlp,
    pub log_std: Vec<f64>,
}

impl Checkpoint {
    pub fn into_policy(self) -> Result<GaussianPolicy> {
        if self.log_std.len() != self.net.output_dim() {
            return Err(Error::Format {
                what: "policy checkpoint",
                reason: format!(
                    "log_std has {} entries for {} actions",
                    self.log_std.len(),
                    self.net.output_dim()
                ),
            });
        }
        Ok(GaussianPolicy {
            net: self.net,
            log_std: self.log_std,
        })
    }
}

pub fn encode(net: &Mlp, log_std: &[f64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + 8 * (net.param_count() + log_std.len()));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(net.sizes().len() as u32).to_le_bytes());
    for &s in net.sizes() {
        out.extend_from_slice(&(s as u32).to_le_bytes());
    }
    out.extend_from_slice(&(log_std.len() as u32).to_le_bytes());
    for v in net.params().iter().chain(log_std) {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn encode_policy(policy: &GaussianPolicy) -> Vec<u8> {
    encode(&policy.net, &policy.log_std)
}

struct Reader<'a> {
    bytes: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.bytes.len() < n {
            return Err(Error::Format {
                what: "checkpoint",
                reason: "unexpected end of data".into(),
            });
        }
        let (head, tail) = self.bytes.split_at(n);
        self.bytes = tail;
        Ok(head)
    }

    fn u32(&mut self) -> Result<usize> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")) as usize)
    }

    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        let raw = self.take(n.checked_mul(8).ok_or_else(|| Error::Format {
            what: "checkpoint",
            reason: "length overflow".into(),
        })?)?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect())
    }
}

pub fn decode(bytes: &[u8]) -> Result<Checkpoint> {
    let mut r = Reader { bytes };
    if r.take(MAGIC.len())? != MAGIC {
        return Err(Error::Format {
            what: "checkpoint",
            reason: "bad magic bytes".into(),
        });
    }
    let n_sizes = r.u32()?;
    let sizes = (0..n_sizes).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
    let n_log_std = r.u32()?;
    let template = Mlp::zeros(&sizes)?;
    let params = r.f64s(template.param_count())?;
    let log_std = r.f64s(n_log_std)?;
    if !r.bytes.is_empty() {
        return Err(Error::Format {
            what: "checkpoint",
            reason: format!("{} trailing bytes", r.bytes.len()),
        });
    }
    Ok(Checkpoint {
        net: Mlp::from_params(&sizes, params)?,
        log_std,
    })
}

pub fn save(path: &Path, net: &Mlp, log_std: &[f64]) -> Result<()> {
    std::fs::write(path, encode(net, log_std)).map_err(|e| Error::io(path, e))
}

pub fn load(path: &Path) -> Result<Checkpoint> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::OutputInit;
    use crate::seeding;
    use rand::SeedableRng;

    #[test]
    fn header_layout() {
        let net = Mlp::zeros(&[2, 1]).unwrap();
        let bytes = encode(&net, &[0.5]);
        assert_eq!(&bytes[..6], b"GASIL1");
        assert_eq!(&bytes[6..10], &2u32.to_le_bytes());
        assert_eq!(&bytes[10..14], &2u32.to_le_bytes());
        assert_eq!(&bytes[14..18], &1u32.to_le_bytes());
        assert_eq!(&bytes[18..22], &1u32.to_le_bytes());
        assert_eq!(bytes.len(), 22 + 8 * 3 + 8);
        assert_eq!(&bytes[bytes.len() - 8..], &0.5f64.to_le_bytes());
    }

    #[test]
    fn decoded_network_reproduces_outputs_bitwise() {
        let mut rng = seeding::Rng::seed_from_u64(2);
        let net = Mlp::new(&[5, 7, 3], OutputInit::Unit, &mut rng).unwrap();
        let back = decode(&encode(&net, &[])).unwrap();
        let x = [0.2, -0.9, 1.4, 0.0, 0.33];
        assert_eq!(net.forward(&x).unwrap().0, back.net.forward(&x).unwrap().0);
        assert!(back.log_std.is_empty());
    }

    #[test]
    fn rejects_truncated_and_foreign_data() {
        let net = Mlp::zeros(&[2, 2]).unwrap();
        let bytes = encode(&net, &[]);
        assert!(decode(&bytes[..bytes.len() - 1]).is_err());
        assert!(decode(b"NOTGAS\0\0").is_err());
    }
}
