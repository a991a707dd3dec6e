use std::sync::Arc;

use super::Matroid;
use crate::error::{Error, Result};
use crate::field::GaloisField;
use crate::setfn::bit_iter;

/// Column matroid of vectors in GF(q)^n; rank is the dimension of the span.
#[derive(Debug, Clone)]
pub struct LinearMatroid {
    field: Arc<GaloisField>,
    dim: usize,
    columns: Vec<Vec<u8>>,
}

impl LinearMatroid {
    pub fn new(field: Arc<GaloisField>, dim: usize, columns: Vec<Vec<u8>>) -> Result<Self> {
        if columns.len() > 64 {
            return Err(Error::GroundTooLarge {
                size: columns.len(),
                cap: 64,
            });
        }
        let q = field.size();
        for (i, c) in columns.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: c.len(),
                });
            }
            if let Some(bad) = c.iter().find(|&&x| x as u32 >= q) {
                return Err(Error::Invalid(format!(
                    "column {i} has entry {bad} outside GF({q})"
                )));
            }
        }
        Ok(LinearMatroid {
            field,
            dim,
            columns,
        })
    }

    /// All `q^n` vectors of GF(q)^n, zero vector first (a loop).
    pub fn full_space(q: u32, n: usize) -> Result<Self> {
        let field = Arc::new(GaloisField::new(q)?);
        let count = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if count > 64 {
            return Err(Error::GroundTooLarge {
                size: count.min(usize::MAX as u128) as usize,
                cap: 64,
            });
        }
        let columns = field.all_vectors(n);
        LinearMatroid::new(field, n, columns)
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn columns(&self) -> &[Vec<u8>] {
        &self.columns
    }
}

impl Matroid for LinearMatroid {
    fn ground_size(&self) -> usize {
        self.columns.len()
    }

    fn rank_bits(&self, bits: u64) -> usize {
        let mut rows: Vec<Vec<u8>> = bit_iter(bits)
            .map(|i| &self.columns[i])
            .filter(|c| c.iter().any(|&x| x != 0))
            .cloned()
            .collect();
        self.field.rank_in_place(&mut rows)
    }

    fn describe(&self) -> String {
        format!(
            "{} vectors in GF({})^{}",
            self.columns.len(),
            self.field.size(),
            self.dim
        )
    }
}
