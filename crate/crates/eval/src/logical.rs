//! Classification of decoding residuals into stabilizer, logical and
//! syndrome-violating classes.

use qldpc_core::gf2::RowEchelon;
use qldpc_core::{BitMatrix, BitVector, CssCode};

use crate::error::{EvalError, Result};

/// What the residual `e ⊕ ê` does to the code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Residual {
    /// A product of stabilizers: the decoding succeeded.
    Stabilizer,
    /// Zero syndrome but a nontrivial logical class. `flipped[q]` is set when
    /// logical qubit `q` is hit by an X or Z logical.
    Logical { flipped: Vec<bool> },
    /// The correction does not reproduce the observed syndrome.
    SyndromeMismatch,
}

impl Residual {
    pub fn is_failure(&self) -> bool {
        !matches!(self, Residual::Stabilizer)
    }

    /// Logical qubits counted as failed. A syndrome mismatch fails all `k`.
    pub fn failed_qubits(&self, k: usize) -> usize {
        match self {
            Residual::Stabilizer => 0,
            Residual::Logical { flipped } => flipped.iter().filter(|&&f| f).count(),
            Residual::SyndromeMismatch => k,
        }
    }
}

/// Precomputed row echelon forms of both check matrices, so that each
/// classification costs two reductions instead of two eliminations.
#[derive(Clone, Debug)]
pub struct LogicalClassifier {
    n: usize,
    hx: BitMatrix,
    hz: BitMatrix,
    hx_echelon: RowEchelon,
    hz_echelon: RowEchelon,
    lx: BitMatrix,
    lz: BitMatrix,
}

impl LogicalClassifier {
    pub fn new(code: &CssCode) -> Self {
        Self {
            n: code.n(),
            hx: code.hx().clone(),
            hz: code.hz().clone(),
            hx_echelon: code.hx().row_reduce(),
            hz_echelon: code.hz().row_reduce(),
            lx: code.lx().clone(),
            lz: code.lz().clone(),
        }
    }

    pub fn k(&self) -> usize {
        self.lx.rows()
    }

    pub fn classify(&self, error: &BitVector, estimate: &BitVector) -> Result<Residual> {
        for (what, v) in [("error", error), ("estimate", estimate)] {
            if v.len() != 2 * self.n {
                return Err(EvalError::Length {
                    what,
                    expected: 2 * self.n,
                    found: v.len(),
                });
            }
        }
        let residual = error.xor(estimate);
        let rx = residual.slice(0, self.n);
        let rz = residual.slice(self.n, self.n);
        if !self.hz.mul(&rx)?.is_zero() || !self.hx.mul(&rz)?.is_zero() {
            return Ok(Residual::SyndromeMismatch);
        }
        if self.hx_echelon.reduce_vector(&rx).is_zero()
            && self.hz_echelon.reduce_vector(&rz).is_zero()
        {
            return Ok(Residual::Stabilizer);
        }
        // X-part residuals act on logical qubit q through its Z partner, and vice versa.
        let flipped = (0..self.k())
            .map(|q| rx.dot(&self.lz.row(q)) || rz.dot(&self.lx.row(q)))
            .collect();
        Ok(Residual::Logical { flipped })
    }
}

/// True unless `error ⊕ estimate` is a stabilizer.
pub fn is_logical_error(code: &CssCode, error: &BitVector, estimate: &BitVector) -> Result<bool> {
    Ok(LogicalClassifier::new(code)
        .classify(error, estimate)?
        .is_failure())
}

#[cfg(test)]
mod tests {
    use super::*;
    use qldpc_core::ClassicalCode;

    fn rep_code() -> CssCode {
        CssCode::hypergraph_product(&ClassicalCode::repetition(3), &ClassicalCode::repetition(3))
    }

    fn embed_x(code: &CssCode, v: &BitVector) -> BitVector {
        v.concat(&BitVector::zeros(code.n()))
    }

    fn embed_z(code: &CssCode, v: &BitVector) -> BitVector {
        BitVector::zeros(code.n()).concat(v)
    }

    #[test]
    fn exact_correction_is_not_a_failure() {
        let code = rep_code();
        let e = BitVector::from_support(26, &[0, 5, 20]);
        assert!(!is_logical_error(&code, &e, &e).unwrap());
    }

    #[test]
    fn stabilizer_residual_is_not_a_failure() {
        let code = rep_code();
        let e = BitVector::from_support(26, &[3]);
        for r in 0..code.hx().rows() {
            let est = e.xor(&embed_x(&code, &code.hx().row(r)));
            assert!(!is_logical_error(&code, &e, &est).unwrap());
        }
        for r in 0..code.hz().rows() {
            let est = e.xor(&embed_z(&code, &code.hz().row(r)));
            assert!(!is_logical_error(&code, &e, &est).unwrap());
        }
    }

    #[test]
    fn logical_residual_flags_its_qubit() {
        let code = rep_code();
        let c = LogicalClassifier::new(&code);
        let zero = BitVector::zeros(26);
        let lx = embed_x(&code, &code.lx().row(0));
        assert_eq!(
            c.classify(&zero, &lx).unwrap(),
            Residual::Logical {
                flipped: vec![true]
            }
        );
        let lz = embed_z(&code, &code.lz().row(0));
        assert_eq!(
            c.classify(&zero, &lz).unwrap(),
            Residual::Logical {
                flipped: vec![true]
            }
        );
    }

    #[test]
    fn syndrome_mismatch_fails_every_qubit() {
        let code = rep_code();
        let c = LogicalClassifier::new(&code);
        let r = c
            .classify(&BitVector::from_support(26, &[0]), &BitVector::zeros(26))
            .unwrap();
        assert_eq!(r, Residual::SyndromeMismatch);
        assert_eq!(r.failed_qubits(1), 1);
    }

    #[test]
    fn wrong_length_is_an_error() {
        let code = rep_code();
        assert!(is_logical_error(&code, &BitVector::zeros(26), &BitVector::zeros(25)).is_err());
    }
}
