//! Ordered-statistics post-processing of BP posteriors.

use qldpc_core::{BitMatrix, BitVector, CssCode, Decoder, NoiseModel};

use crate::bp::{BpConfig, BpResult, CssBp};
use crate::error::{check_len, DecoderError, Result};

/// Posteriors are clamped into `[P_MIN, 1 - P_MIN]` before taking log-odds.
const P_MIN: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct OsdConfig {
    /// Search order `w`: every subset of the first `w` non-basis positions
    /// (in reliability order) is tried, `2^w` candidates in total.
    pub order: usize,
}

/// Flip cost `log((1 - p)/p)` of each position.
fn flip_costs(posteriors: &[f64]) -> Vec<f64> {
    posteriors
        .iter()
        .map(|&p| {
            let p = p.clamp(P_MIN, 1.0 - P_MIN);
            ((1.0 - p) / p).ln()
        })
        .collect()
}

/// Negative log-likelihood of `e` relative to the all-zero pattern.
pub fn pattern_cost(error: &BitVector, posteriors: &[f64]) -> f64 {
    let costs = flip_costs(posteriors);
    error.iter_ones().map(|i| costs[i]).sum()
}

/// Returns an `e` with `H·e = s` chosen by OSD on the given posteriors.
///
/// Columns are sorted by decreasing flip probability (ties by index) and the
/// first linearly independent ones form the basis. Order 0 solves on the basis
/// with every other position at 0; higher orders also try all flips of the
/// first `order` non-basis positions and keep the cheapest candidate.
pub fn osd_postprocess(
    h: &BitMatrix,
    syndrome: &BitVector,
    posteriors: &[f64],
    cfg: &OsdConfig,
) -> Result<BitVector> {
    let (m, n) = (h.rows(), h.cols());
    check_len("syndrome", m, syndrome.len())?;
    check_len("posteriors", n, posteriors.len())?;
    if cfg.order > 24 {
        return Err(DecoderError::Config(format!(
            "OSD order {} is too large",
            cfg.order
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| posteriors[b].total_cmp(&posteriors[a]).then(a.cmp(&b)));

    // [H_perm | s], reduced.
    let mut aug = BitMatrix::zeros(m, n + 1);
    for r in 0..m {
        for (k, &col) in order.iter().enumerate() {
            if h.get(r, col) {
                aug.set(r, k, true);
            }
        }
        aug.set(r, n, syndrome.get(r));
    }
    let ech = aug.row_reduce();
    if ech.pivot_cols.last() == Some(&n) {
        return Err(DecoderError::InconsistentSyndrome);
    }
    let reduced = &ech.reduced;
    let pivots = &ech.pivot_cols;
    let mut is_pivot = vec![false; n];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&k| !is_pivot[k]).take(cfg.order).collect();

    let costs = flip_costs(posteriors);
    let mut best: Option<(f64, BitVector)> = None;
    for pattern in 0u32..(1u32 << free.len()) {
        let mut e = BitVector::zeros(n);
        for (t, &k) in free.iter().enumerate() {
            if pattern >> t & 1 == 1 {
                e.set(order[k], true);
            }
        }
        for (r, &p) in pivots.iter().enumerate() {
            let mut bit = reduced.get(r, n);
            for (t, &k) in free.iter().enumerate() {
                if pattern >> t & 1 == 1 && reduced.get(r, k) {
                    bit = !bit;
                }
            }
            if bit {
                e.set(order[p], true);
            }
        }
        let cost: f64 = e.iter_ones().map(|i| costs[i]).sum();
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, e));
        }
    }
    Ok(best.expect("at least the zero pattern").1)
}

/// BP followed by OSD on every half whose BP run did not converge.
#[derive(Clone, Debug)]
pub struct BpOsd {
    bp: CssBp,
    osd: OsdConfig,
    name: String,
}

impl BpOsd {
    pub fn new(
        code: &CssCode,
        p: f64,
        model: NoiseModel,
        bp: BpConfig,
        osd: OsdConfig,
    ) -> Result<Self> {
        Ok(Self {
            bp: CssBp::new(code, p, model, bp)?,
            osd,
            name: format!("bp-osd{}", osd.order),
        })
    }

    fn finish(&self, h: &BitMatrix, s: &BitVector, r: &BpResult) -> Result<BitVector> {
        if r.converged {
            Ok(r.error.clone())
        } else {
            osd_postprocess(h, s, &r.posteriors, &self.osd)
        }
    }

    pub fn try_decode(&self, syndrome: &BitVector) -> Result<BitVector> {
        let halves = self.bp.decode_halves(syndrome)?;
        let m_x = self.bp.hx.rows();
        let s_x = syndrome.slice(0, m_x);
        let s_z = syndrome.slice(m_x, self.bp.hz.rows());
        let ex = self.finish(&self.bp.hz, &s_z, &halves.x)?;
        let ez = self.finish(&self.bp.hx, &s_x, &halves.z)?;
        Ok(ex.concat(&ez))
    }
}

impl Decoder for BpOsd {
    fn name(&self) -> &str {
        &self.name
    }

    fn decode(&self, syndrome: &BitVector) -> BitVector {
        self.try_decode(syndrome)
            .expect("syndromes produced by the code are always consistent")
    }
}
