//! Syndrome belief propagation (log-domain sum-product).

use qldpc_core::{BitMatrix, BitVector, CssCode, Decoder, NoiseModel};

use crate::error::{check_len, DecoderError, Result};
use crate::tanner::TannerGraph;

/// Largest `|Π tanh|` fed to `atanh`, which caps check messages near ±36.
const MAX_TANH: f64 = 1.0 - 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Schedule {
    /// All checks update from the previous iteration's messages.
    Flooding,
    /// Checks update one after another, each seeing the latest posteriors.
    #[default]
    Serial,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BpConfig {
    pub max_iters: usize,
    /// Weight of the previous check message, in `[0, 1)`.
    pub damping: f64,
    pub schedule: Schedule,
    /// Stop as soon as the hard decision reproduces the syndrome.
    pub early_stop: bool,
}

impl Default for BpConfig {
    fn default() -> Self {
        Self {
            max_iters: 32,
            damping: 0.0,
            schedule: Schedule::Serial,
            early_stop: true,
        }
    }
}

impl BpConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.damping) {
            return Err(DecoderError::Config(format!(
                "damping {} is outside [0, 1)",
                self.damping
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BpResult {
    pub error: BitVector,
    /// Posterior flip probabilities `P(e_i = 1 | s)`.
    pub posteriors: Vec<f64>,
    /// Whether the final hard decision satisfies the syndrome.
    pub converged: bool,
    /// Iterations run; 0 means the prior hard decision already matched.
    pub iterations: usize,
}

/// Decodes `s` on the Tanner graph of `H` with independent per-bit priors.
pub fn bp_decode(
    graph: &TannerGraph,
    syndrome: &BitVector,
    priors: &[f64],
    cfg: &BpConfig,
) -> Result<BpResult> {
    cfg.validate()?;
    check_len("syndrome", graph.num_checks(), syndrome.len())?;
    check_len("priors", graph.num_vars(), priors.len())?;
    if let Some(p) = priors.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
        return Err(DecoderError::Config(format!("prior {p} is outside (0, 1)")));
    }
    let prior_llr: Vec<f64> = priors.iter().map(|p| ((1.0 - p) / p).ln()).collect();
    let mut posterior = prior_llr.clone();
    let mut error = hard_decision(&posterior);
    let mut converged = satisfies(graph, &error, syndrome);
    if converged && cfg.early_stop {
        return Ok(finish(error, &posterior, true, 0));
    }

    let mut check_msg = vec![0.0; graph.num_edges()];
    let mut var_msg: Vec<f64> = (0..graph.num_edges())
        .map(|e| prior_llr[graph.edge_var(e)])
        .collect();
    let mut scratch = Vec::new();
    let mut iterations = 0;
    for it in 1..=cfg.max_iters {
        iterations = it;
        match cfg.schedule {
            Schedule::Flooding => {
                for c in 0..graph.num_checks() {
                    update_check(
                        graph,
                        c,
                        syndrome.get(c),
                        &var_msg,
                        &mut check_msg,
                        cfg.damping,
                        &mut scratch,
                    );
                }
                posterior.copy_from_slice(&prior_llr);
                for (e, &msg) in check_msg.iter().enumerate() {
                    posterior[graph.edge_var(e)] += msg;
                }
                for (e, v) in var_msg.iter_mut().enumerate() {
                    *v = posterior[graph.edge_var(e)] - check_msg[e];
                }
            }
            Schedule::Serial => {
                for c in 0..graph.num_checks() {
                    for e in graph.check_edges(c) {
                        var_msg[e] = posterior[graph.edge_var(e)] - check_msg[e];
                    }
                    let old: Vec<f64> = check_msg[graph.check_edges(c)].to_vec();
                    update_check(
                        graph,
                        c,
                        syndrome.get(c),
                        &var_msg,
                        &mut check_msg,
                        cfg.damping,
                        &mut scratch,
                    );
                    for (k, e) in graph.check_edges(c).enumerate() {
                        posterior[graph.edge_var(e)] += check_msg[e] - old[k];
                    }
                }
            }
        }
        error = hard_decision(&posterior);
        converged = satisfies(graph, &error, syndrome);
        if converged && cfg.early_stop {
            break;
        }
    }
    Ok(finish(error, &posterior, converged, iterations))
}

/// Recomputes the check-to-variable messages of check `c`:
/// `μ = (-1)^{s_c} · 2·atanh(Π_{other edges} tanh(ν/2))`.
fn update_check(
    graph: &TannerGraph,
    c: usize,
    parity: bool,
    var_msg: &[f64],
    check_msg: &mut [f64],
    damping: f64,
    scratch: &mut Vec<f64>,
) {
    let edges = graph.check_edges(c);
    let deg = edges.len();
    scratch.clear();
    scratch.extend(edges.clone().map(|e| (var_msg[e] / 2.0).tanh()));
    // Exclusive products via prefix/suffix passes.
    let mut prefix = 1.0;
    let mut out = vec![0.0; deg];
    for k in 0..deg {
        out[k] = prefix;
        prefix *= scratch[k];
    }
    let mut suffix = 1.0;
    for k in (0..deg).rev() {
        out[k] *= suffix;
        suffix *= scratch[k];
    }
    let sign = if parity { -1.0 } else { 1.0 };
    for (k, e) in edges.enumerate() {
        let fresh = sign * 2.0 * out[k].clamp(-MAX_TANH, MAX_TANH).atanh();
        check_msg[e] = damping * check_msg[e] + (1.0 - damping) * fresh;
    }
}

fn hard_decision(llr: &[f64]) -> BitVector {
    BitVector::from_bools(llr.iter().map(|&l| l < 0.0))
}

fn satisfies(graph: &TannerGraph, error: &BitVector, syndrome: &BitVector) -> bool {
    (0..graph.num_checks()).all(|c| {
        let parity = graph
            .check_edges(c)
            .filter(|&e| error.get(graph.edge_var(e)))
            .count()
            % 2
            == 1;
        parity == syndrome.get(c)
    })
}

fn finish(error: BitVector, llr: &[f64], converged: bool, iterations: usize) -> BpResult {
    BpResult {
        error,
        posteriors: llr.iter().map(|&l| 1.0 / (1.0 + l.exp())).collect(),
        converged,
        iterations,
    }
}

/// Per-half outcome of a CSS decode.
#[derive(Clone, Debug)]
pub struct CssBpResult {
    /// X-component estimate, decoded from the Z-check syndrome with `H_Z`.
    pub x: BpResult,
    /// Z-component estimate, decoded from the X-check syndrome with `H_X`.
    pub z: BpResult,
}

impl CssBpResult {
    pub fn error(&self) -> BitVector {
        self.x.error.concat(&self.z.error)
    }
}

/// BP on a CSS code as two independent binary problems with the marginal
/// component flip rate of the channel as prior.
#[derive(Clone, Debug)]
pub struct CssBp {
    pub(crate) hx: BitMatrix,
    pub(crate) hz: BitMatrix,
    hx_graph: TannerGraph,
    hz_graph: TannerGraph,
    prior: f64,
    cfg: BpConfig,
}

impl CssBp {
    pub fn new(code: &CssCode, p: f64, model: NoiseModel, cfg: BpConfig) -> Result<Self> {
        cfg.validate()?;
        let prior = model.component_rate(p);
        if !(prior > 0.0 && prior < 1.0) {
            return Err(DecoderError::Config(format!(
                "physical error rate {p} is outside (0, 1)"
            )));
        }
        Ok(Self {
            hx: code.hx().clone(),
            hz: code.hz().clone(),
            hx_graph: TannerGraph::new(code.hx()),
            hz_graph: TannerGraph::new(code.hz()),
            prior,
            cfg,
        })
    }

    pub fn prior(&self) -> f64 {
        self.prior
    }

    pub fn n(&self) -> usize {
        self.hx.cols()
    }

    pub fn decode_halves(&self, syndrome: &BitVector) -> Result<CssBpResult> {
        let m_x = self.hx.rows();
        check_len("syndrome", m_x + self.hz.rows(), syndrome.len())?;
        let s_x = syndrome.slice(0, m_x);
        let s_z = syndrome.slice(m_x, self.hz.rows());
        let priors = vec![self.prior; self.n()];
        Ok(CssBpResult {
            x: bp_decode(&self.hz_graph, &s_z, &priors, &self.cfg)?,
            z: bp_decode(&self.hx_graph, &s_x, &priors, &self.cfg)?,
        })
    }
}

impl Decoder for CssBp {
    fn name(&self) -> &str {
        "bp"
    }

    fn decode(&self, syndrome: &BitVector) -> BitVector {
        self.decode_halves(syndrome)
            .expect("syndrome length matches the code")
            .error()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qldpc_core::ClassicalCode;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn decode(h: &BitMatrix, s: &BitVector, p: f64, cfg: &BpConfig) -> BpResult {
        bp_decode(&TannerGraph::new(h), s, &vec![p; h.cols()], cfg).unwrap()
    }

    #[test]
    fn zero_syndrome_stops_before_iterating() {
        let h = ClassicalCode::hamming7().h().clone();
        let r = decode(&h, &BitVector::zeros(3), 0.05, &BpConfig::default());
        assert!(r.converged && r.error.is_zero());
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn hamming_corrects_every_single_error() {
        let h = ClassicalCode::hamming7().h().clone();
        for i in 0..7 {
            let e = BitVector::from_support(7, &[i]);
            let r = decode(&h, &h.mul(&e).unwrap(), 0.05, &BpConfig::default());
            assert!(r.converged, "bit {i}");
            assert_eq!(r.error, e, "bit {i}");
        }
    }

    #[test]
    fn flooding_stops_on_a_heavier_match_for_the_all_checks_column() {
        // The bit in all three checks: after one flooding round every bit in two
        // checks also flips, and that weight-4 pattern already fits the syndrome.
        let h = ClassicalCode::hamming7().h().clone();
        let cfg = BpConfig {
            schedule: Schedule::Flooding,
            ..BpConfig::default()
        };
        let e = BitVector::from_support(7, &[6]);
        let r = decode(&h, &h.mul(&e).unwrap(), 0.05, &cfg);
        assert!(r.converged);
        assert_eq!((r.iterations, r.error.weight()), (1, 4));
        for i in 0..6 {
            let e = BitVector::from_support(7, &[i]);
            assert_eq!(decode(&h, &h.mul(&e).unwrap(), 0.05, &cfg).error, e);
        }
    }

    /// Exact `P(e_i = 1 | H e = s)` by enumeration.
    pub(crate) fn exact_marginals(h: &BitMatrix, s: &BitVector, priors: &[f64]) -> Vec<f64> {
        let n = h.cols();
        let mut num = vec![0.0; n];
        let mut total = 0.0;
        for bits in 0u32..(1 << n) {
            let e = BitVector::from_bools((0..n).map(|i| bits >> i & 1 == 1));
            if h.mul(&e).unwrap() != *s {
                continue;
            }
            let w: f64 = (0..n)
                .map(|i| if e.get(i) { priors[i] } else { 1.0 - priors[i] })
                .product();
            total += w;
            for i in e.iter_ones() {
                num[i] += w;
            }
        }
        num.iter().map(|x| x / total).collect()
    }

    #[test]
    fn tree_code_marginals_are_exact() {
        // Checks {0,1,2}, {2,3}, {3,4,5}: a path-like tree with no cycles.
        let h = BitMatrix::from_rows(&[[1, 1, 1, 0, 0, 0], [0, 0, 1, 1, 0, 0], [0, 0, 0, 1, 1, 1]]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cfg = BpConfig {
            early_stop: false,
            max_iters: 10,
            ..BpConfig::default()
        };
        for schedule in [Schedule::Flooding, Schedule::Serial] {
            for bits in 0u32..8 {
                let s = BitVector::from_bools((0..3).map(|c| bits >> c & 1 == 1));
                let priors: Vec<f64> = (0..6).map(|_| rng.random_range(0.02..0.3)).collect();
                let r = bp_decode(
                    &TannerGraph::new(&h),
                    &s,
                    &priors,
                    &BpConfig { schedule, ..cfg },
                )
                .unwrap();
                let exact = exact_marginals(&h, &s, &priors);
                for (a, b) in r.posteriors.iter().zip(&exact) {
                    assert!((a - b).abs() < 1e-6, "{schedule:?} s={s}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn converged_implies_syndrome_match() {
        let code =
            CssCode::hypergraph_product(&ClassicalCode::hamming7(), &ClassicalCode::bch15_7());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let bp = CssBp::new(&code, 0.02, NoiseModel::Depolarizing, BpConfig::default()).unwrap();
        for _ in 0..200 {
            let sample =
                qldpc_core::channel::sample_iid(&code, 0.02, NoiseModel::Depolarizing, &mut rng);
            let r = bp.decode_halves(&sample.syndrome).unwrap();
            let est = r.error();
            let s = qldpc_core::channel::syndrome(&code, &est).unwrap();
            if r.x.converged && r.z.converged {
                assert_eq!(s, sample.syndrome);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = TannerGraph::new(ClassicalCode::hamming7().h());
        let s = BitVector::zeros(3);
        assert!(bp_decode(&g, &BitVector::zeros(4), &[0.1; 7], &BpConfig::default()).is_err());
        assert!(bp_decode(&g, &s, &[0.1; 6], &BpConfig::default()).is_err());
        assert!(bp_decode(&g, &s, &[0.0; 7], &BpConfig::default()).is_err());
        let cfg = BpConfig {
            damping: 1.0,
            ..BpConfig::default()
        };
        assert!(bp_decode(&g, &s, &[0.1; 7], &cfg).is_err());
    }

    #[test]
    fn damping_still_decodes_singletons() {
        let h = ClassicalCode::hamming7().h().clone();
        let cfg = BpConfig {
            damping: 0.3,
            ..BpConfig::default()
        };
        for i in 0..7 {
            let e = BitVector::from_support(7, &[i]);
            assert_eq!(decode(&h, &h.mul(&e).unwrap(), 0.05, &cfg).error, e);
        }
    }
}
