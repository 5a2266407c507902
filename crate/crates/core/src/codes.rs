//! Classical parity-check codes, the hypergraph product, and CSS codes.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use crate::alist;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// A classical binary linear code given by its parity-check matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalCode {
    h: BitMatrix,
    name: String,
    /// Declared minimum distance; metadata only, never computed.
    pub distance: Option<usize>,
}

impl ClassicalCode {
    /// Rejects an all-zero `h` and any bit that no check covers.
    pub fn new(h: BitMatrix, name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if h.rows() == 0 || h.cols() == 0 || h.is_zero() {
            return Err(Error::InvalidCode(format!(
                "{name}: parity-check matrix is empty"
            )));
        }
        if let Some(c) = (0..h.cols()).find(|&c| h.col_weight(c) == 0) {
            return Err(Error::InvalidCode(format!(
                "{name}: bit {c} is not covered by any check"
            )));
        }
        Ok(Self {
            h,
            name,
            distance: None,
        })
    }

    pub fn with_distance(mut self, d: usize) -> Self {
        self.distance = Some(d);
        self
    }

    /// The [7,4,3] Hamming code; column `c` is the binary expansion of `c + 1`.
    pub fn hamming7() -> Self {
        let mut h = BitMatrix::zeros(3, 7);
        for c in 0..7 {
            for r in 0..3 {
                h.set(r, c, ((c + 1) >> r) & 1 == 1);
            }
        }
        Self::new(h, "hamming7").unwrap().with_distance(3)
    }

    /// The cyclic [15,7,5] BCH code with generator `1 + x^4 + x^6 + x^7 + x^8`.
    ///
    /// Check rows are the cyclic shifts of the reciprocal check polynomial
    /// `1 + x + x^3 + x^7`, which gives 8 weight-4 rows.
    pub fn bch15_7() -> Self {
        let mut h = BitMatrix::zeros(8, 15);
        for r in 0..8 {
            for off in [0, 1, 3, 7] {
                h.set(r, r + off, true);
            }
        }
        Self::new(h, "bch15_7").unwrap().with_distance(5)
    }

    /// Length-`n` repetition code with `n - 1` adjacent-pair checks.
    pub fn repetition(n: usize) -> Self {
        assert!(n >= 2, "repetition code needs at least two bits");
        let mut h = BitMatrix::zeros(n - 1, n);
        for r in 0..n - 1 {
            h.set(r, r, true);
            h.set(r, r + 1, true);
        }
        Self::new(h, format!("rep{n}")).unwrap().with_distance(n)
    }

    pub fn h(&self) -> &BitMatrix {
        &self.h
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Block length.
    pub fn n(&self) -> usize {
        self.h.cols()
    }

    /// Number of parity checks (rows of `H`, not necessarily independent).
    pub fn m(&self) -> usize {
        self.h.rows()
    }

    /// Dimension `n - rank(H)`.
    pub fn k(&self) -> usize {
        self.n() - self.h.rank()
    }

    pub fn load_alist(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let h = alist::read(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "code".into());
        Self::new(h, name)
    }

    pub fn save_alist(&self, path: impl AsRef<Path>) -> Result<()> {
        alist::write(path, &self.h)
    }
}

/// A CSS stabilizer code `(H_X, H_Z)` on `n` qubits.
///
/// Rows of `H_X` are X-type stabilizers and detect Z errors; rows of `H_Z` are
/// Z-type stabilizers and detect X errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    hx: BitMatrix,
    hz: BitMatrix,
    name: String,
    k: usize,
    lx: BitMatrix,
    lz: BitMatrix,
}

impl CssCode {
    /// Builds a CSS code, checking commutation and extracting a paired logical basis.
    pub fn new(hx: BitMatrix, hz: BitMatrix, name: impl Into<String>) -> Result<Self> {
        let mut code = Self::unchecked(hx, hz, name)?;
        if !code.commutes() {
            return Err(Error::InvalidCode(format!(
                "{}: H_X and H_Z do not commute",
                code.name
            )));
        }
        let (lx, lz) = code.logical_operators()?;
        code.k = lx.rows();
        code.lx = lx;
        code.lz = lz;
        Ok(code)
    }

    /// Keeps the matrices without checking commutation. `k` saturates at zero
    /// and the logical bases are left empty; use [`CssCode::validate`] to inspect.
    pub fn unchecked(hx: BitMatrix, hz: BitMatrix, name: impl Into<String>) -> Result<Self> {
        if hx.cols() != hz.cols() {
            return Err(Error::Dimension {
                op: "css",
                expected: hx.cols(),
                found: hz.cols(),
            });
        }
        let n = hx.cols();
        let k = n.saturating_sub(hx.rank() + hz.rank());
        Ok(Self {
            lx: BitMatrix::zeros(0, n),
            lz: BitMatrix::zeros(0, n),
            hx,
            hz,
            name: name.into(),
            k,
        })
    }

    /// Hypergraph product of two classical codes:
    /// `H_X = [H1 ⊗ I_n2 | I_m1 ⊗ H2ᵀ]`, `H_Z = [I_n1 ⊗ H2 | H1ᵀ ⊗ I_m2]`.
    pub fn hypergraph_product(c1: &ClassicalCode, c2: &ClassicalCode) -> Self {
        let (h1, h2) = (c1.h(), c2.h());
        let (m1, n1) = (h1.rows(), h1.cols());
        let (m2, n2) = (h2.rows(), h2.cols());
        let hx = h1
            .kron(&BitMatrix::identity(n2))
            .hstack(&BitMatrix::identity(m1).kron(&h2.transpose()))
            .expect("row counts agree by construction");
        let hz = BitMatrix::identity(n1)
            .kron(h2)
            .hstack(&h1.transpose().kron(&BitMatrix::identity(m2)))
            .expect("row counts agree by construction");
        Self::new(hx, hz, format!("hgp({},{})", c1.name(), c2.name()))
            .expect("hypergraph products always commute")
    }

    pub fn hx(&self) -> &BitMatrix {
        &self.hx
    }

    pub fn hz(&self) -> &BitMatrix {
        &self.hz
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of physical qubits.
    pub fn n(&self) -> usize {
        self.hx.cols()
    }

    /// Number of logical qubits.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m_x(&self) -> usize {
        self.hx.rows()
    }

    pub fn m_z(&self) -> usize {
        self.hz.rows()
    }

    /// Total number of stabilizer generators `m_x + m_z`.
    pub fn m(&self) -> usize {
        self.m_x() + self.m_z()
    }

    /// X-type logical operators (rows), paired with [`CssCode::lz`] so that
    /// `L_X · L_Zᵀ = I`.
    pub fn lx(&self) -> &BitMatrix {
        &self.lx
    }

    pub fn lz(&self) -> &BitMatrix {
        &self.lz
    }

    pub fn commutes(&self) -> bool {
        self.hx
            .matmul(&self.hz.transpose())
            .map(|p| p.is_zero())
            .unwrap_or(false)
    }

    /// Extracts `k` X-logicals from `ker(H_Z) / rowspace(H_X)` and `k`
    /// Z-logicals from `ker(H_X) / rowspace(H_Z)`, then re-pairs the Z basis so
    /// the two are symplectically dual.
    pub fn logical_operators(&self) -> Result<(BitMatrix, BitMatrix)> {
        let n = self.n();
        let expected = n as isize - self.hx.rank() as isize - self.hz.rank() as isize;
        let lx = quotient_basis(&self.hz.kernel(), &self.hx);
        let lz = quotient_basis(&self.hx.kernel(), &self.hz);
        if lx.len() as isize != expected || lz.len() as isize != expected {
            return Err(Error::InvalidCode(format!(
                "{}: found {} X- and {} Z-logicals, expected k = {expected}",
                self.name,
                lx.len(),
                lz.len()
            )));
        }
        let lx = BitMatrix::from_bit_rows(n, &lx);
        let lz = BitMatrix::from_bit_rows(n, &lz);
        if lx.rows() == 0 {
            return Ok((lx, lz));
        }
        let pairing = lx.matmul(&lz.transpose())?;
        let inv = pairing.inverse().ok_or_else(|| {
            Error::InvalidCode(format!("{}: logical pairing is singular", self.name))
        })?;
        let lz = inv.transpose().matmul(&lz)?;
        Ok((lx, lz))
    }

    pub fn validate(&self) -> ValidationReport {
        let rank_x = self.hx.rank();
        let rank_z = self.hz.rank();
        let hist = |weights: Vec<usize>| {
            let mut h = BTreeMap::new();
            for w in weights {
                *h.entry(w).or_insert(0) += 1;
            }
            h
        };
        let rows = |m: &BitMatrix| hist((0..m.rows()).map(|r| m.row_weight(r)).collect());
        let cols = |m: &BitMatrix| hist((0..m.cols()).map(|c| m.col_weight(c)).collect());
        ValidationReport {
            n: self.n(),
            m_x: self.m_x(),
            m_z: self.m_z(),
            commutes: self.commutes(),
            rank_x,
            rank_z,
            k: self.n() as i64 - rank_x as i64 - rank_z as i64,
            hx_row_weights: rows(&self.hx),
            hz_row_weights: rows(&self.hz),
            hx_col_weights: cols(&self.hx),
            hz_col_weights: cols(&self.hz),
        }
    }

    /// Writes `hx.alist`, `hz.alist` and `meta.txt` into `dir`.
    pub fn save_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        alist::write(dir.join("hx.alist"), &self.hx)?;
        alist::write(dir.join("hz.alist"), &self.hz)?;
        let meta = format!(
            "name={}\nn={}\nk={}\nm_x={}\nm_z={}\n",
            self.name,
            self.n(),
            self.k,
            self.m_x(),
            self.m_z()
        );
        fs::write(dir.join("meta.txt"), meta)?;
        Ok(())
    }

    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let hx = alist::read(dir.join("hx.alist"))?;
        let hz = alist::read(dir.join("hz.alist"))?;
        let meta_path = dir.join("meta.txt");
        let meta = fs::read_to_string(&meta_path)?;
        let mut fields = BTreeMap::new();
        for line in meta.lines().filter(|l| !l.trim().is_empty()) {
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("{}: bad line {line:?}", meta_path.display()))
            })?;
            fields.insert(key.trim().to_string(), value.trim().to_string());
        }
        let name = fields.get("name").cloned().unwrap_or_else(|| "css".into());
        let code = Self::new(hx, hz, name)?;
        for (key, actual) in [
            ("n", code.n()),
            ("k", code.k()),
            ("m_x", code.m_x()),
            ("m_z", code.m_z()),
        ] {
            if let Some(v) = fields.get(key) {
                let declared: usize = v
                    .parse()
                    .map_err(|_| Error::Parse(format!("meta {key}={v} is not a count")))?;
                if declared != actual {
                    return Err(Error::InvalidCode(format!(
                        "meta declares {key}={declared} but matrices give {actual}"
                    )));
                }
            }
        }
        Ok(code)
    }
}

/// Vectors from `candidates` that are independent modulo `rowspace(base)`, in order.
fn quotient_basis(candidates: &[BitVector], base: &BitMatrix) -> Vec<BitVector> {
    let mut echelon: Vec<(usize, BitVector)> = Vec::new();
    let reduce = |echelon: &[(usize, BitVector)], v: &BitVector| {
        let mut v = v.clone();
        for (p, row) in echelon {
            if v.get(*p) {
                v.xor_assign(row);
            }
        }
        v
    };
    for r in 0..base.rows() {
        let v = reduce(&echelon, &base.row(r));
        let lead = v.iter_ones().next();
        if let Some(p) = lead {
            echelon.push((p, v));
        }
    }
    let mut out = Vec::new();
    for c in candidates {
        let v = reduce(&echelon, c);
        let lead = v.iter_ones().next();
        if let Some(p) = lead {
            echelon.push((p, v));
            out.push(c.clone());
        }
    }
    out
}

/// Structural checks on a CSS code. Violations are recorded, never raised.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub n: usize,
    pub m_x: usize,
    pub m_z: usize,
    pub commutes: bool,
    pub rank_x: usize,
    pub rank_z: usize,
    /// `n - rank(H_X) - rank(H_Z)`; negative for inconsistent inputs.
    pub k: i64,
    pub hx_row_weights: BTreeMap<usize, usize>,
    pub hz_row_weights: BTreeMap<usize, usize>,
    pub hx_col_weights: BTreeMap<usize, usize>,
    pub hz_col_weights: BTreeMap<usize, usize>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.commutes && self.k >= 0
    }

    pub fn max_row_weight(&self) -> usize {
        let last = |h: &BTreeMap<usize, usize>| h.keys().next_back().copied().unwrap_or(0);
        last(&self.hx_row_weights).max(last(&self.hz_row_weights))
    }

    pub fn max_col_weight(&self) -> usize {
        let last = |h: &BTreeMap<usize, usize>| h.keys().next_back().copied().unwrap_or(0);
        last(&self.hx_col_weights).max(last(&self.hz_col_weights))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hist = |h: &BTreeMap<usize, usize>| {
            h.iter()
                .map(|(w, c)| format!("{w}:{c}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(f, "[[{}, {}]]", self.n, self.k)?;
        writeln!(f, "m_x = {}, m_z = {}", self.m_x, self.m_z)?;
        writeln!(
            f,
            "commutation H_X·H_Zᵀ = 0: {}",
            if self.commutes { "ok" } else { "FAILED" }
        )?;
        writeln!(
            f,
            "rank(H_X) = {}, rank(H_Z) = {}",
            self.rank_x, self.rank_z
        )?;
        writeln!(f, "H_X row weights {{{}}}", hist(&self.hx_row_weights))?;
        writeln!(f, "H_Z row weights {{{}}}", hist(&self.hz_row_weights))?;
        writeln!(f, "H_X col weights {{{}}}", hist(&self.hx_col_weights))?;
        write!(f, "H_Z col weights {{{}}}", hist(&self.hz_col_weights))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rep3() -> ClassicalCode {
        ClassicalCode::repetition(3)
    }

    #[test]
    fn builtin_codes() {
        let h = ClassicalCode::hamming7();
        assert_eq!((h.n(), h.k()), (7, 4));
        let b = ClassicalCode::bch15_7();
        assert_eq!((b.n(), b.m(), b.k()), (15, 8, 7));
        // Minimum distance of the BCH fixture by codeword enumeration.
        let kernel = b.h().kernel();
        let mut min_w = usize::MAX;
        for mask in 1u32..1 << kernel.len() {
            let mut v = BitVector::zeros(15);
            for (i, k) in kernel.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    v.xor_assign(k);
                }
            }
            min_w = min_w.min(v.weight());
        }
        assert_eq!(min_w, 5);
    }

    #[test]
    fn classical_code_rejects_uncovered_bits() {
        let h = BitMatrix::from_rows(&[[1, 1, 0]]);
        assert!(ClassicalCode::new(h, "bad").is_err());
        assert!(ClassicalCode::new(BitMatrix::zeros(2, 3), "zero").is_err());
    }

    #[test]
    fn hgp_repetition() {
        let code = CssCode::hypergraph_product(&rep3(), &rep3());
        assert_eq!((code.n(), code.k()), (13, 1));
        assert_eq!((code.m_x(), code.m_z()), (6, 6));
        assert!(code.commutes());
    }

    #[test]
    fn hgp_hamming_bch() {
        let code =
            CssCode::hypergraph_product(&ClassicalCode::hamming7(), &ClassicalCode::bch15_7());
        assert_eq!((code.n(), code.k()), (129, 28));
        assert_eq!((code.m_x(), code.m_z()), (45, 56));
        let report = code.validate();
        assert!(report.passed());
        assert!(report.max_row_weight() <= 11);
        assert_eq!(code.lx().rows(), 28);
        assert_eq!(code.lz().rows(), 28);
    }

    #[test]
    fn validation_reports_noncommuting_pair() {
        let code =
            CssCode::unchecked(BitMatrix::identity(2), BitMatrix::identity(2), "bad").unwrap();
        let report = code.validate();
        assert!(!report.commutes);
        assert!(!report.passed());
        assert_eq!(report.k, -2);
        assert!(CssCode::new(BitMatrix::identity(2), BitMatrix::identity(2), "bad").is_err());
    }

    #[test]
    fn logical_basis_is_valid() {
        let code = CssCode::hypergraph_product(&rep3(), &rep3());
        let (lx, lz) = code.logical_operators().unwrap();
        assert_eq!((lx.rows(), lz.rows()), (1, 1));
        for r in 0..lx.rows() {
            assert!(code.hz().mul(&lx.row(r)).unwrap().is_zero());
            assert!(!code.hx().in_rowspace(&lx.row(r)).unwrap());
            assert!(code.hx().mul(&lz.row(r)).unwrap().is_zero());
            assert!(!code.hz().in_rowspace(&lz.row(r)).unwrap());
        }
        assert_eq!(lx.matmul(&lz.transpose()).unwrap(), BitMatrix::identity(1));
    }

    #[test]
    fn zero_rate_code_has_no_logicals() {
        // Two-qubit code stabilized by XX and ZZ.
        let hx = BitMatrix::from_rows(&[[1, 1]]);
        let hz = BitMatrix::from_rows(&[[1, 1]]);
        let code = CssCode::new(hx, hz, "bell").unwrap();
        assert_eq!(code.k(), 0);
        assert_eq!(code.lx().rows(), 0);
        assert_eq!(code.lz().rows(), 0);
    }

    #[test]
    fn code_directory_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let code = CssCode::hypergraph_product(&ClassicalCode::hamming7(), &rep3());
        code.save_dir(dir.path()).unwrap();
        let loaded = CssCode::load_dir(dir.path()).unwrap();
        assert_eq!(loaded, code);
        let meta = fs::read_to_string(dir.path().join("meta.txt")).unwrap();
        fs::write(dir.path().join("meta.txt"), meta.replace("k=", "k=9")).unwrap();
        assert!(CssCode::load_dir(dir.path()).is_err());
    }

    fn arb_classical(max_m: usize, max_n: usize) -> impl Strategy<Value = ClassicalCode> {
        (1..=max_m, 2..=max_n).prop_flat_map(|(m, n)| {
            proptest::collection::vec(proptest::bool::weighted(0.35), m * n).prop_filter_map(
                "every column covered",
                move |bits| {
                    let mut h = BitMatrix::zeros(m, n);
                    for (i, b) in bits.into_iter().enumerate() {
                        h.set(i / n, i % n, b);
                    }
                    ClassicalCode::new(h, "rand").ok()
                },
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn hgp_invariants(c1 in arb_classical(4, 6), c2 in arb_classical(4, 6)) {
            let code = CssCode::hypergraph_product(&c1, &c2);
            prop_assert!(code.commutes());
            let (n1, m1, n2, m2) = (c1.n(), c1.m(), c2.n(), c2.m());
            prop_assert_eq!(code.n(), n1 * n2 + m1 * m2);
            let k = code.n() - code.hx().rank() - code.hz().rank();
            prop_assert_eq!(code.k(), k);
            // k = k1 k2 + k1ᵀ k2ᵀ with kᵀ the dimension of the transpose code.
            let k1t = m1 - c1.h().rank();
            let k2t = m2 - c2.h().rank();
            prop_assert_eq!(code.k(), c1.k() * c2.k() + k1t * k2t);
            for r in 0..code.lx().rows() {
                prop_assert!(code.hz().mul(&code.lx().row(r)).unwrap().is_zero());
                prop_assert!(!code.hx().in_rowspace(&code.lx().row(r)).unwrap());
                prop_assert!(code.hx().mul(&code.lz().row(r)).unwrap().is_zero());
                prop_assert!(!code.hz().in_rowspace(&code.lz().row(r)).unwrap());
            }
        }
    }
}
