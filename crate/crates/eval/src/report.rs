//! Sweeps over physical error rates, pseudo-threshold detection and report files.

use std::fmt;
use std::io::Write;
use std::path::Path;

use qldpc_core::{ChannelConfig, CssCode, Decoder};

use crate::error::Result;
use crate::ler::{measure_ler, LerConfig};
use crate::stats::LerPoint;

pub const DEFAULT_PF_LIST: [f64; 6] = [3e-4, 5e-4, 1e-3, 2e-3, 5e-3, 1e-2];

pub const CSV_HEADER: &str = "decoder,p_f,trials,failures,ler,ci_low,ci_high";

#[derive(Clone, Debug, PartialEq)]
pub enum PseudoThreshold {
    Crossing(f64),
    Missing(String),
}

impl PseudoThreshold {
    pub fn value(&self) -> Option<f64> {
        match self {
            PseudoThreshold::Crossing(p) => Some(*p),
            PseudoThreshold::Missing(_) => None,
        }
    }
}

impl fmt::Display for PseudoThreshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PseudoThreshold::Crossing(p) => write!(f, "pseudo-threshold p_f = {p:.4e}"),
            PseudoThreshold::Missing(why) => write!(f, "no pseudo-threshold: {why}"),
        }
    }
}

/// Where `LER(p)` crosses the identity line, by linear interpolation of
/// `ln LER − ln p` against `ln p` between the first straddling pair of points.
/// Points with zero failures carry no log information and are skipped.
pub fn find_pseudo_threshold(points: &[LerPoint]) -> PseudoThreshold {
    let mut usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|pt| pt.ler > 0.0 && pt.p_f > 0.0)
        .map(|pt| (pt.p_f.ln(), pt.ler.ln() - pt.p_f.ln()))
        .collect();
    let skipped = points.len() - usable.len();
    usable.sort_by(|a, b| a.0.total_cmp(&b.0));
    if let Some(&(x, _)) = usable.iter().find(|(_, gap)| *gap == 0.0) {
        return PseudoThreshold::Crossing(x.exp());
    }
    for w in usable.windows(2) {
        let ((x0, g0), (x1, g1)) = (w[0], w[1]);
        if (g0 < 0.0) != (g1 < 0.0) {
            let x = x0 - g0 * (x1 - x0) / (g1 - g0);
            return PseudoThreshold::Crossing(x.exp());
        }
    }
    let why = if usable.len() < 2 {
        format!(
            "{} usable points ({skipped} with zero failures)",
            usable.len()
        )
    } else if usable.iter().all(|(_, g)| *g > 0.0) {
        "LER stays above p_f over the whole range".to_string()
    } else {
        "LER stays below p_f over the whole range".to_string()
    };
    PseudoThreshold::Missing(why)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub decoder: String,
    pub points: Vec<LerPoint>,
    pub pseudo_threshold: PseudoThreshold,
}

impl SweepReport {
    pub fn new(decoder: impl Into<String>, points: Vec<LerPoint>) -> Self {
        let pseudo_threshold = find_pseudo_threshold(&points);
        Self {
            decoder: decoder.into(),
            points,
            pseudo_threshold,
        }
    }

    fn write_rows<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        for pt in &self.points {
            writeln!(
                w,
                "{},{:e},{},{},{:.6e},{:.6e},{:.6e}",
                self.decoder, pt.p_f, pt.trials, pt.failures, pt.ler, pt.ci_low, pt.ci_high
            )?;
        }
        Ok(())
    }
}

/// Measures `decoder` at every rate in `pf_list`, all from the same seed.
pub fn sweep(
    code: &CssCode,
    decoder: &dyn Decoder,
    pf_list: &[f64],
    base: &LerConfig,
) -> Result<SweepReport> {
    let mut points = Vec::with_capacity(pf_list.len());
    for &p in pf_list {
        let cfg = LerConfig {
            channel: ChannelConfig { p, ..base.channel },
            ..*base
        };
        points.push(measure_ler(code, decoder, &cfg)?);
    }
    Ok(SweepReport::new(decoder.name(), points))
}

pub fn write_csv(reports: &[SweepReport], path: impl AsRef<Path>) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "{CSV_HEADER}")?;
    for r in reports {
        r.write_rows(&mut w)?;
    }
    w.flush()?;
    Ok(())
}

/// Whitespace-separated columns, one gnuplot data block per decoder
/// (select with `index`). `notes` become leading comment lines.
pub fn write_gnuplot(
    reports: &[SweepReport],
    notes: &[String],
    path: impl AsRef<Path>,
) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    for note in notes {
        writeln!(w, "# {note}")?;
    }
    for (i, r) in reports.iter().enumerate() {
        if i > 0 {
            writeln!(w, "\n")?;
        }
        writeln!(w, "# {} ({})", r.decoder, r.pseudo_threshold)?;
        writeln!(w, "# p_f trials failures ler ci_low ci_high")?;
        for pt in &r.points {
            writeln!(
                w,
                "{:e} {} {} {:.6e} {:.6e} {:.6e}",
                pt.p_f, pt.trials, pt.failures, pt.ler, pt.ci_low, pt.ci_high
            )?;
        }
    }
    w.flush()?;
    Ok(())
}
