use crate::error::{Error, Result};

/// Ordinary least-squares line `y = slope·t + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square of the residuals.
    pub residual_rms: f64,
}

impl LineFit {
    pub fn eval(&self, t: f64) -> f64 {
        self.slope * t + self.intercept
    }

    /// Abscissa where the line reaches `y`.
    pub fn solve(&self, y: f64) -> f64 {
        (y - self.intercept) / self.slope
    }
}

pub fn fit_line(samples: &[(f64, f64)]) -> Result<LineFit> {
    let n = samples.len() as f64;
    if samples.len() < 2 {
        return Err(Error::invalid("line fit needs at least two samples"));
    }
    let t_mean = samples.iter().map(|s| s.0).sum::<f64>() / n;
    let y_mean = samples.iter().map(|s| s.1).sum::<f64>() / n;
    let (mut stt, mut sty) = (0.0, 0.0);
    for &(t, y) in samples {
        stt += (t - t_mean) * (t - t_mean);
        sty += (t - t_mean) * (y - y_mean);
    }
    if !(stt > 0.0) {
        return Err(Error::invalid("line fit needs at least two distinct abscissae"));
    }
    let slope = sty / stt;
    let intercept = y_mean - slope * t_mean;
    let ss: f64 = samples
        .iter()
        .map(|&(t, y)| {
            let r = y - (slope * t + intercept);
            r * r
        })
        .sum();
    Ok(LineFit { slope, intercept, residual_rms: (ss / n).sqrt() })
}
