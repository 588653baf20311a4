//! Identity reports.
//!
//! One record per verified identity: suite, identity key, anchor tag,
//! number of draws, max/mean residual, tolerance, pass flag and wall time.
//! Records serialize to single JSON lines with a fixed field order and
//! 17-significant-digit numeric formatting so that identical runs produce
//! byte-identical report bodies (modulo the `wall_ms` field).

#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub suite: String,
    pub identity: String,
    pub anchor: String,
    pub draws: usize,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub error: Option<String>,
    pub wall_ms: f64,
}

impl IdentityReport {
    /// Build from a residual collection; `pass` is exactly
    /// `max residual <= tolerance`.
    pub fn from_residuals(
        suite: &str,
        identity: &str,
        anchor: &str,
        tolerance: f64,
        draws: usize,
        residuals: &[f64],
        wall_ms: f64,
    ) -> Self {
        let max = residuals.iter().cloned().fold(0.0, f64::max);
        let mean = if residuals.is_empty() {
            0.0
        } else {
            residuals.iter().sum::<f64>() / residuals.len() as f64
        };
        IdentityReport {
            suite: suite.to_string(),
            identity: identity.to_string(),
            anchor: anchor.to_string(),
            draws,
            max_residual: max,
            mean_residual: mean,
            tolerance,
            pass: max <= tolerance && max.is_finite(),
            error: None,
            wall_ms,
        }
    }

    pub fn failed(
        suite: &str,
        identity: &str,
        anchor: &str,
        tolerance: f64,
        error: String,
        wall_ms: f64,
    ) -> Self {
        IdentityReport {
            suite: suite.to_string(),
            identity: identity.to_string(),
            anchor: anchor.to_string(),
            draws: 0,
            max_residual: f64::INFINITY,
            mean_residual: f64::INFINITY,
            tolerance,
            pass: false,
            error: Some(error),
            wall_ms,
        }
    }

    /// One JSON object per line; numbers carry 17 significant digits.
    pub fn json_line(&self) -> String {
        let mut s = String::with_capacity(256);
        s.push_str(&format!(
            "{{\"suite\":{},\"identity\":{},\"anchor\":{}",
            json_str(&self.suite),
            json_str(&self.identity),
            json_str(&self.anchor)
        ));
        s.push_str(&format!(",\"draws\":{}", self.draws));
        match &self.error {
            None => {
                s.push_str(&format!(
                    ",\"max_residual\":{},\"mean_residual\":{}",
                    fmt_f64(self.max_residual),
                    fmt_f64(self.mean_residual)
                ));
            }
            Some(e) => {
                s.push_str(",\"max_residual\":null,\"mean_residual\":null");
                s.push_str(&format!(",\"error\":{}", json_str(e)));
            }
        }
        s.push_str(&format!(
            ",\"tolerance\":{},\"pass\":{},\"wall_ms\":{:.3}}}",
            fmt_f64(self.tolerance),
            self.pass,
            self.wall_ms
        ));
        s
    }
}

fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_max_below_tolerance() {
        let r = IdentityReport::from_residuals("s", "i", "a", 1e-9, 3, &[1e-12, 5e-10], 1.0);
        assert!(r.pass);
        let r = IdentityReport::from_residuals("s", "i", "a", 1e-9, 3, &[1e-12, 5e-9], 1.0);
        assert!(!r.pass);
    }

    #[test]
    fn json_shape() {
        let r = IdentityReport::from_residuals("theta", "theta-periods", "periods", 1e-10, 200, &[1e-13], 2.5);
        let line = r.json_line();
        assert!(line.starts_with("{\"suite\":\"theta\""));
        assert!(line.contains("\"max_residual\":1.0000000000000000e-13"));
        assert!(line.contains("\"pass\":true"));
        assert!(line.ends_with("}"));
        let e = IdentityReport::failed("x", "y", "z", 1e-8, "pole of gamma".into(), 0.1);
        assert!(e.json_line().contains("\"error\":\"pole of gamma\""));
        assert!(e.json_line().contains("\"max_residual\":null"));
    }
}
