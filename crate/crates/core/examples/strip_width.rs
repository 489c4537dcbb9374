//! Width histories back in time. The circle widens like sqrt(-t) and is
//! entire; the oval and the Grim Reaper stay inside a strip of width pi.

use flowlab::diagnostics::{width_and_strip, DiagnosticsConfig};
use flowlab::exact::{exact_trace, ClipBox};
use flowlab::ExactFamily;

fn main() -> flowlab::Result<()> {
    let times: Vec<f64> = (0..40).map(|k| -(1000f64.ln() * (1.0 - k as f64 / 39.0)).exp()).collect();
    let clip = ClipBox::new(-1.6, 1.6, -1100.0, 20.0);
    let cfg = DiagnosticsConfig::default();
    for (name, tr) in [
        ("circle", exact_trace(&ExactFamily::circle(), &times, 512, None)?),
        ("oval", exact_trace(&ExactFamily::oval(), &times, 1024, None)?),
        ("grim", exact_trace(&ExactFamily::grim_reaper(), &times, 4096, Some(&clip))?),
    ] {
        let r = width_and_strip(&tr, &cfg)?;
        let (t0, w0) = r.widths[0];
        let (t1, w1) = r.widths[r.widths.len() - 1];
        println!("{name:<6} width {w0:10.4} at t = {t0:7.1}, {w1:7.4} at t = {t1:4.1}; exponent {:.3}  {:?}", r.exponent, r.verdict);
    }
    Ok(())
}
