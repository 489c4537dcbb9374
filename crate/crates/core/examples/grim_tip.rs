//! Zooms into the tip of an old Angenent oval and fits a Grim Reaper to it.
//! The fitted scale tends to 1 as t → -∞.

use flowlab::diagnostics::{fit_grim_reaper, tip_frame, TipSide};
use flowlab::exact::sample_exact;
use flowlab::ExactFamily;

fn main() -> flowlab::Result<()> {
    println!("{:>8} {:>10} {:>12} {:>10}", "t", "r", "1/kappa_tip", "residual");
    for t in [-2.0, -5.0, -20.0, -100.0] {
        let p = sample_exact(&ExactFamily::oval(), t, 8192, None)?;
        let frame = tip_frame(&p, TipSide::Theta0)?;
        let fit = fit_grim_reaper(&frame, 1.5)?;
        println!("{t:8.1} {:10.6} {:12.6} {:10.2e}", fit.r, fit.r_curvature, fit.residual);
    }
    Ok(())
}
