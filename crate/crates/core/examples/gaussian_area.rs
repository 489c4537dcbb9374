//! Gaussian area of the exact solutions: 1 for a line, 2 for a doubled line,
//! sqrt(2*pi/e) for the self-similar circle, and the oval drifting from 2
//! toward the circle value as it approaches extinction.

use flowlab::diagnostics::{gaussian_area, gaussian_area_about};
use flowlab::exact::sample_exact;
use flowlab::{ExactFamily, Point, Polyline};

fn main() -> flowlab::Result<()> {
    let line = Polyline::open((0..=240).map(|k| Point::new(0.0, -60.0 + 0.5 * k as f64)).collect());
    let mut doubled = line.points.clone();
    doubled.extend(line.points.iter().rev().skip(1));
    println!("line          {:.12}", gaussian_area(&line, -1.0)?);
    println!("doubled line  {:.12}", gaussian_area(&Polyline::open(doubled), -1.0)?);
    let circle = sample_exact(&ExactFamily::circle(), -1.0, 20_000, None)?;
    let target = (2.0 * std::f64::consts::PI / std::f64::consts::E).sqrt();
    println!("circle        {:.12} (sqrt(2pi/e) = {target:.12})", gaussian_area(&circle, -1.0)?);

    // Centred at the extinction point, Θ decreases along the flow.
    let oval = ExactFamily::oval();
    for t in [-200.0, -20.0, -2.0, -0.2, -0.02] {
        let p = sample_exact(&oval, t, 8192, None)?;
        println!("oval t = {t:>8}  Θ = {:.8}", gaussian_area_about(&p, t, Point::zeros())?);
    }
    Ok(())
}
