//! Parabolic blow-downs of ancient traces: the circle stays a circle, the
//! oval and the Grim Reaper flatten to a line of multiplicity two.

use flowlab::diagnostics::{annotate, blow_down, classify_blow_down, DiagnosticsConfig};
use flowlab::exact::{exact_trace, ClipBox};
use flowlab::{ExactFamily, FlowTrace};

fn log_times(from: f64, to: f64, n: usize) -> Vec<f64> {
    let (a, b) = ((-from).ln(), (-to).ln());
    (0..n).map(|k| -(a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect()
}

fn classify(name: &str, mut tr: FlowTrace) -> flowlab::Result<()> {
    annotate(&mut tr)?;
    let v = classify_blow_down(&blow_down(&tr, &[1.0, 0.3, 0.1])?, &DiagnosticsConfig::default())?;
    let thetas: Vec<String> = v.thetas.iter().map(|(l, th)| format!("λ={l}: {th:.4}")).collect();
    println!("{name:<6} -> {:?}  [{}]", v.kind, thetas.join(", "));
    Ok(())
}

fn main() -> flowlab::Result<()> {
    let times = log_times(-250.0, -0.5, 200);
    classify("circle", exact_trace(&ExactFamily::circle(), &times, 512, None)?)?;
    classify("oval", exact_trace(&ExactFamily::oval(), &log_times(-200.0, -1.0, 200), 1024, None)?)?;
    let clip = ClipBox::new(-1.6, 1.6, -260.0, 150.0);
    classify("grim", exact_trace(&ExactFamily::grim_reaper(), &times, 8192, Some(&clip))?)?;
    Ok(())
}
