//! Checks the clipped-area lower bound for the oval: below its widest level
//! the curve holds at least the trapezium spanned by the chord endpoints.

use flowlab::arrival::rectangle_claim_audit;
use flowlab::exact::exact_trace;
use flowlab::ExactFamily;

fn main() -> flowlab::Result<()> {
    let times: Vec<f64> = (0..20).map(|k| -(100f64.ln() + (10f64.ln() - 100f64.ln()) * k as f64 / 19.0).exp()).collect();
    let r = rectangle_claim_audit(&exact_trace(&ExactFamily::oval(), &times, 2048, None)?)?;
    println!("{:>9} {:>9} {:>10} {:>10} {:>10}", "t", "width", "lhs-", "lhs+", "rhs");
    for p in &r.points {
        println!("{:9.3} {:9.5} {:10.4} {:10.4} {:10.4}", p.t, p.width, p.lhs_minus, p.lhs_plus, p.rhs);
    }
    println!("claim holds: {}", r.pass);
    Ok(())
}
