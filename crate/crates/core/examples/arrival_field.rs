//! Arrival-time fields: closed forms on a grid, their concavity and
//! level-set residuals, and a field reconstructed from a sampled trace.

use flowlab::arrival::{closed_form_field, concavity_audit, level_set_residual, reconstruct_arrival, Grid};
use flowlab::exact::{exact_arrival_time, exact_trace};
use flowlab::ExactFamily;

fn main() -> flowlab::Result<()> {
    for (name, family, grid) in [
        ("circle", ExactFamily::circle(), Grid::new(-1.5, 1.5, -1.5, 1.5, 0.02)?),
        ("grim", ExactFamily::grim_reaper(), Grid::new(-1.2, 1.2, -2.0, 2.0, 0.02)?),
        ("oval", ExactFamily::oval(), Grid::new(-1.2, 1.2, -3.0, 3.0, 0.02)?),
    ] {
        let f = closed_form_field(&family, &grid, None);
        let c = concavity_audit(&f)?;
        let r = level_set_residual(&f)?;
        println!("{name:<6} {:>6} nodes  max λ(D²u) {:+.3e} at {:?}  level-set residual {:.2e}", f.masked_count(), c.value, (c.at.x, c.at.y), r.residual);
    }

    let circle = ExactFamily::circle();
    let times: Vec<f64> = (0..=100).map(|k| -1.0 + 0.0099 * k as f64).collect();
    let grid = Grid::new(-1.2, 1.2, -1.2, 1.2, 0.02)?;
    let f = reconstruct_arrival(&exact_trace(&circle, &times, 512, None)?, &grid)?;
    let mut worst = 0.0f64;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            if let Some(u) = f.at(i, j) {
                worst = worst.max((u - exact_arrival_time(&circle, grid.node(i, j))?).abs());
            }
        }
    }
    let c = concavity_audit(&f)?;
    println!("reconstructed circle: {} nodes, max |u - u_exact| {worst:.2e}, max λ(D²u) {:+.4} (exact -1)", f.masked_count(), c.value);

    if let Some(dir) = std::env::args().nth(1) {
        let path = std::path::Path::new(&dir).join("circle_arrival.csv");
        flowlab::io::write_arrival_csv(&path, &f)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
