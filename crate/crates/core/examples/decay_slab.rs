//! Interior decay of source-free fields on a slab, and what happens at real
//! frequency.
//!
//! Run with `cargo run --example decay_slab`.

use te_maxwell::decay::DecayConfig;

fn main() -> te_maxwell::Result<()> {
    let moduli = [10.0, 20.0, 40.0];
    for cfg in [DecayConfig::default(), DecayConfig { real_omega: true, ..Default::default() }] {
        let fit = cfg.run(&moduli)?;
        println!(
            "{}: ratios {:?}",
            if cfg.real_omega { "real ω   " } else { "in wedge " },
            fit.ratios.iter().map(|r| format!("{r:.3e}")).collect::<Vec<_>>()
        );
        println!("           c1 = {:.4}, c2 = {:.4}, residual {:.2e}, violation: {}", fit.c1, fit.c2, fit.residual, fit.violation);
    }
    let p = te_maxwell::decay::slab_solve(&DecayConfig::default().problem(20.0))?;
    for s in [0.1, 0.2, 0.3, 0.4] {
        println!("collar {s}: interior/collar ratio {:.3e}", p.ratio(s));
    }
    Ok(())
}
