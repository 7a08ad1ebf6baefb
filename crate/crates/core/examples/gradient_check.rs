//! Analytic backprop against central finite differences for a tanh MLP.
//!
//! ```text
//! cargo run --release --example gradient_check
//! ```

use gasil::nn::{Mlp, OutputInit};
use gasil::seeding::Rng;
use rand::{Rng as _, SeedableRng};

fn main() -> gasil::Result<()> {
    let mut rng = Rng::seed_from_u64(7);
    let net = Mlp::new(&[6, 16, 16, 3], OutputInit::Unit, &mut rng)?;
    let input: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
    // Scalar loss L = w . f(x); its gradient w.r.t. the outputs is w.
    let w: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
    let loss = |net: &Mlp| -> gasil::Result<f64> {
        Ok(net.predict(&input)?.iter().zip(&w).map(|(y, w)| y * w).sum())
    };

    let (_, cache) = net.forward(&input)?;
    let analytic = net.backward(&cache, &w)?;

    let h = 1e-6;
    let mut worst: f64 = 0.0;
    let mut probe = net.clone();
    for i in 0..net.param_count() {
        let orig = probe.params()[i];
        probe.params_mut()[i] = orig + h;
        let up = loss(&probe)?;
        probe.params_mut()[i] = orig - h;
        let down = loss(&probe)?;
        probe.params_mut()[i] = orig;
        let numeric = (up - down) / (2.0 * h);
        let rel = (numeric - analytic[i]).abs() / numeric.abs().max(analytic[i].abs()).max(1e-8);
        worst = worst.max(rel);
    }
    println!("{} parameters, max relative error {worst:.2e}", net.param_count());
    Ok(())
}
