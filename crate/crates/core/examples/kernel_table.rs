//! Fundamental solutions on a log grid, with the ODE residual and the pointwise bound.

use slabcert::kernel::{eval_g, kernel_bound, radial_residual, GreenKernel};
use slabcert::spectral::ModeWavenumber;

fn main() -> slabcert::Result<()> {
    println!("n,class,kappa,r,re,im,residual,bound");
    for n in 2..=5 {
        for k_m in [ModeWavenumber::evanescent(2.0), ModeWavenumber::propagating(2.0)] {
            let g = GreenKernel::new(n, k_m, None)?;
            for i in 0..9 {
                let r = 0.05 * 400f64.powf(i as f64 / 8.0);
                let v = eval_g(&g, r)?;
                let bound = kernel_bound(n, &k_m, r).map_or(String::new(), |b| format!("{b:.4e}"));
                let class = format!("{:?}", k_m.class).to_lowercase();
                println!("{n},{class},{},{r:.4},{:.6e},{:.6e},{:.1e},{bound}", k_m.abs(), v.re, v.im, radial_residual(&g, r)?);
            }
        }
    }
    Ok(())
}
