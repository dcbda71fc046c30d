//! Seeded importance sampling. The estimate depends on the seed only, not on
//! the number of worker threads.

use contracted_kernels::quadrature::{mc_integrate, spherical_average, CoulombBall, GaussianSampler};

fn main() -> contracted_kernels::Result<()> {
    let seed = 7;

    // int exp(-|x|^2)/|x| d^3x = 2 pi
    let ball = CoulombBall { center: [0.0; 3], radius: 6.0 };
    let f = |x: &[f64]| {
        let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        (-r2).exp() / r2.sqrt()
    };
    for n in [10_000, 100_000, 1_000_000] {
        let r = mc_integrate(f, &ball, n, seed)?;
        println!("n = {n:>8}: {:.6} +- {:.6} (exact {:.6})", r.value, r.stderr, 2.0 * std::f64::consts::PI);
    }

    let gauss = GaussianSampler::new(vec![0.0; 2], vec![1.0; 2])?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("thread pool");
    let single = pool.install(|| mc_integrate(|x| (x[0] * x[1]).cos(), &gauss, 200_000, seed))?;
    let multi = mc_integrate(|x| (x[0] * x[1]).cos(), &gauss, 200_000, seed)?;
    println!("1 thread {:.17e}\nN thread {:.17e}", single.value, multi.value);

    let avg = spherical_average(|d| d[2] * d[2], 100_000, seed)?;
    println!("<cos^2 theta> = {:.5} +- {:.5} (exact 1/3)", avg.value, avg.stderr);
    Ok(())
}
