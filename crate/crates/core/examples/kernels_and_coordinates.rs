//! Model kernels, Gaussian mollifiers, and the two coordinate changes used by
//! the contraction routines.

use contracted_kernels::kernels::{
    center_of_mass, eval_kernel, from_center_of_mass, from_hyperspherical, gaussian_product, to_hyperspherical, volume_element,
    KernelPoint, KernelSpec, Vec3,
};

fn main() -> contracted_kernels::Result<()> {
    let x = Vec3::new(0.3, -0.2, 0.5);
    let y = Vec3::new(-0.1, 0.4, 0.0);

    let specs: Vec<KernelSpec> = serde_json::from_str(
        r#"[{"variant":"Coulomb"},{"variant":"Yukawa","alpha":0.5},{"variant":"K12Leading","c12":1.0}]"#,
    )
    .expect("kernel JSON");
    for spec in &specs {
        let p = match spec {
            KernelSpec::K12Leading { .. } => KernelPoint::TwoParticle { x1: x, x2: y, y1: y, y2: x },
            _ => KernelPoint::Pair(x, y),
        };
        println!("{spec:?}: {:.12}", eval_kernel(spec, &p)?);
    }

    let bump = KernelSpec::GaussianBump { center: vec![0.0; 3], beta: 1000.0, dim: 3 };
    println!("bump at center: {:.6e}", eval_kernel(&bump, &KernelPoint::Point(vec![0.0; 3]))?);

    let g = gaussian_product(2.0, x, 3.0, y)?;
    println!("gaussian product: {:.6} exp(-{} |x - {:?}|^2)", g.coefficient, g.exponent, g.center.0);

    let h = to_hyperspherical(x, y);
    let (x1, x2) = from_hyperspherical(&h);
    println!("hyperspherical t={:.6} r={:.6} dV={:.6e} round trip {:.1e}", h.t, h.r, volume_element(&h), (x1 - x).norm() + (x2 - y).norm());

    let (z1, z2) = center_of_mass(x, y);
    let (u, v) = from_center_of_mass(z1, z2);
    println!("centre of mass z1={:?} z2={:?} round trip {:.1e}", z1.0, z2.0, (u - x).norm() + (v - y).norm());
    Ok(())
}
