//! Exact counts against Wright's formula, the major-arc model of M(e^{-y}),
//! and the leading small-y behaviour of F_2.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use refined_dt::asym::{
    f2_mellin_approx, ln_bigint, ln_eval_at_exp, ln_major_arc_m, ln_wright_pn, saddle_n,
    theorem1_params, CONSTANTS,
};
use refined_dt::expand::{expand_f2, expand_macmahon};

fn main() {
    let (mu, sigma2) = theorem1_params(3.0);
    println!("constants: {:?}", CONSTANTS);
    println!(
        "mu(3) = {mu:.10}, sigma^2 = {sigma2:.10}, saddle radius at n = 10^4: {:.6}\n",
        saddle_n(1e4)
    );

    let p = expand_macmahon::<BigInt>(1600);
    println!("     n   p_n / Wright");
    for n in [25, 100, 400, 1600] {
        println!(
            "{n:6}   {:.8}",
            (ln_bigint(p.coeff(n)) - ln_wright_pn(n as f64)).exp()
        );
    }

    let m = expand_macmahon::<f64>(5000);
    println!("\n  N   M(e^(-1/N)) / major arc");
    for big_n in [2.0, 3.0, 4.0, 6.0] {
        let y = 1.0 / big_n;
        println!(
            "{big_n:3}   {:.8}",
            (ln_eval_at_exp(&m, y) - ln_major_arc_m(y)).exp()
        );
    }

    let f2 = expand_f2(5000).map(|c| c.to_f64().unwrap());
    println!("\n    y   F2(e^-y) y^4   leading 2ζ(3)   with y^-2 term");
    for y in [0.2, 0.1, 0.05] {
        let v = ln_eval_at_exp(&f2, y).exp();
        println!(
            "{y:5}   {:.8}     {:.8}      {:.8}",
            v * y.powi(4),
            f2_mellin_approx(y, false) * y.powi(4),
            f2_mellin_approx(y, true) * y.powi(4)
        );
    }
}
