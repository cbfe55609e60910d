//! Search entropy parameters and report the certified decay rates.
//!
//! cargo run --example certify_rate

use bgkmix::hypocoercivity::{certify, find_mu, lyapunov_rates, rate_c, EntropyParams, SearchOptions};
use bgkmix::mixture::MixtureParams;
use bgkmix::spectral::TransportConvention;

fn main() {
    let p = MixtureParams::symmetric().validate().unwrap();
    let conv = TransportConvention::MassScaled;
    println!("k = 0 rate C = {}", rate_c(&p).unwrap());
    println!("identity P: mu = {}", find_mu(&p, &EntropyParams::identity(), 8, 32, conv).unwrap());

    let cert = certify(&p, 8, 32, 120, SearchOptions::default()).unwrap();
    let ep = cert.eparams;
    println!(
        "search: alpha_tilde = {:.4}, beta = {:.4}, gamma_tilde = {:.4}",
        ep.alpha_tilde, ep.beta, ep.gamma_tilde
    );
    println!("mu = {:.5}, C_tilde = {:.5}, c_d = {:.4}, C_d = {:.4}", cert.mu, cert.c_tilde, cert.c_d, cert.cap_d);
    let rates = lyapunov_rates(&p, &ep, 8, 32, conv).unwrap();
    let worst = rates.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    println!("binding mode k = {} (rate {:.5}); k = 32 rate {:.5}", worst.0 + 1, worst.1, rates[31]);
}
