//! Hidden-variable maxima by exhaustive search, permutation symmetry and
//! the uniform/single-departure comparison.
use qutrit_mermin::hv::{
    asymptotics, crossover_n, hv_max_brute, hv_max_symmetric, hv_max_theorem, magnitudes_abc,
    theorem_k_set,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (n, k) in [(4, 1), (5, 1), (7, 2), (9, 0)] {
        let brute = hv_max_brute(n, k)?;
        let symmetric = hv_max_symmetric(n, k)?;
        let theorem = hv_max_theorem(n, k)?;
        println!(
            "N = {n}, k = {k}: |v|² = {} (brute) {} (symmetric) {} (theorem), maximizers {}",
            brute.max_magnitude_squared,
            symmetric.max_magnitude_squared,
            theorem.max_magnitude_squared,
            brute.argmax_count,
        );
    }
    println!("theorem k sets: {:?}", (4..=13).map(theorem_k_set).collect::<Vec<_>>());
    let m = magnitudes_abc();
    println!("A = {:.4}, B = {:.4}, C = {:.4}", m.a, m.b, m.c);
    println!("uniform overtakes single departure at N ≈ {:.4}", crossover_n());
    println!("ratio grows like {:.4}^N", asymptotics(13).ratio_growth_base);
    println!("{}", serde_json::to_string(&hv_max_theorem(11, 1)?)?);
    Ok(())
}
