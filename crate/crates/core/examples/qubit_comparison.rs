//! Qubit Mermin ratios next to the qutrit ones.
use qutrit_mermin::mermin::qubit_comparison;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(" N  quantum  HV max  ratio  formula");
    for n in 3..=12 {
        let c = qubit_comparison(n, (n % 2) as u8)?;
        println!(
            "{n:2}  {:7}  {:6}  {:5}  {:7}",
            c.quantum_value, c.hv_max, c.ratio, c.formula_ratio
        );
    }
    Ok(())
}
