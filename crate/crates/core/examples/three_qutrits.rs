//! The three-qutrit case, where W joins X and Y.
use qutrit_mermin::hv::{hv_max_brute, ratio_value};
use qutrit_mermin::mermin::mermin_operator;
use qutrit_mermin::report::stated_three_qutrit_maximizer;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for k in 0..3 {
        let op = mermin_operator(3, k)?;
        let out = hv_max_brute(3, k)?;
        let stated = stated_three_qutrit_maximizer(k);
        println!(
            "M_{k}: quantum {}, HV max² {} over 729 (R, S) tuples ({} maximizers)",
            op.quantum_value(),
            out.max_magnitude_squared,
            out.argmax_count
        );
        println!("  first maximizer {:?}", out.argmax[0].exponents());
        println!(
            "  stated maximizer {:?} gives |v|² = {}",
            stated.exponents(),
            ratio_value(&op, &stated)?.norm_squared()
        );
    }
    Ok(())
}
