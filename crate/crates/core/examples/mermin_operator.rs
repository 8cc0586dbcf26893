//! Mermin operators, their quantum values and the closed-form expansion.
use qutrit_mermin::mermin::{closed_form_check, mermin_operator, quantum_value};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let op = mermin_operator(5, 1)?;
    println!("M_1 for N = 5 has {} terms:", op.terms().len());
    for term in op.terms() {
        println!("  α^{} {}", term.weight.value(), term.word);
    }
    for n in 4..=13 {
        let q: Vec<u64> = (0..3).map(|k| quantum_value(n, k)).collect::<Result<_, _>>()?;
        println!("N = {n:2}: quantum values {q:?}");
    }
    let report = closed_form_check(6, 2)?;
    println!("closed form at N = 6, k = 2: {}", if report.passed { "matches" } else { "differs" });
    for class in &report.classes {
        println!("  {} Y: coefficient {}", class.y_count, class.coefficient);
    }
    println!("{}", serde_json::to_string(&mermin_operator(4, 0)?)?);
    Ok(())
}
