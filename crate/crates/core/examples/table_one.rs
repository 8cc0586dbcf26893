//! Quantum and hidden-variable values for N = 4..13 with every method
//! cross-checked.
use qutrit_mermin::report::{self, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let report = report::table(&RunConfig::with_range(4, 13))?;
    print!("{}", report.output);
    for note in &report.diagnostics {
        eprintln!("{note}");
    }
    Ok(())
}
