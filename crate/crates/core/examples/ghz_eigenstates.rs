//! GHZ states as joint eigenstates of rotated XX...X words.
use qutrit_mermin::ghz::{eigencheck, ghz_state, rotate_state, EigenResult};
use qutrit_mermin::pauli::ObservableWord;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let state = ghz_state(4, 1)?;
    for word in ["YXXX", "YYYY", "XXXX", "YYXX"] {
        let word: ObservableWord = word.parse()?;
        match eigencheck(&word, &state)? {
            EigenResult::Eigenvalue(v) => println!("{word} GHZ_1 = ({v}) GHZ_1"),
            EigenResult::NotEigenstate => println!("{word}: GHZ_1 is not an eigenstate"),
        }
    }

    // rotating the qutrits moves GHZ_k around the phase circle
    let rotated = rotate_state(&ghz_state(4, 0)?, &[1, 0, 0, 0])?;
    println!("GHZ_0 rotated by 2π/9: phase index {}", rotated.phase_index().value());
    let rotated = rotate_state(&ghz_state(4, 0)?, &[1, 1, 1, 0])?;
    println!("GHZ_0 rotated by 3·2π/9: phase index {}", rotated.phase_index().value());
    let rotated = rotate_state(&ghz_state(4, 0)?, &[2, 2, 2, 3])?;
    if let Some(k) = rotated.k() {
        println!("GHZ_0 rotated by 9·2π/9 is GHZ_{k} again");
    }
    Ok(())
}
