//! The local bases X, Y, W as monomial matrices and their action on words.
use qutrit_mermin::pauli::{
    apply_word, dense_matrix, local_matrix, local_matrix_with, BasisLabel, ObservableWord,
    WVariant,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for label in BasisLabel::ALL {
        let op = local_matrix(label);
        let phases: Vec<u8> = op.column_phases().iter().map(|p| p.value()).collect();
        println!("{label:?}: |n> -> α^{phases:?} |n+1>, cube is identity: {}", op.pow(3).is_identity());
    }
    let displayed = local_matrix_with(BasisLabel::W, WVariant::Displayed);
    let phases: Vec<u8> = displayed.column_phases().iter().map(|p| p.value()).collect();
    println!("W as displayed: α^{phases:?}");

    let word: ObservableWord = "XYW".parse()?;
    let (phase, image) = apply_word(&word, &[0, 0, 0])?;
    println!("{word} |000> = α^{} |{}>", phase.value(), image.iter().map(u8::to_string).collect::<String>());

    let dense = dense_matrix(&word)?;
    println!("dense {word}: {}x{}, monomial: {}", dense.dim(), dense.dim(), dense.is_monomial());
    Ok(())
}
