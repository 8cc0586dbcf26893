//! Exact arithmetic in Z[α], α = e^{2πi/9}.
use qutrit_mermin::cyclo::{Cyclotomic, PhaseExponent};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha = Cyclotomic::alpha();
    let x = Cyclotomic::from_int(4) + Cyclotomic::omega().checked_pow(2)?;
    println!("α^6            = {}", alpha.checked_pow(6)?);
    println!("α^9            = {}", alpha.checked_pow(9)?);
    println!("4 + ω²         = {x}");
    println!("|4 + ω²|²      = {}", x.norm_squared());
    println!("conj(α)        = {}", alpha.conj());
    println!("1 + α + ... α^8 = {}", (0..9).map(Cyclotomic::alpha_pow).sum::<Cyclotomic>());

    let z = x.to_complex();
    println!("4 + ω² ≈ {:.6} + {:.6}i", z.re, z.im);

    let p = PhaseExponent::new(7);
    println!("α^7 · α^5 = α^{}", (p + PhaseExponent::new(5)).value());
    Ok(())
}
