//! Arithmetic in F_9 and F_81, Frobenius, relative norms and a tower of
//! embeddings F_3 < F_9 < F_81.

use cwlab::ff::{embed_subfield, FieldSpec};

fn main() -> cwlab::Result<()> {
    let f9 = FieldSpec::new(3, 2)?;
    println!("{f9} with modulus {:?} (ascending)", f9.modulus());
    let g = f9.generator();
    let mut x = f9.one();
    // x is not primitive for x^2 + 1; its powers cycle with period 4
    print!("powers of x:");
    for _ in 0..8 {
        print!(" {}", f9.format_element(x));
        x = f9.mul(x, g);
    }
    println!();
    println!("g^-1 = {}", f9.format_element(f9.inv(g)?));
    println!("frobenius(g) = g^3 = {}", f9.format_element(f9.frobenius(g, 1)?));

    let f81 = FieldSpec::new(3, 4)?;
    let h = f81.generator();
    let norm = f81.relative_norm(h, 2)?;
    println!("N_(81/9)(g) = {} (fixed by x -> x^9: {})", f81.format_element(norm), f81.pow(norm, 9) == norm);

    let f3 = FieldSpec::new(3, 1)?;
    let a = embed_subfield(&f3, &f9)?;
    let b = embed_subfield(&f9, &f81)?;
    let ab = a.then(&b)?;
    println!("F_9 -> F_81 sends g to {}", f81.format_element(b.image_of_generator()));
    println!("pulled back: {:?}", b.pull_back(norm).map(|e| f9.format_element(e)));
    println!("2 in F_3 maps to {} in F_81", f81.format_element(ab.apply(f3.from_int(2))));
    Ok(())
}
