//! Arithmetic in F_16 and its subfield F_4, with Frobenius and traces.

use cycle_sieve::field::{make_field, ArithOp};

fn main() -> cycle_sieve::Result<()> {
    let f4 = make_field(2, 2)?;
    let f16 = make_field(2, 4)?;
    println!("F_4  modulus (low to high): {:?}", f4.modulus());
    println!("F_16 modulus (low to high): {:?}", f16.modulus());

    let t = f4.elem(2);
    let image = f16.embed(t)?;
    println!("t in F_4 embeds as code {} in F_16", image.code());

    let a = f16.elem(7);
    let inv = f16.field_arith(a, ArithOp::Inv)?;
    let one = f16.field_arith(a, ArithOp::Mul(inv))?;
    println!("7 * 7^-1 = {}", one.code());

    let ext = f4.extension(2)?;
    for code in [1u32, 5, 11] {
        println!(
            "a = {:>2}: frob(a) = {:>2}, Tr_{{16/4}}(a) = {}",
            code,
            ext.frob(code),
            ext.trace(code)
        );
    }
    Ok(())
}
