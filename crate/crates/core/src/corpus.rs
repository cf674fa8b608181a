//! Small named codes used by the tests, the FFI smoke tests and the README.

use crate::binary_codes::BinaryCode;
use crate::concatenation::{binary_expand_code, concat_build, ConcatSpec};
use crate::finite_field::{find_self_dual_basis, FieldTable};
use crate::outer_codes::GrsCode;

/// [2, 1, 2] repetition code.
pub fn repetition2() -> BinaryCode {
    BinaryCode::from_strs(&["11"]).expect("valid code")
}

/// [8, 4, 4] extended Hamming code (first-order Reed–Muller).
pub fn e8() -> BinaryCode {
    BinaryCode::from_strs(&["11111111", "11110000", "11001100", "10101010"]).expect("valid code")
}

pub fn zero(n: usize) -> BinaryCode {
    BinaryCode::zero(n).expect("valid length")
}

/// The self-orthogonal [3, 1]_4 GRS code: points and multipliers (1, ω, ω²).
pub fn grs_3_1() -> GrsCode {
    let f = FieldTable::with_default_modulus(2).expect("GF(4)");
    GrsCode::new(&f, vec![1, 2, 3], vec![1, 2, 3], 1).expect("valid GRS code")
}

/// [6, 2] binary image of [`grs_3_1`] under the self-dual basis {ω, ω²}.
pub fn expansion_6_2() -> BinaryCode {
    let outer = grs_3_1();
    let basis = find_self_dual_basis(outer.field()).expect("GF(4) basis");
    binary_expand_code(&outer, &basis).expect("valid expansion")
}

/// [18, 2, 12] concatenation of [`grs_3_1`] with the inner code 111000 / 000111.
pub fn concat_18_2() -> BinaryCode {
    let outer = grs_3_1();
    let basis = find_self_dual_basis(outer.field()).expect("GF(4) basis");
    let inner = BinaryCode::from_strs(&["111000", "000111"]).expect("valid code");
    concat_build(&ConcatSpec::new(outer, basis, inner).expect("valid spec")).expect("valid code")
}

/// Every named code with a short label.
pub fn all() -> Vec<(&'static str, BinaryCode)> {
    vec![
        ("repetition-2-1", repetition2()),
        ("e8", e8()),
        ("expansion-6-2", expansion_6_2()),
        ("concat-18-2", concat_18_2()),
        ("zero-2", zero(2)),
        ("zero-4", zero(4)),
    ]
}
