//! Named single-qubit operators.

use crate::C64;

use super::QMatrix;

pub fn pauli_x() -> QMatrix {
    QMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]])
}

pub fn pauli_y() -> QMatrix {
    let i = C64::new(0.0, 1.0);
    QMatrix::from_rows(&[vec![C64::new(0.0, 0.0), -i], vec![i, C64::new(0.0, 0.0)]])
        .expect("2x2 literal")
}

pub fn pauli_z() -> QMatrix {
    QMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]])
}

/// Lowering operator `|0⟩⟨1|` in the basis ordered `(|0⟩, |1⟩)`.
pub fn lowering() -> QMatrix {
    QMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]])
}
