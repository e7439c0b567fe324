//! The bundled test categories.

use super::ordinary::FiniteCategory;
use super::vcategory::VCategory;
use crate::cosmos::FinVect;
use crate::error::{shape, Result};
use crate::linalg::{Fp, FpMatrix};

/// A one-object V-category from an algebra with basis `e_0, …, e_{n−1}`:
/// `mult` is the `n × n²` matrix sending `e_g ⊗ e_f` (column `g·n + f`) to
/// `e_g e_f`, and `unit` the coordinates of the unit element.
pub fn algebra(fp: Fp, label: &str, mult: FpMatrix, unit: &[u32]) -> Result<VCategory<FinVect>> {
    let n = unit.len();
    if mult.rows() != n || mult.cols() != n * n {
        return Err(shape("algebra", format!("structure constants must be {n}x{}", n * n)));
    }
    let v = FinVect::new(fp);
    VCategory::new(
        v,
        vec![label.to_string()],
        |_, _| Ok(v.obj(n)),
        |_, _, _| Ok(mult.clone()),
        |_| Ok(FpMatrix::column(fp, unit)),
    )
}

/// `F_p[x]/(x²)` with basis `{1, x}`.
pub fn dual_numbers(fp: Fp) -> VCategory<FinVect> {
    // columns: 1·1, 1·x, x·1, x·x
    let mult = FpMatrix::from_rows(fp, &[vec![1, 0, 0, 0], vec![0, 1, 1, 0]]).expect("static shape");
    algebra(fp, "R", mult, &[1, 0]).expect("static shape")
}

/// The free V-category on `a → b`.
pub fn quiver_a_to_b(fp: Fp) -> VCategory<FinVect> {
    let l = FiniteCategory::free_on_quiver(&["a", "b"], &[("f", 0, 1)]).expect("acyclic quiver");
    VCategory::free(FinVect::new(fp), &l).expect("free V-category")
}

pub fn unit(fp: Fp) -> VCategory<FinVect> {
    VCategory::unit(FinVect::new(fp)).expect("unit V-category")
}

/// The three bundled categories, by name.
pub fn bundled(fp: Fp) -> Vec<(&'static str, VCategory<FinVect>)> {
    vec![
        ("unit", unit(fp)),
        ("dual-numbers", dual_numbers(fp)),
        ("quiver", quiver_a_to_b(fp)),
    ]
}
