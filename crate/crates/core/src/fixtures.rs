//! Small named instances used throughout tests and the CLI examples.

use std::sync::Arc;

use crate::base::{CategoryData, FinCategory, MorphismData};
use crate::qcategory::QCategory;
use crate::quantaloid::QHom;

/// `X --f--> Y`.
pub fn arrow_category() -> FinCategory {
    let m = |id: &str, src: &str, dst: &str| MorphismData {
        id: id.into(),
        src: src.into(),
        dst: dst.into(),
    };
    let data = CategoryData {
        objects: vec!["X".into(), "Y".into()],
        morphisms: vec![m("1X", "X", "X"), m("1Y", "Y", "Y"), m("f", "X", "Y")],
        identities: [("X".into(), "1X".into()), ("Y".into(), "1Y".into())].into(),
        composition: [
            ["1X", "1X", "1X"],
            ["1Y", "1Y", "1Y"],
            ["1Y", "f", "f"],
            ["f", "1X", "f"],
        ]
        .iter()
        .map(|t| t.map(String::from))
        .collect(),
    };
    FinCategory::new(&data).expect("arrow category is valid")
}

/// A preorder on `ids` over the terminal base; `le(i, j)` must be reflexive
/// and transitive.
pub fn preorder(ids: &[&str], le: impl Fn(usize, usize) -> bool) -> QCategory {
    let b = Arc::new(FinCategory::terminal());
    let objects = ids.iter().map(|id| (id.to_string(), 0)).collect();
    QCategory::from_fn(b.clone(), objects, |x, y| {
        if le(x, y) {
            QHom::full(&b, 0, 0)
        } else {
            QHom::empty(0, 0)
        }
    })
    .expect("well-typed")
}

/// The `n`-chain `0 ≤ 1 ≤ … ≤ n-1` over the terminal base.
pub fn chain(n: usize) -> QCategory {
    let ids: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
    preorder(&refs, |x, y| x <= y)
}

/// The two-element antichain `{a, b}` over the terminal base.
pub fn e_ac() -> QCategory {
    preorder(&["a", "b"], |x, y| x == y)
}

/// The two-element chain `0 ≤ 1` over the terminal base.
pub fn e_ch() -> QCategory {
    chain(2)
}

/// One object `e` of extent `X` over the arrow category, `E(e, e) = {1X}`.
pub fn e_x() -> QCategory {
    let b = Arc::new(arrow_category());
    QCategory::from_fn(b.clone(), vec![("e".into(), 0)], |_, _| {
        QHom::identity(&b, 0)
    })
    .expect("well-typed")
}
