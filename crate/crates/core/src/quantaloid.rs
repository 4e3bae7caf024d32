//! Homs of the free quantaloid on a finite category.
//!
//! A [`QHom`] `X ⇸ Y` is a subset of the hom-set `B(X, Y)`, stored as a
//! bitmask over local indices (see [`FinCategory::local_index`]). Joins are
//! unions, meets are intersections, composition is elementwise, and the two
//! residuals are the right adjoints to pre- and post-composition.

use std::cmp::Ordering;

use crate::base::FinCategory;
use crate::error::{Error, Result};

/// A typed subset of a base hom-set. Two homs are equal only when their
/// types agree as well as their elements: `∅ : X ⇸ Y` and `∅ : X ⇸ Z` differ.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct QHom {
    src: u32,
    dst: u32,
    bits: u128,
}

impl QHom {
    pub fn empty(src: usize, dst: usize) -> Self {
        Self {
            src: src as u32,
            dst: dst as u32,
            bits: 0,
        }
    }

    /// The whole hom-set `B(src, dst)`.
    pub fn full(b: &FinCategory, src: usize, dst: usize) -> Self {
        let n = b.hom_set(src, dst).len();
        let bits = if n == 128 {
            u128::MAX
        } else {
            (1u128 << n) - 1
        };
        Self {
            src: src as u32,
            dst: dst as u32,
            bits,
        }
    }

    /// `{1_x}`.
    pub fn identity(b: &FinCategory, x: usize) -> Self {
        Self::singleton(b, b.identity(x))
    }

    pub fn singleton(b: &FinCategory, m: usize) -> Self {
        let mor = b.morphism(m);
        Self {
            src: mor.src as u32,
            dst: mor.dst as u32,
            bits: 1u128 << b.local_index(m),
        }
    }

    pub fn from_morphisms(
        b: &FinCategory,
        src: usize,
        dst: usize,
        elems: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mut h = Self::empty(src, dst);
        for m in elems {
            let mor = b.morphism(m);
            if (mor.src, mor.dst) != (src, dst) {
                return Err(Error::mismatch(format!(
                    "morphism `{}` is not in B({}, {})",
                    mor.id,
                    b.object_id(src),
                    b.object_id(dst)
                )));
            }
            h.bits |= 1u128 << b.local_index(m);
        }
        Ok(h)
    }

    pub fn from_ids<S: AsRef<str>>(
        b: &FinCategory,
        src: usize,
        dst: usize,
        ids: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let elems = ids
            .into_iter()
            .map(|id| b.morphism_index(id.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_morphisms(b, src, dst, elems)
    }

    pub(crate) fn from_bits(src: usize, dst: usize, bits: u128) -> Self {
        Self {
            src: src as u32,
            dst: dst as u32,
            bits,
        }
    }

    #[inline]
    pub fn src(&self) -> usize {
        self.src as usize
    }

    #[inline]
    pub fn dst(&self) -> usize {
        self.dst as usize
    }

    #[inline]
    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn contains(&self, b: &FinCategory, m: usize) -> bool {
        let mor = b.morphism(m);
        (mor.src, mor.dst) == (self.src(), self.dst()) && self.bits >> b.local_index(m) & 1 == 1
    }

    /// Inclusion. Homs of different types are never comparable.
    #[inline]
    pub fn le(&self, other: &QHom) -> bool {
        self.src == other.src && self.dst == other.dst && self.bits & !other.bits == 0
    }

    /// Elements as global morphism indices, in morphism-list order.
    pub fn elems<'b>(&self, b: &'b FinCategory) -> impl Iterator<Item = usize> + 'b {
        let set = b.hom_set(self.src(), self.dst());
        BitIter(self.bits).map(move |i| set[i])
    }

    pub fn elem_ids<'b>(&self, b: &'b FinCategory) -> Vec<&'b str> {
        self.elems(b).map(|m| b.morphism_id(m)).collect()
    }

    #[inline]
    pub(crate) fn union(self, other: QHom) -> QHom {
        debug_assert_eq!((self.src, self.dst), (other.src, other.dst));
        QHom {
            bits: self.bits | other.bits,
            ..self
        }
    }

    #[inline]
    pub(crate) fn intersect(self, other: QHom) -> QHom {
        debug_assert_eq!((self.src, self.dst), (other.src, other.dst));
        QHom {
            bits: self.bits & other.bits,
            ..self
        }
    }

    /// The same subset read as a hom of the opposite quantaloid, `Y ⇸ X`
    /// over `B^op`. Local indices agree because the opposite category keeps
    /// the morphism order.
    #[inline]
    pub fn transpose(self) -> QHom {
        QHom {
            src: self.dst,
            dst: self.src,
            bits: self.bits,
        }
    }

    /// Lexicographic order on the ascending element sequences.
    fn cmp_elems(a: u128, b: u128) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        let d = (a ^ b).trailing_zeros();
        let higher = if d == 127 { 0 } else { u128::MAX << (d + 1) };
        if a >> d & 1 == 1 {
            if b & higher != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if a & higher != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl Ord for QHom {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.src, self.dst)
            .cmp(&(other.src, other.dst))
            .then_with(|| QHom::cmp_elems(self.bits, other.bits))
    }
}

impl PartialOrd for QHom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) struct BitIter(pub(crate) u128);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// `V ∘ U` without type checks.
#[inline]
pub(crate) fn compose_unchecked(b: &FinCategory, v: QHom, u: QHom) -> QHom {
    debug_assert_eq!(u.dst, v.src);
    let mut bits = 0u128;
    if v.bits != 0 && u.bits != 0 {
        let vs = b.hom_set(v.src(), v.dst());
        let us = b.hom_set(u.src(), u.dst());
        for i in BitIter(v.bits) {
            for j in BitIter(u.bits) {
                let c = b.compose(vs[i], us[j]).expect("typed homs compose");
                bits |= 1u128 << b.local_index(c);
            }
        }
    }
    QHom {
        src: u.src,
        dst: v.dst,
        bits,
    }
}

/// `[U, W] = { v ∈ B(Y,Z) | v∘u ∈ W for all u ∈ U }` for `U: X ⇸ Y`,
/// `W: X ⇸ Z`; no type checks.
#[inline]
pub(crate) fn left_residual_unchecked(b: &FinCategory, u: QHom, w: QHom) -> QHom {
    debug_assert_eq!(u.src, w.src);
    let (y, z) = (u.dst(), w.dst());
    let vs = b.hom_set(y, z);
    if u.bits == 0 {
        return QHom::full(b, y, z);
    }
    let us = b.hom_set(u.src(), y);
    let mut bits = 0u128;
    'v: for (i, &v) in vs.iter().enumerate() {
        for j in BitIter(u.bits) {
            let c = b.compose(v, us[j]).expect("typed homs compose");
            if w.bits >> b.local_index(c) & 1 == 0 {
                continue 'v;
            }
        }
        bits |= 1u128 << i;
    }
    QHom::from_bits(y, z, bits)
}

/// `{V, W} = { u ∈ B(X,Y) | v∘u ∈ W for all v ∈ V }` for `V: Y ⇸ Z`,
/// `W: X ⇸ Z`; no type checks.
#[inline]
pub(crate) fn right_residual_unchecked(b: &FinCategory, v: QHom, w: QHom) -> QHom {
    debug_assert_eq!(v.dst, w.dst);
    let (x, y) = (w.src(), v.src());
    let us = b.hom_set(x, y);
    if v.bits == 0 {
        return QHom::full(b, x, y);
    }
    let vs = b.hom_set(y, v.dst());
    let mut bits = 0u128;
    'u: for (j, &u) in us.iter().enumerate() {
        for i in BitIter(v.bits) {
            let c = b.compose(vs[i], u).expect("typed homs compose");
            if w.bits >> b.local_index(c) & 1 == 0 {
                continue 'u;
            }
        }
        bits |= 1u128 << j;
    }
    QHom::from_bits(x, y, bits)
}

fn check_object(b: &FinCategory, x: usize) -> Result<()> {
    if x < b.num_objects() {
        Ok(())
    } else {
        Err(Error::UnknownObject(format!("#{x}")))
    }
}

fn describe(b: &FinCategory, h: &QHom) -> String {
    format!("{} ⇸ {}", b.object_id(h.src()), b.object_id(h.dst()))
}

/// `V ∘ U = { v∘u | v ∈ V, u ∈ U }`.
pub fn q_compose(b: &FinCategory, v: QHom, u: QHom) -> Result<QHom> {
    if u.dst != v.src {
        return Err(Error::mismatch(format!(
            "cannot compose {} after {}",
            describe(b, &v),
            describe(b, &u)
        )));
    }
    Ok(compose_unchecked(b, v, u))
}

/// Union of `hs`, all of type `src ⇸ dst`; the empty join is `∅`.
pub fn q_join(b: &FinCategory, src: usize, dst: usize, hs: &[QHom]) -> Result<QHom> {
    check_object(b, src)?;
    check_object(b, dst)?;
    hs.iter().try_fold(QHom::empty(src, dst), |acc, h| {
        if (h.src(), h.dst()) != (src, dst) {
            return Err(Error::mismatch(format!(
                "join of mixed types: {}",
                describe(b, h)
            )));
        }
        Ok(acc.union(*h))
    })
}

/// Intersection of `hs`, all of type `src ⇸ dst`; the empty meet is the
/// whole hom-set.
pub fn q_meet(b: &FinCategory, src: usize, dst: usize, hs: &[QHom]) -> Result<QHom> {
    check_object(b, src)?;
    check_object(b, dst)?;
    hs.iter().try_fold(QHom::full(b, src, dst), |acc, h| {
        if (h.src(), h.dst()) != (src, dst) {
            return Err(Error::mismatch(format!(
                "meet of mixed types: {}",
                describe(b, h)
            )));
        }
        Ok(acc.intersect(*h))
    })
}

/// `[U, W] : Y ⇸ Z` for `U : X ⇸ Y` and `W : X ⇸ Z`.
pub fn left_residual(b: &FinCategory, u: QHom, w: QHom) -> Result<QHom> {
    if u.src != w.src {
        return Err(Error::mismatch(format!(
            "[U, W] needs a common source: {} vs {}",
            describe(b, &u),
            describe(b, &w)
        )));
    }
    Ok(left_residual_unchecked(b, u, w))
}

/// `{V, W} : X ⇸ Y` for `V : Y ⇸ Z` and `W : X ⇸ Z`.
pub fn right_residual(b: &FinCategory, v: QHom, w: QHom) -> Result<QHom> {
    if v.dst != w.dst {
        return Err(Error::mismatch(format!(
            "{{V, W}} needs a common target: {} vs {}",
            describe(b, &v),
            describe(b, &w)
        )));
    }
    Ok(right_residual_unchecked(b, v, w))
}
