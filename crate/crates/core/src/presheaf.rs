//! Presheaves and copresheaves on a Q-category, their Q-categories `P C`
//! and `P† C`, the Yoneda embeddings, `μ`, and the pair `F_! ⊣ F*`.
//!
//! Over a free quantaloid a presheaf `φ` of extent `z` is a sieve: a family
//! `φ(x) ⊆ B(|x|, z)` closed under precomposition with `E(x, y)`.

use std::collections::HashMap;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::base::FinCategory;
use crate::error::{Error, Result};
use crate::qcategory::{Opposite, QCat, QCategory, QFunctor};
use crate::quantaloid::{
    compose_unchecked, left_residual_unchecked, right_residual_unchecked, QHom,
};

/// Default bound on the number of presheaves enumerated per Q-category.
pub const DEFAULT_CAP: usize = 20_000;

/// Hom matrices up to this many objects are computed eagerly.
const MEMO_LIMIT: usize = 1024;

/// `φ(x) : |x| ⇸ z` for every object `x`, with `φ(y) ∘ C(x, y) ≤ φ(x)`.
///
/// The derived order (extent first, then components lexicographically) is
/// the canonical order used for enumeration and tie-breaking.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Presheaf {
    extent: usize,
    components: Vec<QHom>,
}

/// `ψ(x) : z ⇸ |x|` for every object `x`, with `C(x, y) ∘ ψ(x) ≤ ψ(y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Copresheaf {
    extent: usize,
    components: Vec<QHom>,
}

fn check_shape(c: &dyn QCat, extent: usize, components: &[QHom], co: bool) -> Result<()> {
    if extent >= c.base().num_objects() {
        return Err(Error::UnknownObject(format!("extent #{extent}")));
    }
    if components.len() != c.size() {
        return Err(Error::InvalidData(format!(
            "{} components for {} objects",
            components.len(),
            c.size()
        )));
    }
    for (x, h) in components.iter().enumerate() {
        let want = if co {
            (extent, c.extent(x))
        } else {
            (c.extent(x), extent)
        };
        if (h.src(), h.dst()) != want {
            return Err(Error::mismatch(format!(
                "component at `{}` has the wrong type",
                c.object_id(x)
            )));
        }
    }
    Ok(())
}

impl Presheaf {
    /// Checks typing and sieve closure.
    pub fn new(c: &dyn QCat, extent: usize, components: Vec<QHom>) -> Result<Self> {
        check_shape(c, extent, &components, false)?;
        let p = Self { extent, components };
        if let Some((x, y)) = p.closure_violation(c) {
            return Err(Error::InvalidData(format!(
                "not a presheaf: φ({}) ∘ C({}, {}) is not contained in φ({})",
                c.object_id(y),
                c.object_id(x),
                c.object_id(y),
                c.object_id(x)
            )));
        }
        Ok(p)
    }

    pub(crate) fn from_parts(extent: usize, components: Vec<QHom>) -> Self {
        Self { extent, components }
    }

    /// The everywhere-empty presheaf at `z`.
    pub fn empty(c: &dyn QCat, z: usize) -> Self {
        Self {
            extent: z,
            components: (0..c.size()).map(|x| QHom::empty(c.extent(x), z)).collect(),
        }
    }

    /// `C(−, x)`.
    pub fn representable(c: &dyn QCat, x: usize) -> Self {
        Self {
            extent: c.extent(x),
            components: (0..c.size()).map(|y| c.hom(y, x)).collect(),
        }
    }

    pub fn extent(&self) -> usize {
        self.extent
    }

    pub fn components(&self) -> &[QHom] {
        &self.components
    }

    pub fn component(&self, x: usize) -> QHom {
        self.components[x]
    }

    /// First `(x, y)` with `φ(y) ∘ C(x, y) ≰ φ(x)`.
    pub fn closure_violation(&self, c: &dyn QCat) -> Option<(usize, usize)> {
        let b = c.base();
        let n = c.size();
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .find(|&(x, y)| {
                !compose_unchecked(b, self.components[y], c.hom(x, y)).le(&self.components[x])
            })
    }

    /// Componentwise inclusion at a common extent.
    pub fn le(&self, other: &Self) -> bool {
        self.extent == other.extent
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.le(b))
    }
}

impl Copresheaf {
    /// Checks typing and cosieve closure.
    pub fn new(c: &dyn QCat, extent: usize, components: Vec<QHom>) -> Result<Self> {
        check_shape(c, extent, &components, true)?;
        let p = Self { extent, components };
        if let Some((x, y)) = p.closure_violation(c) {
            return Err(Error::InvalidData(format!(
                "not a copresheaf: C({}, {}) ∘ ψ({}) is not contained in ψ({})",
                c.object_id(x),
                c.object_id(y),
                c.object_id(x),
                c.object_id(y)
            )));
        }
        Ok(p)
    }

    pub(crate) fn from_parts(extent: usize, components: Vec<QHom>) -> Self {
        Self { extent, components }
    }

    pub fn empty(c: &dyn QCat, z: usize) -> Self {
        Self {
            extent: z,
            components: (0..c.size()).map(|x| QHom::empty(z, c.extent(x))).collect(),
        }
    }

    /// `C(x, −)`.
    pub fn corepresentable(c: &dyn QCat, x: usize) -> Self {
        Self {
            extent: c.extent(x),
            components: (0..c.size()).map(|y| c.hom(x, y)).collect(),
        }
    }

    pub fn extent(&self) -> usize {
        self.extent
    }

    pub fn components(&self) -> &[QHom] {
        &self.components
    }

    pub fn component(&self, x: usize) -> QHom {
        self.components[x]
    }

    /// First `(x, y)` with `C(x, y) ∘ ψ(x) ≰ ψ(y)`.
    pub fn closure_violation(&self, c: &dyn QCat) -> Option<(usize, usize)> {
        let b = c.base();
        let n = c.size();
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .find(|&(x, y)| {
                !compose_unchecked(b, c.hom(x, y), self.components[x]).le(&self.components[y])
            })
    }

    /// Componentwise inclusion at a common extent.
    pub fn le(&self, other: &Self) -> bool {
        self.extent == other.extent
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.le(b))
    }

    /// The same data read as a presheaf on `C^op`.
    pub fn to_opposite(&self) -> Presheaf {
        Presheaf {
            extent: self.extent,
            components: self.components.iter().map(|h| h.transpose()).collect(),
        }
    }

    pub fn from_opposite(p: &Presheaf) -> Self {
        Self {
            extent: p.extent,
            components: p.components.iter().map(|h| h.transpose()).collect(),
        }
    }
}

/// `P C(φ, ψ) = ⋀_x [φ(x), ψ(x)] : |φ| ⇸ |ψ|`.
pub fn presheaf_hom(b: &FinCategory, phi: &Presheaf, psi: &Presheaf) -> QHom {
    phi.components.iter().zip(&psi.components).fold(
        QHom::full(b, phi.extent, psi.extent),
        |acc, (&u, &w)| {
            if acc.is_empty() {
                acc
            } else {
                acc.intersect(left_residual_unchecked(b, u, w))
            }
        },
    )
}

/// `P† C(φ, ψ) = ⋀_x {ψ(x), φ(x)} : |φ| ⇸ |ψ|`.
pub fn copresheaf_hom(b: &FinCategory, phi: &Copresheaf, psi: &Copresheaf) -> QHom {
    phi.components.iter().zip(&psi.components).fold(
        QHom::full(b, phi.extent, psi.extent),
        |acc, (&w, &v)| {
            if acc.is_empty() {
                acc
            } else {
                acc.intersect(right_residual_unchecked(b, v, w))
            }
        },
    )
}

fn dfs(
    b: &FinCategory,
    homs: &[QHom],
    n: usize,
    w: usize,
    comps: &mut Vec<QHom>,
    lower: &[QHom],
    upper: &[QHom],
    out: &mut Vec<Vec<QHom>>,
    cap: usize,
) -> Result<()> {
    if w == n {
        if out.len() >= cap {
            return Err(Error::CapExceeded { cap });
        }
        out.push(comps.clone());
        return Ok(());
    }
    let (l, u) = (lower[w], upper[w]);
    let free = u.bits() & !l.bits();
    let endo = homs[w * n + w];
    let mut s = 0u128;
    loop {
        let cand = QHom::from_bits(l.src(), l.dst(), l.bits() | s);
        if compose_unchecked(b, cand, endo).le(&cand) {
            let mut lo = lower.to_vec();
            let mut up = upper.to_vec();
            for v in w + 1..n {
                lo[v] = lo[v].union(compose_unchecked(b, cand, homs[v * n + w]));
                up[v] = up[v].intersect(left_residual_unchecked(b, homs[w * n + v], cand));
            }
            comps.push(cand);
            dfs(b, homs, n, w + 1, comps, &lo, &up, out, cap)?;
            comps.pop();
        }
        if s == free {
            break;
        }
        s = s.wrapping_sub(free) & free;
    }
    Ok(())
}

/// All presheaves of extent `z`, in canonical order.
///
/// Components are fixed object by object; the choices for `φ(w)` are
/// bounded below by `⋁_{x<w} φ(x) ∘ C(w, x)` and above by
/// `⋀_{x<w} [C(x, w), φ(x)]`, and the lower bound is always admissible, so
/// the search never backtracks out of a dead end.
pub fn enumerate_presheaves(c: &dyn QCat, z: usize, cap: usize) -> Result<Vec<Presheaf>> {
    let b = c.base();
    if z >= b.num_objects() {
        return Err(Error::UnknownObject(format!("extent #{z}")));
    }
    let n = c.size();
    let homs: Vec<QHom> = (0..n * n).map(|i| c.hom(i / n, i % n)).collect();
    let lower: Vec<QHom> = (0..n).map(|x| QHom::empty(c.extent(x), z)).collect();
    let upper: Vec<QHom> = (0..n).map(|x| QHom::full(b, c.extent(x), z)).collect();
    let mut raw = Vec::new();
    dfs(
        b,
        &homs,
        n,
        0,
        &mut Vec::with_capacity(n),
        &lower,
        &upper,
        &mut raw,
        cap,
    )?;
    let mut out: Vec<Presheaf> = raw
        .into_iter()
        .map(|components| Presheaf {
            extent: z,
            components,
        })
        .collect();
    out.sort();
    Ok(out)
}

/// All presheaves of every extent, in canonical order. Extents are
/// enumerated in parallel; exceeding `cap` in total is an error.
pub fn enumerate_all_presheaves(c: &dyn QCat, cap: usize) -> Result<Vec<Presheaf>> {
    let per_extent = (0..c.base().num_objects())
        .into_par_iter()
        .map(|z| enumerate_presheaves(c, z, cap))
        .collect::<Result<Vec<_>>>()?;
    let total: usize = per_extent.iter().map(Vec::len).sum();
    if total > cap {
        return Err(Error::CapExceeded { cap });
    }
    Ok(per_extent.into_iter().flatten().collect())
}

/// All copresheaves of extent `z`, enumerated as presheaves on `C^op`.
pub fn enumerate_copresheaves(c: &dyn QCat, z: usize, cap: usize) -> Result<Vec<Copresheaf>> {
    let op = Opposite::new(c);
    let mut out: Vec<Copresheaf> = enumerate_presheaves(&op, z, cap)?
        .iter()
        .map(Copresheaf::from_opposite)
        .collect();
    out.sort();
    Ok(out)
}

pub fn enumerate_all_copresheaves(c: &dyn QCat, cap: usize) -> Result<Vec<Copresheaf>> {
    let op = Opposite::new(c);
    let mut out: Vec<Copresheaf> = enumerate_all_presheaves(&op, cap)?
        .iter()
        .map(Copresheaf::from_opposite)
        .collect();
    out.sort();
    Ok(out)
}

fn content_id(prefix: &str, c: &dyn QCat, extent: usize, components: &[QHom]) -> String {
    let b = c.base();
    let mut text = String::from(b.object_id(extent));
    for (x, h) in components.iter().enumerate() {
        text.push(';');
        text.push_str(c.object_id(x));
        text.push(':');
        text.push_str(&h.elem_ids(b).join(","));
    }
    let digest = Sha256::digest(text.as_bytes());
    let hex: String = digest[..8]
        .iter()
        .map(|byte| format!("{byte:02x}"))
        .collect();
    format!("{prefix}_{hex}")
}

/// Stable id of a presheaf, derived from its content.
pub fn presheaf_id(c: &dyn QCat, p: &Presheaf) -> String {
    content_id("ps", c, p.extent, &p.components)
}

/// Stable id of a copresheaf, derived from its content.
pub fn copresheaf_id(c: &dyn QCat, p: &Copresheaf) -> String {
    content_id("cs", c, p.extent, &p.components)
}

fn unique_ids(ids: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if index.insert(id.clone(), i).is_some() {
            return Err(Error::InvalidData(format!(
                "content id collision on `{id}`"
            )));
        }
    }
    Ok(index)
}

fn hom_table(n: usize, f: impl Fn(usize, usize) -> QHom + Sync) -> Option<Vec<QHom>> {
    (n <= MEMO_LIMIT).then(|| {
        (0..n * n)
            .into_par_iter()
            .map(|i| f(i / n, i % n))
            .collect()
    })
}

/// The presheaf Q-category `P C`: every presheaf on `C`, canonically ordered,
/// with homs `P C(φ, ψ)`.
pub struct PresheafCategory<'a> {
    over: &'a dyn QCat,
    objects: Vec<Presheaf>,
    ids: Vec<String>,
    index: HashMap<String, usize>,
    table: Option<Vec<QHom>>,
}

impl<'a> PresheafCategory<'a> {
    pub fn new(over: &'a dyn QCat, cap: usize) -> Result<Self> {
        let objects = enumerate_all_presheaves(over, cap)?;
        let ids: Vec<String> = objects.par_iter().map(|p| presheaf_id(over, p)).collect();
        let index = unique_ids(&ids)?;
        let b = over.base();
        let table = hom_table(objects.len(), |i, j| {
            presheaf_hom(b, &objects[i], &objects[j])
        });
        Ok(Self {
            over,
            objects,
            ids,
            index,
            table,
        })
    }

    pub fn over(&self) -> &'a dyn QCat {
        self.over
    }

    pub fn presheaves(&self) -> &[Presheaf] {
        &self.objects
    }

    pub fn presheaf(&self, i: usize) -> &Presheaf {
        &self.objects[i]
    }

    /// Position of `p` in the canonical list.
    pub fn position(&self, p: &Presheaf) -> Option<usize> {
        self.objects.binary_search(p).ok()
    }

    /// `Y : C → P C`, `x ↦ C(−, x)`.
    pub fn yoneda(&self) -> QFunctor<'_> {
        let map = (0..self.over.size())
            .map(|x| {
                self.position(&Presheaf::representable(self.over, x))
                    .expect("enumerated")
            })
            .collect();
        QFunctor::new(self.over, self, map).expect("Yoneda is well-typed")
    }

    pub fn materialize(&self) -> QCategory {
        QCategory::from_qcat(self)
    }
}

impl QCat for PresheafCategory<'_> {
    fn base(&self) -> &FinCategory {
        self.over.base()
    }

    fn size(&self) -> usize {
        self.objects.len()
    }

    fn extent(&self, x: usize) -> usize {
        self.objects[x].extent
    }

    #[inline]
    fn hom(&self, x: usize, y: usize) -> QHom {
        match &self.table {
            Some(t) => t[x * self.objects.len() + y],
            None => presheaf_hom(self.over.base(), &self.objects[x], &self.objects[y]),
        }
    }

    fn object_id(&self, x: usize) -> &str {
        &self.ids[x]
    }

    fn find_object(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownObject(id.to_string()))
    }
}

/// The copresheaf Q-category `P† C`, with homs `P† C(φ, ψ)`.
///
/// Objects are enumerated as presheaves on `C^op`, so `P† C = (P(C^op))^op`
/// on objects; homs use the direct formula.
pub struct CopresheafCategory<'a> {
    over: &'a dyn QCat,
    objects: Vec<Copresheaf>,
    ids: Vec<String>,
    index: HashMap<String, usize>,
    table: Option<Vec<QHom>>,
}

impl<'a> CopresheafCategory<'a> {
    pub fn new(over: &'a dyn QCat, cap: usize) -> Result<Self> {
        let objects = enumerate_all_copresheaves(over, cap)?;
        let ids: Vec<String> = objects.par_iter().map(|p| copresheaf_id(over, p)).collect();
        let index = unique_ids(&ids)?;
        let b = over.base();
        let table = hom_table(objects.len(), |i, j| {
            copresheaf_hom(b, &objects[i], &objects[j])
        });
        Ok(Self {
            over,
            objects,
            ids,
            index,
            table,
        })
    }

    pub fn over(&self) -> &'a dyn QCat {
        self.over
    }

    pub fn copresheaves(&self) -> &[Copresheaf] {
        &self.objects
    }

    pub fn copresheaf(&self, i: usize) -> &Copresheaf {
        &self.objects[i]
    }

    pub fn position(&self, p: &Copresheaf) -> Option<usize> {
        self.objects.binary_search(p).ok()
    }

    /// `Y† : C → P† C`, `x ↦ C(x, −)`.
    pub fn coyoneda(&self) -> QFunctor<'_> {
        let map = (0..self.over.size())
            .map(|x| {
                self.position(&Copresheaf::corepresentable(self.over, x))
                    .expect("enumerated")
            })
            .collect();
        QFunctor::new(self.over, self, map).expect("Yoneda is well-typed")
    }

    pub fn materialize(&self) -> QCategory {
        QCategory::from_qcat(self)
    }
}

impl QCat for CopresheafCategory<'_> {
    fn base(&self) -> &FinCategory {
        self.over.base()
    }

    fn size(&self) -> usize {
        self.objects.len()
    }

    fn extent(&self, x: usize) -> usize {
        self.objects[x].extent
    }

    #[inline]
    fn hom(&self, x: usize, y: usize) -> QHom {
        match &self.table {
            Some(t) => t[x * self.objects.len() + y],
            None => copresheaf_hom(self.over.base(), &self.objects[x], &self.objects[y]),
        }
    }

    fn object_id(&self, x: usize) -> &str {
        &self.ids[x]
    }

    fn find_object(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownObject(id.to_string()))
    }
}

pub fn presheaf_category(c: &dyn QCat, cap: usize) -> Result<PresheafCategory<'_>> {
    PresheafCategory::new(c, cap)
}

pub fn copresheaf_category(c: &dyn QCat, cap: usize) -> Result<CopresheafCategory<'_>> {
    CopresheafCategory::new(c, cap)
}

/// `μ(Φ)(x) = ⋁_φ Φ(φ) ∘ φ(x)` for a presheaf `Φ` on `P C`.
pub fn mu(pc: &PresheafCategory<'_>, big_phi: &Presheaf) -> Presheaf {
    let c = pc.over();
    let b = c.base();
    let z = big_phi.extent;
    let components = (0..c.size())
        .map(|x| {
            pc.objects.iter().zip(&big_phi.components).fold(
                QHom::empty(c.extent(x), z),
                |acc, (phi, &w)| {
                    if w.is_empty() {
                        acc
                    } else {
                        acc.union(compose_unchecked(b, w, phi.components[x]))
                    }
                },
            )
        })
        .collect();
    Presheaf {
        extent: z,
        components,
    }
}

/// `(F* φ)(x) = φ(F x)`.
pub fn restrict(f: &QFunctor<'_>, phi: &Presheaf) -> Presheaf {
    let components = f.map().iter().map(|&fx| phi.components[fx]).collect();
    let out = Presheaf {
        extent: phi.extent,
        components,
    };
    debug_assert!(out.closure_violation(f.dom()).is_none());
    out
}

/// `(F_! ψ)(c) = ⋁_x ψ(x) ∘ C(c, F x)`.
pub fn left_extend(f: &QFunctor<'_>, psi: &Presheaf) -> Presheaf {
    let cod = f.cod();
    let b = cod.base();
    let z = psi.extent;
    let components = (0..cod.size())
        .map(|c| {
            f.map().iter().zip(&psi.components).fold(
                QHom::empty(cod.extent(c), z),
                |acc, (&fx, &w)| {
                    if w.is_empty() {
                        acc
                    } else {
                        acc.union(compose_unchecked(b, w, cod.hom(c, fx)))
                    }
                },
            )
        })
        .collect();
    Presheaf {
        extent: z,
        components,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::qcategory::{find_isomorphism, opposite_qcategory, validate_qcategory};

    fn set(c: &dyn QCat, members: &[usize]) -> Presheaf {
        let b = c.base();
        let comps = (0..c.size())
            .map(|x| {
                if members.contains(&x) {
                    QHom::full(b, 0, 0)
                } else {
                    QHom::empty(0, 0)
                }
            })
            .collect();
        Presheaf::new(c, 0, comps).unwrap()
    }

    fn brute_force_downsets(c: &dyn QCat) -> Vec<Vec<usize>> {
        let n = c.size();
        let b = c.base();
        (0..1u32 << n)
            .filter(|&mask| {
                (0..n).all(|x| {
                    (0..n)
                        .all(|y| mask >> y & 1 == 0 || c.hom(x, y).is_empty() || mask >> x & 1 == 1)
                })
            })
            .map(|mask| (0..n).filter(|&x| mask >> x & 1 == 1).collect())
            .filter(|_| b.is_terminal())
            .collect()
    }

    #[test]
    fn counts_match_brute_force_on_fixtures() {
        let ch = fixtures::e_ch();
        assert_eq!(enumerate_presheaves(&ch, 0, DEFAULT_CAP).unwrap().len(), 3);
        assert_eq!(brute_force_downsets(&ch).len(), 3);
        let ac = fixtures::e_ac();
        assert_eq!(enumerate_presheaves(&ac, 0, DEFAULT_CAP).unwrap().len(), 4);
        assert_eq!(brute_force_downsets(&ac).len(), 4);
        let ex = fixtures::e_x();
        let ps = enumerate_presheaves(&ex, 1, DEFAULT_CAP).unwrap();
        assert_eq!(ps.len(), 2);
        assert!(ps[0].component(0).is_empty());
        assert_eq!(ps[1].component(0).elem_ids(ex.base()), vec!["f"]);
    }

    #[test]
    fn counts_match_on_chains_and_preorders() {
        for n in 1..6 {
            let c = fixtures::chain(n);
            assert_eq!(
                enumerate_presheaves(&c, 0, DEFAULT_CAP).unwrap().len(),
                n + 1
            );
        }
        let v = fixtures::preorder(&["p", "q", "r"], |x, y| x == y || (x == 0 && y > 0));
        let ours = enumerate_presheaves(&v, 0, DEFAULT_CAP).unwrap();
        assert_eq!(ours.len(), brute_force_downsets(&v).len());
    }

    #[test]
    fn cap_is_enforced() {
        let ac = fixtures::e_ac();
        let err = enumerate_all_presheaves(&ac, 3).unwrap_err();
        assert!(err.is_cap_exceeded());
        assert_eq!(enumerate_all_presheaves(&ac, 4).unwrap().len(), 4);
    }

    #[test]
    fn presheaf_homs() {
        let ac = fixtures::e_ac();
        let b = ac.base();
        let a = set(&ac, &[0]);
        let ab = set(&ac, &[0, 1]);
        assert_eq!(presheaf_hom(b, &a, &ab), QHom::full(b, 0, 0));
        assert!(presheaf_hom(b, &ab, &a).is_empty());
        assert!(presheaf_hom(b, &a, &a).contains(b, b.identity(0)));

        let ex = fixtures::e_x();
        let ps = enumerate_presheaves(&ex, 1, DEFAULT_CAP).unwrap();
        let h = presheaf_hom(ex.base(), &ps[0], &ps[1]);
        assert_eq!(h.elem_ids(ex.base()), vec!["1Y"]);
    }

    #[test]
    fn presheaf_categories_of_fixtures() {
        let ac = fixtures::e_ac();
        let pc = presheaf_category(&ac, DEFAULT_CAP).unwrap();
        assert_eq!(pc.size(), 4);
        let y = pc.yoneda();
        assert_ne!(y.apply(0), y.apply(1));
        assert!(validate_qcategory(&pc).is_empty());

        let point = fixtures::chain(1);
        let pp = presheaf_category(&point, DEFAULT_CAP)
            .unwrap()
            .materialize();
        assert!(find_isomorphism(&pp, &fixtures::chain(2)).is_some());

        let ex = fixtures::e_x();
        let px = presheaf_category(&ex, DEFAULT_CAP).unwrap();
        assert_eq!(px.size(), 4);
        assert_eq!(px.fiber(0).len(), 2);
        assert_eq!(px.fiber(1).len(), 2);
    }

    #[test]
    fn yoneda_is_fully_faithful() {
        for c in [
            fixtures::e_ac(),
            fixtures::e_ch(),
            fixtures::e_x(),
            fixtures::chain(3),
        ] {
            let pc = presheaf_category(&c, DEFAULT_CAP).unwrap();
            let y = pc.yoneda();
            for x in 0..c.size() {
                assert!(Presheaf::representable(&c, x)
                    .closure_violation(&c)
                    .is_none());
                for z in 0..c.size() {
                    assert_eq!(pc.hom(y.apply(x), y.apply(z)), c.hom(x, z));
                }
            }
        }
    }

    #[test]
    fn copresheaves_of_fixtures() {
        let ac = fixtures::e_ac();
        let cc = copresheaf_category(&ac, DEFAULT_CAP).unwrap();
        assert_eq!(cc.size(), 4);
        let ya = cc.copresheaf(cc.coyoneda().apply(0));
        assert!(!ya.component(0).is_empty() && ya.component(1).is_empty());

        let point = fixtures::chain(1);
        let cp = copresheaf_category(&point, DEFAULT_CAP)
            .unwrap()
            .materialize();
        assert!(find_isomorphism(&cp, &fixtures::chain(2)).is_some());
    }

    #[test]
    fn copresheaf_category_is_opposite_of_presheaves_on_opposite() {
        for c in [fixtures::e_ch(), fixtures::e_ac(), fixtures::e_x()] {
            let direct = copresheaf_category(&c, DEFAULT_CAP).unwrap();
            let op = opposite_qcategory(&c);
            let p_op = presheaf_category(&op, DEFAULT_CAP).unwrap();
            let via = Opposite::new(&p_op);
            assert_eq!(direct.size(), via.size());
            for i in 0..direct.size() {
                let as_presheaf = direct.copresheaf(i).to_opposite();
                let j = p_op.position(&as_presheaf).unwrap();
                assert_eq!(i, j);
                for k in 0..direct.size() {
                    assert_eq!(direct.hom(i, k), via.hom(i, k));
                }
            }
        }
    }

    #[test]
    fn mu_examples() {
        let ac = fixtures::e_ac();
        let pc = presheaf_category(&ac, DEFAULT_CAP).unwrap();
        let b = ac.base();
        let a = pc.position(&set(&ac, &[0])).unwrap();
        let bb = pc.position(&set(&ac, &[1])).unwrap();
        let picks = (0..pc.size())
            .map(|i| {
                if i == a || i == bb {
                    QHom::full(b, 0, 0)
                } else {
                    QHom::empty(0, 0)
                }
            })
            .collect();
        let big = Presheaf::from_parts(0, picks);
        assert!(
            big.closure_violation(&pc).is_some(),
            "not a sieve; mu is still defined"
        );
        assert_eq!(mu(&pc, &big), set(&ac, &[0, 1]));

        for i in 0..pc.size() {
            let rep = Presheaf::representable(&pc, i);
            assert_eq!(&mu(&pc, &rep), pc.presheaf(i));
        }
        let empty = Presheaf::empty(&pc, 0);
        assert_eq!(mu(&pc, &empty), Presheaf::empty(&ac, 0));
    }

    #[test]
    fn restriction_and_extension() {
        let ac = fixtures::e_ac();
        let ch = fixtures::e_ch();
        let f = QFunctor::new(&ac, &ch, vec![0, 1]).unwrap();
        let down01 = set(&ch, &[0, 1]);
        let down0 = set(&ch, &[0]);
        assert_eq!(restrict(&f, &down01), set(&ac, &[0, 1]));
        assert_eq!(restrict(&f, &down0), set(&ac, &[0]));
        assert_eq!(left_extend(&f, &set(&ac, &[0])), down0);
        assert_eq!(
            left_extend(&f, &Presheaf::empty(&ac, 0)),
            Presheaf::empty(&ch, 0)
        );

        let id = QFunctor::identity(&ch);
        assert_eq!(restrict(&id, &down0), down0);
        for x in 0..2 {
            let rep = Presheaf::representable(&ch, x);
            assert_eq!(left_extend(&id, &rep), rep);
        }
    }

    #[test]
    fn ids_are_stable_and_distinct() {
        let ac = fixtures::e_ac();
        let p1 = presheaf_category(&ac, DEFAULT_CAP).unwrap();
        let p2 = presheaf_category(&ac, DEFAULT_CAP).unwrap();
        assert_eq!(
            (0..4)
                .map(|i| p1.object_id(i).to_string())
                .collect::<Vec<_>>(),
            (0..4)
                .map(|i| p2.object_id(i).to_string())
                .collect::<Vec<_>>()
        );
        assert!(p1.object_id(0).starts_with("ps_"));
    }
}
