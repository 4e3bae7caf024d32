//! Categories enriched in the free quantaloid on a base `B`, i.e. faithful
//! functors into `B` in extent-and-hom-subset form.
//!
//! Algorithms are written against the [`QCat`] trait so that they run both on
//! the stored [`QCategory`] and on lazily computed categories such as the
//! presheaf category or an [`Opposite`] view.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::base::{CategoryData, FinCategory, Morphism, MorphismData};
use crate::error::{Error, Result};
use crate::quantaloid::{compose_unchecked, QHom};
use crate::report::ValidationReport;

/// Read access to a Q_B-category with objects `0..size()`.
pub trait QCat: Sync {
    fn base(&self) -> &FinCategory;
    fn size(&self) -> usize;
    /// `|x|`, an object index of the base.
    fn extent(&self, x: usize) -> usize;
    /// `C(x, y) : |x| ⇸ |y|`.
    fn hom(&self, x: usize, y: usize) -> QHom;
    fn object_id(&self, x: usize) -> &str;

    /// Objects with extent `z`, in index order.
    fn fiber(&self, z: usize) -> Vec<usize> {
        (0..self.size()).filter(|&x| self.extent(x) == z).collect()
    }

    fn find_object(&self, id: &str) -> Result<usize> {
        (0..self.size())
            .find(|&x| self.object_id(x) == id)
            .ok_or_else(|| Error::UnknownObject(id.to_string()))
    }
}

/// Whether `h` is an endo-hom containing the identity.
#[inline]
pub fn has_identity(b: &FinCategory, h: &QHom) -> bool {
    h.src() == h.dst() && h.contains(b, b.identity(h.src()))
}

/// `x ≅ y`: same extent and identities both ways.
pub fn isomorphic(c: &dyn QCat, x: usize, y: usize) -> bool {
    let b = c.base();
    c.extent(x) == c.extent(y) && has_identity(b, &c.hom(x, y)) && has_identity(b, &c.hom(y, x))
}

pub(crate) fn same_base(a: &FinCategory, b: &FinCategory) -> bool {
    a == b
}

pub(crate) fn same_qcat(a: &dyn QCat, b: &dyn QCat) -> bool {
    std::ptr::addr_eq(a as *const dyn QCat, b as *const dyn QCat)
}

/// A Q_B-category with every hom stored.
#[derive(Clone, Debug)]
pub struct QCategory {
    base: Arc<FinCategory>,
    ids: Vec<String>,
    extents: Vec<usize>,
    homs: Vec<QHom>,
    index: HashMap<String, usize>,
}

impl PartialEq for QCategory {
    fn eq(&self, other: &Self) -> bool {
        same_base(&self.base, &other.base)
            && self.ids == other.ids
            && self.extents == other.extents
            && self.homs == other.homs
    }
}

impl Eq for QCategory {}

impl QCat for QCategory {
    fn base(&self) -> &FinCategory {
        &self.base
    }

    fn size(&self) -> usize {
        self.ids.len()
    }

    fn extent(&self, x: usize) -> usize {
        self.extents[x]
    }

    #[inline]
    fn hom(&self, x: usize, y: usize) -> QHom {
        self.homs[x * self.ids.len() + y]
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

impl QCategory {
    /// Builds a Q-category from its objects and a hom function. Checks ids and
    /// hom typing, not the identity and composition laws; see
    /// [`validate_qcategory`].
    pub fn from_fn(
        base: Arc<FinCategory>,
        objects: Vec<(String, usize)>,
        mut hom: impl FnMut(usize, usize) -> QHom,
    ) -> Result<Self> {
        let n = objects.len();
        let mut index = HashMap::with_capacity(n);
        for (i, (id, z)) in objects.iter().enumerate() {
            if id.contains('|') {
                return Err(Error::InvalidData(format!("object id `{id}` contains `|`")));
            }
            if *z >= base.num_objects() {
                return Err(Error::UnknownObject(format!("extent #{z} of `{id}`")));
            }
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::InvalidData(format!("duplicate object id `{id}`")));
            }
        }
        let (ids, extents): (Vec<String>, Vec<usize>) = objects.into_iter().unzip();
        let mut homs = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let h = hom(x, y);
                if (h.src(), h.dst()) != (extents[x], extents[y]) {
                    return Err(Error::mismatch(format!(
                        "hom ({}, {}) must have type {} ⇸ {}",
                        ids[x],
                        ids[y],
                        base.object_id(extents[x]),
                        base.object_id(extents[y])
                    )));
                }
                homs.push(h);
            }
        }
        Ok(Self {
            base,
            ids,
            extents,
            homs,
            index,
        })
    }

    /// Copies any [`QCat`] into stored form.
    pub fn from_qcat(c: &dyn QCat) -> Self {
        let n = c.size();
        let ids: Vec<String> = (0..n).map(|x| c.object_id(x).to_string()).collect();
        let extents = (0..n).map(|x| c.extent(x)).collect();
        let mut homs = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                homs.push(c.hom(x, y));
            }
        }
        let index = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        Self {
            base: Arc::new(c.base().clone()),
            ids,
            extents,
            homs,
            index,
        }
    }

    /// The full sub-Q-category on `objects` (in the given order).
    pub fn full_subcategory(c: &dyn QCat, objects: &[usize]) -> Self {
        let ids: Vec<String> = objects
            .iter()
            .map(|&x| c.object_id(x).to_string())
            .collect();
        let extents = objects.iter().map(|&x| c.extent(x)).collect();
        let mut homs = Vec::with_capacity(objects.len() * objects.len());
        for &x in objects {
            for &y in objects {
                homs.push(c.hom(x, y));
            }
        }
        let index = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        Self {
            base: Arc::new(c.base().clone()),
            ids,
            extents,
            homs,
            index,
        }
    }

    /// Builds from string-keyed data over an already resolved base. Missing
    /// hom keys mean `∅`.
    pub fn from_parts(
        base: Arc<FinCategory>,
        objects: &[(String, String)],
        homs: &BTreeMap<String, Vec<String>>,
    ) -> Result<Self> {
        let objs = objects
            .iter()
            .map(|(id, ext)| Ok((id.clone(), base.object_index(ext)?)))
            .collect::<Result<Vec<_>>>()?;
        let index: HashMap<&str, usize> = objs
            .iter()
            .enumerate()
            .map(|(i, (id, _))| (id.as_str(), i))
            .collect();
        let n = objs.len();
        let mut table: Vec<Option<QHom>> = vec![None; n * n];
        for (key, elems) in homs {
            let (xs, ys) = key.split_once('|').ok_or_else(|| {
                Error::InvalidData(format!("hom key `{key}` is not of the form x|y"))
            })?;
            let x = *index
                .get(xs)
                .ok_or_else(|| Error::UnknownObject(xs.to_string()))?;
            let y = *index
                .get(ys)
                .ok_or_else(|| Error::UnknownObject(ys.to_string()))?;
            table[x * n + y] = Some(QHom::from_ids(&base, objs[x].1, objs[y].1, elems)?);
        }
        let extents: Vec<usize> = objs.iter().map(|o| o.1).collect();
        Self::from_fn(base, objs, |x, y| {
            table[x * n + y].unwrap_or_else(|| QHom::empty(extents[x], extents[y]))
        })
    }

    pub fn base_arc(&self) -> &Arc<FinCategory> {
        &self.base
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// Objects as `(id, extent id)` and non-empty homs keyed `x|y`, both in
    /// canonical order.
    pub fn to_parts(&self) -> (Vec<(String, String)>, BTreeMap<String, Vec<String>>) {
        let objects = self
            .ids
            .iter()
            .zip(&self.extents)
            .map(|(id, &z)| (id.clone(), self.base.object_id(z).to_string()))
            .collect();
        let mut homs = BTreeMap::new();
        for x in 0..self.size() {
            for y in 0..self.size() {
                let h = self.hom(x, y);
                if !h.is_empty() {
                    homs.insert(
                        format!("{}|{}", self.ids[x], self.ids[y]),
                        h.elem_ids(&self.base)
                            .into_iter()
                            .map(String::from)
                            .collect(),
                    );
                }
            }
        }
        (objects, homs)
    }
}

/// The opposite of a Q_B-category as a Q_{B^op}-category, computed on demand.
pub struct Opposite<'a> {
    inner: &'a dyn QCat,
    base: FinCategory,
}

impl<'a> Opposite<'a> {
    pub fn new(inner: &'a dyn QCat) -> Self {
        Self {
            inner,
            base: inner.base().opposite(),
        }
    }

    pub fn inner(&self) -> &'a dyn QCat {
        self.inner
    }
}

impl QCat for Opposite<'_> {
    fn base(&self) -> &FinCategory {
        &self.base
    }

    fn size(&self) -> usize {
        self.inner.size()
    }

    fn extent(&self, x: usize) -> usize {
        self.inner.extent(x)
    }

    #[inline]
    fn hom(&self, x: usize, y: usize) -> QHom {
        self.inner.hom(y, x).transpose()
    }

    fn object_id(&self, x: usize) -> &str {
        self.inner.object_id(x)
    }
}

/// `E^op` over `B^op`: same objects, `E^op(x, y) = E(y, x)`.
pub fn opposite_qcategory(c: &QCategory) -> QCategory {
    let n = c.size();
    let mut homs = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            homs.push(c.hom(y, x).transpose());
        }
    }
    QCategory {
        base: Arc::new(c.base.opposite()),
        ids: c.ids.clone(),
        extents: c.extents.clone(),
        homs,
        index: c.index.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QCatViolation {
    /// `1_{|x|} ∉ C(x, x)`.
    Identity { object: String },
    /// `g ∘ f ∉ C(x, z)` for `f ∈ C(x, y)`, `g ∈ C(y, z)`.
    Composition {
        x: String,
        y: String,
        z: String,
        g: String,
        f: String,
        composite: String,
    },
}

impl fmt::Display for QCatViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QCatViolation::Identity { object } => {
                write!(f, "identity law fails at `{object}`")
            }
            QCatViolation::Composition { x, y, z, g, f: ff, composite } => write!(
                f,
                "composition law fails at ({x}, {y}, {z}): {g}∘{ff} = {composite} is not in C({x}, {z})"
            ),
        }
    }
}

/// Checks the identity and composition laws, reporting one witness per
/// failing triple.
pub fn validate_qcategory(c: &dyn QCat) -> ValidationReport<QCatViolation> {
    let b = c.base();
    let n = c.size();
    let mut out = Vec::new();
    for x in 0..n {
        if !has_identity(b, &c.hom(x, x)) {
            out.push(QCatViolation::Identity {
                object: c.object_id(x).to_string(),
            });
        }
    }
    let homs: Vec<QHom> = (0..n * n).map(|i| c.hom(i / n, i % n)).collect();
    for x in 0..n {
        for y in 0..n {
            let exy = homs[x * n + y];
            if exy.is_empty() {
                continue;
            }
            for z in 0..n {
                let eyz = homs[y * n + z];
                let exz = homs[x * n + z];
                if compose_unchecked(b, eyz, exy).le(&exz) {
                    continue;
                }
                'w: for g in eyz.elems(b) {
                    for f in exy.elems(b) {
                        let gf = b.compose(g, f).expect("typed");
                        if !exz.contains(b, gf) {
                            out.push(QCatViolation::Composition {
                                x: c.object_id(x).to_string(),
                                y: c.object_id(y).to_string(),
                                z: c.object_id(z).to_string(),
                                g: b.morphism_id(g).to_string(),
                                f: b.morphism_id(f).to_string(),
                                composite: b.morphism_id(gf).to_string(),
                            });
                            break 'w;
                        }
                    }
                }
            }
        }
    }
    ValidationReport::new(out)
}

/// An extent-preserving object map between Q-categories over a common base.
#[derive(Clone)]
pub struct QFunctor<'a> {
    dom: &'a dyn QCat,
    cod: &'a dyn QCat,
    map: Vec<usize>,
}

impl fmt::Debug for QFunctor<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QFunctor").field("map", &self.map).finish()
    }
}

impl<'a> QFunctor<'a> {
    /// Checks that the bases agree and that `map` sends every object of
    /// `dom` to an object of `cod`. The functor laws are checked by
    /// [`validate_qfunctor`].
    pub fn new(dom: &'a dyn QCat, cod: &'a dyn QCat, map: Vec<usize>) -> Result<Self> {
        if !same_base(dom.base(), cod.base()) {
            return Err(Error::mismatch("domain and codomain have different bases"));
        }
        if map.len() != dom.size() {
            return Err(Error::InvalidData(format!(
                "object map has {} entries for {} objects",
                map.len(),
                dom.size()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= cod.size()) {
            return Err(Error::UnknownObject(format!("#{bad}")));
        }
        Ok(Self { dom, cod, map })
    }

    pub fn from_ids(
        dom: &'a dyn QCat,
        cod: &'a dyn QCat,
        map: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let objects = (0..dom.size())
            .map(|x| {
                let id = dom.object_id(x);
                let target = map
                    .get(id)
                    .ok_or_else(|| Error::InvalidData(format!("object `{id}` is not mapped")))?;
                cod.find_object(target)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(dom, cod, objects)
    }

    pub fn identity(c: &'a dyn QCat) -> Self {
        Self {
            dom: c,
            cod: c,
            map: (0..c.size()).collect(),
        }
    }

    pub fn dom(&self) -> &'a dyn QCat {
        self.dom
    }

    pub fn cod(&self) -> &'a dyn QCat {
        self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `G ∘ F` for `self = F`.
    pub fn then(&self, g: &QFunctor<'a>) -> Result<QFunctor<'a>> {
        if !same_qcat(self.cod, g.dom) {
            return Err(Error::mismatch("functors are not composable"));
        }
        Ok(QFunctor {
            dom: self.dom,
            cod: g.cod,
            map: self.map.iter().map(|&x| g.map[x]).collect(),
        })
    }

    pub fn to_ids(&self) -> BTreeMap<String, String> {
        (0..self.dom.size())
            .map(|x| {
                (
                    self.dom.object_id(x).to_string(),
                    self.cod.object_id(self.map[x]).to_string(),
                )
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctorViolation {
    Extent { object: String, image: String },
    Hom { x: String, y: String },
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorViolation::Extent { object, image } => {
                write!(
                    f,
                    "`{object}` and its image `{image}` have different extents"
                )
            }
            FunctorViolation::Hom { x, y } => {
                write!(f, "C({x}, {y}) is not included in D(F{x}, F{y})")
            }
        }
    }
}

/// Checks extent preservation and `C(x, y) ≤ D(Fx, Fy)`.
pub fn validate_qfunctor(f: &QFunctor<'_>) -> ValidationReport<FunctorViolation> {
    let (dom, cod) = (f.dom, f.cod);
    let mut out = Vec::new();
    for x in 0..dom.size() {
        if dom.extent(x) != cod.extent(f.map[x]) {
            out.push(FunctorViolation::Extent {
                object: dom.object_id(x).to_string(),
                image: cod.object_id(f.map[x]).to_string(),
            });
        }
    }
    if !out.is_empty() {
        return ValidationReport::new(out);
    }
    for x in 0..dom.size() {
        for y in 0..dom.size() {
            if !dom.hom(x, y).le(&cod.hom(f.map[x], f.map[y])) {
                out.push(FunctorViolation::Hom {
                    x: dom.object_id(x).to_string(),
                    y: dom.object_id(y).to_string(),
                });
            }
        }
    }
    ValidationReport::new(out)
}

/// `F ≤ G`: `1_{|x|} ∈ D(Fx, Gx)` for every `x`.
pub fn qtransformation_leq(f: &QFunctor<'_>, g: &QFunctor<'_>) -> Result<bool> {
    if !same_qcat(f.dom, g.dom) || !same_qcat(f.cod, g.cod) {
        return Err(Error::mismatch("functors are not parallel"));
    }
    let b = f.cod.base();
    Ok((0..f.dom.size()).all(|x| has_identity(b, &f.cod.hom(f.map[x], g.map[x]))))
}

/// A faithful functor `p : E → B` given as an ordinary functor.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctorPresentation {
    pub total: FinCategory,
    pub base: Arc<FinCategory>,
    pub on_objects: Vec<usize>,
    pub on_morphisms: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PresentationViolation {
    Typing { morphism: String },
    Identity { object: String },
    Composition { g: String, f: String },
}

impl fmt::Display for PresentationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresentationViolation::Typing { morphism } => {
                write!(f, "image of `{morphism}` has the wrong endpoints")
            }
            PresentationViolation::Identity { object } => {
                write!(f, "identity of `{object}` is not sent to an identity")
            }
            PresentationViolation::Composition { g, f: ff } => {
                write!(f, "p({g}∘{ff}) differs from p({g})∘p({ff})")
            }
        }
    }
}

impl FunctorPresentation {
    pub fn validate(&self) -> ValidationReport<PresentationViolation> {
        let (e, b) = (&self.total, &*self.base);
        let mut out = Vec::new();
        if self.on_objects.len() != e.num_objects() || self.on_morphisms.len() != e.num_morphisms()
        {
            out.push(PresentationViolation::Typing {
                morphism: "<map size>".into(),
            });
            return ValidationReport::new(out);
        }
        for (i, m) in e.morphisms().iter().enumerate() {
            let img = b.morphism(self.on_morphisms[i]);
            if (img.src, img.dst) != (self.on_objects[m.src], self.on_objects[m.dst]) {
                out.push(PresentationViolation::Typing {
                    morphism: m.id.clone(),
                });
            }
        }
        for x in 0..e.num_objects() {
            if self.on_morphisms[e.identity(x)] != b.identity(self.on_objects[x]) {
                out.push(PresentationViolation::Identity {
                    object: e.object_id(x).to_string(),
                });
            }
        }
        if !out.is_empty() {
            return ValidationReport::new(out);
        }
        for g in 0..e.num_morphisms() {
            for f in 0..e.num_morphisms() {
                if let Some(gf) = e.compose(g, f) {
                    let lhs = self.on_morphisms[gf];
                    let rhs = b.compose(self.on_morphisms[g], self.on_morphisms[f]);
                    if Some(lhs) != rhs {
                        out.push(PresentationViolation::Composition {
                            g: e.morphism_id(g).to_string(),
                            f: e.morphism_id(f).to_string(),
                        });
                    }
                }
            }
        }
        ValidationReport::new(out)
    }
}

/// The Q_B-category of a faithful functor: extents are images of objects
/// and `E(x, y)` is the image of the hom-set.
pub fn from_presentation(p: &FunctorPresentation) -> Result<QCategory> {
    let report = p.validate();
    if !report.is_empty() {
        return Err(Error::InvalidData(format!("not a functor:\n{report}")));
    }
    let (e, b) = (&p.total, &p.base);
    let n = e.num_objects();
    let mut homs = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let mut seen: HashMap<usize, usize> = HashMap::new();
            for &m in e.hom_set(x, y) {
                let img = p.on_morphisms[m];
                if let Some(&other) = seen.get(&img) {
                    return Err(Error::NotFaithful {
                        first: e.morphism_id(other).to_string(),
                        second: e.morphism_id(m).to_string(),
                        image: b.morphism_id(img).to_string(),
                    });
                }
                seen.insert(img, m);
            }
            homs.push(QHom::from_morphisms(
                b,
                p.on_objects[x],
                p.on_objects[y],
                e.hom_set(x, y).iter().map(|&m| p.on_morphisms[m]),
            )?);
        }
    }
    let objects = (0..n)
        .map(|x| (e.object_id(x).to_string(), p.on_objects[x]))
        .collect();
    QCategory::from_fn(p.base.clone(), objects, |x, y| homs[x * n + y])
}

/// The faithful functor of a valid Q_B-category. The morphism of `E` lying
/// over `m ∈ E(x, y)` is named `x|y|m`.
pub fn to_presentation(c: &QCategory) -> Result<FunctorPresentation> {
    let b = c.base();
    let n = c.size();
    let name = |x: usize, y: usize, m: usize| {
        format!("{}|{}|{}", c.object_id(x), c.object_id(y), b.morphism_id(m))
    };
    let mut morphisms = Vec::new();
    let mut on_morphisms = Vec::new();
    let mut index: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for x in 0..n {
        for y in 0..n {
            for m in c.hom(x, y).elems(b) {
                index.insert((x, y, m), morphisms.len());
                morphisms.push(Morphism {
                    id: name(x, y, m),
                    src: x,
                    dst: y,
                });
                on_morphisms.push(m);
            }
        }
    }
    let mut identities = BTreeMap::new();
    for x in 0..n {
        let id = b.identity(c.extent(x));
        if !index.contains_key(&(x, x, id)) {
            return Err(Error::InvalidData(format!(
                "identity law fails at `{}`",
                c.object_id(x)
            )));
        }
        identities.insert(c.object_id(x).to_string(), name(x, x, id));
    }
    let mut composition = Vec::new();
    for (g_idx, g) in morphisms.iter().enumerate() {
        for (f_idx, f) in morphisms.iter().enumerate() {
            if f.dst != g.src {
                continue;
            }
            let gf = b
                .compose(on_morphisms[g_idx], on_morphisms[f_idx])
                .expect("typed");
            let &k = index.get(&(f.src, g.dst, gf)).ok_or_else(|| {
                Error::InvalidData(format!("composition law fails for {} ∘ {}", g.id, f.id))
            })?;
            composition.push([g.id.clone(), f.id.clone(), morphisms[k].id.clone()]);
        }
    }
    let data = CategoryData {
        objects: c.ids().to_vec(),
        morphisms: morphisms
            .iter()
            .map(|m| MorphismData {
                id: m.id.clone(),
                src: c.object_id(m.src).to_string(),
                dst: c.object_id(m.dst).to_string(),
            })
            .collect(),
        identities,
        composition,
    };
    Ok(FunctorPresentation {
        total: FinCategory::new(&data)?,
        base: c.base_arc().clone(),
        on_objects: (0..n).map(|x| c.extent(x)).collect(),
        on_morphisms,
    })
}

/// A bijection `a → b` on objects preserving extents and every hom exactly,
/// or `None`.
pub fn find_isomorphism(a: &dyn QCat, b: &dyn QCat) -> Option<Vec<usize>> {
    if !same_base(a.base(), b.base()) || a.size() != b.size() {
        return None;
    }
    let n = a.size();
    let signature = |c: &dyn QCat, x: usize| {
        let out: usize = (0..n).map(|y| c.hom(x, y).len()).sum();
        let inc: usize = (0..n).map(|y| c.hom(y, x).len()).sum();
        (c.extent(x), c.hom(x, x).bits(), out, inc)
    };
    let sa: Vec<_> = (0..n).map(|x| signature(a, x)).collect();
    let sb: Vec<_> = (0..n).map(|x| signature(b, x)).collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn go(
        a: &dyn QCat,
        b: &dyn QCat,
        sa: &[(usize, u128, usize, usize)],
        sb: &[(usize, u128, usize, usize)],
        k: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let n = map.len();
        if k == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] || sa[k] != sb[cand] {
                continue;
            }
            let fits = (0..k)
                .all(|j| a.hom(k, j) == b.hom(cand, map[j]) && a.hom(j, k) == b.hom(map[j], cand));
            if !fits {
                continue;
            }
            map[k] = cand;
            used[cand] = true;
            if go(a, b, sa, sb, k + 1, map, used) {
                return true;
            }
            used[cand] = false;
        }
        false
    }

    go(a, b, &sa, &sb, 0, &mut map, &mut used).then_some(map)
}

/// Fully faithful and essentially surjective.
pub fn is_equivalence(f: &QFunctor<'_>) -> bool {
    let (dom, cod) = (f.dom(), f.cod());
    let ff = (0..dom.size())
        .all(|x| (0..dom.size()).all(|y| dom.hom(x, y) == cod.hom(f.apply(x), f.apply(y))));
    ff && (0..cod.size()).all(|d| (0..dom.size()).any(|x| isomorphic(cod, f.apply(x), d)))
}
