//! Finite categories given as explicit data: objects, morphisms, identities
//! and a composition table.
//!
//! [`CategoryData`] is the serialized, unchecked form. [`FinCategory`] is the
//! validated form every other module works with; it indexes objects and
//! morphisms by position and keeps, for every pair of objects, the hom-set in
//! morphism-list order. Morphisms of a hom-set carry a *local index* (their
//! position inside that hom-set), which is what the quantaloid homs in
//! [`crate::quantaloid`] use as bit positions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::ValidationReport;

/// Largest hom-set a [`FinCategory`] accepts; quantaloid homs are bitmasks
/// over a single hom-set.
pub const MAX_HOM_SET: usize = 128;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismData {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// Unchecked category data in the canonical file layout.
///
/// `composition` entries are `[g, f, g∘f]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryData {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismData>,
    #[serde(default)]
    pub identities: BTreeMap<String, String>,
    #[serde(default)]
    pub composition: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CategoryViolation {
    DuplicateObject {
        object: String,
    },
    DuplicateMorphism {
        morphism: String,
    },
    UnknownEndpoint {
        morphism: String,
        object: String,
    },
    MissingIdentity {
        object: String,
    },
    BadIdentity {
        object: String,
        morphism: String,
    },
    UnknownInComposition {
        g: String,
        f: String,
        composite: String,
    },
    NotComposable {
        g: String,
        f: String,
    },
    DuplicateComposite {
        g: String,
        f: String,
    },
    MissingComposite {
        g: String,
        f: String,
    },
    CompositeType {
        g: String,
        f: String,
        composite: String,
    },
    UnitLaw {
        g: String,
        f: String,
        composite: String,
    },
    Associativity {
        h: String,
        g: String,
        f: String,
        left: String,
        right: String,
    },
    HomSetTooLarge {
        src: String,
        dst: String,
        size: usize,
    },
}

impl fmt::Display for CategoryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CategoryViolation::*;
        match self {
            DuplicateObject { object } => write!(f, "duplicate object id `{object}`"),
            DuplicateMorphism { morphism } => write!(f, "duplicate morphism id `{morphism}`"),
            UnknownEndpoint { morphism, object } => {
                write!(f, "morphism `{morphism}` refers to unknown object `{object}`")
            }
            MissingIdentity { object } => write!(f, "object `{object}` has no identity"),
            BadIdentity { object, morphism } => {
                write!(f, "identity `{morphism}` of `{object}` is not an endomorphism of it")
            }
            UnknownInComposition { g, f: ff, composite } => {
                write!(f, "composition entry ({g}, {ff}) -> {composite} names an unknown morphism")
            }
            NotComposable { g, f: ff } => {
                write!(f, "composition entry ({g}, {ff}) given for a non-composable pair")
            }
            DuplicateComposite { g, f: ff } => write!(f, "pair ({g}, {ff}) composed twice"),
            MissingComposite { g, f: ff } => write!(f, "composable pair ({g}, {ff}) has no composite"),
            CompositeType { g, f: ff, composite } => {
                write!(f, "composite of ({g}, {ff}) is `{composite}`, which has the wrong type")
            }
            UnitLaw { g, f: ff, composite } => {
                write!(f, "unit law fails at ({g}, {ff}): composite is `{composite}`")
            }
            Associativity { h, g, f: ff, left, right } => write!(
                f,
                "associativity fails at ({h}, {g}, {ff}): {h}∘({g}∘{ff}) = {left} but ({h}∘{g})∘{ff} = {right}"
            ),
            HomSetTooLarge { src, dst, size } => write!(
                f,
                "hom-set ({src}, {dst}) has {size} morphisms; at most {MAX_HOM_SET} are supported"
            ),
        }
    }
}

/// Checks category data against every category axiom. The report lists each
/// violation with the offending ids and is empty exactly when the data is a
/// category.
pub fn validate_category(data: &CategoryData) -> ValidationReport<CategoryViolation> {
    use CategoryViolation::*;
    let mut out = Vec::new();

    let mut obj = HashMap::new();
    for (i, o) in data.objects.iter().enumerate() {
        if obj.insert(o.as_str(), i).is_some() {
            out.push(DuplicateObject { object: o.clone() });
        }
    }

    let mut mor: HashMap<&str, (usize, Option<usize>, Option<usize>)> = HashMap::new();
    for (i, m) in data.morphisms.iter().enumerate() {
        let src = obj.get(m.src.as_str()).copied();
        let dst = obj.get(m.dst.as_str()).copied();
        if src.is_none() {
            out.push(UnknownEndpoint {
                morphism: m.id.clone(),
                object: m.src.clone(),
            });
        }
        if dst.is_none() && m.dst != m.src {
            out.push(UnknownEndpoint {
                morphism: m.id.clone(),
                object: m.dst.clone(),
            });
        }
        if mor.insert(m.id.as_str(), (i, src, dst)).is_some() {
            out.push(DuplicateMorphism {
                morphism: m.id.clone(),
            });
        }
    }
    let typed = |id: &str| -> Option<(usize, usize)> {
        let &(_, s, d) = mor.get(id)?;
        Some((s?, d?))
    };

    for o in &data.objects {
        match data.identities.get(o) {
            None => out.push(MissingIdentity { object: o.clone() }),
            Some(m) => {
                let x = obj[o.as_str()];
                if typed(m) != Some((x, x)) {
                    out.push(BadIdentity {
                        object: o.clone(),
                        morphism: m.clone(),
                    });
                }
            }
        }
    }
    for (o, m) in &data.identities {
        if !obj.contains_key(o.as_str()) {
            out.push(BadIdentity {
                object: o.clone(),
                morphism: m.clone(),
            });
        }
    }

    let mut table: HashMap<(&str, &str), &str> = HashMap::new();
    for [g, f, gf] in &data.composition {
        let (Some(tg), Some(tf), Some(tgf)) = (typed(g), typed(f), typed(gf)) else {
            out.push(UnknownInComposition {
                g: g.clone(),
                f: f.clone(),
                composite: gf.clone(),
            });
            continue;
        };
        if tf.1 != tg.0 {
            out.push(NotComposable {
                g: g.clone(),
                f: f.clone(),
            });
            continue;
        }
        if table
            .insert((g.as_str(), f.as_str()), gf.as_str())
            .is_some()
        {
            out.push(DuplicateComposite {
                g: g.clone(),
                f: f.clone(),
            });
            continue;
        }
        if tgf != (tf.0, tg.1) {
            out.push(CompositeType {
                g: g.clone(),
                f: f.clone(),
                composite: gf.clone(),
            });
        }
    }

    let well_typed: Vec<(&str, usize, usize)> = data
        .morphisms
        .iter()
        .filter_map(|m| typed(&m.id).map(|(s, d)| (m.id.as_str(), s, d)))
        .collect();
    let mut hom_sizes: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(_, s, d) in &well_typed {
        *hom_sizes.entry((s, d)).or_default() += 1;
    }
    for (&(s, d), &size) in &hom_sizes {
        if size > MAX_HOM_SET {
            out.push(HomSetTooLarge {
                src: data.objects[s].clone(),
                dst: data.objects[d].clone(),
                size,
            });
        }
    }

    for &(g, gs, _) in &well_typed {
        for &(f, _, fd) in &well_typed {
            if fd == gs && !table.contains_key(&(g, f)) {
                out.push(MissingComposite {
                    g: g.to_string(),
                    f: f.to_string(),
                });
            }
        }
    }

    // Unit laws, on pairs whose composite is known.
    for (o, id) in &data.identities {
        let Some(&x) = obj.get(o.as_str()) else {
            continue;
        };
        if typed(id) != Some((x, x)) {
            continue;
        }
        for &(f, fs, fd) in &well_typed {
            if fd == x {
                if let Some(&c) = table.get(&(id.as_str(), f)) {
                    if c != f {
                        out.push(UnitLaw {
                            g: id.clone(),
                            f: f.to_string(),
                            composite: c.to_string(),
                        });
                    }
                }
            }
            if fs == x {
                if let Some(&c) = table.get(&(f, id.as_str())) {
                    if c != f {
                        out.push(UnitLaw {
                            g: f.to_string(),
                            f: id.clone(),
                            composite: c.to_string(),
                        });
                    }
                }
            }
        }
    }

    for &(h, hs, _) in &well_typed {
        for &(g, gs, gd) in &well_typed {
            if gd != hs {
                continue;
            }
            for &(f, _, fd) in &well_typed {
                if fd != gs {
                    continue;
                }
                let left = table.get(&(g, f)).and_then(|gf| table.get(&(h, *gf)));
                let right = table.get(&(h, g)).and_then(|hg| table.get(&(*hg, f)));
                if let (Some(l), Some(r)) = (left, right) {
                    if l != r {
                        out.push(Associativity {
                            h: h.to_string(),
                            g: g.to_string(),
                            f: f.to_string(),
                            left: l.to_string(),
                            right: r.to_string(),
                        });
                    }
                }
            }
        }
    }

    ValidationReport::new(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub id: String,
    pub src: usize,
    pub dst: usize,
}

/// A validated finite category.
#[derive(Clone, Debug)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    /// `composition[g * m + f]` is `g∘f`, or `NONE` when not composable.
    composition: Vec<u32>,
    hom_sets: Vec<Vec<usize>>,
    local: Vec<u32>,
    object_index: HashMap<String, usize>,
    morphism_index: HashMap<String, usize>,
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.objects == other.objects
                && self.morphisms == other.morphisms
                && self.identities == other.identities
                && self.composition == other.composition)
    }
}

impl Eq for FinCategory {}

impl FinCategory {
    /// Validates `data` and builds the indexed category.
    pub fn new(data: &CategoryData) -> Result<Self> {
        let report = validate_category(data);
        if !report.is_empty() {
            return Err(Error::InvalidCategory(report));
        }
        let object_index: HashMap<String, usize> = data
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.clone(), i))
            .collect();
        let morphisms: Vec<Morphism> = data
            .morphisms
            .iter()
            .map(|m| Morphism {
                id: m.id.clone(),
                src: object_index[&m.src],
                dst: object_index[&m.dst],
            })
            .collect();
        let morphism_index: HashMap<String, usize> = morphisms
            .iter()
            .enumerate()
            .map(|(i, m)| (m.id.clone(), i))
            .collect();
        let identities = data
            .objects
            .iter()
            .map(|o| morphism_index[&data.identities[o]])
            .collect();
        let m = morphisms.len();
        let mut composition = vec![NONE; m * m];
        for [g, f, gf] in &data.composition {
            composition[morphism_index[g] * m + morphism_index[f]] = morphism_index[gf] as u32;
        }
        Ok(Self::assemble(
            data.objects.clone(),
            morphisms,
            identities,
            composition,
        ))
    }

    fn assemble(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        composition: Vec<u32>,
    ) -> Self {
        let n = objects.len();
        let mut hom_sets = vec![Vec::new(); n * n];
        let mut local = vec![0u32; morphisms.len()];
        for (i, mor) in morphisms.iter().enumerate() {
            let set = &mut hom_sets[mor.src * n + mor.dst];
            local[i] = set.len() as u32;
            set.push(i);
        }
        let object_index = objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.clone(), i))
            .collect();
        let morphism_index = morphisms
            .iter()
            .enumerate()
            .map(|(i, m)| (m.id.clone(), i))
            .collect();
        Self {
            objects,
            morphisms,
            identities,
            composition,
            hom_sets,
            local,
            object_index,
            morphism_index,
        }
    }

    /// The terminal category: one object `*` with identity `id`.
    pub fn terminal() -> Self {
        Self::assemble(
            vec!["*".into()],
            vec![Morphism {
                id: "id".into(),
                src: 0,
                dst: 0,
            }],
            vec![0],
            vec![0],
        )
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_id(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn object_index(&self, id: &str) -> Result<usize> {
        self.object_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownObject(id.to_string()))
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, m: usize) -> &Morphism {
        &self.morphisms[m]
    }

    pub fn morphism_id(&self, m: usize) -> &str {
        &self.morphisms[m].id
    }

    pub fn morphism_index(&self, id: &str) -> Result<usize> {
        self.morphism_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownMorphism(id.to_string()))
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    /// `g∘f`, or `None` when `dst(f) != src(g)`.
    #[inline]
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        match self.composition[g * self.morphisms.len() + f] {
            NONE => None,
            c => Some(c as usize),
        }
    }

    /// The morphisms `x → y`, in morphism-list order.
    #[inline]
    pub fn hom_set(&self, x: usize, y: usize) -> &[usize] {
        &self.hom_sets[x * self.objects.len() + y]
    }

    /// Position of `m` inside its hom-set.
    #[inline]
    pub fn local_index(&self, m: usize) -> usize {
        self.local[m] as usize
    }

    /// `hom_set` by object ids.
    pub fn hom_set_ids(&self, x: &str, y: &str) -> Result<Vec<&str>> {
        let (x, y) = (self.object_index(x)?, self.object_index(y)?);
        Ok(self
            .hom_set(x, y)
            .iter()
            .map(|&m| self.morphism_id(m))
            .collect())
    }

    pub fn opposite(&self) -> Self {
        let m = self.morphisms.len();
        let morphisms = self
            .morphisms
            .iter()
            .map(|mor| Morphism {
                id: mor.id.clone(),
                src: mor.dst,
                dst: mor.src,
            })
            .collect();
        let mut composition = vec![NONE; m * m];
        for g in 0..m {
            for f in 0..m {
                composition[f * m + g] = self.composition[g * m + f];
            }
        }
        Self::assemble(
            self.objects.clone(),
            morphisms,
            self.identities.clone(),
            composition,
        )
    }

    /// Canonical data form: composition entries sorted by `(g, f)` in
    /// morphism-list order.
    pub fn to_data(&self) -> CategoryData {
        let m = self.morphisms.len();
        let mut composition = Vec::new();
        for g in 0..m {
            for f in 0..m {
                if let Some(gf) = self.compose(g, f) {
                    composition.push([
                        self.morphism_id(g).to_string(),
                        self.morphism_id(f).to_string(),
                        self.morphism_id(gf).to_string(),
                    ]);
                }
            }
        }
        CategoryData {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|mor| MorphismData {
                    id: mor.id.clone(),
                    src: self.objects[mor.src].clone(),
                    dst: self.objects[mor.dst].clone(),
                })
                .collect(),
            identities: self
                .objects
                .iter()
                .zip(&self.identities)
                .map(|(o, &i)| (o.clone(), self.morphisms[i].id.clone()))
                .collect(),
            composition,
        }
    }

    /// Whether every object has only its identity as endomorphism and there
    /// are no other morphisms, i.e. this is the terminal category up to naming.
    pub fn is_terminal(&self) -> bool {
        self.objects.len() == 1 && self.morphisms.len() == 1
    }
}

/// The opposite category: same objects and morphism ids, endpoints swapped,
/// composition transposed.
pub fn opposite_category(c: &FinCategory) -> FinCategory {
    c.opposite()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn terminal_and_arrow_validate() {
        assert!(validate_category(&FinCategory::terminal().to_data()).is_empty());
        assert!(validate_category(&fixtures::arrow_category().to_data()).is_empty());
    }

    #[test]
    fn injected_unit_violation_is_reported() {
        let mut data = fixtures::arrow_category().to_data();
        for entry in &mut data.composition {
            if entry[0] == "1Y" && entry[1] == "f" {
                entry[2] = "1Y".into();
            }
        }
        let report = validate_category(&data);
        assert!(report.violations.contains(&CategoryViolation::UnitLaw {
            g: "1Y".into(),
            f: "f".into(),
            composite: "1Y".into(),
        }));
        assert!(FinCategory::new(&data).is_err());
    }

    #[test]
    fn duplicates_and_missing_composites() {
        let mut data = fixtures::arrow_category().to_data();
        data.morphisms.push(data.morphisms[0].clone());
        data.composition.retain(|e| e[1] != "f" || e[0] != "1Y");
        let report = validate_category(&data);
        assert!(report
            .iter()
            .any(|v| matches!(v, CategoryViolation::DuplicateMorphism { .. })));
        assert!(report.iter().any(
            |v| matches!(v, CategoryViolation::MissingComposite { g, f } if g == "1Y" && f == "f")
        ));
    }

    #[test]
    fn non_composable_entry_is_rejected() {
        let mut data = fixtures::arrow_category().to_data();
        data.composition.push(["f".into(), "f".into(), "f".into()]);
        let report = validate_category(&data);
        assert!(report
            .iter()
            .any(|v| matches!(v, CategoryViolation::NotComposable { .. })));
    }

    #[test]
    fn opposite_swaps_and_is_involutive() {
        let t = FinCategory::terminal();
        assert_eq!(opposite_category(&t), t);

        let a = fixtures::arrow_category();
        let op = opposite_category(&a);
        let f = op.morphism_index("f").unwrap();
        assert_eq!(op.object_id(op.morphism(f).src), "Y");
        assert_eq!(op.object_id(op.morphism(f).dst), "X");
        assert!(validate_category(&op.to_data()).is_empty());
        assert_eq!(opposite_category(&op), a);
    }

    #[test]
    fn hom_sets() {
        let t = FinCategory::terminal();
        assert_eq!(t.hom_set_ids("*", "*").unwrap(), vec!["id"]);
        let a = fixtures::arrow_category();
        assert_eq!(a.hom_set_ids("X", "Y").unwrap(), vec!["f"]);
        assert!(a.hom_set_ids("Y", "X").unwrap().is_empty());
        assert!(matches!(
            a.hom_set_ids("Z", "X"),
            Err(Error::UnknownObject(_))
        ));
    }

    #[test]
    fn hom_sets_partition_morphisms() {
        let a = fixtures::arrow_category();
        let mut seen = vec![0; a.num_morphisms()];
        for x in 0..a.num_objects() {
            for y in 0..a.num_objects() {
                for &m in a.hom_set(x, y) {
                    seen[m] += 1;
                }
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn data_round_trip_is_canonical() {
        let a = fixtures::arrow_category();
        let text = serde_json::to_string(&serde_json::to_value(a.to_data()).unwrap()).unwrap();
        let back: CategoryData = serde_json::from_str(&text).unwrap();
        let again = FinCategory::new(&back).unwrap();
        let text2 = serde_json::to_string(&serde_json::to_value(again.to_data()).unwrap()).unwrap();
        assert_eq!(text, text2);
    }
}
