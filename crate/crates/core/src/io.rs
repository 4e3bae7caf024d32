//! JSON file formats.
//!
//! * category: `{"objects", "morphisms", "identities", "composition"}`
//! * Q-category: `{"base": <category | path>, "objects": [{"id", "extent"}],
//!   "homs": {"x|y": [ids]}}`, omitted homs being empty
//! * presheaf / copresheaf: `{"extent", "components": {"x": [ids]}}`,
//!   omitted components being empty
//! * Q-functor: `{"dom": <Q-category>, "cod": <Q-category>, "object_map": {x: y}}`
//! * hom: `{"src", "dst", "elems"}`
//!
//! Output maps are sorted by key, so serialization is canonical.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::base::{CategoryData, FinCategory};
use crate::error::{Error, Result};
use crate::presheaf::{Copresheaf, Presheaf};
use crate::qcategory::{QCat, QCategory, QFunctor};
use crate::quantaloid::QHom;

/// Reads a file, or standard input for `-`.
pub fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())).into())
    }
}

fn base_dir(path: &Path) -> PathBuf {
    if path.as_os_str() == "-" {
        PathBuf::from(".")
    } else {
        path.parent().map(Path::to_path_buf).unwrap_or_default()
    }
}

pub fn category_to_json(c: &FinCategory) -> Value {
    serde_json::to_value(c.to_data()).expect("serializable")
}

pub fn category_from_json(v: &Value) -> Result<FinCategory> {
    let data: CategoryData = serde_json::from_value(v.clone())?;
    FinCategory::new(&data)
}

pub fn read_category(path: &Path) -> Result<FinCategory> {
    let v: Value = serde_json::from_str(&read_input(path)?)?;
    category_from_json(&v)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectEntry {
    id: String,
    extent: String,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BaseRef {
    Path(String),
    Inline(CategoryData),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QCategoryFile {
    base: BaseRef,
    objects: Vec<ObjectEntry>,
    #[serde(default)]
    homs: BTreeMap<String, Vec<String>>,
}

/// Parses a Q-category; a base given as a path is resolved against `dir`.
/// Only the typing is checked here; see
/// [`validate_qcategory`](crate::qcategory::validate_qcategory).
pub fn qcategory_from_json(v: &Value, dir: &Path) -> Result<QCategory> {
    let file: QCategoryFile = serde_json::from_value(v.clone())?;
    let base = match file.base {
        BaseRef::Inline(data) => FinCategory::new(&data)?,
        BaseRef::Path(p) => read_category(&dir.join(p))?,
    };
    let objects: Vec<(String, String)> =
        file.objects.into_iter().map(|o| (o.id, o.extent)).collect();
    QCategory::from_parts(Arc::new(base), &objects, &file.homs)
}

/// Canonical JSON with the base inlined.
pub fn qcategory_to_json(c: &QCategory) -> Value {
    let (objects, homs) = c.to_parts();
    let file = QCategoryFile {
        base: BaseRef::Inline(c.base().to_data()),
        objects: objects
            .into_iter()
            .map(|(id, extent)| ObjectEntry { id, extent })
            .collect(),
        homs,
    };
    serde_json::to_value(file).expect("serializable")
}

pub fn read_qcategory(path: &Path) -> Result<QCategory> {
    let v: Value = serde_json::from_str(&read_input(path)?)?;
    qcategory_from_json(&v, &base_dir(path))
}

pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    extent: String,
    #[serde(default)]
    components: BTreeMap<String, Vec<String>>,
}

fn family_from_json(c: &dyn QCat, v: &Value, co: bool) -> Result<(usize, Vec<QHom>)> {
    let file: FamilyFile = serde_json::from_value(v.clone())?;
    let b = c.base();
    let z = b.object_index(&file.extent)?;
    let mut comps: Vec<QHom> = (0..c.size())
        .map(|x| {
            if co {
                QHom::empty(z, c.extent(x))
            } else {
                QHom::empty(c.extent(x), z)
            }
        })
        .collect();
    for (id, elems) in &file.components {
        let x = c.find_object(id)?;
        let (s, d) = if co {
            (z, c.extent(x))
        } else {
            (c.extent(x), z)
        };
        comps[x] = QHom::from_ids(b, s, d, elems)?;
    }
    Ok((z, comps))
}

fn family_to_json(c: &dyn QCat, extent: usize, comps: &[QHom]) -> Value {
    let b = c.base();
    let components = comps
        .iter()
        .enumerate()
        .map(|(x, h)| {
            let ids: Vec<String> = h.elem_ids(b).into_iter().map(String::from).collect();
            (c.object_id(x).to_string(), ids)
        })
        .collect();
    serde_json::to_value(FamilyFile {
        extent: b.object_id(extent).to_string(),
        components,
    })
    .expect("serializable")
}

/// Parses and validates a presheaf on `c`.
pub fn presheaf_from_json(c: &dyn QCat, v: &Value) -> Result<Presheaf> {
    let (z, comps) = family_from_json(c, v, false)?;
    Presheaf::new(c, z, comps)
}

pub fn presheaf_to_json(c: &dyn QCat, p: &Presheaf) -> Value {
    family_to_json(c, p.extent(), p.components())
}

/// Parses and validates a copresheaf on `c`.
pub fn copresheaf_from_json(c: &dyn QCat, v: &Value) -> Result<Copresheaf> {
    let (z, comps) = family_from_json(c, v, true)?;
    Copresheaf::new(c, z, comps)
}

pub fn copresheaf_to_json(c: &dyn QCat, p: &Copresheaf) -> Value {
    family_to_json(c, p.extent(), p.components())
}

pub fn qhom_to_json(b: &FinCategory, h: &QHom) -> Value {
    serde_json::json!({
        "src": b.object_id(h.src()),
        "dst": b.object_id(h.dst()),
        "elems": h.elem_ids(b),
    })
}

pub fn qhom_from_json(b: &FinCategory, v: &Value) -> Result<QHom> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct HomFile {
        src: String,
        dst: String,
        #[serde(default)]
        elems: Vec<String>,
    }
    let h: HomFile = serde_json::from_value(v.clone())?;
    QHom::from_ids(
        b,
        b.object_index(&h.src)?,
        b.object_index(&h.dst)?,
        &h.elems,
    )
}

/// A Q-functor file: both categories and the object map.
pub struct FunctorFile {
    pub dom: QCategory,
    pub cod: QCategory,
    pub object_map: BTreeMap<String, String>,
}

impl FunctorFile {
    pub fn functor(&self) -> Result<QFunctor<'_>> {
        QFunctor::from_ids(&self.dom, &self.cod, &self.object_map)
    }
}

pub fn functor_from_json(v: &Value, dir: &Path) -> Result<FunctorFile> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::InvalidData("functor must be an object".into()))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "dom" | "cod" | "object_map") {
            return Err(Error::InvalidData(format!(
                "unknown field `{key}` in functor"
            )));
        }
    }
    let field = |k: &str| {
        obj.get(k)
            .ok_or_else(|| Error::InvalidData(format!("missing `{k}`")))
    };
    let resolve = |v: &Value| match v {
        Value::String(p) => read_qcategory(&dir.join(p)),
        other => qcategory_from_json(other, dir),
    };
    Ok(FunctorFile {
        dom: resolve(field("dom")?)?,
        cod: resolve(field("cod")?)?,
        object_map: serde_json::from_value(field("object_map")?.clone())?,
    })
}

pub fn read_functor(path: &Path) -> Result<FunctorFile> {
    let v: Value = serde_json::from_str(&read_input(path)?)?;
    functor_from_json(&v, &base_dir(path))
}

/// Canonical functor JSON with both categories inlined. `dom` and `cod` must
/// be stored categories.
pub fn functor_to_json(dom: &QCategory, cod: &QCategory, f: &QFunctor<'_>) -> Value {
    serde_json::json!({
        "dom": qcategory_to_json(dom),
        "cod": qcategory_to_json(cod),
        "object_map": f.to_ids(),
    })
}
