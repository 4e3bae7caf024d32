//! Random instances and the conformance suite.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::base::{CategoryData, FinCategory, MorphismData};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::io::{qcategory_to_json, read_qcategory, write_json};
use crate::limits::{is_cototal, is_total};
use crate::macneille::completion_properties;
use crate::presheaf::{enumerate_all_copresheaves, enumerate_all_presheaves};
use crate::qcategory::{opposite_qcategory, validate_qcategory, QCategory};
use crate::quantaloid::{compose_unchecked, QHom};
use crate::topological::{is_topological, isbell_down, isbell_up, main_theorem_check};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GenConfig {
    pub seed: u64,
    pub max_base_objects: usize,
    pub max_base_morphisms: usize,
    /// Upper bound on the number of objects of a generated Q-category, so
    /// also on each fiber.
    pub max_fiber_objects: usize,
    pub presheaf_cap: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            max_base_objects: 3,
            max_base_morphisms: 8,
            max_fiber_objects: 4,
            presheaf_cap: crate::presheaf::DEFAULT_CAP,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_base_objects == 0
            || self.max_base_morphisms == 0
            || self.max_fiber_objects == 0
            || self.presheaf_cap == 0
        {
            return Err(Error::InvalidData(
                "generator bounds must be at least 1".into(),
            ));
        }
        if self.max_base_morphisms > crate::base::MAX_HOM_SET {
            return Err(Error::InvalidData(format!(
                "max_base_morphisms must be at most {}",
                crate::base::MAX_HOM_SET
            )));
        }
        Ok(())
    }

    /// A deterministic generator for case `index`.
    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

fn object_name(i: usize) -> String {
    let letters = ["A", "B", "C", "D", "E", "F", "G", "H"];
    letters
        .get(i)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("O{i}"))
}

/// A concrete category: objects are small finite sets, morphisms are the
/// functions generated by a random graph of random functions. Returns
/// `None` if the closure exceeds `max_morphisms`.
fn try_concrete(rng: &mut impl Rng, n: usize, max_morphisms: usize) -> Option<FinCategory> {
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    type Arrow = (usize, usize, Vec<usize>);
    let mut arrows: Vec<Arrow> = (0..n).map(|x| (x, x, (0..sizes[x]).collect())).collect();
    let mut seen: HashMap<Arrow, usize> = arrows
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, a)| (a, i))
        .collect();
    let budget = max_morphisms.saturating_sub(n);
    let generators = if budget == 0 {
        0
    } else {
        rng.gen_range(1..=budget.min(4))
    };
    for _ in 0..generators {
        let (s, d) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let f: Vec<usize> = (0..sizes[s]).map(|_| rng.gen_range(0..sizes[d])).collect();
        let a = (s, d, f);
        if !seen.contains_key(&a) {
            seen.insert(a.clone(), arrows.len());
            arrows.push(a);
        }
    }
    let mut composition: HashMap<(usize, usize), usize> = HashMap::new();
    let mut changed = true;
    while changed {
        changed = false;
        let m = arrows.len();
        for g in 0..m {
            for f in 0..m {
                if arrows[f].1 != arrows[g].0 || composition.contains_key(&(g, f)) {
                    continue;
                }
                let gf: Vec<usize> = arrows[f].2.iter().map(|&i| arrows[g].2[i]).collect();
                let a = (arrows[f].0, arrows[g].1, gf);
                let k = match seen.get(&a) {
                    Some(&k) => k,
                    None => {
                        if arrows.len() >= max_morphisms {
                            return None;
                        }
                        seen.insert(a.clone(), arrows.len());
                        arrows.push(a);
                        changed = true;
                        arrows.len() - 1
                    }
                };
                composition.insert((g, f), k);
            }
        }
    }
    let names: Vec<String> = (0..arrows.len())
        .map(|i| {
            if i < n {
                format!("1{}", object_name(i))
            } else {
                format!("m{}", i - n + 1)
            }
        })
        .collect();
    let mut table: Vec<[String; 3]> = composition
        .iter()
        .map(|(&(g, f), &k)| [names[g].clone(), names[f].clone(), names[k].clone()])
        .collect();
    table.sort();
    let data = CategoryData {
        objects: (0..n).map(object_name).collect(),
        morphisms: arrows
            .iter()
            .enumerate()
            .map(|(i, a)| MorphismData {
                id: names[i].clone(),
                src: object_name(a.0),
                dst: object_name(a.1),
            })
            .collect(),
        identities: (0..n).map(|x| (object_name(x), names[x].clone())).collect(),
        composition: table,
    };
    Some(FinCategory::new(&data).expect("concrete categories are categories"))
}

/// A random finite category within the bounds of `cfg`; the terminal
/// category with probability 0.3 (always when only one morphism is allowed).
pub fn gen_fin_category_with(cfg: &GenConfig, rng: &mut impl Rng) -> FinCategory {
    let max_objects = cfg.max_base_objects.min(cfg.max_base_morphisms);
    if max_objects <= 1 && cfg.max_base_morphisms <= 1 || rng.gen_bool(0.3) {
        return FinCategory::terminal();
    }
    loop {
        let n = rng.gen_range(1..=max_objects);
        if let Some(c) = try_concrete(rng, n, cfg.max_base_morphisms) {
            return c;
        }
    }
}

pub fn gen_fin_category(cfg: &GenConfig) -> FinCategory {
    gen_fin_category_with(cfg, &mut cfg.rng(0))
}

/// Random extents and hom subsets, then identities added and the
/// composition law enforced by saturation `E(x,z) ∪= E(y,z) ∘ E(x,y)`.
pub fn gen_qcategory_with(cfg: &GenConfig, b: Arc<FinCategory>, rng: &mut impl Rng) -> QCategory {
    let n = rng.gen_range(1..=cfg.max_fiber_objects);
    let extents: Vec<usize> = (0..n).map(|_| rng.gen_range(0..b.num_objects())).collect();
    let density = rng.gen_range(0.1..0.6);
    let mut homs: Vec<QHom> = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let (zx, zy) = (extents[x], extents[y]);
            let elems: Vec<usize> = b
                .hom_set(zx, zy)
                .iter()
                .copied()
                .filter(|_| rng.gen_bool(density))
                .collect();
            let mut h = QHom::from_morphisms(&b, zx, zy, elems).expect("typed");
            if x == y {
                h = h.union(QHom::identity(&b, zx));
            }
            homs.push(h);
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let c = compose_unchecked(&b, homs[y * n + z], homs[x * n + y]);
                    if !c.le(&homs[x * n + z]) {
                        homs[x * n + z] = homs[x * n + z].union(c);
                        changed = true;
                    }
                }
            }
        }
    }
    let objects = (0..n).map(|i| (format!("e{i}"), extents[i])).collect();
    QCategory::from_fn(b, objects, |x, y| homs[x * n + y]).expect("well-typed")
}

pub fn gen_qcategory(cfg: &GenConfig, b: &FinCategory) -> QCategory {
    gen_qcategory_with(cfg, Arc::new(b.clone()), &mut cfg.rng(0))
}

/// Case `index` of a suite: the fixtures `E_AC`, `E_CH`, `E_X` for
/// indices 0 to 2, generated instances afterwards.
pub fn instance(cfg: &GenConfig, index: usize) -> QCategory {
    match index {
        0 => fixtures::e_ac(),
        1 => fixtures::e_ch(),
        2 => fixtures::e_x(),
        _ => {
            let mut rng = cfg.rng(index as u64);
            let b = gen_fin_category_with(cfg, &mut rng);
            gen_qcategory_with(cfg, Arc::new(b), &mut rng)
        }
    }
}

/// A named check; `Ok(Some(detail))` is a failure, `Err(CapExceeded)` skips
/// the case.
pub type Check = fn(&QCategory, usize) -> Result<Option<String>>;

fn check_main_theorem(c: &QCategory, cap: usize) -> Result<Option<String>> {
    let r = main_theorem_check(c, cap)?;
    Ok((!r.agree()).then(|| format!("{r:?}")))
}

fn check_duality(c: &QCategory, cap: usize) -> Result<Option<String>> {
    let op = opposite_qcategory(c);
    let t = is_topological(c, cap)?.holds();
    let t_op = is_topological(&op, cap)?.holds();
    let total = is_total(c, cap)?.holds();
    let cototal = is_cototal(c, cap)?.holds();
    Ok((t != t_op || total != cototal)
        .then(|| format!("topological {t} / opposite {t_op}; total {total} / cototal {cototal}")))
}

fn check_completion(c: &QCategory, cap: usize) -> Result<Option<String>> {
    let r = completion_properties(c, cap)?;
    Ok((!r.passed()).then(|| format!("{r:?}")))
}

/// Galois laws `φ ≤ ↓ψ ⇔ ψ ≤ ↑φ`, `↑↓↑ = ↑`, `↓↑↓ = ↓`, on all presheaves
/// and copresheaves and on up to 4096 pairs.
fn check_isbell(c: &QCategory, cap: usize) -> Result<Option<String>> {
    let ps = enumerate_all_presheaves(c, cap)?;
    let cs = enumerate_all_copresheaves(c, cap)?;
    let ups: Vec<_> = ps.par_iter().map(|p| isbell_up(c, p)).collect();
    let downs: Vec<_> = cs.par_iter().map(|p| isbell_down(c, p)).collect();
    if let Some(i) = (0..ps.len()).find(|&i| isbell_up(c, &isbell_down(c, &ups[i])) != ups[i]) {
        return Ok(Some(format!("↑↓↑ ≠ ↑ at presheaf #{i}")));
    }
    if let Some(i) = (0..cs.len()).find(|&i| isbell_down(c, &isbell_up(c, &downs[i])) != downs[i]) {
        return Ok(Some(format!("↓↑↓ ≠ ↓ at copresheaf #{i}")));
    }
    let stride = ((ps.len() * cs.len()) / 4096).max(1);
    for k in (0..ps.len() * cs.len()).step_by(stride) {
        let (i, j) = (k / cs.len(), k % cs.len());
        if ps[i].extent() != cs[j].extent() {
            continue;
        }
        if ps[i].le(&downs[j]) != cs[j].le(&ups[i]) {
            return Ok(Some(format!(
                "adjunction law fails at presheaf #{i}, copresheaf #{j}"
            )));
        }
    }
    Ok(None)
}

pub fn default_checks() -> Vec<(&'static str, Check)> {
    vec![
        ("main_theorem", check_main_theorem as Check),
        ("duality", check_duality),
        ("completion", check_completion),
        ("isbell", check_isbell),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub case: usize,
    pub check: String,
    pub detail: String,
    pub file: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub cases: usize,
    pub passed: usize,
    /// Cases skipped because an enumeration exceeded the cap, by index.
    pub skipped: Vec<usize>,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

enum Outcome {
    Passed,
    Skipped,
    Failed(String, String),
}

fn run_case(c: &QCategory, cap: usize, checks: &[(&'static str, Check)]) -> Result<Outcome> {
    let report = validate_qcategory(c);
    if !report.is_empty() {
        return Ok(Outcome::Failed("validate".into(), report.to_string()));
    }
    for (name, check) in checks {
        match check(c, cap) {
            Ok(None) => {}
            Ok(Some(detail)) => return Ok(Outcome::Failed(name.to_string(), detail)),
            Err(e) if e.is_cap_exceeded() => return Ok(Outcome::Skipped),
            Err(e) => return Err(e),
        }
    }
    Ok(Outcome::Passed)
}

/// Runs `checks` on cases `0..n_cases` in parallel. Each failing case is
/// written to `out_dir/case-<index>.json` as a Q-category.
pub fn conformance_with(
    cfg: &GenConfig,
    n_cases: usize,
    checks: &[(&'static str, Check)],
    out_dir: Option<&Path>,
) -> Result<SuiteReport> {
    cfg.validate()?;
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
    }
    let outcomes = (0..n_cases)
        .into_par_iter()
        .map(|i| {
            let c = instance(cfg, i);
            let outcome = run_case(&c, cfg.presheaf_cap, checks)?;
            Ok((c, outcome))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = SuiteReport {
        cases: n_cases,
        ..Default::default()
    };
    for (i, (c, outcome)) in outcomes.into_iter().enumerate() {
        match outcome {
            Outcome::Passed => report.passed += 1,
            Outcome::Skipped => report.skipped.push(i),
            Outcome::Failed(check, detail) => {
                let file = match out_dir {
                    Some(dir) => {
                        let path = dir.join(format!("case-{i}.json"));
                        write_json(&path, &qcategory_to_json(&c))?;
                        Some(path)
                    }
                    None => None,
                };
                report.failures.push(Failure {
                    case: i,
                    check,
                    detail,
                    file,
                });
            }
        }
    }
    Ok(report)
}

pub fn conformance(cfg: &GenConfig, n_cases: usize, out_dir: Option<&Path>) -> Result<SuiteReport> {
    conformance_with(cfg, n_cases, &default_checks(), out_dir)
}

/// Reloads a counterexample file and reruns the named check on it.
pub fn replay(path: &Path, check: &str, cap: usize) -> Result<Option<String>> {
    let c = read_qcategory(path)?;
    let checks: BTreeMap<&str, Check> = default_checks().into_iter().collect();
    let f = checks
        .get(check)
        .ok_or_else(|| Error::InvalidData(format!("unknown check `{check}`")))?;
    f(&c, cap)
}

/// Shuffles `items` deterministically; used to pick samples from
/// enumerations.
pub fn sample<T: Clone>(rng: &mut impl Rng, items: &[T], k: usize) -> Vec<T> {
    let mut v = items.to_vec();
    v.shuffle(rng);
    v.truncate(k);
    v
}
