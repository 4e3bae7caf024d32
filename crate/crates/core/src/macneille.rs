//! The MacNeille completion `R C` as the fixpoints `φ = ↓↑φ` of the Isbell
//! adjunction, with density, cut-cocontinuity, `F♯`, and fixpoint
//! categories of adjunctions.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::{
    certify, is_total, preserves_colimits, preserves_limits, right_adjoint, singular,
    weighted_colimit,
};
use crate::presheaf::{
    enumerate_all_copresheaves, enumerate_all_presheaves, presheaf_id, restrict,
    CopresheafCategory, Presheaf, PresheafCategory,
};
use crate::qcategory::{is_equivalence, isomorphic, Opposite, QCat, QCategory, QFunctor};
use crate::quantaloid::{right_residual_unchecked, QHom};
use crate::report::Decision;
use crate::topological::{isbell_down, isbell_up};

/// `φ = ↓↑φ`.
pub fn is_cut(c: &dyn QCat, phi: &Presheaf) -> bool {
    isbell_down(c, &isbell_up(c, phi)) == *phi
}

/// `R C` with its embedding `J : C → R C`.
#[derive(Clone, Debug)]
pub struct MacNeille {
    /// Full sub-Q-category of `P C` on the cuts; ids are presheaf ids.
    pub completion: QCategory,
    /// The cuts, in canonical order; `cuts[i]` is object `i` of `completion`.
    pub cuts: Vec<Presheaf>,
    /// `J x = Y x`, as positions in `cuts`.
    pub embedding: Vec<usize>,
}

impl MacNeille {
    /// `J` as a Q-functor out of `c`, which must be the completed category.
    pub fn embedding_functor<'a>(&'a self, c: &'a dyn QCat) -> QFunctor<'a> {
        QFunctor::new(c, &self.completion, self.embedding.clone()).expect("embedding is well-typed")
    }

    pub fn position(&self, phi: &Presheaf) -> Option<usize> {
        self.cuts.binary_search(phi).ok()
    }
}

/// Builds the completion from the presheaves of `c`, keeping exactly the
/// cuts.
pub fn macneille(c: &dyn QCat, cap: usize) -> Result<MacNeille> {
    let all = enumerate_all_presheaves(c, cap)?;
    let keep: Vec<bool> = all.par_iter().map(|phi| is_cut(c, phi)).collect();
    let cuts: Vec<Presheaf> = all
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect();
    let b = c.base();
    let objects = cuts
        .iter()
        .map(|p| (presheaf_id(c, p), p.extent()))
        .collect();
    let completion = QCategory::from_fn(Arc::new(b.clone()), objects, |i, j| {
        crate::presheaf::presheaf_hom(b, &cuts[i], &cuts[j])
    })?;
    let embedding = (0..c.size())
        .map(|x| {
            cuts.binary_search(&Presheaf::representable(c, x))
                .map_err(|_| Error::InvalidData("a representable is not a cut".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MacNeille {
        completion,
        cuts,
        embedding,
    })
}

/// Verdicts of the three density characterizations, each with its first
/// failing object of the codomain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    /// `D(d, d') = P C(D(F, d), D(F, d'))` for all `d'`.
    pub fully_faithful_singular: Option<usize>,
    /// `d` is a witness of `D(F, d) ⋆ F`.
    pub canonical_colimit: Option<usize>,
    /// `d` is a witness of `φ ⋆ F` for some presheaf `φ`.
    pub some_colimit: Option<usize>,
}

impl DensityReport {
    pub fn consistent(&self) -> bool {
        self.fully_faithful_singular.is_none() == self.canonical_colimit.is_none()
            && self.canonical_colimit.is_none() == self.some_colimit.is_none()
    }
}

/// Evaluates the three characterizations of density independently.
pub fn density_report(f: &QFunctor<'_>, cap: usize) -> Result<DensityReport> {
    let d = f.cod();
    let b = d.base();
    let n = d.size();
    let sing: Vec<Presheaf> = (0..n).map(|e| singular(f, e)).collect();
    let fully_faithful_singular = (0..n).find(|&e| {
        (0..n).any(|e2| d.hom(e, e2) != crate::presheaf::presheaf_hom(b, &sing[e], &sing[e2]))
    });
    let canonical_colimit =
        (0..n).find(|&e| !weighted_colimit(&sing[e], f).iter().any(|w| w.object == e));
    let weights = enumerate_all_presheaves(f.dom(), cap)?;
    let mut reached = vec![false; n];
    let hits: Vec<Vec<usize>> = weights
        .par_iter()
        .map(|phi| {
            weighted_colimit(phi, f)
                .into_iter()
                .map(|w| w.object)
                .collect()
        })
        .collect();
    for v in hits.into_iter().flatten() {
        reached[v] = true;
    }
    let some_colimit = (0..n).find(|&e| !reached[e]);
    Ok(DensityReport {
        fully_faithful_singular,
        canonical_colimit,
        some_colimit,
    })
}

fn verdict(report: DensityReport) -> Result<Decision<(), usize>> {
    if !report.consistent() {
        return Err(Error::InvalidData(format!(
            "density characterizations disagree: {report:?}"
        )));
    }
    Ok(match report.fully_faithful_singular {
        Some(e) => Decision::Fails(e),
        None => Decision::Holds(()),
    })
}

/// Density of `F`, with the first object of the codomain that is not a
/// canonical colimit of `F`.
pub fn is_dense(f: &QFunctor<'_>, cap: usize) -> Result<Decision<(), usize>> {
    verdict(density_report(f, cap)?)
}

/// Codensity of `F`, decided as density of `F^op`.
pub fn is_codense(f: &QFunctor<'_>, cap: usize) -> Result<Decision<(), usize>> {
    let (dom, cod) = (Opposite::new(f.dom()), Opposite::new(f.cod()));
    let op = QFunctor::new(&dom, &cod, f.map().to_vec())?;
    verdict(density_report(&op, cap)?)
}

/// Failure of cut-cocontinuity under both characterizations: a cut of the
/// codomain whose restriction is not a cut, and an object whose singular
/// presheaf is not a cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutFailure {
    pub cut: Presheaf,
    pub object: usize,
}

/// Whether `F*` maps cuts of `D` to cuts of `C`; checked against whether
/// every `D(F, d)` is a cut.
pub fn is_cut_cocontinuous(f: &QFunctor<'_>, cap: usize) -> Result<Decision<(), CutFailure>> {
    let (c, d) = (f.dom(), f.cod());
    let cuts_d: Vec<Presheaf> = enumerate_all_presheaves(d, cap)?
        .into_iter()
        .filter(|p| is_cut(d, p))
        .collect();
    let bad_cut = cuts_d
        .par_iter()
        .find_first(|p| !is_cut(c, &restrict(f, p)))
        .cloned();
    let bad_object = (0..d.size()).find(|&e| !is_cut(c, &singular(f, e)));
    match (bad_cut, bad_object) {
        (None, None) => Ok(Decision::Holds(())),
        (Some(cut), Some(object)) => Ok(Decision::Fails(CutFailure { cut, object })),
        (cut, object) => Err(Error::InvalidData(format!(
            "cut-cocontinuity characterizations disagree: cut {cut:?}, object {object:?}"
        ))),
    }
}

/// `F♯ : R C → D`, `φ ↦ φ ⋆ F` (canonical witness). `F` must map out of the
/// category that `m` completes.
pub fn sharp<'a>(m: &'a MacNeille, f: &QFunctor<'a>) -> Result<QFunctor<'a>> {
    let map = m
        .cuts
        .iter()
        .map(|phi| {
            weighted_colimit(phi, f)
                .first()
                .map(|w| w.object)
                .ok_or_else(|| {
                    Error::MissingColimit(format!(
                        "no colimit of F weighted by cut #{}",
                        m.position(phi).unwrap_or(usize::MAX)
                    ))
                })
        })
        .collect::<Result<Vec<_>>>()?;
    QFunctor::new(&m.completion, f.cod(), map)
}

/// `F♯ J ≅ F` objectwise and `F♯` has a certified right adjoint.
pub fn verify_sharp(m: &MacNeille, f: &QFunctor<'_>, f_sharp: &QFunctor<'_>) -> Result<bool> {
    let d = f.cod();
    let restricts =
        (0..f.dom().size()).all(|x| isomorphic(d, f_sharp.apply(m.embedding[x]), f.apply(x)));
    let left = right_adjoint(f_sharp)?.holds();
    Ok(restricts && left)
}

/// Fixpoints of an adjunction `F ⊣ G`, `F : C → D`, in three presentations.
#[derive(Clone, Debug)]
pub struct FixReport {
    /// Objects `X` of `C` with `X ≅ G F X`.
    pub fixed: Vec<usize>,
    /// Full sub-Q-category of `C` on `fixed`.
    pub category: QCategory,
    /// Objects of `C` isomorphic to some `G d`.
    pub replete_image: Vec<usize>,
    /// Pairs `(X, Y)` with `F X ≅ Y` and `G Y ≅ X`.
    pub pairs: Vec<(usize, usize)>,
    /// `fixed` equals `replete_image`.
    pub image_agrees: bool,
    /// Projection of `pairs` to `C` lands in and covers `fixed`, with
    /// `C(X, X') = D(Y, Y')`.
    pub pairs_agree: bool,
    /// `G F` is a reflector onto `fixed`.
    pub reflective: bool,
}

impl FixReport {
    pub fn consistent(&self) -> bool {
        self.image_agrees && self.pairs_agree && self.reflective
    }
}

pub fn fix_category(l: &QFunctor<'_>, r: &QFunctor<'_>) -> Result<FixReport> {
    certify(l, r)?;
    let (c, d) = (l.dom(), l.cod());
    let gf = |x: usize| r.apply(l.apply(x));
    let fixed: Vec<usize> = (0..c.size()).filter(|&x| isomorphic(c, x, gf(x))).collect();
    let replete_image: Vec<usize> = (0..c.size())
        .filter(|&x| (0..d.size()).any(|y| isomorphic(c, x, r.apply(y))))
        .collect();
    let pairs: Vec<(usize, usize)> = (0..c.size())
        .flat_map(|x| (0..d.size()).map(move |y| (x, y)))
        .filter(|&(x, y)| isomorphic(d, l.apply(x), y) && isomorphic(c, r.apply(y), x))
        .collect();
    let mut projected: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    projected.dedup();
    let pairs_agree = projected == fixed
        && pairs
            .iter()
            .all(|&(x, y)| pairs.iter().all(|&(x2, y2)| c.hom(x, x2) == d.hom(y, y2)));
    let reflective = (0..c.size()).all(|x| {
        let rx = gf(x);
        fixed.binary_search(&rx).is_ok() || fixed.iter().any(|&f| isomorphic(c, f, rx))
    }) && (0..c.size())
        .all(|x| fixed.iter().all(|&y| c.hom(gf(x), y) == c.hom(x, y)));
    let category = QCategory::full_subcategory(c, &fixed);
    Ok(FixReport {
        image_agrees: fixed == replete_image,
        fixed,
        category,
        replete_image,
        pairs,
        pairs_agree,
        reflective,
    })
}

/// The Isbell adjunction `↑ ⊣ ↓` as Q-functors `P C → P† C → P C`.
pub fn isbell_functors<'a>(
    pc: &'a PresheafCategory<'_>,
    cc: &'a CopresheafCategory<'_>,
) -> Result<(QFunctor<'a>, QFunctor<'a>)> {
    let c = pc.over();
    let up = pc
        .presheaves()
        .iter()
        .map(|p| cc.position(&isbell_up(c, p)).expect("enumerated"))
        .collect();
    let down = cc
        .copresheaves()
        .iter()
        .map(|p| pc.position(&isbell_down(c, p)).expect("enumerated"))
        .collect();
    Ok((QFunctor::new(pc, cc, up)?, QFunctor::new(cc, pc, down)?))
}

/// Properties of `J : C → R C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletionReport {
    pub completion_size: usize,
    pub completion_total: bool,
    pub fully_faithful: bool,
    pub dense: bool,
    pub codense: bool,
    pub preserves_colimits: bool,
    pub preserves_limits: bool,
    pub source_total: bool,
    /// Whether `J` is an equivalence; checked only when the source is total.
    pub equivalence: Option<bool>,
}

impl CompletionReport {
    pub fn passed(&self) -> bool {
        self.completion_total
            && self.fully_faithful
            && self.dense
            && self.codense
            && self.preserves_colimits
            && self.preserves_limits
            && self.equivalence != Some(false)
    }
}

pub fn completion_properties(c: &dyn QCat, cap: usize) -> Result<CompletionReport> {
    let m = macneille(c, cap)?;
    let j = m.embedding_functor(c);
    let rc = &m.completion;
    let fully_faithful =
        (0..c.size()).all(|x| (0..c.size()).all(|y| rc.hom(j.apply(x), j.apply(y)) == c.hom(x, y)));
    let source_total = is_total(c, cap)?.holds();
    Ok(CompletionReport {
        completion_size: rc.size(),
        completion_total: is_total(rc, cap)?.holds(),
        fully_faithful,
        dense: is_dense(&j, cap)?.holds(),
        codense: is_codense(&j, cap)?.holds(),
        preserves_colimits: preserves_colimits(&j, cap)?.holds(),
        preserves_limits: preserves_limits(&j, cap)?.holds(),
        source_total,
        equivalence: source_total.then(|| is_equivalence(&j)),
    })
}

/// `{ψ, S}` computed pointwise in `P C` for a family `S` of presheaves and
/// a copresheaf `ψ` on the full subcategory on `S`:
/// `{ψ, S}(x) = ⋀_s {ψ(s), S_s(x)}`.
pub fn pointwise_limit(
    c: &dyn QCat,
    family: &[Presheaf],
    psi: &crate::presheaf::Copresheaf,
) -> Presheaf {
    let b = c.base();
    let z = psi.extent();
    let components = (0..c.size())
        .map(|x| {
            family
                .iter()
                .enumerate()
                .fold(QHom::full(b, c.extent(x), z), |acc, (s, p)| {
                    acc.intersect(right_residual_unchecked(
                        b,
                        psi.component(s),
                        p.component(x),
                    ))
                })
        })
        .collect();
    Presheaf::from_parts(z, components)
}

/// Closure of the representables in `P C` under weighted limits, iterated
/// to a fixed point. Sorted canonically.
pub fn limit_closure_of_representables(c: &dyn QCat, cap: usize) -> Result<Vec<Presheaf>> {
    let mut set: Vec<Presheaf> = (0..c.size())
        .map(|x| Presheaf::representable(c, x))
        .collect();
    set.sort();
    set.dedup();
    loop {
        let b = Arc::new(c.base().clone());
        let sub = QCategory::from_fn(
            b.clone(),
            set.iter()
                .enumerate()
                .map(|(i, p)| (format!("s{i}"), p.extent()))
                .collect(),
            |i, j| crate::presheaf::presheaf_hom(&b, &set[i], &set[j]),
        )?;
        let weights = enumerate_all_copresheaves(&sub, cap)?;
        let mut next: Vec<Presheaf> = weights
            .par_iter()
            .map(|psi| pointwise_limit(c, &set, psi))
            .collect();
        next.extend(set.iter().cloned());
        next.sort();
        next.dedup();
        if next.len() == set.len() {
            return Ok(set);
        }
        set = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::presheaf::{copresheaf_category, presheaf_category, DEFAULT_CAP};
    use crate::qcategory::{find_isomorphism, opposite_qcategory};

    fn down(c: &dyn QCat, members: &[usize]) -> Presheaf {
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

    #[test]
    fn cuts_of_fixtures() {
        let ac = fixtures::e_ac();
        for x in 0..2 {
            assert!(is_cut(&ac, &Presheaf::representable(&ac, x)));
        }
        assert!(is_cut(&ac, &down(&ac, &[0, 1])));
        assert!(is_cut(&ac, &down(&ac, &[])));

        let ch = fixtures::e_ch();
        assert!(is_cut(&ch, &down(&ch, &[0])));
        assert!(is_cut(&ch, &down(&ch, &[0, 1])));
        // ↓↑∅ is the set of lower bounds of the whole chain, i.e. {0}.
        assert!(!is_cut(&ch, &down(&ch, &[])));
    }

    #[test]
    fn completions_of_fixtures() {
        let ac = fixtures::e_ac();
        let m = macneille(&ac, DEFAULT_CAP).unwrap();
        assert_eq!(m.completion.size(), 4);
        let diamond =
            fixtures::preorder(&["bot", "a", "b", "top"], |x, y| x == y || x == 0 || y == 3);
        assert!(find_isomorphism(&m.completion, &diamond).is_some());

        let ch = fixtures::e_ch();
        let m = macneille(&ch, DEFAULT_CAP).unwrap();
        assert_eq!(m.completion.size(), 2);
        assert!(is_equivalence(&m.embedding_functor(&ch)));

        let ex = fixtures::e_x();
        let m = macneille(&ex, DEFAULT_CAP).unwrap();
        let b = ex.base();
        let y = b.object_index("Y").unwrap();
        let f_sieve = Presheaf::new(&ex, y, vec![QHom::full(b, 0, y)]).unwrap();
        assert_eq!(m.position(&f_sieve).is_some(), is_cut(&ex, &f_sieve));
        assert_eq!(m.completion.fiber(y).len(), 1);
    }

    #[test]
    fn completion_properties_of_fixtures() {
        for c in [fixtures::e_ac(), fixtures::e_ch(), fixtures::e_x()] {
            let r = completion_properties(&c, DEFAULT_CAP).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        let r = completion_properties(&fixtures::e_ch(), DEFAULT_CAP).unwrap();
        assert_eq!(r.equivalence, Some(true));
        let ac = fixtures::e_ac();
        let pa = presheaf_category(&ac, DEFAULT_CAP).unwrap();
        let r = completion_properties(&pa, DEFAULT_CAP).unwrap();
        assert_eq!(r.equivalence, Some(true));
    }

    #[test]
    fn density_examples() {
        let ac = fixtures::e_ac();
        assert!(is_dense(&QFunctor::identity(&ac), DEFAULT_CAP)
            .unwrap()
            .holds());
        let m = macneille(&ac, DEFAULT_CAP).unwrap();
        let j = m.embedding_functor(&ac);
        assert!(is_dense(&j, DEFAULT_CAP).unwrap().holds());
        assert!(is_codense(&j, DEFAULT_CAP).unwrap().holds());

        let point = fixtures::chain(1);
        let constant = QFunctor::new(&point, &ac, vec![0]).unwrap();
        assert_eq!(
            is_dense(&constant, DEFAULT_CAP).unwrap().counterexample(),
            Some(&1)
        );
    }

    #[test]
    fn cut_cocontinuity() {
        let ch = fixtures::e_ch();
        assert!(is_cut_cocontinuous(&QFunctor::identity(&ch), DEFAULT_CAP)
            .unwrap()
            .holds());
        let pc = presheaf_category(&ch, DEFAULT_CAP).unwrap();
        let y = pc.yoneda();
        let sup = match crate::limits::left_adjoint(&y).unwrap() {
            Decision::Holds(a) => a.functor,
            Decision::Fails(_) => panic!("E_CH is total"),
        };
        assert!(is_cut_cocontinuous(&sup, DEFAULT_CAP).unwrap().holds());
        assert!(preserves_colimits(&sup, DEFAULT_CAP).unwrap().holds());
    }

    #[test]
    fn sharp_examples() {
        let ac = fixtures::e_ac();
        let m = macneille(&ac, DEFAULT_CAP).unwrap();
        let j = m.embedding_functor(&ac);
        let js = sharp(&m, &j).unwrap();
        assert!((0..m.completion.size()).all(|i| isomorphic(&m.completion, js.apply(i), i)));
        assert!(verify_sharp(&m, &j, &js).unwrap());

        let pa = presheaf_category(&ac, DEFAULT_CAP).unwrap();
        let y = pa.yoneda();
        let ys = sharp(&m, &y).unwrap();
        for (i, cut) in m.cuts.iter().enumerate() {
            assert_eq!(pa.presheaf(ys.apply(i)), cut);
        }

        let ch = fixtures::e_ch();
        let three = fixtures::chain(3);
        let mc = macneille(&ch, DEFAULT_CAP).unwrap();
        let f = QFunctor::new(&ch, &three, vec![0, 2]).unwrap();
        assert!(is_cut_cocontinuous(&f, DEFAULT_CAP).unwrap().holds());
        let fs = sharp(&mc, &f).unwrap();
        assert!(verify_sharp(&mc, &f, &fs).unwrap());
    }

    #[test]
    fn fix_of_identity_and_isbell() {
        let ch = fixtures::chain(3);
        let id = QFunctor::identity(&ch);
        let fix = fix_category(&id, &id).unwrap();
        assert_eq!(fix.fixed, vec![0, 1, 2]);
        assert!(fix.consistent());

        for c in [fixtures::e_ac(), fixtures::e_ch()] {
            let pc = presheaf_category(&c, DEFAULT_CAP).unwrap();
            let cc = copresheaf_category(&c, DEFAULT_CAP).unwrap();
            let (up, down) = isbell_functors(&pc, &cc).unwrap();
            let fix = fix_category(&up, &down).unwrap();
            assert!(fix.consistent());
            let m = macneille(&c, DEFAULT_CAP).unwrap();
            assert_eq!(fix.category, m.completion);
        }
    }

    #[test]
    fn limit_closure_equals_cuts() {
        for c in [
            fixtures::e_ac(),
            fixtures::e_ch(),
            fixtures::e_x(),
            fixtures::chain(3),
        ] {
            let m = macneille(&c, DEFAULT_CAP).unwrap();
            assert_eq!(
                limit_closure_of_representables(&c, DEFAULT_CAP).unwrap(),
                m.cuts
            );
        }
    }

    #[test]
    fn self_duality() {
        for c in [fixtures::e_ac(), fixtures::e_ch(), fixtures::e_x()] {
            let m = macneille(&c, DEFAULT_CAP).unwrap();
            let op = opposite_qcategory(&c);
            let mo = macneille(&op, DEFAULT_CAP).unwrap();
            let back = opposite_qcategory(&mo.completion);
            assert!(find_isomorphism(&m.completion, &back).is_some());
        }
    }
}
