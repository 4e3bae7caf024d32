//! Weighted colimits and limits by exhaustive witness search, totality,
//! adjoints, and preservation of (co)limits.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::presheaf::{
    copresheaf_hom, enumerate_all_copresheaves, enumerate_all_presheaves, presheaf_hom, Copresheaf,
    Presheaf,
};
use crate::qcategory::{has_identity, validate_qfunctor, QCat, QFunctor};
use crate::quantaloid::QHom;
use crate::report::Decision;

/// An object `v` of the codomain together with the verified homs: for a
/// colimit `certificate[c] = C(v, c)`, for a limit `certificate[c] = C(c, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColimitWitness {
    pub object: usize,
    pub certificate: Vec<QHom>,
}

/// `C(F, c)`, the presheaf `x ↦ C(Fx, c)` on the domain of `F`.
pub fn singular(f: &QFunctor<'_>, c: usize) -> Presheaf {
    let cod = f.cod();
    Presheaf::from_parts(
        cod.extent(c),
        f.map().iter().map(|&fx| cod.hom(fx, c)).collect(),
    )
}

/// `C(c, F)`, the copresheaf `x ↦ C(c, Fx)` on the domain of `F`.
pub fn dual_singular(f: &QFunctor<'_>, c: usize) -> Copresheaf {
    let cod = f.cod();
    Copresheaf::from_parts(
        cod.extent(c),
        f.map().iter().map(|&fx| cod.hom(c, fx)).collect(),
    )
}

/// Searches `candidates` (objects of extent `z`) for `v` with
/// `hom(v, c) = target(c)` for every `c`. Targets are computed lazily.
fn search(
    c: &dyn QCat,
    z: usize,
    hom: impl Fn(usize, usize) -> QHom,
    target: impl Fn(usize) -> QHom,
) -> Vec<ColimitWitness> {
    let n = c.size();
    let mut targets: Vec<Option<QHom>> = vec![None; n];
    let mut out = Vec::new();
    'v: for v in (0..n).filter(|&v| c.extent(v) == z) {
        for d in 0..n {
            let t = *targets[d].get_or_insert_with(|| target(d));
            if hom(v, d) != t {
                continue 'v;
            }
        }
        let certificate = targets.iter().map(|t| t.expect("filled")).collect();
        out.push(ColimitWitness {
            object: v,
            certificate,
        });
    }
    out
}

/// All `v` with `|v| = |φ|` and `C(v, c) = P I(φ, C(F, c))` for every `c`,
/// in object order. Empty when `φ ⋆ F` does not exist.
pub fn weighted_colimit(phi: &Presheaf, f: &QFunctor<'_>) -> Vec<ColimitWitness> {
    let cod = f.cod();
    let b = cod.base();
    search(
        cod,
        phi.extent(),
        |v, c| cod.hom(v, c),
        |c| presheaf_hom(b, phi, &singular(f, c)),
    )
}

/// All `v` with `|v| = |ψ|` and `C(c, v) = P† I(C(c, F), ψ)` for every `c`,
/// in object order. Empty when `{ψ, F}` does not exist.
pub fn weighted_limit(psi: &Copresheaf, f: &QFunctor<'_>) -> Vec<ColimitWitness> {
    let cod = f.cod();
    let b = cod.base();
    search(
        cod,
        psi.extent(),
        |v, c| cod.hom(c, v),
        |c| copresheaf_hom(b, &dual_singular(f, c), psi),
    )
}

/// Every presheaf together with the canonical (first) witness of `φ ⋆ 1`.
#[derive(Clone, Debug)]
pub struct Totality {
    pub presheaves: Vec<Presheaf>,
    pub colimits: Vec<usize>,
}

/// Every copresheaf together with the canonical witness of `{ψ, 1}`.
#[derive(Clone, Debug)]
pub struct Cototality {
    pub copresheaves: Vec<Copresheaf>,
    pub limits: Vec<usize>,
}

/// Whether every presheaf on `c` has a colimit weighted by it; otherwise the
/// first presheaf (canonical order) without one.
pub fn is_total(c: &dyn QCat, cap: usize) -> Result<Decision<Totality, Presheaf>> {
    let presheaves = enumerate_all_presheaves(c, cap)?;
    let id = QFunctor::identity(c);
    let found: Vec<Option<usize>> = presheaves
        .par_iter()
        .map(|phi| weighted_colimit(phi, &id).first().map(|w| w.object))
        .collect();
    if let Some(i) = found.iter().position(Option::is_none) {
        return Ok(Decision::Fails(presheaves[i].clone()));
    }
    let colimits = found.into_iter().map(|w| w.expect("checked")).collect();
    Ok(Decision::Holds(Totality {
        presheaves,
        colimits,
    }))
}

/// Whether every copresheaf on `c` has a weighted limit, decided by
/// exhaustive search in `c` itself.
pub fn has_all_limits(c: &dyn QCat, cap: usize) -> Result<Decision<Cototality, Copresheaf>> {
    let copresheaves = enumerate_all_copresheaves(c, cap)?;
    let id = QFunctor::identity(c);
    let found: Vec<Option<usize>> = copresheaves
        .par_iter()
        .map(|psi| weighted_limit(psi, &id).first().map(|w| w.object))
        .collect();
    if let Some(i) = found.iter().position(Option::is_none) {
        return Ok(Decision::Fails(copresheaves[i].clone()));
    }
    let limits = found.into_iter().map(|w| w.expect("checked")).collect();
    Ok(Decision::Holds(Cototality {
        copresheaves,
        limits,
    }))
}

/// Cototality, decided as totality of `c^op`. A counterexample is a
/// copresheaf on `c` without a weighted limit.
pub fn is_cototal(c: &dyn QCat, cap: usize) -> Result<Decision<Cototality, Copresheaf>> {
    let op = crate::qcategory::Opposite::new(c);
    Ok(match is_total(&op, cap)? {
        Decision::Holds(t) => Decision::Holds(Cototality {
            copresheaves: t.presheaves.iter().map(Copresheaf::from_opposite).collect(),
            limits: t.colimits,
        }),
        Decision::Fails(p) => Decision::Fails(Copresheaf::from_opposite(&p)),
    })
}

/// How the value of an adjoint at one object was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjointSource {
    /// The weighted (co)limit formula.
    Formula,
    /// Search over all objects of the right extent.
    Search,
}

/// An adjoint functor with the object-by-object provenance of its values.
#[derive(Clone, Debug)]
pub struct Adjoint<'a> {
    pub functor: QFunctor<'a>,
    pub sources: Vec<AdjointSource>,
}

fn find_value(
    c: &dyn QCat,
    z: usize,
    formula: Vec<usize>,
    holds: impl Fn(usize) -> bool,
) -> Option<(usize, AdjointSource)> {
    if let Some(v) = formula.into_iter().find(|&v| holds(v)) {
        return Some((v, AdjointSource::Formula));
    }
    (0..c.size())
        .filter(|&v| c.extent(v) == z)
        .find(|&v| holds(v))
        .map(|v| (v, AdjointSource::Search))
}

/// Right adjoint `G : D → C` of `F : C → D`, with `C(c, Gd) = D(Fc, d)`.
/// `Gd` is first sought as `D(F, d) ⋆ 1_C`. On failure, returns the first
/// object `d` with no admissible value.
pub fn right_adjoint<'a>(f: &QFunctor<'a>) -> Result<Decision<Adjoint<'a>, usize>> {
    let (c, d) = (f.dom(), f.cod());
    let id = QFunctor::identity(c);
    let mut map = Vec::with_capacity(d.size());
    let mut sources = Vec::with_capacity(d.size());
    for e in 0..d.size() {
        let formula = weighted_colimit(&singular(f, e), &id)
            .into_iter()
            .map(|w| w.object)
            .collect();
        let holds = |v: usize| (0..c.size()).all(|x| c.hom(x, v) == d.hom(f.apply(x), e));
        match find_value(c, d.extent(e), formula, holds) {
            Some((v, s)) => {
                map.push(v);
                sources.push(s);
            }
            None => return Ok(Decision::Fails(e)),
        }
    }
    let g = QFunctor::new(d, c, map)?;
    certify(f, &g)?;
    Ok(Decision::Holds(Adjoint {
        functor: g,
        sources,
    }))
}

/// Left adjoint `L : D → C` of `F : C → D`, with `C(Ld, c) = D(d, Fc)`.
/// `Ld` is first sought as `{D(d, F), 1_C}`.
pub fn left_adjoint<'a>(f: &QFunctor<'a>) -> Result<Decision<Adjoint<'a>, usize>> {
    let (c, d) = (f.dom(), f.cod());
    let id = QFunctor::identity(c);
    let mut map = Vec::with_capacity(d.size());
    let mut sources = Vec::with_capacity(d.size());
    for e in 0..d.size() {
        let formula = weighted_limit(&dual_singular(f, e), &id)
            .into_iter()
            .map(|w| w.object)
            .collect();
        let holds = |v: usize| (0..c.size()).all(|x| c.hom(v, x) == d.hom(e, f.apply(x)));
        match find_value(c, d.extent(e), formula, holds) {
            Some((v, s)) => {
                map.push(v);
                sources.push(s);
            }
            None => return Ok(Decision::Fails(e)),
        }
    }
    let l = QFunctor::new(d, c, map)?;
    certify(&l, f)?;
    Ok(Decision::Holds(Adjoint {
        functor: l,
        sources,
    }))
}

/// Checks that `l ⊣ r` is an adjunction of Q-functors: both are functors,
/// `1 ≤ r l`, `l r ≤ 1`, and `D(l c, d) = C(c, r d)`.
pub fn certify(l: &QFunctor<'_>, r: &QFunctor<'_>) -> Result<()> {
    let (c, d) = (l.dom(), l.cod());
    if c.size() != r.cod().size() || d.size() != r.dom().size() {
        return Err(Error::InvalidAdjunction("functors are not opposed".into()));
    }
    for (name, f) in [("left", l), ("right", r)] {
        let report = validate_qfunctor(f);
        if !report.is_empty() {
            return Err(Error::InvalidAdjunction(format!(
                "{name} adjoint:\n{report}"
            )));
        }
    }
    let (bc, bd) = (c.base(), d.base());
    if let Some(x) = (0..c.size()).find(|&x| !has_identity(bc, &c.hom(x, r.apply(l.apply(x))))) {
        return Err(Error::InvalidAdjunction(format!(
            "unit fails at `{}`",
            c.object_id(x)
        )));
    }
    if let Some(y) = (0..d.size()).find(|&y| !has_identity(bd, &d.hom(l.apply(r.apply(y)), y))) {
        return Err(Error::InvalidAdjunction(format!(
            "counit fails at `{}`",
            d.object_id(y)
        )));
    }
    for x in 0..c.size() {
        for y in 0..d.size() {
            if d.hom(l.apply(x), y) != c.hom(x, r.apply(y)) {
                return Err(Error::InvalidAdjunction(format!(
                    "hom equality fails at ({}, {})",
                    c.object_id(x),
                    d.object_id(y)
                )));
            }
        }
    }
    Ok(())
}

/// A weight whose colimit (or limit) exists in the domain but is not
/// preserved: `object` is the canonical witness in the domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreservationFailure<W> {
    pub weight: W,
    pub object: usize,
}

/// Whether `F v` is a witness of `φ ⋆ F` for every presheaf `φ` on the
/// domain and every witness `v` of `φ ⋆ 1`.
pub fn preserves_colimits(
    f: &QFunctor<'_>,
    cap: usize,
) -> Result<Decision<(), PreservationFailure<Presheaf>>> {
    let c = f.dom();
    let d = f.cod();
    let bd = d.base();
    let id = QFunctor::identity(c);
    let weights = enumerate_all_presheaves(c, cap)?;
    let failures: Vec<Option<usize>> = weights
        .par_iter()
        .map(|phi| {
            let targets: Vec<QHom> = (0..d.size())
                .map(|e| presheaf_hom(bd, phi, &singular(f, e)))
                .collect();
            weighted_colimit(phi, &id)
                .into_iter()
                .map(|w| w.object)
                .find(|&v| (0..d.size()).any(|e| d.hom(f.apply(v), e) != targets[e]))
        })
        .collect();
    Ok(match failures.iter().position(Option::is_some) {
        Some(i) => Decision::Fails(PreservationFailure {
            weight: weights[i].clone(),
            object: failures[i].expect("checked"),
        }),
        None => Decision::Holds(()),
    })
}

/// Whether `F v` is a witness of `{ψ, F}` for every copresheaf `ψ` on the
/// domain and every witness `v` of `{ψ, 1}`.
pub fn preserves_limits(
    f: &QFunctor<'_>,
    cap: usize,
) -> Result<Decision<(), PreservationFailure<Copresheaf>>> {
    let c = f.dom();
    let d = f.cod();
    let bd = d.base();
    let id = QFunctor::identity(c);
    let weights = enumerate_all_copresheaves(c, cap)?;
    let failures: Vec<Option<usize>> = weights
        .par_iter()
        .map(|psi| {
            let targets: Vec<QHom> = (0..d.size())
                .map(|e| copresheaf_hom(bd, &dual_singular(f, e), psi))
                .collect();
            weighted_limit(psi, &id)
                .into_iter()
                .map(|w| w.object)
                .find(|&v| (0..d.size()).any(|e| d.hom(e, f.apply(v)) != targets[e]))
        })
        .collect();
    Ok(match failures.iter().position(Option::is_some) {
        Some(i) => Decision::Fails(PreservationFailure {
            weight: weights[i].clone(),
            object: failures[i].expect("checked"),
        }),
        None => Decision::Holds(()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::presheaf::{presheaf_category, DEFAULT_CAP};
    use crate::qcategory::isomorphic;

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

    fn up(c: &dyn QCat, members: &[usize]) -> Copresheaf {
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
        Copresheaf::new(c, 0, comps).unwrap()
    }

    #[test]
    fn singular_examples() {
        let (ac, ch) = (fixtures::e_ac(), fixtures::e_ch());
        let f = QFunctor::new(&ac, &ch, vec![0, 1]).unwrap();
        assert_eq!(singular(&f, 0), down(&ac, &[0]));
        assert_eq!(singular(&f, 1), down(&ac, &[0, 1]));
        let id = QFunctor::identity(&ch);
        for x in 0..2 {
            assert_eq!(singular(&id, x), Presheaf::representable(&ch, x));
        }
    }

    #[test]
    fn colimit_examples() {
        let (ac, ch) = (fixtures::e_ac(), fixtures::e_ch());
        let id = QFunctor::identity(&ch);
        let w = weighted_colimit(&down(&ch, &[0, 1]), &id);
        assert_eq!(w.iter().map(|w| w.object).collect::<Vec<_>>(), vec![1]);
        assert_eq!(weighted_colimit(&down(&ch, &[]), &id)[0].object, 0);
        let id_ac = QFunctor::identity(&ac);
        assert!(weighted_colimit(&down(&ac, &[0, 1]), &id_ac).is_empty());
        let f = QFunctor::new(&ac, &ch, vec![0, 1]).unwrap();
        for x in 0..2 {
            let w = weighted_colimit(&Presheaf::representable(&ac, x), &f);
            assert_eq!(w[0].object, f.apply(x));
        }
    }

    #[test]
    fn limit_examples() {
        let (ac, ch) = (fixtures::e_ac(), fixtures::e_ch());
        let id = QFunctor::identity(&ch);
        let w = weighted_limit(&up(&ch, &[0, 1]), &id);
        assert_eq!(w.iter().map(|w| w.object).collect::<Vec<_>>(), vec![0]);
        assert!(weighted_limit(&up(&ac, &[0, 1]), &QFunctor::identity(&ac)).is_empty());
        for x in 0..2 {
            let w = weighted_limit(&Copresheaf::corepresentable(&ch, x), &id);
            assert_eq!(w[0].object, x);
        }
    }

    #[test]
    fn totality_of_fixtures() {
        let (ac, ch) = (fixtures::e_ac(), fixtures::e_ch());
        assert!(is_total(&ch, DEFAULT_CAP).unwrap().holds());
        assert!(is_cototal(&ch, DEFAULT_CAP).unwrap().holds());
        assert_eq!(
            is_total(&ac, DEFAULT_CAP).unwrap().counterexample(),
            Some(&down(&ac, &[]))
        );
        assert!(!is_cototal(&ac, DEFAULT_CAP).unwrap().holds());
        assert!(!has_all_limits(&ac, DEFAULT_CAP).unwrap().holds());
        let pc = presheaf_category(&ac, DEFAULT_CAP).unwrap();
        assert!(is_total(&pc, DEFAULT_CAP).unwrap().holds());
        assert!(!is_total(&fixtures::e_x(), DEFAULT_CAP).unwrap().holds());
    }

    #[test]
    fn adjoints_of_yoneda() {
        let ch = fixtures::e_ch();
        let pc = presheaf_category(&ch, DEFAULT_CAP).unwrap();
        let y = pc.yoneda();
        let sup = right_or_left(left_adjoint(&y).unwrap());
        for (i, phi) in pc.presheaves().iter().enumerate() {
            let expect = weighted_colimit(phi, &QFunctor::identity(&ch))[0].object;
            assert_eq!(sup.functor.apply(i), expect);
        }

        let ac = fixtures::e_ac();
        let pa = presheaf_category(&ac, DEFAULT_CAP).unwrap();
        let ya = pa.yoneda();
        let bad = left_adjoint(&ya).unwrap();
        let d = *bad.counterexample().unwrap();
        // Neither the bottom nor the top weight has a colimit; the bottom
        // comes first canonically.
        assert_eq!(pa.presheaf(d), &down(&ac, &[]));
        let top = pa.position(&down(&ac, &[0, 1])).unwrap();
        assert!(weighted_colimit(pa.presheaf(top), &QFunctor::identity(&ac)).is_empty());
    }

    fn right_or_left<'a>(d: Decision<Adjoint<'a>, usize>) -> Adjoint<'a> {
        match d {
            Decision::Holds(a) => a,
            Decision::Fails(e) => panic!("no adjoint at #{e}"),
        }
    }

    #[test]
    fn identity_adjoints() {
        let ch = fixtures::chain(3);
        let id = QFunctor::identity(&ch);
        let r = right_or_left(right_adjoint(&id).unwrap());
        let l = right_or_left(left_adjoint(&id).unwrap());
        assert_eq!(r.functor.map(), &[0, 1, 2]);
        assert_eq!(l.functor.map(), &[0, 1, 2]);
        assert!(r.sources.iter().all(|s| *s == AdjointSource::Formula));
    }

    #[test]
    fn sup_preserves_colimits_and_has_right_adjoint() {
        let ch = fixtures::e_ch();
        let pc = presheaf_category(&ch, DEFAULT_CAP).unwrap();
        let y = pc.yoneda();
        let sup = right_or_left(left_adjoint(&y).unwrap()).functor;
        assert!(preserves_colimits(&sup, DEFAULT_CAP).unwrap().holds());
        let g = right_or_left(right_adjoint(&sup).unwrap());
        certify(&sup, &g.functor).unwrap();
    }

    #[test]
    fn yoneda_of_antichain_preserves_existing_colimits() {
        let ac = fixtures::e_ac();
        let pa = presheaf_category(&ac, DEFAULT_CAP).unwrap();
        assert!(preserves_colimits(&pa.yoneda(), DEFAULT_CAP)
            .unwrap()
            .holds());
        assert!(preserves_limits(&pa.yoneda(), DEFAULT_CAP).unwrap().holds());
    }

    #[test]
    fn witnesses_are_isomorphic() {
        // Two copies of the top element.
        let c = fixtures::preorder(&["0", "t", "u"], |x, y| x == y || y > 0);
        let id = QFunctor::identity(&c);
        let w = weighted_colimit(&down(&c, &[0, 1, 2]), &id);
        assert_eq!(w.len(), 2);
        assert!(isomorphic(&c, w[0].object, w[1].object));
    }
}
