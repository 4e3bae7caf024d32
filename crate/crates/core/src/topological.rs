//! Final and initial liftings, topologicity, generated (co)sieves, the
//! Isbell adjunction, and the equivalence of topologicity with totality.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::{is_total, left_adjoint, weighted_colimit};
use crate::presheaf::{
    copresheaf_hom, enumerate_all_presheaves, presheaf_hom, Copresheaf, Presheaf, PresheafCategory,
};
use crate::qcategory::{Opposite, QCat, QFunctor};
use crate::quantaloid::{compose_unchecked, left_residual_unchecked, QHom};
use crate::report::Decision;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Legs `g_i : |x_i| → z`.
    Final,
    /// Legs `g_i : z → |x_i|`.
    Initial,
}

/// A family of legs `(x_i, g_i)` with common apex `z` in the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftingProblem {
    pub direction: Direction,
    pub apex: usize,
    pub legs: Vec<(usize, usize)>,
}

impl LiftingProblem {
    /// Checks that every leg is typed for the direction.
    pub fn new(
        c: &dyn QCat,
        direction: Direction,
        apex: usize,
        legs: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let b = c.base();
        if apex >= b.num_objects() {
            return Err(Error::UnknownObject(format!("#{apex}")));
        }
        for &(x, g) in &legs {
            if x >= c.size() || g >= b.num_morphisms() {
                return Err(Error::InvalidData(format!(
                    "leg ({x}, {g}) is out of range"
                )));
            }
            let m = b.morphism(g);
            let want = match direction {
                Direction::Final => (c.extent(x), apex),
                Direction::Initial => (apex, c.extent(x)),
            };
            if (m.src, m.dst) != want {
                return Err(Error::mismatch(format!(
                    "leg `{}:{}` does not have the required type",
                    c.object_id(x),
                    m.id
                )));
            }
        }
        Ok(Self {
            direction,
            apex,
            legs,
        })
    }

    /// From object and morphism ids.
    pub fn from_ids(
        c: &dyn QCat,
        direction: Direction,
        apex: &str,
        legs: &[(String, String)],
    ) -> Result<Self> {
        let b = c.base();
        let apex = b.object_index(apex)?;
        let legs = legs
            .iter()
            .map(|(x, g)| Ok((c.find_object(x)?, b.morphism_index(g)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(c, direction, apex, legs)
    }

    fn expect(&self, d: Direction) {
        assert_eq!(self.direction, d, "lifting problem has the wrong direction");
    }
}

/// `φ(x) = ⋃_i {g_i} ∘ E(x, x_i)`, the sieve generated by final legs.
pub fn generated_sieve(c: &dyn QCat, prob: &LiftingProblem) -> Presheaf {
    prob.expect(Direction::Final);
    let b = c.base();
    let components = (0..c.size())
        .map(|x| {
            prob.legs
                .iter()
                .fold(QHom::empty(c.extent(x), prob.apex), |acc, &(xi, g)| {
                    acc.union(compose_unchecked(b, QHom::singleton(b, g), c.hom(x, xi)))
                })
        })
        .collect();
    Presheaf::from_parts(prob.apex, components)
}

/// `ψ(x) = ⋃_i E(x_i, x) ∘ {g_i}`, the cosieve generated by initial legs.
pub fn generated_cosieve(c: &dyn QCat, prob: &LiftingProblem) -> Copresheaf {
    prob.expect(Direction::Initial);
    let b = c.base();
    let components = (0..c.size())
        .map(|x| {
            prob.legs
                .iter()
                .fold(QHom::empty(prob.apex, c.extent(x)), |acc, &(xi, g)| {
                    acc.union(compose_unchecked(b, c.hom(xi, x), QHom::singleton(b, g)))
                })
        })
        .collect();
    Copresheaf::from_parts(prob.apex, components)
}

/// All `z̄` over the apex such that for every `e` and `θ : z → |e|`,
/// `θ ∈ E(z̄, e)` iff `θ ∘ g_i ∈ E(x_i, e)` for every leg.
pub fn final_lifting(c: &dyn QCat, prob: &LiftingProblem) -> Vec<usize> {
    prob.expect(Direction::Final);
    let b = c.base();
    let z = prob.apex;
    let n = c.size();
    let allowed: Vec<QHom> = (0..n)
        .map(|e| {
            prob.legs
                .iter()
                .fold(QHom::full(b, z, c.extent(e)), |acc, &(xi, g)| {
                    acc.intersect(left_residual_unchecked(
                        b,
                        QHom::singleton(b, g),
                        c.hom(xi, e),
                    ))
                })
        })
        .collect();
    (0..n)
        .filter(|&v| c.extent(v) == z && (0..n).all(|e| c.hom(v, e) == allowed[e]))
        .collect()
}

/// Initial liftings, computed as final liftings in the opposite.
pub fn initial_lifting(c: &dyn QCat, prob: &LiftingProblem) -> Vec<usize> {
    prob.expect(Direction::Initial);
    let op = Opposite::new(c);
    let transported = LiftingProblem {
        direction: Direction::Final,
        ..prob.clone()
    };
    final_lifting(&op, &transported)
}

/// The family of all elements `(x, h)`, `h ∈ φ(x)`, of a sieve.
pub fn sieve_family(c: &dyn QCat, phi: &Presheaf) -> LiftingProblem {
    let b = c.base();
    let legs = (0..c.size())
        .flat_map(|x| {
            phi.component(x)
                .elems(b)
                .map(move |h| (x, h))
                .collect::<Vec<_>>()
        })
        .collect();
    LiftingProblem {
        direction: Direction::Final,
        apex: phi.extent(),
        legs,
    }
}

/// The family of all elements `(x, g)`, `g ∈ ψ(x)`, of a cosieve.
pub fn cosieve_family(c: &dyn QCat, psi: &Copresheaf) -> LiftingProblem {
    let b = c.base();
    let legs = (0..c.size())
        .flat_map(|x| {
            psi.component(x)
                .elems(b)
                .map(move |g| (x, g))
                .collect::<Vec<_>>()
        })
        .collect();
    LiftingProblem {
        direction: Direction::Initial,
        apex: psi.extent(),
        legs,
    }
}

/// A sub-family of the elements of `φ` that still generates `φ` and from
/// which no leg can be dropped.
pub fn irredundant_generators(c: &dyn QCat, phi: &Presheaf) -> LiftingProblem {
    let mut prob = sieve_family(c, phi);
    let mut i = 0;
    while i < prob.legs.len() {
        let leg = prob.legs.remove(i);
        if generated_sieve(c, &prob) != *phi {
            prob.legs.insert(i, leg);
            i += 1;
        }
    }
    prob
}

/// Every sieve paired with its canonical final lifting.
#[derive(Clone, Debug)]
pub struct Topologicity {
    pub sieves: Vec<Presheaf>,
    pub liftings: Vec<usize>,
}

/// Whether every sieve has a final lifting; otherwise the first sieve
/// (canonical order) without one.
pub fn is_topological(c: &dyn QCat, cap: usize) -> Result<Decision<Topologicity, Presheaf>> {
    let sieves = enumerate_all_presheaves(c, cap)?;
    let found: Vec<Option<usize>> = sieves
        .par_iter()
        .map(|phi| final_lifting(c, &sieve_family(c, phi)).first().copied())
        .collect();
    if let Some(i) = found.iter().position(Option::is_none) {
        return Ok(Decision::Fails(sieves[i].clone()));
    }
    let liftings = found.into_iter().map(|v| v.expect("checked")).collect();
    Ok(Decision::Holds(Topologicity { sieves, liftings }))
}

/// `↑φ(x) = { g : z → |x| | g ∘ h ∈ E(y, x) for all y and h ∈ φ(y) }`.
pub fn isbell_up(c: &dyn QCat, phi: &Presheaf) -> Copresheaf {
    let b = c.base();
    let z = phi.extent();
    let n = c.size();
    let components = (0..n)
        .map(|x| {
            let gs = b.hom_set(z, c.extent(x)).iter().copied().filter(|&g| {
                (0..n).all(|y| {
                    let exy = c.hom(y, x);
                    phi.component(y)
                        .elems(b)
                        .all(|h| exy.contains(b, b.compose(g, h).expect("typed")))
                })
            });
            QHom::from_morphisms(b, z, c.extent(x), gs).expect("typed")
        })
        .collect();
    Copresheaf::from_parts(z, components)
}

/// `↓ψ(y) = { h : |y| → z | g ∘ h ∈ E(y, x) for all x and g ∈ ψ(x) }`.
pub fn isbell_down(c: &dyn QCat, psi: &Copresheaf) -> Presheaf {
    let b = c.base();
    let z = psi.extent();
    let n = c.size();
    let components = (0..n)
        .map(|y| {
            let hs = b.hom_set(c.extent(y), z).iter().copied().filter(|&h| {
                (0..n).all(|x| {
                    let exy = c.hom(y, x);
                    psi.component(x)
                        .elems(b)
                        .all(|g| exy.contains(b, b.compose(g, h).expect("typed")))
                })
            });
            QHom::from_morphisms(b, c.extent(y), z, hs).expect("typed")
        })
        .collect();
    Presheaf::from_parts(z, components)
}

/// `↑φ = P C(φ, Y−)`.
pub fn isbell_up_abstract(c: &dyn QCat, phi: &Presheaf) -> Copresheaf {
    let b = c.base();
    let components = (0..c.size())
        .map(|x| presheaf_hom(b, phi, &Presheaf::representable(c, x)))
        .collect();
    Copresheaf::from_parts(phi.extent(), components)
}

/// `↓ψ = P† C(Y†−, ψ)`.
pub fn isbell_down_abstract(c: &dyn QCat, psi: &Copresheaf) -> Presheaf {
    let b = c.base();
    let components = (0..c.size())
        .map(|y| copresheaf_hom(b, &Copresheaf::corepresentable(c, y), psi))
        .collect();
    Presheaf::from_parts(psi.extent(), components)
}

/// Solves a lifting problem through the Isbell adjunction: final problems
/// as initial liftings of `↑` of the generated sieve, initial problems as
/// final liftings of `↓` of the generated cosieve.
pub fn lifting_by_duality(c: &dyn QCat, prob: &LiftingProblem) -> Vec<usize> {
    match prob.direction {
        Direction::Final => {
            let up = isbell_up(c, &generated_sieve(c, prob));
            initial_lifting(c, &cosieve_family(c, &up))
        }
        Direction::Initial => {
            let down = isbell_down(c, &generated_cosieve(c, prob));
            final_lifting(c, &sieve_family(c, &down))
        }
    }
}

/// Outcome of the four equivalent conditions on one Q-category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MainTheoremReport {
    /// Every irredundant generating family of every sieve has a final lifting.
    pub final_liftings: bool,
    /// Every sieve has a final lifting.
    pub sieve_liftings: bool,
    /// The Yoneda embedding has a left adjoint.
    pub yoneda_left_adjoint: bool,
    /// Every presheaf has a weighted colimit.
    pub total: bool,
    pub presheaves: usize,
    /// Canonical sieve without a lifting, as a list of component ids.
    pub counterexample: Option<String>,
}

impl MainTheoremReport {
    pub fn agree(&self) -> bool {
        self.final_liftings == self.sieve_liftings
            && self.sieve_liftings == self.yoneda_left_adjoint
            && self.yoneda_left_adjoint == self.total
    }
}

/// Evaluates the four conditions independently.
pub fn main_theorem_check(c: &dyn QCat, cap: usize) -> Result<MainTheoremReport> {
    let pc = PresheafCategory::new(c, cap)?;
    let sieves = pc.presheaves();
    let final_liftings = sieves.par_iter().all(|phi| {
        let family = irredundant_generators(c, phi);
        let direct = final_lifting(c, &family);
        debug_assert_eq!(
            direct,
            weighted_colimit(phi, &QFunctor::identity(c))
                .into_iter()
                .map(|w| w.object)
                .collect::<Vec<_>>()
        );
        !direct.is_empty()
    });
    let topo = is_topological(c, cap)?;
    let yoneda = pc.yoneda();
    let yoneda_left_adjoint = left_adjoint(&yoneda)?.holds();
    let total = is_total(c, cap)?.holds();
    let counterexample = topo.counterexample().map(|phi| describe_presheaf(c, phi));
    Ok(MainTheoremReport {
        final_liftings,
        sieve_liftings: topo.holds(),
        yoneda_left_adjoint,
        total,
        presheaves: sieves.len(),
        counterexample,
    })
}

/// `extent {x: [ids], ...}` in object order.
pub fn describe_presheaf(c: &dyn QCat, phi: &Presheaf) -> String {
    let b = c.base();
    let parts: Vec<String> = (0..c.size())
        .map(|x| {
            format!(
                "{}: [{}]",
                c.object_id(x),
                phi.component(x).elem_ids(b).join(", ")
            )
        })
        .collect();
    format!("{} {{{}}}", b.object_id(phi.extent()), parts.join(", "))
}

/// As [`describe_presheaf`], for copresheaves.
pub fn describe_copresheaf(c: &dyn QCat, psi: &Copresheaf) -> String {
    let b = c.base();
    let parts: Vec<String> = (0..c.size())
        .map(|x| {
            format!(
                "{}: [{}]",
                c.object_id(x),
                psi.component(x).elem_ids(b).join(", ")
            )
        })
        .collect();
    format!("{} {{{}}}", b.object_id(psi.extent()), parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::presheaf::{enumerate_all_copresheaves, DEFAULT_CAP};
    use crate::qcategory::opposite_qcategory;

    fn prob(c: &dyn QCat, d: Direction, legs: &[(usize, &str)]) -> LiftingProblem {
        let b = c.base();
        let legs = legs
            .iter()
            .map(|&(x, g)| (x, b.morphism_index(g).unwrap()))
            .collect();
        LiftingProblem::new(c, d, 0, legs).unwrap()
    }

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
    fn generated_sieves() {
        let ac = fixtures::e_ac();
        assert_eq!(
            generated_sieve(&ac, &prob(&ac, Direction::Final, &[])),
            down(&ac, &[])
        );
        assert_eq!(
            generated_sieve(&ac, &prob(&ac, Direction::Final, &[(0, "id"), (1, "id")])),
            down(&ac, &[0, 1])
        );
        let ch = fixtures::e_ch();
        let rep = Presheaf::representable(&ch, 1);
        assert_eq!(generated_sieve(&ch, &sieve_family(&ch, &rep)), rep);
        assert_eq!(
            generated_sieve(&ch, &prob(&ch, Direction::Final, &[(1, "id")])),
            rep
        );
    }

    #[test]
    fn final_liftings() {
        let (ac, ch) = (fixtures::e_ac(), fixtures::e_ch());
        assert_eq!(
            final_lifting(&ch, &prob(&ch, Direction::Final, &[(0, "id"), (1, "id")])),
            vec![1]
        );
        assert!(
            final_lifting(&ac, &prob(&ac, Direction::Final, &[(0, "id"), (1, "id")])).is_empty()
        );
        assert_eq!(
            final_lifting(&ch, &prob(&ch, Direction::Final, &[])),
            vec![0]
        );
    }

    #[test]
    fn initial_liftings() {
        let (ac, ch) = (fixtures::e_ac(), fixtures::e_ch());
        assert_eq!(
            initial_lifting(&ch, &prob(&ch, Direction::Initial, &[(0, "id"), (1, "id")])),
            vec![0]
        );
        assert_eq!(
            initial_lifting(&ac, &prob(&ac, Direction::Initial, &[(0, "id")])),
            vec![0]
        );
        assert_eq!(
            initial_lifting(&ch, &prob(&ch, Direction::Initial, &[])),
            vec![1]
        );
    }

    #[test]
    fn leg_typing_is_checked() {
        let ex = fixtures::e_x();
        let b = ex.base();
        let y = b.object_index("Y").unwrap();
        let f = b.morphism_index("f").unwrap();
        assert!(LiftingProblem::new(&ex, Direction::Final, y, vec![(0, f)]).is_ok());
        assert!(LiftingProblem::new(&ex, Direction::Initial, y, vec![(0, f)]).is_err());
    }

    #[test]
    fn topologicity_of_fixtures() {
        let ch = fixtures::e_ch();
        assert!(is_topological(&ch, DEFAULT_CAP).unwrap().holds());

        let ex = fixtures::e_x();
        let d = is_topological(&ex, DEFAULT_CAP).unwrap();
        let cx = d.counterexample().unwrap();
        // Over Y both sieves (∅ and {f}) lack a lifting since no object lies over Y.
        assert_eq!(ex.base().object_id(cx.extent()), "Y");
        assert!(cx.component(0).is_empty());

        let px = crate::presheaf::presheaf_category(&ex, DEFAULT_CAP).unwrap();
        assert!(is_topological(&px, DEFAULT_CAP).unwrap().holds());
    }

    #[test]
    fn isbell_examples() {
        let ac = fixtures::e_ac();
        assert_eq!(isbell_up(&ac, &down(&ac, &[0])), up(&ac, &[0]));
        assert_eq!(isbell_down(&ac, &up(&ac, &[0])), down(&ac, &[0]));
        assert_eq!(isbell_up(&ac, &down(&ac, &[0, 1])), up(&ac, &[]));
        assert_eq!(isbell_down(&ac, &up(&ac, &[])), down(&ac, &[0, 1]));

        let ch = fixtures::e_ch();
        assert_eq!(isbell_up(&ch, &down(&ch, &[])), up(&ch, &[0, 1]));
        // ↓ of the full upset is the set of common lower bounds of 0 and 1.
        assert_eq!(isbell_down(&ch, &up(&ch, &[0, 1])), down(&ch, &[0]));
    }

    #[test]
    fn elementwise_and_abstract_isbell_agree() {
        for c in [
            fixtures::e_ac(),
            fixtures::e_ch(),
            fixtures::e_x(),
            fixtures::chain(3),
        ] {
            for phi in enumerate_all_presheaves(&c, DEFAULT_CAP).unwrap() {
                assert_eq!(isbell_up(&c, &phi), isbell_up_abstract(&c, &phi));
            }
            for psi in enumerate_all_copresheaves(&c, DEFAULT_CAP).unwrap() {
                assert_eq!(isbell_down(&c, &psi), isbell_down_abstract(&c, &psi));
            }
        }
    }

    #[test]
    fn galois_laws_on_fixtures() {
        for c in [fixtures::e_ac(), fixtures::e_ch(), fixtures::e_x()] {
            let ps = enumerate_all_presheaves(&c, DEFAULT_CAP).unwrap();
            let cs = enumerate_all_copresheaves(&c, DEFAULT_CAP).unwrap();
            for phi in &ps {
                let u = isbell_up(&c, phi);
                assert_eq!(isbell_up(&c, &isbell_down(&c, &u)), u);
                for psi in cs.iter().filter(|p| p.extent() == phi.extent()) {
                    assert_eq!(phi.le(&isbell_down(&c, psi)), psi.le(&u));
                }
            }
        }
    }

    #[test]
    fn dual_route_examples() {
        let (ac, ch) = (fixtures::e_ac(), fixtures::e_ch());
        let p = prob(&ch, Direction::Final, &[(0, "id")]);
        assert_eq!(isbell_up(&ch, &generated_sieve(&ch, &p)), up(&ch, &[0, 1]));
        assert_eq!(lifting_by_duality(&ch, &p), vec![0]);
        assert_eq!(final_lifting(&ch, &p), vec![0]);
        let p = prob(&ac, Direction::Final, &[(0, "id"), (1, "id")]);
        assert!(lifting_by_duality(&ac, &p).is_empty());
        let p = prob(&ch, Direction::Initial, &[(1, "id")]);
        assert_eq!(lifting_by_duality(&ch, &p), vec![1]);
        assert_eq!(initial_lifting(&ch, &p), vec![1]);
    }

    #[test]
    fn main_theorem_on_fixtures() {
        let r = main_theorem_check(&fixtures::e_ch(), DEFAULT_CAP).unwrap();
        assert!(r.agree() && r.total);
        let r = main_theorem_check(&fixtures::e_ac(), DEFAULT_CAP).unwrap();
        assert!(r.agree() && !r.total);
        let r = main_theorem_check(&fixtures::e_x(), DEFAULT_CAP).unwrap();
        assert!(r.agree() && !r.total);
    }

    #[test]
    fn topologicity_is_self_dual_on_fixtures() {
        for c in [
            fixtures::e_ac(),
            fixtures::e_ch(),
            fixtures::e_x(),
            fixtures::chain(3),
        ] {
            let op = opposite_qcategory(&c);
            assert_eq!(
                is_topological(&c, DEFAULT_CAP).unwrap().holds(),
                is_topological(&op, DEFAULT_CAP).unwrap().holds()
            );
        }
    }
}
