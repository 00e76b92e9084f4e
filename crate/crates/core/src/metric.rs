//! Word metrics on finitely generated subgroups of `F_m x ... x F_m`.
//!
//! Elements are compared as tuples of reduced words, so balls are grown by
//! plain breadth-first search. A distance query up to radius `R` only needs
//! the ball of radius `ceil(R/2)`: a geodesic splits as `p q` with
//! `|p| <= ceil(R/2)` and `|q| <= floor(R/2)`, so `t q^-1` lies in the ball
//! for some `q` of the smaller radius.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::kernel::{GenWord, GeneratingSet, KernelGroup};
use crate::product::ProductElement;
use crate::word::{Letter, Word};

pub const DEFAULT_RADIUS: usize = 9;

/// The ball of a given radius around the identity.
#[derive(Clone, Debug)]
pub struct Ball {
    layers: Vec<Vec<ProductElement>>,
    /// distance and the last letter of some geodesic
    seen: HashMap<ProductElement, (usize, Option<Letter>)>,
}

impl Ball {
    pub fn grow(gens: &GeneratingSet, radius: usize, exec: Exec) -> Ball {
        let letters: Vec<(Letter, ProductElement)> = (1..=gens.len() as u32)
            .flat_map(|g| {
                let e = gens.realizations()[g as usize - 1].clone();
                [(Letter::new(g, false), e.clone()), (Letter::new(g, true), e.inv())]
            })
            .collect();
        let id = ProductElement::identity(gens.n());
        let mut seen = HashMap::new();
        seen.insert(id.clone(), (0, None));
        let mut layers = vec![vec![id]];
        for d in 1..=radius {
            let candidates = exec.flat_map(&layers[d - 1], |g| {
                letters
                    .iter()
                    .map(|(l, e)| (g.mul(e), *l))
                    .collect::<Vec<_>>()
            });
            let mut next = Vec::new();
            for (g, l) in candidates {
                if !seen.contains_key(&g) {
                    seen.insert(g.clone(), (d, Some(l)));
                    next.push(g);
                }
            }
            if next.is_empty() {
                break;
            }
            layers.push(next);
        }
        Ball { layers, seen }
    }

    /// Radius actually reached (smaller than requested if the group is finite).
    pub fn radius(&self) -> usize {
        self.layers.len() - 1
    }

    /// Sphere sizes, starting with `1` for the identity.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }

    pub fn distance(&self, g: &ProductElement) -> Option<usize> {
        self.seen.get(g).map(|&(d, _)| d)
    }

    pub fn layer(&self, d: usize) -> &[ProductElement] {
        &self.layers[d]
    }

    /// A geodesic word for a member of the ball.
    pub fn geodesic(&self, gens: &GeneratingSet, g: &ProductElement) -> Option<GenWord> {
        let mut letters = Vec::new();
        let mut cur = g.clone();
        loop {
            let &(_, last) = self.seen.get(&cur)?;
            let Some(l) = last else { break };
            letters.push(l);
            let e = &gens.realizations()[l.generator() as usize - 1];
            cur = if l.is_inverse() { cur.mul(e) } else { cur.mul(&e.inv()) };
        }
        letters.reverse();
        Some(Word::reduce(letters))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distance {
    Exact { distance: usize, witness: GenWord },
    /// Certified: no word of length at most `radius` represents the target.
    Beyond { radius: usize },
}

impl Distance {
    pub fn exact(&self) -> Option<usize> {
        match self {
            Distance::Exact { distance, .. } => Some(*distance),
            Distance::Beyond { .. } => None,
        }
    }

    /// Best certified lower bound.
    pub fn lower_bound(&self) -> usize {
        match self {
            Distance::Exact { distance, .. } => *distance,
            Distance::Beyond { radius } => radius + 1,
        }
    }
}

/// Distance queries sharing one half-radius ball.
pub struct Metric<'a> {
    gens: &'a GeneratingSet,
    ball: Ball,
    max_radius: usize,
    exec: Exec,
}

impl<'a> Metric<'a> {
    pub fn new(gens: &'a GeneratingSet, max_radius: usize, exec: Exec) -> Self {
        Metric {
            gens,
            ball: Ball::grow(gens, max_radius.div_ceil(2), exec),
            max_radius,
            exec,
        }
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    pub fn distance(&self, target: &ProductElement) -> Result<Distance> {
        target.check_shape(self.gens.n(), self.gens.m())?;
        if let Some(d) = self.ball.distance(target) {
            if d <= self.max_radius {
                let witness = self.ball.geodesic(self.gens, target).expect("member of ball");
                return Ok(Distance::Exact { distance: d, witness });
            }
        }
        let half = (self.max_radius / 2).min(self.ball.radius());
        let qs: Vec<&ProductElement> = (0..=half).flat_map(|d| self.ball.layer(d)).collect();
        let hits = self.exec.map(&qs, |q| {
            let p = target.mul(&q.inv());
            self.ball.distance(&p).map(|dp| (dp + self.ball.distance(q).unwrap(), p))
        });
        let best = qs
            .iter()
            .zip(hits)
            .filter_map(|(q, h)| h.map(|(d, p)| (d, p, *q)))
            .min_by_key(|(d, _, _)| *d);
        match best {
            Some((d, p, q)) if d <= self.max_radius => {
                let witness = self
                    .ball
                    .geodesic(self.gens, &p)
                    .unwrap()
                    .mul(&self.ball.geodesic(self.gens, q).unwrap());
                Ok(Distance::Exact { distance: d, witness })
            }
            _ => Ok(Distance::Beyond {
                radius: self.max_radius,
            }),
        }
    }
}

/// Exact distance from the identity if at most `max_radius`.
pub fn distance(gens: &GeneratingSet, target: &ProductElement, max_radius: usize, exec: Exec) -> Result<Distance> {
    Metric::new(gens, max_radius, exec).distance(target)
}

/// Word length for the generating set made of every factor's basis.
pub fn ambient_length(g: &ProductElement) -> usize {
    g.ambient_length()
}

/// `h_n = ([x^n, y^n], 1)` in `K^2_2(2)`.
pub fn h_family(n: usize) -> Result<ProductElement> {
    if n < 1 {
        return Err(Error::InvalidArgument("h_n needs n >= 1".into()));
    }
    let n = n as i64;
    let c = Word::gen_pow(1, n).commutator(&Word::gen_pow(2, n));
    Ok(ProductElement::new(vec![c, Word::empty()]))
}

/// The generating set `{x1 x2^-1, y1 y2^-1, [x1, y1]}` of `K^2_2(2)`.
pub fn h_family_generators() -> GeneratingSet {
    KernelGroup::standard(2, 2, 2)
        .and_then(|k| k.standard_generators())
        .expect("K2_2_2 is well formed")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistortionRow {
    pub n: usize,
    pub ambient_length: usize,
    /// `exact` or `lower_bound`.
    pub status: &'static str,
    pub value: usize,
}

/// One row per `n`: `d_B(1, h_n)` when within `radius`, else the certified
/// lower bound `radius + 1`.
pub fn distortion_table(ns: &[usize], radius: usize, exec: Exec) -> Result<Vec<DistortionRow>> {
    let gens = h_family_generators();
    let metric = Metric::new(&gens, radius, exec);
    ns.iter()
        .map(|&n| {
            let h = h_family(n)?;
            let d = metric.distance(&h)?;
            Ok(DistortionRow {
                n,
                ambient_length: ambient_length(&h),
                status: if d.exact().is_some() { "exact" } else { "lower_bound" },
                value: d.lower_bound(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_family_basics() {
        assert_eq!(h_family(1).unwrap(), ProductElement::parse("[x,y] ; 1", 2).unwrap());
        assert!(h_family(0).is_err());
        let k = KernelGroup::standard(2, 2, 2).unwrap();
        for n in 1..=5 {
            let h = h_family(n).unwrap();
            assert!(k.contains(&h).unwrap());
            assert_eq!(ambient_length(&h), 4 * n);
        }
        assert_eq!(ambient_length(&ProductElement::parse("x ; y^-2", 2).unwrap()), 3);
    }

    #[test]
    fn small_distances() {
        let b = h_family_generators();
        let d = distance(&b, &ProductElement::identity(2), 3, Exec::Sequential).unwrap();
        assert_eq!(d.exact(), Some(0));
        let d = distance(&b, &h_family(1).unwrap(), 3, Exec::Sequential).unwrap();
        assert_eq!(d.exact(), Some(1));
        let d = distance(&b, &h_family(2).unwrap(), 3, Exec::Sequential).unwrap();
        assert_eq!(d, Distance::Beyond { radius: 3 });
        assert_eq!(d.lower_bound(), 4);
        // any word of length 4 for h_2 would consist of four [x1,y1] letters only
        let d = distance(&b, &h_family(2).unwrap(), 10, Exec::Parallel).unwrap();
        let Distance::Exact { distance, witness } = d else { panic!() };
        assert_eq!(distance, 10);
        assert_eq!(b.eval(&witness).unwrap(), h_family(2).unwrap());
    }

    #[test]
    fn balls_are_deterministic_and_monotone() {
        let b = h_family_generators();
        let seq = Ball::grow(&b, 4, Exec::Sequential);
        let par = Ball::grow(&b, 4, Exec::Parallel);
        assert_eq!(seq.sphere_sizes(), par.sphere_sizes());
        assert_eq!(seq.layer(3), par.layer(3));
        let small = Ball::grow(&b, 3, Exec::Sequential);
        assert!(small.len() < seq.len());
        assert_eq!(&seq.sphere_sizes()[..4], &small.sphere_sizes()[..]);
        assert_eq!(seq.sphere_sizes()[1], 6);
    }

    #[test]
    fn metric_axioms_on_ball() {
        let b = h_family_generators();
        let ball = Ball::grow(&b, 3, Exec::Sequential);
        let metric = Metric::new(&b, 6, Exec::Sequential);
        let elems: Vec<&ProductElement> = (0..=3).flat_map(|d| ball.layer(d)).step_by(7).collect();
        for g in &elems {
            let dg = metric.distance(g).unwrap().exact().unwrap();
            assert_eq!(Some(dg), ball.distance(g));
            assert_eq!(metric.distance(&g.inv()).unwrap().exact(), Some(dg));
        }
        for g in elems.iter().take(12) {
            for h in elems.iter().take(12) {
                let dgh = metric.distance(&g.mul(h)).unwrap().exact().unwrap();
                assert!(dgh <= ball.distance(g).unwrap() + ball.distance(h).unwrap());
            }
        }
    }

    #[test]
    fn table_rows() {
        let rows = distortion_table(&[1, 2], 10, Exec::Sequential).unwrap();
        assert_eq!(
            rows,
            vec![
                DistortionRow { n: 1, ambient_length: 4, status: "exact", value: 1 },
                DistortionRow { n: 2, ambient_length: 8, status: "exact", value: 10 },
            ]
        );
        let rows = distortion_table(&[2], 5, Exec::Sequential).unwrap();
        assert_eq!(rows[0].status, "lower_bound");
        assert_eq!(rows[0].value, 6);
    }
}
