//! Realizable sign conditions of linear forms over a polytope.

use crate::lp::{self, Feasibility, LinearForm, LinearSystem, Relation};
use crate::rational::{self, Rational};
use num_traits::Signed;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

/// One entry per form, each in `{-1, 0, 1}`.
pub type SignVector = Vec<i8>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellWitness {
    pub sign: SignVector,
    pub point: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrangementError {
    #[error("region is empty")]
    EmptyRegion,
}

/// Form counts up to this size use the exhaustive sweep.
pub const SWEEP_LIMIT: usize = 12;

/// Forms reduced up to positive scaling and negation.
struct Reduced {
    /// Canonical non-constant forms: first coefficient is exactly 1.
    canon: Vec<LinearForm>,
    /// For each input form: `Fixed(s)` for a constant form of sign `s`, or
    /// `Ref(j, s)` meaning the form has sign `s * sign(canon[j])`.
    map: Vec<Slot>,
}

#[derive(Clone, Copy)]
enum Slot {
    Fixed(i8),
    Ref(usize, i8),
}

impl Reduced {
    fn new(forms: &[LinearForm]) -> Reduced {
        let mut canon: Vec<LinearForm> = Vec::new();
        let mut index: BTreeMap<Vec<(usize, Rational)>, Vec<(Rational, usize)>> = BTreeMap::new();
        let mut map = Vec::with_capacity(forms.len());
        for f in forms {
            let Some((_, first)) = f.terms().next() else {
                map.push(Slot::Fixed(rational::sign(f.constant_term())));
                continue;
            };
            let s: i8 = if first.is_negative() { -1 } else { 1 };
            let c = f.scaled(&(rational::one() / first.clone()));
            let key: Vec<(usize, Rational)> = c.terms().map(|(v, k)| (v.0, k.clone())).collect();
            let bucket = index.entry(key).or_default();
            let j = match bucket.iter().find(|(k, _)| k == c.constant_term()) {
                Some((_, j)) => *j,
                None => {
                    bucket.push((c.constant_term().clone(), canon.len()));
                    canon.push(c);
                    canon.len() - 1
                }
            };
            map.push(Slot::Ref(j, s));
        }
        Reduced { canon, map }
    }

    fn expand(&self, canon_sign: &[i8]) -> SignVector {
        self.map
            .iter()
            .map(|slot| match *slot {
                Slot::Fixed(s) => s,
                Slot::Ref(j, s) => s * canon_sign[j],
            })
            .collect()
    }
}

fn signs_at(forms: &[LinearForm], point: &[Rational]) -> SignVector {
    forms.iter().map(|f| rational::sign(&f.eval(point))).collect()
}

fn with_sign(system: &mut LinearSystem, form: &LinearForm, sign: i8) {
    match sign {
        0 => system.add(form.clone(), Relation::Eq),
        1 => system.add(form.clone(), Relation::Gt),
        _ => system.add(form.negated(), Relation::Gt),
    }
}

/// Tests whether `signs` (over the canonical forms) is realizable in `region`.
fn realize(canon: &[LinearForm], signs: &[i8], region: &LinearSystem) -> Option<Vec<Rational>> {
    let mut sys = region.clone();
    for (f, &s) in canon.iter().zip(signs) {
        with_sign(&mut sys, f, s);
    }
    match lp::strict_feasible(&sys) {
        Feasibility::Feasible(p) => Some(p),
        Feasibility::Infeasible(_) => None,
    }
}

fn check_region(region: &LinearSystem) -> Result<Vec<Rational>, ArrangementError> {
    match lp::strict_feasible(region) {
        Feasibility::Feasible(p) => Ok(p),
        Feasibility::Infeasible(_) => Err(ArrangementError::EmptyRegion),
    }
}

fn finish(red: &Reduced, found: BTreeMap<Vec<i8>, Vec<Rational>>) -> Vec<CellWitness> {
    let mut out: Vec<CellWitness> = found
        .into_iter()
        .map(|(s, point)| CellWitness {
            sign: red.expand(&s),
            point,
        })
        .collect();
    out.sort_by(|a, b| a.sign.cmp(&b.sign));
    out
}

/// Exhaustive sweep over all `3^s` sign vectors, pruning a prefix as soon as
/// it is unrealizable.
pub fn enumerate_by_sweep(forms: &[LinearForm], region: &LinearSystem) -> Result<Vec<CellWitness>, ArrangementError> {
    let red = Reduced::new(forms);
    let mut found = BTreeMap::new();
    let mut prefix = Vec::with_capacity(red.canon.len());
    let start = check_region(region)?;
    sweep(&red.canon, region, &mut prefix, &start, &mut found);
    Ok(finish(&red, found))
}

fn sweep(
    canon: &[LinearForm],
    region: &LinearSystem,
    prefix: &mut Vec<i8>,
    parent: &[Rational],
    found: &mut BTreeMap<Vec<i8>, Vec<Rational>>,
) {
    if canon.is_empty() {
        found.insert(Vec::new(), parent.to_vec());
        return;
    }
    // The parent's point already realizes one of the three children.
    let free = rational::sign(&canon[prefix.len()].eval(parent));
    for s in [-1i8, 0, 1] {
        prefix.push(s);
        let point = if s == free {
            Some(parent.to_vec())
        } else {
            realize(&canon[..prefix.len()], prefix, region)
        };
        if let Some(p) = point {
            if prefix.len() == canon.len() {
                found.insert(prefix.clone(), p);
            } else {
                sweep(canon, region, prefix, &p, found);
            }
        }
        prefix.pop();
    }
}

/// Breadth-first search over sign vectors starting from the cell of a region
/// point. Neighbours change one coordinate (`±1 <-> 0`) or two coordinates at
/// once.
pub fn enumerate_by_search(forms: &[LinearForm], region: &LinearSystem) -> Result<Vec<CellWitness>, ArrangementError> {
    let seed = check_region(region)?;
    let red = Reduced::new(forms);
    let canon = &red.canon;
    let s = canon.len();
    let start = signs_at(canon, &seed);
    let mut found: BTreeMap<Vec<i8>, Vec<Rational>> = BTreeMap::new();
    let mut tested: BTreeSet<Vec<i8>> = BTreeSet::new();
    tested.insert(start.clone());
    found.insert(start.clone(), seed);
    let mut queue = VecDeque::from([start]);

    while let Some(v) = queue.pop_front() {
        let mut candidates = Vec::new();
        for j in 0..s {
            for nj in [-1i8, 0, 1] {
                if nj != v[j] && (nj == 0 || v[j] == 0) {
                    let mut c = v.clone();
                    c[j] = nj;
                    candidates.push(c);
                }
            }
        }
        for j in 0..s {
            for k in j + 1..s {
                for nj in [-1i8, 0, 1] {
                    if nj == v[j] {
                        continue;
                    }
                    for nk in [-1i8, 0, 1] {
                        if nk == v[k] {
                            continue;
                        }
                        let mut c = v.clone();
                        c[j] = nj;
                        c[k] = nk;
                        candidates.push(c);
                    }
                }
            }
        }
        for c in candidates {
            if !tested.insert(c.clone()) {
                continue;
            }
            if let Some(p) = realize(canon, &c, region) {
                found.insert(c.clone(), p);
                queue.push_back(c);
            }
        }
    }
    Ok(finish(&red, found))
}

/// Every realizable sign vector of `forms` over `region`, each with a point
/// reproducing it exactly. Sorted by sign vector.
pub fn enumerate_sign_conditions(
    forms: &[LinearForm],
    region: &LinearSystem,
) -> Result<Vec<CellWitness>, ArrangementError> {
    if Reduced::new(forms).canon.len() <= SWEEP_LIMIT {
        enumerate_by_sweep(forms, region)
    } else {
        enumerate_by_search(forms, region)
    }
}

/// Number of witnesses whose sign vector has no zero entry.
pub fn full_dimensional_count(cells: &[CellWitness]) -> usize {
    cells.iter().filter(|c| c.sign.iter().all(|s| *s != 0)).count()
}

/// Re-evaluates every form at every witness.
pub fn witnesses_consistent(forms: &[LinearForm], cells: &[CellWitness]) -> bool {
    cells.iter().all(|c| signs_at(forms, &c.point) == c.sign)
}

/// `lo <= x_i <= hi` for every variable.
pub fn box_region(num_vars: usize, lo: &Rational, hi: &Rational) -> LinearSystem {
    let mut region = LinearSystem::with_vars((0..num_vars).map(|i| format!("x{i}")));
    for i in 0..num_vars {
        let v = lp::Var(i);
        let mut low = LinearForm::var(v);
        low.add_constant(&-lo.clone());
        region.add_ge(low);
        let mut high = LinearForm::term(v, rational::int(-1));
        high.add_constant(hi);
        region.add_ge(high);
    }
    region
}
