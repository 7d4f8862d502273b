//! Finite posets of primes given by their covering relation.

use std::collections::{BTreeSet, HashMap};

use super::Spectrum;
use crate::error::{Error, Result};

/// A finite poset. Points are indices into `ids`; `leq[p][q]` is p ⊆ q.
#[derive(Clone, Debug)]
pub struct FinPoset {
    ids: Vec<String>,
    covers: Vec<(usize, usize)>,
    leq: Vec<Vec<bool>>,
    index: HashMap<String, usize>,
}

impl PartialEq for FinPoset {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.covers == other.covers
    }
}

pub type PointSet = BTreeSet<usize>;

impl FinPoset {
    /// Builds a poset from point ids and covering pairs (p, q), p maximal under q.
    pub fn new<S: AsRef<str>>(ids: &[S], covers: &[(S, S)]) -> Result<FinPoset> {
        let ids: Vec<String> = ids.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::InvalidPoset(format!("duplicate point {id:?}")));
            }
        }
        let look = |s: &str| index.get(s).copied().ok_or_else(|| Error::UnknownPoint(s.to_string()));
        let mut cov = Vec::new();
        for (a, b) in covers {
            let (p, q) = (look(a.as_ref())?, look(b.as_ref())?);
            if p == q {
                return Err(Error::InvalidPoset(format!("self cover at {:?}", ids[p])));
            }
            cov.push((p, q));
        }
        cov.sort();
        cov.dedup();
        Self::from_indices(ids, cov, index)
    }

    fn from_indices(ids: Vec<String>, covers: Vec<(usize, usize)>, index: HashMap<String, usize>) -> Result<FinPoset> {
        let n = ids.len();
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(p, q) in &covers {
            up[p].push(q);
        }
        // Kahn's algorithm for the cycle check.
        let mut indeg = vec![0usize; n];
        for &(_, q) in &covers {
            indeg[q] += 1;
        }
        let mut order: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut k = 0;
        while k < order.len() {
            let p = order[k];
            for &q in &up[p] {
                indeg[q] -= 1;
                if indeg[q] == 0 {
                    order.push(q);
                }
            }
            k += 1;
        }
        if order.len() != n {
            return Err(Error::InvalidPoset("covers contain a cycle".into()));
        }
        let mut leq = vec![vec![false; n]; n];
        for &p in order.iter().rev() {
            leq[p][p] = true;
            for &q in &up[p] {
                for r in 0..n {
                    if leq[q][r] {
                        leq[p][r] = true;
                    }
                }
            }
        }
        for &(p, q) in &covers {
            if let Some(r) = (0..n).find(|&r| r != p && r != q && leq[p][r] && leq[r][q]) {
                return Err(Error::InvalidPoset(format!(
                    "cover ({:?}, {:?}) is implied through {:?}",
                    ids[p], ids[q], ids[r]
                )));
            }
        }
        Ok(FinPoset { ids, covers, leq, index })
    }

    /// A chain p0 < p1 < ... of `n` points.
    pub fn chain(n: usize) -> FinPoset {
        let ids: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let covers: Vec<(String, String)> = (1..n).map(|i| (ids[i - 1].clone(), ids[i].clone())).collect();
        FinPoset::new(&ids, &covers).expect("chain is a poset")
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.leq[p][q]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownPoint(id.to_string()))
    }

    pub fn points(&self) -> impl Iterator<Item = usize> {
        0..self.ids.len()
    }

    pub fn up_closure(&self, pts: impl IntoIterator<Item = usize>) -> PointSet {
        let mut out = PointSet::new();
        for p in pts {
            out.extend((0..self.len()).filter(|&q| self.leq[p][q]));
        }
        out
    }

    pub fn is_up_set(&self, z: &PointSet) -> bool {
        z.iter().all(|&p| (0..self.len()).all(|q| !self.leq[p][q] || z.contains(&q)))
    }

    /// Every up-set, in a deterministic order. Errors beyond `cap` points.
    pub fn up_sets(&self, cap: usize) -> Result<Vec<PointSet>> {
        let n = self.len();
        if n > cap {
            return Err(Error::WindowTooLarge { count: 1u128 << n.min(127), cap: 1u128 << cap.min(127) });
        }
        // Antichains of minimal elements generate the up-sets; a direct
        // recursion over points in a linear extension is simpler.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&p| std::cmp::Reverse((0..n).filter(|&q| self.leq[q][p]).count()));
        let mut out = Vec::new();
        let mut cur = PointSet::new();
        self.up_sets_rec(&order, 0, &mut cur, &mut out);
        out.sort();
        Ok(out)
    }

    fn up_sets_rec(&self, order: &[usize], k: usize, cur: &mut PointSet, out: &mut Vec<PointSet>) {
        if k == order.len() {
            out.push(cur.clone());
            return;
        }
        let p = order[k];
        // `order` lists points from the top down, so every strict
        // specialization of p has already been decided.
        let can_add = (0..self.len()).all(|q| q == p || !self.leq[p][q] || cur.contains(&q));
        self.up_sets_rec(order, k + 1, cur, out);
        if can_add {
            cur.insert(p);
            self.up_sets_rec(order, k + 1, cur, out);
            cur.remove(&p);
        }
    }

    /// All maximal chains as point sequences from bottom to top.
    pub fn maximal_chains(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for m in self.minimal_points() {
            let mut path = vec![m];
            self.chains_from(&mut path, &mut out);
        }
        out
    }

    fn chains_from(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().expect("non-empty path");
        let next: Vec<usize> = self.covers.iter().filter(|(p, _)| *p == last).map(|(_, q)| *q).collect();
        if next.is_empty() {
            out.push(path.clone());
            return;
        }
        for q in next {
            path.push(q);
            self.chains_from(path, out);
            path.pop();
        }
    }
}

impl Spectrum for FinPoset {
    type Point = usize;
    type Subset = PointSet;
    type Codim = Vec<i64>;

    fn point_name(&self, p: &usize) -> String {
        self.ids[*p].clone()
    }

    fn parse_point(&self, s: &str) -> Result<usize> {
        self.index_of(s)
    }

    fn check_point(&self, p: &usize) -> Result<()> {
        if *p < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownPoint(format!("#{p}")))
        }
    }

    fn empty(&self) -> PointSet {
        PointSet::new()
    }

    fn whole(&self) -> PointSet {
        self.points().collect()
    }

    fn contains(&self, z: &PointSet, p: &usize) -> bool {
        z.contains(p)
    }

    fn is_subset(&self, a: &PointSet, b: &PointSet) -> bool {
        a.is_subset(b)
    }

    fn union(&self, a: &PointSet, b: &PointSet) -> PointSet {
        a | b
    }

    fn intersection(&self, a: &PointSet, b: &PointSet) -> PointSet {
        a & b
    }

    fn validate_subset(&self, z: &PointSet) -> Result<()> {
        if let Some(p) = z.iter().find(|&&p| p >= self.len()) {
            return Err(Error::UnknownPoint(format!("#{p}")));
        }
        if !self.is_up_set(z) {
            return Err(Error::NotSpStable(self.describe_subset(z)));
        }
        Ok(())
    }

    fn describe_subset(&self, z: &PointSet) -> String {
        let names: Vec<&str> = z.iter().map(|&p| self.ids[p].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    fn closure_of_point(&self, q: &usize) -> PointSet {
        self.up_closure([*q])
    }

    fn specialization_closure(&self, points: &[usize]) -> Result<PointSet> {
        for p in points {
            self.check_point(p)?;
        }
        Ok(self.up_closure(points.iter().copied()))
    }

    fn immediate_generalizations(&self, q: &usize) -> Result<Vec<usize>> {
        self.check_point(q)?;
        Ok(self.covers.iter().filter(|(_, b)| b == q).map(|(a, _)| *a).collect())
    }

    fn immediate_specializations(&self, p: &usize, _candidates: &[usize]) -> Vec<usize> {
        self.covers.iter().filter(|(a, _)| a == p).map(|(_, b)| *b).collect()
    }

    fn representatives(&self, _context: &[&PointSet], _extra: &[usize]) -> Vec<usize> {
        self.points().collect()
    }

    fn subset_where(
        &self,
        _context: &[&PointSet],
        _extra: &[usize],
        pred: &dyn Fn(&usize) -> bool,
    ) -> Result<PointSet> {
        let z: PointSet = self.points().filter(|p| pred(p)).collect();
        self.validate_subset(&z)?;
        Ok(z)
    }

    fn connected_components(&self) -> Vec<PointSet> {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for &(p, q) in &self.covers {
            let (a, b) = (find(&mut parent, p), find(&mut parent, q));
            parent[a] = b;
        }
        let mut comps: std::collections::BTreeMap<usize, PointSet> = Default::default();
        for p in 0..n {
            let r = find(&mut parent, p);
            comps.entry(r).or_default().insert(p);
        }
        let mut out: Vec<PointSet> = comps.into_values().collect();
        out.sort();
        out
    }

    fn krull_dimension(&self) -> usize {
        self.maximal_chains().iter().map(|c| c.len() - 1).max().unwrap_or(0)
    }

    fn minimal_points(&self) -> Vec<usize> {
        self.points().filter(|&p| !self.covers.iter().any(|(_, q)| *q == p)).collect()
    }

    fn local_spectrum(&self, q: &usize) -> Result<(FinPoset, Vec<usize>)> {
        self.check_point(q)?;
        let members: Vec<usize> = self.points().filter(|&p| self.leq[p][*q]).collect();
        let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let ids: Vec<String> = members.iter().map(|&p| self.ids[p].clone()).collect();
        let covers: Vec<(usize, usize)> = self
            .covers
            .iter()
            .filter_map(|(a, b)| Some((*pos.get(a)?, *pos.get(b)?)))
            .collect();
        let index = ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok((FinPoset::from_indices(ids, covers, index)?, members))
    }

    fn codim_value(&self, d: &Vec<i64>, p: &usize) -> i64 {
        d[*p]
    }

    fn codim_points(&self, _d: &Vec<i64>) -> Vec<usize> {
        self.points().collect()
    }

    fn codim_range(&self, d: &Vec<i64>) -> (i64, i64) {
        (d.iter().copied().min().unwrap_or(0), d.iter().copied().max().unwrap_or(0))
    }

    fn validate_codim_fn(&self, d: &Vec<i64>) -> std::result::Result<(), (usize, usize)> {
        assert_eq!(d.len(), self.len(), "codimension function must be total");
        match self.covers.iter().find(|(p, q)| d[*q] != d[*p] + 1) {
            Some(&(p, q)) => Err((p, q)),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> PointSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn rejects_bad_covers() {
        assert!(FinPoset::new(&["a", "b"], &[("a", "b"), ("b", "a")]).is_err());
        assert!(FinPoset::new(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]).is_err());
        assert!(FinPoset::new(&["a"], &[("a", "z")]).is_err());
        assert!(FinPoset::new(&["a", "a"], &[]).is_err());
    }

    #[test]
    fn closure_and_generalizations() {
        let c = FinPoset::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert_eq!(c.specialization_closure(&[0]).unwrap(), set(&[0, 1, 2]));
        let v = FinPoset::new(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).unwrap();
        assert_eq!(v.immediate_generalizations(&2).unwrap(), vec![0, 1]);
        assert!(v.immediate_generalizations(&0).unwrap().is_empty());
    }

    #[test]
    fn components_dimension_minimals() {
        let p = FinPoset::new(&["a", "b", "c"], &[("a", "b")]).unwrap();
        assert_eq!(p.connected_components(), vec![set(&[0, 1]), set(&[2])]);
        assert!(FinPoset::new::<&str>(&[], &[]).unwrap().connected_components().is_empty());
        assert_eq!(FinPoset::chain(4).krull_dimension(), 3);
        let anti = FinPoset::new(&["a", "b", "c"], &[]).unwrap();
        assert_eq!(anti.krull_dimension(), 0);
        assert_eq!(anti.minimal_points(), vec![0, 1, 2]);
    }

    #[test]
    fn codim_validation() {
        let p = FinPoset::chain(2);
        assert_eq!(p.validate_codim_fn(&vec![0, 2]), Err((0, 1)));
        assert!(p.validate_codim_fn(&vec![0, 1]).is_ok());
        let one = FinPoset::chain(1);
        assert!(one.validate_codim_fn(&vec![5]).is_ok());
    }

    #[test]
    fn up_sets_of_v() {
        let v = FinPoset::new(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).unwrap();
        let ups = v.up_sets(20).unwrap();
        assert_eq!(ups, vec![set(&[]), set(&[0, 1, 2]), set(&[0, 2]), set(&[1, 2]), set(&[2])]);
    }

    #[test]
    fn open_closed_union_of_chains() {
        let p = FinPoset::new(&["a", "b", "c", "d"], &[("a", "b"), ("c", "d")]).unwrap();
        assert!(p.is_open_closed(&set(&[0, 1])).is_ok());
        let w = p.is_open_closed(&set(&[1])).unwrap_err();
        assert_eq!((w.inside, w.outside), (1, 0));
    }

    #[test]
    fn local_spectrum_is_down_set() {
        let v = FinPoset::new(&["a", "b", "c", "d"], &[("a", "c"), ("b", "c"), ("c", "d")]).unwrap();
        let (loc, emb) = v.local_spectrum(&2).unwrap();
        assert_eq!(emb, vec![0, 1, 2]);
        assert_eq!(loc.covers().len(), 2);
    }
}
