//! Finite ordinary categories, given by an explicit composition table.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identities: Vec<usize>,
    /// `table[g * arrows + f] = g∘f` whenever `dst(f) = src(g)`
    table: Vec<Option<usize>>,
}

impl FiniteCategory {
    /// Builds a category from its composition law and checks the unit and
    /// associativity laws.
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<usize>,
        mut compose: impl FnMut(usize, usize) -> usize,
    ) -> Result<Self> {
        let m = arrows.len();
        if identities.len() != objects.len() {
            return Err(Error::InvalidCategory("one identity per object required".into()));
        }
        for a in &arrows {
            if a.src >= objects.len() || a.dst >= objects.len() {
                return Err(Error::InvalidCategory(format!("arrow `{}` has an unknown endpoint", a.name)));
            }
        }
        let mut table = vec![None; m * m];
        for g in 0..m {
            for f in 0..m {
                if arrows[f].dst == arrows[g].src {
                    let h = compose(g, f);
                    if h >= m || arrows[h].src != arrows[f].src || arrows[h].dst != arrows[g].dst {
                        return Err(Error::InvalidCategory(format!(
                            "{} ∘ {} has the wrong endpoints",
                            arrows[g].name, arrows[f].name
                        )));
                    }
                    table[g * m + f] = Some(h);
                }
            }
        }
        let cat = Self {
            objects,
            arrows,
            identities,
            table,
        };
        cat.check_laws()?;
        Ok(cat)
    }

    fn check_laws(&self) -> Result<()> {
        for (o, &i) in self.identities.iter().enumerate() {
            if i >= self.arrows.len() || self.arrows[i].src != o || self.arrows[i].dst != o {
                return Err(Error::InvalidCategory(format!("bad identity for `{}`", self.objects[o])));
            }
        }
        for f in 0..self.arrows.len() {
            let (s, t) = (self.arrows[f].src, self.arrows[f].dst);
            if self.compose(self.identities[t], f) != Some(f) || self.compose(f, self.identities[s]) != Some(f) {
                return Err(Error::InvalidCategory(format!("unit law fails at `{}`", self.arrows[f].name)));
            }
        }
        for f in 0..self.arrows.len() {
            for g in self.out_of(self.arrows[f].dst) {
                for h in self.out_of(self.arrows[g].dst) {
                    let lhs = self.compose(h, self.compose(g, f).unwrap_or(usize::MAX));
                    let rhs = self.compose(self.compose(h, g).unwrap_or(usize::MAX), f);
                    if lhs != rhs {
                        return Err(Error::InvalidCategory(format!(
                            "associativity fails at ({}, {}, {})",
                            self.arrows[h].name, self.arrows[g].name, self.arrows[f].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The category with one object and one arrow.
    pub fn terminal() -> Self {
        Self::monoid(&["1"], |_, _| 0).expect("terminal category")
    }

    /// Objects only.
    pub fn discrete(labels: &[&str]) -> Self {
        let objects: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let arrows = (0..objects.len())
            .map(|i| Arrow {
                name: format!("1_{}", objects[i]),
                src: i,
                dst: i,
            })
            .collect();
        Self::new(objects.clone(), arrows, (0..objects.len()).collect(), |g, _| g).expect("discrete category")
    }

    /// A one-object category from a monoid whose identity is element 0.
    pub fn monoid(elements: &[&str], mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let arrows = elements
            .iter()
            .map(|e| Arrow {
                name: e.to_string(),
                src: 0,
                dst: 0,
            })
            .collect();
        Self::new(vec!["*".into()], arrows, vec![0], mul)
    }

    /// The poset generated by `relations` (pairs `a ≤ b`), one arrow per
    /// comparable pair.
    pub fn poset(labels: &[&str], relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::InvalidCategory("relation mentions an unknown element".into()));
            }
            le[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if le[i][k] && le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && le[i][j] && le[j][i] {
                    return Err(Error::InvalidCategory("relations are not antisymmetric".into()));
                }
            }
        }
        let mut arrows = Vec::new();
        let mut index = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                if le[i][j] {
                    index.insert((i, j), arrows.len());
                    arrows.push(Arrow {
                        name: format!("{}≤{}", labels[i], labels[j]),
                        src: i,
                        dst: j,
                    });
                }
            }
        }
        let identities = (0..n).map(|i| index[&(i, i)]).collect();
        let ends: Vec<(usize, usize)> = arrows.iter().map(|a| (a.src, a.dst)).collect();
        Self::new(
            labels.iter().map(|s| s.to_string()).collect(),
            arrows,
            identities,
            |g, f| index[&(ends[f].0, ends[g].1)],
        )
    }

    /// The free category (all paths) on a quiver without oriented cycles.
    pub fn free_on_quiver(labels: &[&str], edges: &[(&str, usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut paths: Vec<Vec<usize>> = (0..n).map(|_| Vec::new()).collect();
        let mut ends: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
        let mut frontier: Vec<usize> = Vec::new();
        for (e, &(_, s, t)) in edges.iter().enumerate() {
            if s >= n || t >= n {
                return Err(Error::InvalidCategory("edge mentions an unknown vertex".into()));
            }
            frontier.push(paths.len());
            paths.push(vec![e]);
            ends.push((s, t));
        }
        while let Some(p) = frontier.pop() {
            if paths[p].len() > edges.len() {
                return Err(Error::InvalidCategory("quiver has an oriented cycle".into()));
            }
            for (e, &(_, s, t)) in edges.iter().enumerate() {
                if s == ends[p].1 {
                    let mut q = paths[p].clone();
                    q.push(e);
                    frontier.push(paths.len());
                    paths.push(q);
                    ends.push((ends[p].0, t));
                }
            }
        }
        let mut index = BTreeMap::new();
        let mut arrows = Vec::new();
        for (k, p) in paths.iter().enumerate() {
            let name = if p.is_empty() {
                format!("1_{}", labels[ends[k].0])
            } else {
                p.iter().rev().map(|&e| edges[e].0).collect::<Vec<_>>().join("∘")
            };
            index.insert((ends[k].0, p.clone()), k);
            arrows.push(Arrow {
                name,
                src: ends[k].0,
                dst: ends[k].1,
            });
        }
        Self::new(
            labels.iter().map(|s| s.to_string()).collect(),
            arrows,
            (0..n).collect(),
            |g, f| {
                let mut p = paths[f].clone();
                p.extend_from_slice(&paths[g]);
                index[&(ends[f].0, p)]
            },
        )
    }

    /// Two objects and two parallel arrows between them.
    pub fn parallel_pair() -> Self {
        Self::free_on_quiver(&["a", "b"], &[("u", 0, 1), ("v", 0, 1)]).expect("parallel pair")
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, f: usize) -> &Arrow {
        &self.arrows[f]
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn object_index(&self, label: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == label)
            .ok_or_else(|| Error::UnknownObject(label.to_string()))
    }

    /// `g∘f`, if composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        let m = self.arrows.len();
        if g >= m || f >= m {
            return None;
        }
        self.table[g * m + f]
    }

    /// Arrows `a → b` in index order.
    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&f| self.arrows[f].src == a && self.arrows[f].dst == b)
            .collect()
    }

    fn out_of(&self, a: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&f| self.arrows[f].src == a).collect()
    }

    pub fn opposite(&self) -> Self {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                name: a.name.clone(),
                src: a.dst,
                dst: a.src,
            })
            .collect();
        Self::new(self.objects.clone(), arrows, self.identities.clone(), |g, f| {
            self.compose(f, g).expect("composable in the opposite")
        })
        .expect("opposite of a valid category")
    }

    /// The three filteredness conditions: nonempty, every pair of objects
    /// has a cocone, every parallel pair is coequalized by some arrow.
    pub fn check_filtered(&self) -> Result<()> {
        if self.objects.is_empty() {
            return Err(Error::NotFiltered("the category is empty".into()));
        }
        let n = self.objects.len();
        for i in 0..n {
            for j in 0..n {
                let joined = (0..n).any(|k| !self.hom(i, k).is_empty() && !self.hom(j, k).is_empty());
                if !joined {
                    return Err(Error::NotFiltered(format!(
                        "objects `{}` and `{}` have no common target",
                        self.objects[i], self.objects[j]
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let hom = self.hom(i, j);
                for &u in &hom {
                    for &v in &hom {
                        let ok = self.out_of(j).into_iter().any(|w| self.compose(w, u) == self.compose(w, v));
                        if !ok {
                            return Err(Error::NotFiltered(format!(
                                "parallel arrows `{}` and `{}` are not coequalized",
                                self.arrows[u].name, self.arrows[v].name
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// An object receiving an arrow from every object, with all parallel
    /// arrows into it equal, if one exists.
    pub fn terminal_object(&self) -> Option<usize> {
        (0..self.objects.len()).find(|&t| (0..self.objects.len()).all(|a| self.hom(a, t).len() == 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quiver_paths() {
        let c = FiniteCategory::free_on_quiver(&["a", "b", "c"], &[("f", 0, 1), ("g", 1, 2)]).unwrap();
        assert_eq!(c.arrows().len(), 6);
        assert_eq!(c.hom(0, 2).len(), 1);
        let f = c.hom(0, 1)[0];
        let g = c.hom(1, 2)[0];
        assert_eq!(c.compose(g, f), Some(c.hom(0, 2)[0]));
        assert_eq!(c.arrow(c.hom(0, 2)[0]).name, "g∘f");
        assert!(FiniteCategory::free_on_quiver(&["a"], &[("e", 0, 0)]).is_err());
    }

    #[test]
    fn posets_and_squares() {
        let sq = FiniteCategory::poset(&["0", "x", "y", "1"], &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(sq.hom(0, 3).len(), 1);
        assert_eq!(sq.terminal_object(), Some(3));
        sq.check_filtered().unwrap();
        assert!(FiniteCategory::poset(&["a", "b"], &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn filteredness() {
        let idem = FiniteCategory::monoid(&["1", "e"], |a, b| a | b).unwrap();
        idem.check_filtered().unwrap();
        let err = FiniteCategory::parallel_pair().check_filtered().unwrap_err();
        assert!(matches!(err, Error::NotFiltered(_)));
        let err = FiniteCategory::discrete(&["a", "b"]).check_filtered().unwrap_err();
        assert!(matches!(err, Error::NotFiltered(_)));
    }

    #[test]
    fn rejects_non_associative_table() {
        // 0 is the identity; a∘b must be associative
        let r = FiniteCategory::monoid(&["1", "a", "b"], |x, y| match (x, y) {
            (0, y) => y,
            (x, 0) => x,
            (1, 1) => 2,
            (1, 2) => 1,
            (2, 1) => 2,
            _ => 2,
        });
        assert!(r.is_err());
    }

    #[test]
    fn opposite_is_involutive() {
        let c = FiniteCategory::free_on_quiver(&["a", "b"], &[("f", 0, 1)]).unwrap();
        assert_eq!(c.opposite().opposite(), c);
        assert_eq!(c.opposite().hom(1, 0).len(), 1);
    }
}
