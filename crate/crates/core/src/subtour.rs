//! Subtour inequalities as pool and LP rows.
//!
//! A constraint is identified by its subtour set `S`, the set for which it
//! reads `x(S) <= |S| - 1`. Given the degree equation, the same inequality
//! can be written on the complement `T = V - S` as the anti-subtour
//! `x(T) + x(T : V - T) >= |T|`, which is sparser when `S` is large.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::hypergraph::{intersection_counts, Hypergraph, VertexSubset};
use crate::lp::{Relation, RowOrigin, RowSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Form {
    /// `x(S) <= |S| - 1`.
    Subtour,
    /// `x(T) + x(T : V - T) >= |T|` with `T = V - S`.
    AntiSubtour,
}

/// Identity of a subtour inequality. Built from the lexicographically
/// smaller of `S` and `V - S` plus a bit recording which one `S` was, so a
/// constraint and its anti-subtour rewrite share a key while `S` and
/// `V - S` as subtour sets do not.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    hash: u64,
    smaller: Vec<usize>,
    subtour_is_smaller: bool,
}

impl CanonicalKey {
    fn new(s: &VertexSubset) -> Self {
        let complement = s.complement();
        let subtour_is_smaller = s.members() <= complement.members();
        let smaller = if subtour_is_smaller {
            s.members().to_vec()
        } else {
            complement.members().to_vec()
        };
        let mut hasher = DefaultHasher::new();
        s.n().hash(&mut hasher);
        smaller.hash(&mut hasher);
        subtour_is_smaller.hash(&mut hasher);
        Self {
            hash: hasher.finish(),
            smaller,
            subtour_is_smaller,
        }
    }

    /// 64-bit digest, stable across runs.
    pub fn hash64(&self) -> u64 {
        self.hash
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubtourConstraint {
    n: usize,
    /// Members of `S`, or of `V - S` when `stored_complement` is set;
    /// whichever list is shorter.
    stored: Vec<usize>,
    stored_complement: bool,
    size: usize,
    form: Form,
    nonzeros: usize,
    key: CanonicalKey,
}

fn nonzeros_for(h: &Hypergraph, s: &VertexSubset, form: Form) -> usize {
    match form {
        Form::Subtour => intersection_counts(h, s.members())
            .into_iter()
            .filter(|&(_, k)| k >= 2)
            .count(),
        Form::AntiSubtour => intersection_counts(h, s.complement().members()).len(),
    }
}

impl SubtourConstraint {
    /// The subtour inequality on `S`, stored in `form`.
    pub fn new(h: &Hypergraph, s: &VertexSubset, form: Form) -> Result<Self> {
        let n = h.n();
        if s.n() != n {
            return Err(Error::InvalidArgument("subset drawn from a different vertex set".into()));
        }
        if s.len() < 2 || s.len() + 1 > n {
            return Err(Error::InvalidArgument(format!(
                "subtour set of size {} outside [2, {}]",
                s.len(),
                n.saturating_sub(1)
            )));
        }
        let (stored, stored_complement) = if 2 * s.len() <= n {
            (s.members().to_vec(), false)
        } else {
            (s.complement().members().to_vec(), true)
        };
        Ok(Self {
            n,
            stored,
            stored_complement,
            size: s.len(),
            form,
            nonzeros: nonzeros_for(h, s, form),
            key: CanonicalKey::new(s),
        })
    }

    pub fn subtour(h: &Hypergraph, s: &VertexSubset) -> Result<Self> {
        Self::new(h, s, Form::Subtour)
    }

    /// The anti-subtour inequality on `T`, i.e. the subtour on `V - T`.
    pub fn anti_subtour(h: &Hypergraph, t: &VertexSubset) -> Result<Self> {
        Self::new(h, &t.complement(), Form::AntiSubtour)
    }

    /// The subtour set `S`.
    pub fn subset(&self) -> VertexSubset {
        let stored = VertexSubset::from_sorted(self.n, self.stored.clone());
        if self.stored_complement {
            stored.complement()
        } else {
            stored
        }
    }

    /// `|S|`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn key(&self) -> &CanonicalKey {
        &self.key
    }

    /// Nonzero coefficients of the row in its current form.
    pub fn nonzeros(&self) -> usize {
        self.nonzeros
    }

    pub fn with_form(&self, h: &Hypergraph, form: Form) -> Self {
        if form == self.form {
            return self.clone();
        }
        let mut c = self.clone();
        c.form = form;
        c.nonzeros = nonzeros_for(h, &self.subset(), form);
        c
    }

    /// LP row for the constraint in its current form.
    pub fn row(&self, h: &Hypergraph) -> RowSpec {
        let s = self.subset();
        match self.form {
            Form::Subtour => RowSpec {
                coefs: intersection_counts(h, s.members())
                    .into_iter()
                    .filter(|&(_, k)| k >= 2)
                    .map(|(e, k)| (e, (k - 1) as f64))
                    .collect(),
                relation: Relation::Le,
                rhs: (s.len() - 1) as f64,
                origin: RowOrigin::Subtour,
                pool_key: Some(self.key.hash),
            },
            Form::AntiSubtour => {
                let t = s.complement();
                RowSpec {
                    coefs: intersection_counts(h, t.members())
                        .into_iter()
                        .map(|(e, k)| {
                            let crossing = usize::from(k < h.edge(e).len());
                            (e, (k - 1 + crossing) as f64)
                        })
                        .collect(),
                    relation: Relation::Ge,
                    rhs: t.len() as f64,
                    origin: RowOrigin::AntiSubtour,
                    pool_key: Some(self.key.hash),
                }
            }
        }
    }

    /// Amount by which `x` violates the row in its current form; negative
    /// when satisfied with slack.
    pub fn violation(&self, h: &Hypergraph, x: &[f64]) -> f64 {
        let row = self.row(h);
        let act: f64 = row.coefs.iter().map(|&(e, a)| a * x[e]).sum();
        match row.relation {
            Relation::Le => act - row.rhs,
            Relation::Ge => row.rhs - act,
            Relation::Eq => (act - row.rhs).abs(),
        }
    }
}

/// Picks whichever form has fewer nonzeros; ties go to the subtour form.
pub fn sparsest_form(c: &SubtourConstraint, h: &Hypergraph) -> SubtourConstraint {
    let sub = c.with_form(h, Form::Subtour);
    let anti = c.with_form(h, Form::AntiSubtour);
    if anti.nonzeros < sub.nonzeros {
        anti
    } else {
        sub
    }
}
