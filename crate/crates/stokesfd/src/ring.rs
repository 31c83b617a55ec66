//! Linear polynomials in indexed indeterminates over Q(Re, h), with a
//! POT-lexicographic ranking, normal forms and Buchberger completion.
//!
//! One engine serves both algebras in this crate: differential polynomials
//! (index = derivative orders, operators act as a monoid — no inverses) and
//! difference polynomials (index = grid shifts, translations act invertibly).
//! The [`ShiftAlgebra`] mode selects the semantics.  In `Group` mode every
//! polynomial stands for its orbit under translations: representatives are
//! normalized so the componentwise minimal shift sits at the origin, and a
//! term is reducible by a leader whenever the connecting translation is
//! sign-aligned with it axis by axis.  Restricting to aligned translations
//! keeps every replacement term strictly below the one rewritten, which is
//! what makes reduction terminate on supports that extend below the origin.

use crate::coeff::ParamCoeff;
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// An indeterminate that knows its rank position (lower = ranked higher).
pub trait Indeterminate: Copy + Eq + Ord + std::fmt::Debug {
    fn position(self) -> u8;
    fn name(self) -> &'static str;
}

/// An indexed indeterminate: derivative orders or shift offsets attached to a
/// dependent variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term<I> {
    pub indet: I,
    pub shift: (i64, i64),
}

impl<I: Indeterminate> Term<I> {
    pub fn new(indet: I, a: i64, b: i64) -> Self {
        Term { indet, shift: (a, b) }
    }
}

/// Ranking: position over term, then lexicographic on the index pair with the
/// first axis dominant.  `Ord` is arranged so that `max` is the leader.
impl<I: Indeterminate> Ord for Term<I> {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .indet
            .position()
            .cmp(&self.indet.position())
            .then(self.shift.0.cmp(&other.shift.0))
            .then(self.shift.1.cmp(&other.shift.1))
    }
}

impl<I: Indeterminate> PartialOrd for Term<I> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Whether shifts act as a monoid (differential operators) or a group (grid
/// translations).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftAlgebra {
    Monoid,
    Group,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinPoly<I: Indeterminate> {
    terms: BTreeMap<Term<I>, ParamCoeff>,
}

impl<I: Indeterminate> LinPoly<I> {
    pub fn zero() -> Self {
        LinPoly { terms: BTreeMap::new() }
    }

    pub fn term(t: Term<I>, c: ParamCoeff) -> Self {
        let mut p = Self::zero();
        p.add_term(t, c);
        p
    }

    pub fn from_terms(ts: impl IntoIterator<Item = (Term<I>, ParamCoeff)>) -> Self {
        let mut p = Self::zero();
        for (t, c) in ts {
            p.add_term(t, c);
        }
        p
    }

    pub fn add_term(&mut self, t: Term<I>, c: ParamCoeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(t) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Term<I>, &ParamCoeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, t: &Term<I>) -> ParamCoeff {
        self.terms.get(t).cloned().unwrap_or_else(ParamCoeff::zero)
    }

    /// Highest term under the ranking.
    pub fn leader(&self) -> Option<&Term<I>> {
        self.terms.last_key_value().map(|(t, _)| t)
    }

    pub fn leading_coeff(&self) -> ParamCoeff {
        self.terms
            .last_key_value()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(ParamCoeff::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(*t, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(*t, c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LinPoly {
            terms: self.terms.iter().map(|(t, c)| (*t, c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &ParamCoeff) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LinPoly {
            terms: self.terms.iter().map(|(t, k)| (*t, k.mul(c))).collect(),
        }
    }

    /// Apply the shift/derivative monoid element sigma^(a,b) resp. d^(a,b).
    pub fn shifted(&self, s: (i64, i64)) -> Self {
        LinPoly {
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (Term::new(t.indet, t.shift.0 + s.0, t.shift.1 + s.1), c.clone()))
                .collect(),
        }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading_coeff();
        self.scale(&lc.inv().expect("leading coefficient nonzero"))
    }

    /// Componentwise minimum of all index pairs.
    pub fn min_corner(&self) -> Option<(i64, i64)> {
        if self.is_zero() {
            return None;
        }
        let a = self.terms.keys().map(|t| t.shift.0).min().unwrap();
        let b = self.terms.keys().map(|t| t.shift.1).min().unwrap();
        Some((a, b))
    }

    /// Translate so the minimal shift sits at the origin (Group mode only).
    pub fn translated_to_origin(&self) -> Self {
        match self.min_corner() {
            Some((a, b)) if a != 0 || b != 0 => self.shifted((-a, -b)),
            _ => self.clone(),
        }
    }

    fn normalized(&self, mode: ShiftAlgebra) -> Self {
        match mode {
            ShiftAlgebra::Monoid => self.monic(),
            ShiftAlgebra::Group => self.translated_to_origin().monic(),
        }
    }
}

fn axis_aligned(tp: i64, tl: i64, s: i64) -> bool {
    (tp >= 0 && tl >= 0 && s >= 0) || (tp <= 0 && tl <= 0 && s <= 0)
}

/// Can `lead` rewrite the term `t`?
pub fn divides<I: Indeterminate>(mode: ShiftAlgebra, lead: &Term<I>, t: &Term<I>) -> bool {
    if lead.indet != t.indet {
        return false;
    }
    let sa = t.shift.0 - lead.shift.0;
    let sb = t.shift.1 - lead.shift.1;
    match mode {
        ShiftAlgebra::Monoid => sa >= 0 && sb >= 0,
        ShiftAlgebra::Group => {
            axis_aligned(t.shift.0, lead.shift.0, sa) && axis_aligned(t.shift.1, lead.shift.1, sb)
        }
    }
}

/// Reduce `g` against `basis`: repeatedly rewrite the highest reducible term.
/// Deterministic (first dividing basis element in the given order wins) and
/// idempotent.
pub fn normal_form<I: Indeterminate>(
    g: &LinPoly<I>,
    basis: &[LinPoly<I>],
    mode: ShiftAlgebra,
) -> LinPoly<I> {
    let mut g = g.clone();
    'outer: loop {
        for (t, c) in g.terms.clone().iter().rev() {
            for b in basis {
                let Some(lt) = b.leader() else { continue };
                if divides(mode, lt, t) {
                    let s = (t.shift.0 - lt.shift.0, t.shift.1 - lt.shift.1);
                    let k = c.div(&b.leading_coeff()).expect("nonzero leading coeff");
                    g = g.sub(&b.shifted(s).scale(&k));
                    continue 'outer;
                }
            }
        }
        return g;
    }
}

/// Normal form with re-normalization: in `Group` mode a nonzero remainder is
/// translated back to the origin and reduced again until stable, so the result
/// is a canonical representative of the orbit.
pub fn normal_form_full<I: Indeterminate>(
    g: &LinPoly<I>,
    basis: &[LinPoly<I>],
    mode: ShiftAlgebra,
) -> LinPoly<I> {
    let mut r = normal_form(g, basis, mode);
    if mode == ShiftAlgebra::Monoid {
        return r;
    }
    loop {
        if r.is_zero() {
            return r;
        }
        let t = r.translated_to_origin();
        let r2 = normal_form(&t, basis, mode);
        if r2 == t {
            return t;
        }
        r = r2;
    }
}

/// S-polynomial at the least common shift multiple of the two leaders.
/// `None` when the leaders sit on different indeterminates.
pub fn s_polynomial<I: Indeterminate>(p: &LinPoly<I>, q: &LinPoly<I>) -> Option<LinPoly<I>> {
    let tp = *p.leader()?;
    let tq = *q.leader()?;
    if tp.indet != tq.indet {
        return None;
    }
    let u = (tp.shift.0.max(tq.shift.0), tp.shift.1.max(tq.shift.1));
    let sp = p
        .shifted((u.0 - tp.shift.0, u.1 - tp.shift.1))
        .scale(&p.leading_coeff().inv().unwrap());
    let sq = q
        .shifted((u.0 - tq.shift.0, u.1 - tq.shift.1))
        .scale(&q.leading_coeff().inv().unwrap());
    Some(sp.sub(&sq))
}

/// Sequential interreduction: replace one element at a time by its normal form
/// against the rest, restarting until stable.  Output sorted by leader
/// descending.
pub fn interreduce<I: Indeterminate>(
    basis: Vec<LinPoly<I>>,
    mode: ShiftAlgebra,
) -> Vec<LinPoly<I>> {
    let mut basis: Vec<_> = basis
        .into_iter()
        .filter(|b| !b.is_zero())
        .map(|b| b.normalized(mode))
        .collect();
    'outer: loop {
        for i in 0..basis.len() {
            let others: Vec<_> = basis
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, b)| b.clone())
                .collect();
            let mut r = normal_form(&basis[i], &others, mode);
            if !r.is_zero() {
                r = r.normalized(mode);
            }
            if r != basis[i] {
                basis = others;
                if !r.is_zero() {
                    basis.push(r);
                }
                continue 'outer;
            }
        }
        break;
    }
    basis.sort_by(|a, b| b.leader().unwrap().cmp(a.leader().unwrap()));
    basis
}

/// Buchberger completion: minimal reduced basis of the module generated by
/// `gens` under the ranking, deterministic pair processing (FIFO).
pub fn groebner<I: Indeterminate>(gens: &[LinPoly<I>], mode: ShiftAlgebra) -> Vec<LinPoly<I>> {
    let gens: Vec<_> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.normalized(mode))
        .collect();
    let mut basis = interreduce(gens, mode);
    let mut pairs: std::collections::VecDeque<(usize, usize)> = (0..basis.len())
        .flat_map(|i| ((i + 1)..basis.len()).map(move |j| (i, j)))
        .collect();
    while let Some((i, j)) = pairs.pop_front() {
        let Some(s) = s_polynomial(&basis[i], &basis[j]) else {
            continue;
        };
        let mut r = normal_form(&s, &basis, mode);
        if mode == ShiftAlgebra::Group {
            loop {
                if r.is_zero() {
                    break;
                }
                let t = r.translated_to_origin();
                let r2 = normal_form(&t, &basis, mode);
                if r2 == t {
                    r = t;
                    break;
                }
                r = r2;
            }
        }
        if r.is_zero() {
            continue;
        }
        let r = r.normalized(mode);
        let n = basis.len();
        basis.push(r);
        pairs.extend((0..n).map(|k| (k, n)));
    }
    interreduce(basis, mode)
}

/// Membership in the module generated by a completed basis.
pub fn is_member<I: Indeterminate>(
    g: &LinPoly<I>,
    basis: &[LinPoly<I>],
    mode: ShiftAlgebra,
) -> bool {
    normal_form_full(g, basis, mode).is_zero()
}

/// True when every S-polynomial of the set reduces to zero by the set itself.
pub fn is_groebner_basis<I: Indeterminate>(basis: &[LinPoly<I>], mode: ShiftAlgebra) -> bool {
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            if let Some(s) = s_polynomial(&basis[i], &basis[j]) {
                if !normal_form_full(&s, basis, mode).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// Module equality via mutual membership of generators.
pub fn same_module<I: Indeterminate>(
    gens_a: &[LinPoly<I>],
    gens_b: &[LinPoly<I>],
    mode: ShiftAlgebra,
) -> bool {
    let gb_a = groebner(gens_a, mode);
    let gb_b = groebner(gens_b, mode);
    gens_a.iter().all(|g| is_member(g, &gb_b, mode))
        && gens_b.iter().all(|g| is_member(g, &gb_a, mode))
}
