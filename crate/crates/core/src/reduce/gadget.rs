use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{Signed, Zero};

use super::sat::SatFormula;
use crate::error::Error;
use crate::model::{BidSpace, DiscretePrior, Dfpa, PureStrategy};
use crate::rational::{int, rat, Rational};

/// Index of value 0, 23/64 and 1 in the gadget value space.
pub const ZERO: usize = 0;
pub const MID: usize = 1;
pub const TOP: usize = 2;

/// Bid indices per value for the `false` encoding: (0, 1/7, 2/7).
pub const S0: [usize; 3] = [0, 1, 2];
/// Bid indices per value for the `true` encoding: (0, 2/7, 3/7).
pub const S1: [usize; 3] = [0, 2, 3];

pub fn gadget_bids() -> BidSpace {
    BidSpace::new(vec![int(0), rat(1, 7), rat(2, 7), rat(3, 7)]).expect("static bid space")
}

pub fn gadget_values() -> Vec<Rational> {
    vec![int(0), rat(23, 64), int(1)]
}

pub fn encoding(bit: bool) -> [usize; 3] {
    if bit {
        S1
    } else {
        S0
    }
}

/// Discount factors for the operator layers, outermost first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deltas {
    pub not: Rational,
    pub proj: Rational,
    pub or1: Rational,
    pub or2: Rational,
    pub out: Rational,
}

impl Deltas {
    /// Each factor at half of its strict upper bound.
    pub fn half_bounds() -> Self {
        let two = int(2);
        let not = rat(33, 1792) / &two;
        let proj = rat(33, 3584) * &not / &two;
        let or1 = rat(33, 3584) * &proj / &two;
        let or2 = &or1 / int(1792) / &two;
        let out = &or2 / int(672) / &two;
        Deltas { not, proj, or1, or2, out }
    }

    /// The per-layer margins; all are positive exactly when the ladder holds.
    pub fn margins(&self) -> [Rational; 6] {
        let two = int(2);
        [
            rat(33, 896) - &two * &self.not,
            rat(33, 1792) * &self.not - &two * &self.proj,
            rat(33, 1792) * &self.proj - &two * &self.or1,
            rat(1, 896) * &self.or1 - &two * &self.or2,
            rat(1, 896) * &self.or2 - rat(3, 4) * &self.out,
            &self.out / int(56),
        ]
    }

    pub fn check(&self) -> Result<(), Error> {
        let all = [&self.not, &self.proj, &self.or1, &self.or2, &self.out];
        if all.iter().any(|d| !d.is_positive()) {
            return Err(Error::Argument("every δ must be positive".into()));
        }
        let names = ["δ_NOT < 33/1792", "δ_PROJ < (33/3584)·δ_NOT", "δ_OR1 < (33/3584)·δ_PROJ", "δ_OR2 < δ_OR1/1792", "δ_OUT < δ_OR2/672"];
        for (m, name) in self.margins().iter().zip(names) {
            if !m.is_positive() {
                return Err(Error::Argument(format!("δ chain violates {name}")));
            }
        }
        Ok(())
    }
}

/// The discount factors together with the normaliser Δ and the resulting ε bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaChain {
    pub deltas: Deltas,
    /// Sum of all unnormalised point weights.
    pub total: Rational,
    /// Every ε-PBNE with ε below this encodes a satisfying assignment.
    pub eps_threshold: Rational,
}

impl DeltaChain {
    fn new(deltas: Deltas, total: Rational) -> Self {
        let eps_threshold = deltas.margins().into_iter().min().expect("six margins") / &total;
        DeltaChain { deltas, total, eps_threshold }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// Bidder `i` of a variable gadget; its value-1 entry never matters.
    InputMain { var: usize },
    /// Copies `j`, `k`, `ℓ`, one per occurrence slot.
    InputCopy { var: usize, copy: usize },
    Not { clause: usize, literal: usize },
    Proj { clause: usize, literal: usize },
    Or1 { clause: usize },
    Or2 { clause: usize },
    OutK { clause: usize },
    OutL { clause: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableGadget {
    pub main: usize,
    pub copies: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralWire {
    pub var: usize,
    pub negated: bool,
    /// Input copy consumed by this occurrence.
    pub copy: usize,
    pub not: Option<usize>,
    pub proj: Option<usize>,
}

impl LiteralWire {
    /// Bidder whose strategy carries the literal's truth value.
    pub fn output(&self) -> usize {
        self.proj.unwrap_or(self.copy)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseGadget {
    pub literals: Vec<LiteralWire>,
    pub or1: Option<usize>,
    pub or2: usize,
    pub out_k: usize,
    pub out_l: usize,
}

/// Bidder bookkeeping for a generated instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionMap {
    pub roles: Vec<Role>,
    pub variables: Vec<VariableGadget>,
    pub clauses: Vec<ClauseGadget>,
    pub chain: DeltaChain,
}

/// Unnormalised weighted points over sparse (bidder, value index) lists.
#[derive(Default)]
pub(crate) struct Points(BTreeMap<Vec<(usize, usize)>, Rational>);

impl Points {
    fn add(&mut self, mut at: Vec<(usize, usize)>, c: Rational) {
        at.sort();
        *self.0.entry(at).or_insert_with(Rational::zero) += c;
    }

    pub(crate) fn input(&mut self, main: usize, copies: [usize; 3]) {
        for c in copies {
            self.add(vec![(c, MID)], rat(33, 128));
        }
        for c in copies {
            self.add(vec![(main, MID), (c, MID)], int(2));
        }
        for c in copies {
            self.add(vec![(main, MID), (c, TOP)], int(1));
        }
    }

    pub(crate) fn not(&mut self, input: usize, not: usize, d: &Rational) {
        self.add(vec![(not, MID)], rat(33, 256) * d);
        self.add(vec![(not, TOP)], d.clone());
        self.add(vec![(input, TOP), (not, MID)], d.clone());
        self.add(vec![(input, TOP), (not, TOP)], d.clone());
    }

    pub(crate) fn proj(&mut self, not: usize, proj: usize, d: &Rational) {
        self.add(vec![(proj, MID)], rat(33, 256) * d);
        self.add(vec![(not, MID), (proj, MID)], d.clone());
        self.add(vec![(not, MID), (proj, TOP)], d.clone());
    }

    pub(crate) fn or(&mut self, a: usize, b: usize, out: usize, d: &Rational) {
        self.add(vec![(out, MID)], d / int(128));
        for x in [a, b] {
            self.add(vec![(x, MID), (out, MID)], d.clone());
            self.add(vec![(x, MID), (out, TOP)], d.clone());
        }
    }

    pub(crate) fn out(&mut self, or2: usize, k: usize, l: usize, d: &Rational) {
        self.add(vec![(k, TOP)], d.clone());
        self.add(vec![(l, TOP)], d.clone());
        self.add(vec![(or2, MID), (k, TOP), (l, TOP)], rat(3, 4) * d);
    }

    pub(crate) fn total(&self) -> Rational {
        self.0.values().sum()
    }

    /// Normalises by the total weight into an `n`-bidder instance.
    pub(crate) fn into_dfpa(self, n: usize) -> Dfpa {
        let total = self.total();
        let points = self
            .0
            .into_iter()
            .map(|(at, c)| {
                let mut idx = vec![ZERO; n];
                for (i, k) in at {
                    idx[i] = k;
                }
                (idx, c / &total)
            })
            .collect();
        let prior = DiscretePrior::from_points(vec![gadget_values(); n], points);
        Dfpa { prior, bids: gadget_bids() }
    }
}

struct Layout {
    roles: Vec<Role>,
    variables: Vec<VariableGadget>,
    clauses: Vec<ClauseGadget>,
}

fn layout(formula: &SatFormula) -> Layout {
    let mut roles = Vec::new();
    let fresh = |r: Role, roles: &mut Vec<Role>| {
        roles.push(r);
        roles.len() - 1
    };
    let mut variables = Vec::new();
    for var in 0..formula.num_vars {
        let main = fresh(Role::InputMain { var }, &mut roles);
        let copies = [0, 1, 2].map(|copy| fresh(Role::InputCopy { var, copy }, &mut roles));
        variables.push(VariableGadget { main, copies });
    }
    let mut used = vec![0usize; formula.num_vars];
    let mut clauses = Vec::new();
    for (clause, lits) in formula.clauses.iter().enumerate() {
        let mut literals = Vec::new();
        for (literal, &lit) in lits.iter().enumerate() {
            let var = lit.unsigned_abs() as usize - 1;
            let copy = variables[var].copies[used[var]];
            used[var] += 1;
            let negated = lit < 0;
            let (not, proj) = if negated {
                let not = fresh(Role::Not { clause, literal }, &mut roles);
                let proj = fresh(Role::Proj { clause, literal }, &mut roles);
                (Some(not), Some(proj))
            } else {
                (None, None)
            };
            literals.push(LiteralWire { var, negated, copy, not, proj });
        }
        let or1 = (lits.len() == 3).then(|| fresh(Role::Or1 { clause }, &mut roles));
        let or2 = fresh(Role::Or2 { clause }, &mut roles);
        let out_k = fresh(Role::OutK { clause }, &mut roles);
        let out_l = fresh(Role::OutL { clause }, &mut roles);
        clauses.push(ClauseGadget { literals, or1, or2, out_k, out_l });
    }
    Layout { roles, variables, clauses }
}

fn emit(lay: &Layout, d: &Deltas) -> Points {
    let mut pts = Points::default();
    for v in &lay.variables {
        pts.input(v.main, v.copies);
    }
    for c in &lay.clauses {
        for w in &c.literals {
            if let (Some(not), Some(proj)) = (w.not, w.proj) {
                pts.not(w.copy, not, &d.not);
                pts.proj(not, proj, &d.proj);
            }
        }
        let outs: Vec<usize> = c.literals.iter().map(LiteralWire::output).collect();
        match c.or1 {
            Some(or1) => {
                pts.or(outs[0], outs[1], or1, &d.or1);
                pts.or(or1, outs[2], c.or2, &d.or2);
            }
            None => pts.or(outs[0], outs[1], c.or2, &d.or2),
        }
        pts.out(c.or2, c.out_k, c.out_l, &d.out);
    }
    pts
}

/// Default chain: half-bound δ's, Δ from the generated weights.
pub fn default_deltas(formula: &SatFormula) -> DeltaChain {
    let deltas = Deltas::half_bounds();
    let total = emit(&layout(formula), &deltas).total();
    DeltaChain::new(deltas, total)
}

/// Builds the gadget auction; Δ and ε are always recomputed from the δ's.
pub fn build_auction(formula: &SatFormula, deltas: Option<&Deltas>) -> Result<(Dfpa, ReductionMap), Error> {
    let deltas = deltas.cloned().unwrap_or_else(Deltas::half_bounds);
    deltas.check()?;
    let lay = layout(formula);
    let pts = emit(&lay, &deltas);
    let chain = DeltaChain::new(deltas, pts.total());
    let n = lay.roles.len();
    let dfpa = pts.into_dfpa(n);
    debug_assert!((0..n).all(|i| dfpa.prior.marginal_at(i, MID).is_positive() || dfpa.prior.marginal_at(i, TOP).is_positive()));
    Ok((dfpa, ReductionMap { roles: lay.roles, variables: lay.variables, clauses: lay.clauses, chain }))
}

fn strategy(bids: [usize; 3]) -> PureStrategy {
    PureStrategy { bids: bids.to_vec() }
}

/// The intended profile for an assignment: inputs play their encoding and every
/// operator bidder plays the matching best response.
pub fn encode_profile(assignment: &[bool], map: &ReductionMap) -> Result<Vec<PureStrategy>, Error> {
    if assignment.len() != map.variables.len() {
        return Err(Error::Argument(format!(
            "assignment has {} entries, formula has {} variables",
            assignment.len(),
            map.variables.len()
        )));
    }
    let mut profile = vec![strategy(S0); map.roles.len()];
    for (v, g) in map.variables.iter().enumerate() {
        profile[g.main] = strategy(encoding(assignment[v]));
        for &c in &g.copies {
            profile[c] = strategy(encoding(assignment[v]));
        }
    }
    for c in &map.clauses {
        let mut bits = Vec::new();
        for w in &c.literals {
            let x = assignment[w.var];
            if let (Some(not), Some(proj)) = (w.not, w.proj) {
                profile[not] = strategy(if x { [0, 1, 1] } else { [0, 2, 3] });
                profile[proj] = strategy(encoding(!x));
            }
            bits.push(x != w.negated);
        }
        if let Some(or1) = c.or1 {
            profile[or1] = strategy(encoding(bits[0] || bits[1]));
        }
        let sat = bits.iter().any(|&b| b);
        profile[c.or2] = strategy(encoding(sat));
        if sat {
            profile[c.out_k] = strategy([0, 0, 1]);
            profile[c.out_l] = strategy([0, 0, 3]);
        } else {
            profile[c.out_k] = strategy([0, 0, 2]);
            profile[c.out_l] = strategy([0, 0, 3]);
        }
    }
    Ok(profile)
}

/// Reads each variable from its three copies; `None` when a copy plays neither
/// encoding or the copies disagree.
pub fn extract_assignment(profile: &[PureStrategy], map: &ReductionMap) -> Result<Option<Vec<bool>>, Error> {
    if profile.len() != map.roles.len() {
        return Err(Error::Profile(format!("profile has {} strategies, instance has {} bidders", profile.len(), map.roles.len())));
    }
    let mut out = Vec::with_capacity(map.variables.len());
    for g in &map.variables {
        let mut bit = None;
        for &c in &g.copies {
            let b = match profile[c].bids.as_slice() {
                s if s == S0 => false,
                s if s == S1 => true,
                _ => return Ok(None),
            };
            if bit.is_some_and(|x| x != b) {
                return Ok(None);
            }
            bit = Some(b);
        }
        out.push(bit.expect("three copies"));
    }
    Ok(Some(out))
}

/// Gadget families for isolated table checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GadgetKind {
    /// Bidders: main, three copies.
    Input,
    /// Bidders: input copy, NOT.
    Not,
    /// Bidders: NOT, PROJ.
    Proj,
    /// Bidders: two inputs, operator.
    Or,
    /// Bidders: OR2, output k, output ℓ.
    Out,
}

/// An instance holding one gadget's points only, padded with `extra`
/// bidders whose value is always 0. Returns the instance and Δ/δ, the
/// factor turning raw utilities into table units.
pub fn isolated_gadget(kind: GadgetKind, extra: usize) -> (Dfpa, Rational) {
    let one = int(1);
    let mut pts = Points::default();
    let n = match kind {
        GadgetKind::Input => {
            pts.input(0, [1, 2, 3]);
            4
        }
        GadgetKind::Not => {
            pts.not(0, 1, &one);
            2
        }
        GadgetKind::Proj => {
            pts.proj(0, 1, &one);
            2
        }
        GadgetKind::Or => {
            pts.or(0, 1, 2, &one);
            3
        }
        GadgetKind::Out => {
            pts.out(0, 1, 2, &one);
            3
        }
    };
    let scale = pts.total();
    (pts.into_dfpa(n + extra), scale)
}
