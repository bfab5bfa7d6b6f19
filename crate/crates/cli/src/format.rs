//! On-disk JSON documents. Every rational is a `"p/q"` or integer string.

use fpa_core::engine::{AffiliationWitness, BestResponseReport, VerifyReport};
use fpa_core::model::{
    BidSpace, BoxDensity, CfpaBox, CfpaIid, Dfpa, DfpaSym, DiscretePrior, IidMarginal, Instance, Interval, JumpStrategy,
    MixedStrategy, Profile, PureStrategy, SymmetricDiscretePrior, Symmetry, WeightedBox,
};
use fpa_core::rational::{format_rational, parse_rational};
use fpa_core::reduce::{DeltaChain, Deltas, Lift, ReductionMap, Role};
use fpa_core::{Error, Rational};
use serde::{Deserialize, Serialize};

fn r(s: &str) -> Result<Rational, Error> {
    parse_rational(s)
}

fn rs(v: &[String]) -> Result<Vec<Rational>, Error> {
    v.iter().map(|s| r(s)).collect()
}

fn s(x: &Rational) -> String {
    format_rational(x)
}

fn ss(v: &[Rational]) -> Vec<String> {
    v.iter().map(s).collect()
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PointFile {
    pub values: Vec<String>,
    pub mass: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BoxFile {
    /// `[lo, hi]` per bidder.
    pub sides: Vec<[String; 2]>,
    pub weight: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InstanceFile {
    Dfpa {
        bids: Vec<String>,
        value_spaces: Vec<Vec<String>>,
        support: Vec<PointFile>,
    },
    DfpaSym {
        bids: Vec<String>,
        groups: Vec<usize>,
        /// One value space per group.
        value_spaces: Vec<Vec<String>>,
        /// Canonical tuples, each group block non-increasing.
        support: Vec<PointFile>,
    },
    CfpaBox {
        bids: Vec<String>,
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        groups: Option<Vec<usize>>,
        boxes: Vec<BoxFile>,
    },
    CfpaIid {
        bids: Vec<String>,
        n: usize,
        breakpoints: Vec<String>,
        densities: Vec<String>,
    },
}

fn points_in(support: &[PointFile]) -> Result<Vec<(Vec<Rational>, Rational)>, Error> {
    support.iter().map(|p| Ok((rs(&p.values)?, r(&p.mass)?))).collect()
}

impl InstanceFile {
    pub fn to_instance(&self) -> Result<Instance, Error> {
        Ok(match self {
            InstanceFile::Dfpa { bids, value_spaces, support } => {
                let vs = value_spaces.iter().map(|v| rs(v)).collect::<Result<_, _>>()?;
                Instance::Dfpa(Dfpa {
                    prior: DiscretePrior::new(vs, points_in(support)?)?,
                    bids: BidSpace::new(rs(bids)?)?,
                })
            }
            InstanceFile::DfpaSym { bids, groups, value_spaces, support } => {
                let vs = value_spaces.iter().map(|v| rs(v)).collect::<Result<_, _>>()?;
                Instance::DfpaSym(DfpaSym {
                    prior: SymmetricDiscretePrior::new(groups.clone(), vs, points_in(support)?)?,
                    bids: BidSpace::new(rs(bids)?)?,
                })
            }
            InstanceFile::CfpaBox { bids, n, groups, boxes } => {
                let boxes = boxes
                    .iter()
                    .map(|b| {
                        let sides = b.sides.iter().map(|[lo, hi]| Ok(Interval::new(r(lo)?, r(hi)?))).collect::<Result<_, Error>>()?;
                        Ok(WeightedBox { sides, weight: r(&b.weight)? })
                    })
                    .collect::<Result<_, Error>>()?;
                let symmetry = groups.clone().map_or(Symmetry::None, Symmetry::Groups);
                Instance::CfpaBox(CfpaBox { density: BoxDensity::new(*n, boxes, symmetry)?, bids: BidSpace::new(rs(bids)?)? })
            }
            InstanceFile::CfpaIid { bids, n, breakpoints, densities } => Instance::CfpaIid(CfpaIid {
                n: *n,
                marginal: IidMarginal::new(rs(breakpoints)?, rs(densities)?)?,
                bids: BidSpace::new(rs(bids)?)?,
            }),
        })
    }

    pub fn from_instance(inst: &Instance) -> Self {
        match inst {
            Instance::Dfpa(d) => {
                let vs = d.prior.value_spaces();
                InstanceFile::Dfpa {
                    bids: ss(d.bids.bids()),
                    value_spaces: vs.iter().map(|v| ss(v)).collect(),
                    support: d
                        .prior
                        .points()
                        .iter()
                        .map(|(idx, m)| PointFile { values: idx.iter().enumerate().map(|(i, &k)| s(&vs[i][k])).collect(), mass: s(m) })
                        .collect(),
                }
            }
            Instance::DfpaSym(d) => {
                let p = &d.prior;
                let support = p
                    .reps()
                    .iter()
                    .map(|(idx, m)| PointFile {
                        values: idx
                            .iter()
                            .enumerate()
                            .map(|(i, &k)| s(&p.value_space(p.group_of(i).expect("bidder in range"))[k]))
                            .collect(),
                        mass: s(m),
                    })
                    .collect();
                InstanceFile::DfpaSym {
                    bids: ss(d.bids.bids()),
                    groups: p.group_sizes().to_vec(),
                    value_spaces: p.value_spaces().iter().map(|v| ss(v)).collect(),
                    support,
                }
            }
            Instance::CfpaBox(c) => InstanceFile::CfpaBox {
                bids: ss(c.bids.bids()),
                n: c.density.n(),
                groups: match c.density.symmetry() {
                    Symmetry::None => None,
                    Symmetry::Groups(g) => Some(g.clone()),
                },
                boxes: c
                    .density
                    .boxes()
                    .iter()
                    .map(|b| BoxFile { sides: b.sides.iter().map(|i| [s(&i.lo), s(&i.hi)]).collect(), weight: s(&b.weight) })
                    .collect(),
            },
            Instance::CfpaIid(c) => InstanceFile::CfpaIid {
                bids: ss(c.bids.bids()),
                n: c.n,
                breakpoints: ss(c.marginal.breakpoints()),
                densities: ss(c.marginal.densities()),
            },
        }
    }
}

/// Value space for strategy slot `k` of a discrete instance with `slots` strategies.
fn slot_values(inst: &Instance, slots: usize, k: usize) -> Result<Vec<Rational>, Error> {
    match inst {
        Instance::Dfpa(d) if slots == d.prior.n() => Ok(d.prior.value_space(k).to_vec()),
        Instance::DfpaSym(d) if slots == d.prior.group_count() => Ok(d.prior.value_space(k).to_vec()),
        Instance::DfpaSym(d) if slots == d.prior.n() => Ok(d.prior.value_space(d.prior.group_of(k)?).to_vec()),
        Instance::Dfpa(_) | Instance::DfpaSym(_) => {
            Err(Error::Profile(format!("{slots} strategies do not match the instance's bidders or groups")))
        }
        _ => Err(Error::Profile("value-indexed strategies need a discrete instance".into())),
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProfileFile {
    /// Per strategy, the bid played at each value (in value-space order).
    Pure { strategies: Vec<Vec<String>> },
    /// Per strategy and value, one weight per bid.
    Mixed { strategies: Vec<Vec<Vec<String>>> },
    /// Per strategy, the `|B| + 1` thresholds.
    Jump { strategies: Vec<Vec<String>> },
}

impl ProfileFile {
    pub fn to_profile(&self, inst: &Instance) -> Result<Profile, Error> {
        let bids = inst.bids();
        Ok(match self {
            ProfileFile::Pure { strategies } => Profile::Pure(
                strategies
                    .iter()
                    .enumerate()
                    .map(|(k, row)| {
                        let values = slot_values(inst, strategies.len(), k)?;
                        let idx = row
                            .iter()
                            .map(|b| {
                                let b = r(b)?;
                                bids.index_of(&b).ok_or_else(|| Error::Profile(format!("{b} is not in the bid space")))
                            })
                            .collect::<Result<_, Error>>()?;
                        PureStrategy::new(idx, &values, bids)
                    })
                    .collect::<Result<_, _>>()?,
            ),
            ProfileFile::Mixed { strategies } => Profile::Mixed(
                strategies
                    .iter()
                    .enumerate()
                    .map(|(k, rows)| {
                        let values = slot_values(inst, strategies.len(), k)?;
                        let rows = rows.iter().map(|row| rs(row)).collect::<Result<_, _>>()?;
                        MixedStrategy::new(rows, &values, bids)
                    })
                    .collect::<Result<_, _>>()?,
            ),
            ProfileFile::Jump { strategies } => Profile::Jump(
                strategies.iter().map(|t| JumpStrategy::new(rs(t)?, bids)).collect::<Result<_, _>>()?,
            ),
        })
    }

    pub fn from_profile(profile: &Profile, bids: &BidSpace) -> Self {
        match profile {
            Profile::Pure(p) => ProfileFile::Pure {
                strategies: p.iter().map(|st| st.bids.iter().map(|&b| s(bids.get(b))).collect()).collect(),
            },
            Profile::Mixed(p) => ProfileFile::Mixed {
                strategies: p.iter().map(|st| st.rows.iter().map(|row| ss(row)).collect()).collect(),
            },
            Profile::Jump(p) => ProfileFile::Jump { strategies: p.iter().map(|st| ss(st.thresholds())).collect() },
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct DeviationRecord {
    pub bidder: usize,
    pub value: String,
    pub bid: String,
    pub gain: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct VerifyRecord {
    pub passed: bool,
    pub eps: String,
    pub worst_gain: String,
    pub violations: Vec<DeviationRecord>,
}

impl VerifyRecord {
    pub fn new(r: &VerifyReport, bids: &BidSpace) -> Self {
        VerifyRecord {
            passed: r.passed(),
            eps: s(&r.eps),
            worst_gain: s(&r.worst_gain),
            violations: r
                .violations
                .iter()
                .map(|d| DeviationRecord { bidder: d.bidder, value: s(&d.value), bid: s(bids.get(d.bid)), gain: s(&d.gain) })
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct BestResponseRecord {
    pub argmax: Vec<String>,
    pub max_utility: String,
    /// Absent when every bid is optimal.
    pub margin: Option<String>,
}

impl BestResponseRecord {
    pub fn new(r: &BestResponseReport, bids: &BidSpace) -> Self {
        BestResponseRecord {
            argmax: r.argmax.iter().map(|&b| s(bids.get(b))).collect(),
            max_utility: s(&r.max_utility),
            margin: r.margin.as_ref().map(s),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct AffiliationRecord {
    pub affiliated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[Vec<String>; 2]>,
}

impl AffiliationRecord {
    pub fn new(w: Option<&AffiliationWitness>) -> Self {
        AffiliationRecord { affiliated: w.is_none(), witness: w.map(|w| [ss(&w.v), ss(&w.w)]) }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub delta_not: String,
    pub delta_proj: String,
    pub delta_or1: String,
    pub delta_or2: String,
    pub delta_out: String,
    /// Normaliser Δ; recomputed on load.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_threshold: Option<String>,
}

impl ParamsFile {
    pub fn new(c: &DeltaChain) -> Self {
        let d = &c.deltas;
        ParamsFile {
            delta_not: s(&d.not),
            delta_proj: s(&d.proj),
            delta_or1: s(&d.or1),
            delta_or2: s(&d.or2),
            delta_out: s(&d.out),
            total: Some(s(&c.total)),
            eps_threshold: Some(s(&c.eps_threshold)),
        }
    }

    pub fn deltas(&self) -> Result<Deltas, Error> {
        Ok(Deltas {
            not: r(&self.delta_not)?,
            proj: r(&self.delta_proj)?,
            or1: r(&self.delta_or1)?,
            or2: r(&self.delta_or2)?,
            out: r(&self.delta_out)?,
        })
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RoleRecord {
    pub bidder: usize,
    /// One of input-main, input-copy, not, proj, or1, or2, out-k, out-l.
    pub role: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variable: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub copy: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clause: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub literal: Option<usize>,
}

/// Role map plus the formula it came from, enough to rebuild the map.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub variables: usize,
    pub clauses: Vec<Vec<i32>>,
    pub params: ParamsFile,
    pub roles: Vec<RoleRecord>,
}

impl MapFile {
    pub fn new(formula: &fpa_core::reduce::SatFormula, map: &ReductionMap) -> Self {
        let roles = map
            .roles
            .iter()
            .enumerate()
            .map(|(bidder, role)| {
                let mut rec = RoleRecord { bidder, role: String::new(), variable: None, copy: None, clause: None, literal: None };
                let (name, var, copy, clause, literal) = match *role {
                    Role::InputMain { var } => ("input-main", Some(var), None, None, None),
                    Role::InputCopy { var, copy } => ("input-copy", Some(var), Some(copy), None, None),
                    Role::Not { clause, literal } => ("not", None, None, Some(clause), Some(literal)),
                    Role::Proj { clause, literal } => ("proj", None, None, Some(clause), Some(literal)),
                    Role::Or1 { clause } => ("or1", None, None, Some(clause), None),
                    Role::Or2 { clause } => ("or2", None, None, Some(clause), None),
                    Role::OutK { clause } => ("out-k", None, None, Some(clause), None),
                    Role::OutL { clause } => ("out-l", None, None, Some(clause), None),
                };
                rec.role = name.into();
                rec.variable = var;
                rec.copy = copy;
                rec.clause = clause;
                rec.literal = literal;
                rec
            })
            .collect();
        MapFile { variables: formula.num_vars, clauses: formula.clauses.clone(), params: ParamsFile::new(&map.chain), roles }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LiftFile {
    pub delta: String,
    pub rescale: String,
    /// Original values per strategy slot.
    pub values: Vec<Vec<String>>,
    pub instance: InstanceFile,
}

impl LiftFile {
    pub fn new(l: &Lift) -> Self {
        LiftFile {
            delta: s(&l.delta),
            rescale: s(&l.rescale),
            values: l.values.iter().map(|v| ss(v)).collect(),
            instance: InstanceFile::from_instance(&Instance::CfpaBox(l.instance.clone())),
        }
    }

    pub fn to_lift(&self) -> Result<Lift, Error> {
        let Instance::CfpaBox(instance) = self.instance.to_instance()? else {
            return Err(Error::Parse("lift file must hold a cfpa-box instance".into()));
        };
        Ok(Lift {
            instance,
            delta: r(&self.delta)?,
            rescale: r(&self.rescale)?,
            values: self.values.iter().map(|v| rs(v)).collect::<Result<_, _>>()?,
        })
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CertificateFile {
    pub thresholds: Vec<String>,
    pub eps_inner: String,
    pub delta: String,
    pub gamma: String,
    pub lipschitz: String,
    pub phi_lo: String,
    pub phi_hi: String,
    pub support_left: String,
    pub inverted_bids: Vec<String>,
    pub claimed: String,
    pub measured: String,
    pub holds: bool,
}

impl CertificateFile {
    pub fn new(c: &fpa_core::densify::DensifyCertificate) -> Self {
        let b = &c.bounds;
        CertificateFile {
            thresholds: ss(c.strategy.thresholds()),
            eps_inner: s(&c.eps_inner),
            delta: s(&b.delta),
            gamma: s(&b.gamma),
            lipschitz: s(&b.lipschitz),
            phi_lo: s(&b.phi_lo),
            phi_hi: s(&b.phi_hi),
            support_left: s(&b.support_left),
            inverted_bids: c.inverted.iter().map(|&k| s(c.bids.get(k))).collect(),
            claimed: s(&c.claimed),
            measured: s(&c.measured),
            holds: c.holds(),
        }
    }
}

/// One search-log line.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct LogLine {
    pub index: u64,
    pub hash: String,
    pub passed: bool,
    pub worst_gain: String,
}

impl LogLine {
    pub fn new(r: &fpa_core::search::LogRecord) -> Self {
        LogLine { index: r.index, hash: format!("{:016x}", r.hash), passed: r.passed, worst_gain: s(&r.worst_gain) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fpa_core::rational::rat;
    use proptest::prelude::*;

    fn roundtrip_instance(inst: &Instance) {
        let file = InstanceFile::from_instance(inst);
        let text = serde_json::to_string(&file).unwrap();
        let back: InstanceFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(&back.to_instance().unwrap(), inst);
    }

    #[test]
    fn unknown_fields_rejected() {
        let ok = r#"{"kind":"cfpa-iid","bids":["0","1/2"],"n":2,"breakpoints":["0","1"],"densities":["1"]}"#;
        assert!(serde_json::from_str::<InstanceFile>(ok).is_ok());
        let extra = r#"{"kind":"cfpa-iid","bids":["0","1/2"],"n":2,"breakpoints":["0","1"],"densities":["1"],"x":1}"#;
        assert!(serde_json::from_str::<InstanceFile>(extra).is_err());
        let point = r#"{"kind":"dfpa","bids":["0"],"value_spaces":[["1"]],"support":[{"values":["1"],"mass":"1","w":2}]}"#;
        assert!(serde_json::from_str::<InstanceFile>(point).is_err());
    }

    #[test]
    fn decimal_in_file_rejected() {
        let text = r#"{"kind":"cfpa-iid","bids":["0","0.5"],"n":2,"breakpoints":["0","1"],"densities":["1"]}"#;
        let f: InstanceFile = serde_json::from_str(text).unwrap();
        assert!(matches!(f.to_instance(), Err(Error::Parse(_))));
    }

    #[test]
    fn symmetric_and_box_roundtrip() {
        let sym = SymmetricDiscretePrior::new(
            vec![2, 1],
            vec![vec![rat(0, 1), rat(1, 2)], vec![rat(1, 1)]],
            vec![(vec![rat(1, 2), rat(0, 1), rat(1, 1)], rat(1, 4)), (vec![rat(1, 2), rat(1, 2), rat(1, 1)], rat(1, 2))],
        )
        .unwrap();
        roundtrip_instance(&Instance::DfpaSym(DfpaSym { prior: sym, bids: BidSpace::grid(3) }));
        let boxes = vec![
            WeightedBox { sides: vec![Interval::new(rat(0, 1), rat(1, 1)); 2], weight: rat(1, 4) },
            WeightedBox { sides: vec![Interval::new(rat(1, 2), rat(1, 1)); 2], weight: rat(3, 1) },
        ];
        let halved = boxes.iter().map(|b| WeightedBox { sides: b.sides.clone(), weight: &b.weight / rat(2, 1) }).collect();
        let density = BoxDensity::new(2, halved, Symmetry::Groups(vec![2])).unwrap();
        roundtrip_instance(&Instance::CfpaBox(CfpaBox { density, bids: BidSpace::grid(4) }));
        let plain = BoxDensity::new(2, boxes, Symmetry::None).unwrap();
        roundtrip_instance(&Instance::CfpaBox(CfpaBox { density: plain, bids: BidSpace::grid(2) }));
    }

    fn arb_dfpa() -> impl Strategy<Value = Instance> {
        (1usize..4, 1usize..4, 1i64..6).prop_flat_map(|(n, m, grid)| {
            let cells = m.pow(n as u32);
            (Just((n, m, grid)), proptest::collection::vec(0u32..4, cells))
        })
        .prop_filter_map("needs mass", |((n, m, grid), weights)| {
            let total: u32 = weights.iter().sum();
            if total == 0 {
                return None;
            }
            let values: Vec<Rational> = (0..m).map(|k| rat(k as i64 + 1, m as i64)).collect();
            let mut support = Vec::new();
            for (c, w) in weights.iter().enumerate() {
                if *w == 0 {
                    continue;
                }
                let mut rest = c;
                let tuple = (0..n)
                    .map(|_| {
                        let k = rest % m;
                        rest /= m;
                        values[k].clone()
                    })
                    .collect();
                support.push((tuple, rat(i64::from(*w), i64::from(total))));
            }
            let prior = DiscretePrior::new(vec![values; n], support).ok()?;
            Some(Instance::Dfpa(Dfpa { prior, bids: BidSpace::grid(grid) }))
        })
    }

    fn arb_iid() -> impl Strategy<Value = Instance> {
        (2usize..5, proptest::collection::vec(0i64..5, 1..5), 1i64..8).prop_filter_map("positive", |(n, dens, grid)| {
            let pieces = dens.len() as i64;
            let area: i64 = dens.iter().sum();
            if area == 0 {
                return None;
            }
            let breakpoints = (0..=pieces).map(|k| rat(k, pieces)).collect();
            let densities = dens.iter().map(|d| rat(d * pieces, area)).collect();
            let marginal = IidMarginal::new(breakpoints, densities).ok()?;
            Some(Instance::CfpaIid(CfpaIid { n, marginal, bids: BidSpace::grid(grid) }))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dfpa_files_roundtrip(inst in arb_dfpa()) {
            roundtrip_instance(&inst);
        }

        #[test]
        fn iid_files_roundtrip(inst in arb_iid()) {
            roundtrip_instance(&inst);
        }

        #[test]
        fn profile_files_roundtrip(inst in arb_dfpa(), seed in proptest::collection::vec(0usize..64, 12)) {
            let Instance::Dfpa(d) = &inst else { unreachable!() };
            let bids = &d.bids;
            let pure: Vec<PureStrategy> = (0..d.prior.n())
                .map(|i| {
                    let vals = d.prior.value_space(i);
                    let idx = (0..vals.len()).map(|k| seed[(i * 3 + k) % seed.len()] % bids.len()).collect();
                    PureStrategy { bids: idx }
                })
                .collect();
            let prof = Profile::Pure(pure);
            let file = ProfileFile::from_profile(&prof, bids);
            let back: ProfileFile = serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
            prop_assert_eq!(back.to_profile(&inst).unwrap(), prof.clone());
            let Profile::Pure(p) = &prof else { unreachable!() };
            let mixed = Profile::Mixed(p.iter().map(|s| s.to_mixed(bids.len())).collect());
            let file = ProfileFile::from_profile(&mixed, bids);
            prop_assert_eq!(file.to_profile(&inst).unwrap(), mixed);
        }

        #[test]
        fn jump_files_roundtrip(inst in arb_iid(), cuts in proptest::collection::vec(0i64..=16, 8)) {
            let bids = inst.bids();
            let mut t: Vec<Rational> = cuts[..bids.len() - 1].iter().map(|c| rat(*c, 16)).collect();
            t.sort();
            let mut thresholds = vec![rat(0, 1)];
            for (k, x) in t.into_iter().enumerate() {
                thresholds.push(x.max(bids.get(k + 1).clone()).max(thresholds.last().unwrap().clone()));
            }
            thresholds.push(rat(1, 1));
            let prof = Profile::Jump(vec![JumpStrategy::new(thresholds, bids).unwrap()]);
            let file = ProfileFile::from_profile(&prof, bids);
            prop_assert_eq!(file.to_profile(&inst).unwrap(), prof);
        }
    }
}
