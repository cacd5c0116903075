//! Verification suites run by `irrseq verify`.
//!
//! Each check prints as `PASS|FAIL <entry> <element> <detail>`; checks that
//! concern a whole entry use `-` as the element.

use std::fmt;

use irrseq::abelian::{
    davenport_constant, max_minimal_zero_sum, relative_davenport_group, savchev_chen_witness, subsums,
};
use irrseq::arith::gcd;
use irrseq::families::{CorpusEntry, ExpectedKind};
use irrseq::rings::{zmod_product_formula_value, FiniteRing};
use irrseq::search::{
    analyze_with, global_davenport_with, relative_davenport_with, verify_small_davenport, RecordStatus,
    SearchConfig,
};
use irrseq::AbelianGroup;

/// Suite names on the command line follow the statements they check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    /// `ε·D(Γ(H_a)) ≤ D_a ≤ Ψ(a) + D(Γ(H_a)) − 1` for every element.
    #[value(name = "theorem-1.2")]
    StructuralBounds,
    /// `Γ(H_a) ≅ U(R/Ann(a))`, and `D_a = Ψ(a) + D(U(R/Ann(a))) − 1` on
    /// principal ideal rings with a matching constructed witness.
    #[value(name = "theorem-1.3")]
    RingFormula,
    /// The gcd closed form on products of residue rings.
    #[value(name = "theorem-e")]
    ProductFormula,
    /// `D(S) = max_a D_a(S) + 1`, and units reduce to the unit group.
    #[value(name = "prop-1.1")]
    GlobalConstant,
    /// `D(S) = d(S) + 1`, with `d` checked on random multisets.
    #[value(name = "prop-3.1")]
    SmallConstant,
    /// Longest minimal zero-sum sequences reach every group element.
    #[value(name = "lemma-2.1")]
    FullSubsums,
    /// Long zero-sum-free sequences over `Z_n` have a shrinking multiplier.
    #[value(name = "lemma-2.4")]
    CyclicMultiplier,
    /// `⌈D(G)/2⌉ ≤ D_g(G) ≤ D(G) − 1` in groups.
    #[value(name = "theorem-a")]
    GroupRelative,
    All,
}

impl Suite {
    const EACH: [Suite; 8] = [
        Suite::StructuralBounds,
        Suite::RingFormula,
        Suite::ProductFormula,
        Suite::GlobalConstant,
        Suite::SmallConstant,
        Suite::FullSubsums,
        Suite::CyclicMultiplier,
        Suite::GroupRelative,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub passed: bool,
    pub entry: String,
    pub element: String,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} {} {}", self.entry, self.element, self.detail)
    }
}

pub struct Verifier {
    pub config: SearchConfig,
    pub seed: u64,
    checks: Vec<Check>,
}

impl Verifier {
    pub fn new(config: SearchConfig, seed: u64) -> Self {
        Verifier {
            config,
            seed,
            checks: Vec::new(),
        }
    }

    fn record(&mut self, passed: bool, entry: &CorpusEntry, element: impl Into<String>, detail: impl Into<String>) {
        self.checks.push(Check {
            passed,
            entry: entry.name.clone(),
            element: element.into(),
            detail: detail.into(),
        });
    }

    fn fail(&mut self, entry: &CorpusEntry, element: impl Into<String>, err: impl fmt::Display) {
        self.record(false, entry, element, format!("error: {err}"));
    }

    pub fn run(mut self, suite: Suite, entries: &[CorpusEntry]) -> Vec<Check> {
        let suites: Vec<Suite> = match suite {
            Suite::All => Suite::EACH.to_vec(),
            s => vec![s],
        };
        for s in suites {
            for (index, entry) in entries.iter().enumerate() {
                match s {
                    Suite::StructuralBounds => self.structural_bounds(entry),
                    Suite::RingFormula => self.ring_formula(entry),
                    Suite::ProductFormula => self.product_formula(entry),
                    Suite::GlobalConstant => self.global_constant(entry),
                    Suite::SmallConstant => self.small_constant(entry, index),
                    Suite::FullSubsums => self.full_subsums(entry),
                    Suite::CyclicMultiplier => self.cyclic_multiplier(entry),
                    Suite::GroupRelative => self.group_relative(entry),
                    Suite::All => unreachable!("expanded above"),
                }
            }
        }
        self.checks
    }

    fn structural_bounds(&mut self, entry: &CorpusEntry) {
        let s = &entry.semigroup;
        let report = match analyze_with(s, &self.config) {
            Ok(r) => r,
            Err(e) => return self.fail(entry, "-", e),
        };
        for r in &report.records {
            let b = &r.bounds;
            let ok = r.status == RecordStatus::Ok && b.lower <= r.exact && r.exact <= b.upper;
            let detail = format!("{} <= D_a = {} <= {} ({})", b.lower, r.exact, b.upper, r.status);
            self.record(ok, entry, s.label(r.element()), detail);
        }
        for e in &entry.expected {
            let got = report.record(e.element).map(|r| r.exact);
            let kind = match e.kind {
                ExpectedKind::ClosedForm => "closed form",
                ExpectedKind::Exhaustive => "exhaustive",
            };
            let detail = format!("expected D_a = {} ({kind}), found {got:?}", e.value);
            self.record(got == Some(e.value), entry, s.label(e.element), detail);
        }
    }

    fn ring_formula(&mut self, entry: &CorpusEntry) {
        let Some(ring) = &entry.ring else { return };
        let s = &entry.semigroup;
        let pir = ring.is_pir();
        for a in ring.elements() {
            let label = ring.label(a);
            match ring.gamma_unit_iso_check(a) {
                Ok(check) => {
                    let detail = format!(
                        "gamma factors {:?} vs residue units {:?}, units cover gamma: {:?}",
                        check.gamma_factors, check.unit_factors, check.units_cover_gamma
                    );
                    self.record(check.holds(), entry, label.clone(), detail);
                }
                Err(e) => self.fail(entry, label.clone(), e),
            }
            if !pir || ring.is_unit(a) {
                continue;
            }
            let outcome = ring.davenport_formula_value(a).and_then(|formula| {
                let exact = relative_davenport_with(s, a, &self.config)?.0.value;
                let built = ring.extremal_sequence_pir(a)?;
                Ok((formula, exact, built))
            });
            match outcome {
                Ok((formula, exact, built)) => {
                    let ok = formula == exact && built.len() == exact;
                    let detail = format!(
                        "formula {formula}, search {exact}, constructed {} of length {}",
                        s.format_sequence(&built),
                        built.len()
                    );
                    self.record(ok, entry, label, detail);
                }
                Err(e) => self.fail(entry, label, e),
            }
        }
    }

    fn product_formula(&mut self, entry: &CorpusEntry) {
        let (Some(ring), Some(moduli)) = (&entry.ring, &entry.moduli) else { return };
        for a in ring.elements().filter(|&a| !ring.is_unit(a)) {
            let parts = components(moduli, a);
            let outcome = zmod_product_formula_value(moduli, &parts).and_then(|closed| {
                let ring_value = ring.davenport_formula_value(a)?;
                let exact = relative_davenport_with(&entry.semigroup, a, &self.config)?.0.value;
                Ok((closed, ring_value, exact))
            });
            match outcome {
                Ok((closed, ring_value, exact)) => {
                    let detail = format!("gcd form {closed}, ring form {ring_value}, search {exact}");
                    self.record(closed == ring_value && ring_value == exact, entry, ring.label(a), detail);
                }
                Err(e) => self.fail(entry, ring.label(a), e),
            }
        }
    }

    fn global_constant(&mut self, entry: &CorpusEntry) {
        let s = &entry.semigroup;
        let outcome = global_davenport_with(s, &self.config).and_then(|global| {
            let mut best = 0;
            for a in s.elements() {
                best = best.max(relative_davenport_with(s, a, &self.config)?.0.value);
            }
            Ok((global.value, best))
        });
        match outcome {
            Ok((d, best)) => self.record(d == best + 1, entry, "-", format!("D = {d}, max D_a = {best}")),
            Err(e) => return self.fail(entry, "-", e),
        }
        let Ok(units) = s.units() else { return };
        let group = match AbelianGroup::from_semigroup(s.restrict(&units).expect("units are closed")) {
            Ok(g) => g,
            Err(e) => return self.fail(entry, "-", e),
        };
        for (i, &u) in units.iter().enumerate() {
            let in_s = relative_davenport_with(s, u, &self.config).map(|r| r.0.value);
            let in_units = relative_davenport_group(&group, i).map(|r| r.value);
            match (in_s, in_units) {
                (Ok(x), Ok(y)) => self.record(x == y, entry, s.label(u), format!("D_a(S) = {x}, D_a(U(S)) = {y}")),
                (Err(e), _) => self.fail(entry, s.label(u), e),
                (_, Err(e)) => self.fail(entry, s.label(u), e),
            }
        }
    }

    fn small_constant(&mut self, entry: &CorpusEntry, index: usize) {
        const SAMPLES: usize = 100;
        let s = &entry.semigroup;
        let global = match global_davenport_with(s, &self.config) {
            Ok(g) => g,
            Err(e) => return self.fail(entry, "-", e),
        };
        let d = global.value - 1;
        let seed = self.seed.wrapping_add(index as u64);
        match verify_small_davenport(s, d, SAMPLES, global.value + 3, seed) {
            Ok(()) => self.record(
                true,
                entry,
                "-",
                format!("D = {} = d + 1 with d = {d} ({SAMPLES} random multisets, seed {seed})", global.value),
            ),
            Err(e) => self.fail(entry, "-", e),
        }
    }

    fn group(&mut self, entry: &CorpusEntry) -> Option<AbelianGroup> {
        if !entry.is_group() {
            return None;
        }
        match AbelianGroup::from_semigroup(entry.semigroup.clone()) {
            Ok(g) => Some(g),
            Err(e) => {
                self.fail(entry, "-", e);
                None
            }
        }
    }

    fn full_subsums(&mut self, entry: &CorpusEntry) {
        let Some(g) = self.group(entry) else { return };
        match max_minimal_zero_sum(&g) {
            Ok(list) => {
                for t in list {
                    let reached = subsums(&g, &t).count_ones(..);
                    let detail = format!("{} reaches {reached} of {} elements", g.table().format_sequence(&t), g.order());
                    self.record(reached == g.order(), entry, "-", detail);
                }
            }
            Err(e) => self.fail(entry, "-", e),
        }
    }

    fn cyclic_multiplier(&mut self, entry: &CorpusEntry) {
        let Some(g) = self.group(entry) else { return };
        if g.invariant_factors().len() != 1 {
            return;
        }
        let n = g.order();
        // Identify the group with Z_n through a generator.
        let generator = g
            .table()
            .elements()
            .find(|&x| (1..n).all(|k| g.table().multiple(x, k) != g.identity()))
            .expect("cyclic groups have a generator");
        let mut residue = vec![0u64; n];
        for k in 1..=n {
            residue[g.table().multiple(generator, k)] = (k % n) as u64;
        }
        let mut checked = 0;
        let mut failed = false;
        for t in zero_sum_free_cyclic(n as u64).into_iter().filter(|t| 2 * t.len() > n) {
            checked += 1;
            let ok = savchev_chen_witness(n as u64, &t).is_ok_and(|b| {
                gcd(b, n as u64) == 1 && t.iter().map(|c| b * c % n as u64).sum::<u64>() < n as u64
            });
            if !ok {
                failed = true;
                let labels: Vec<String> = t
                    .iter()
                    .map(|&c| entry.semigroup.label(residue.iter().position(|&r| r == c).expect("bijection")))
                    .collect();
                self.record(false, entry, "-", format!("no multiplier for {}", labels.join(" ")));
            }
        }
        if !failed {
            self.record(
                true,
                entry,
                "-",
                format!("{checked} zero-sum-free sequences longer than n/2 each have a multiplier"),
            );
        }
    }

    fn group_relative(&mut self, entry: &CorpusEntry) {
        let Some(g) = self.group(entry) else { return };
        let d = match davenport_constant(&g) {
            Ok(d) => d,
            Err(e) => return self.fail(entry, "-", e),
        };
        for x in g.table().elements().filter(|&x| x != g.identity()) {
            match relative_davenport_group(&g, x) {
                Ok(r) => {
                    let ok = d.div_ceil(2) <= r.value && r.value < d;
                    let detail = format!("{} <= D_g = {} <= {}", d.div_ceil(2), r.value, d - 1);
                    self.record(ok, entry, g.table().label(x), detail);
                }
                Err(e) => self.fail(entry, g.table().label(x), e),
            }
        }
    }
}

/// Components of element `x` of `Z/n₁ × ⋯ × Z/n_r`, last component fastest.
fn components(moduli: &[usize], mut x: usize) -> Vec<usize> {
    let mut parts = vec![0; moduli.len()];
    for (i, &m) in moduli.iter().enumerate().rev() {
        parts[i] = x % m;
        x /= m;
    }
    parts
}

/// All zero-sum-free multisets of nonzero residues mod `n`.
fn zero_sum_free_cyclic(n: u64) -> Vec<Vec<u64>> {
    fn walk(n: u64, terms: &mut Vec<u64>, sums: &[bool], out: &mut Vec<Vec<u64>>) {
        let start = terms.last().copied().unwrap_or(1);
        for x in start..n {
            let mut next = sums.to_vec();
            next[x as usize] = true;
            for (s, _) in sums.iter().enumerate().filter(|(_, &hit)| hit) {
                next[(s + x as usize) % n as usize] = true;
            }
            if next[0] {
                continue;
            }
            terms.push(x);
            out.push(terms.clone());
            walk(n, terms, &next, out);
            terms.pop();
        }
    }
    let mut out = Vec::new();
    walk(n, &mut Vec::new(), &vec![false; n as usize], &mut out);
    out
}

/// Verifies a ring given directly rather than through the corpus.
pub fn ring_entry(name: &str, ring: FiniteRing) -> CorpusEntry {
    CorpusEntry {
        name: name.to_string(),
        source: "ring given on the command line",
        semigroup: ring.mult_semigroup(),
        ring: Some(ring),
        moduli: None,
        expected: Vec::new(),
    }
}
