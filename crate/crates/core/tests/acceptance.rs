//! End-to-end acceptance checks, one line per criterion.
//!
//! Runs single-threaded so the reported times are comparable across
//! machines. Every search in criteria 1 through 5 runs with the hereditary
//! audit enabled, and criterion 13 reports the audit totals.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use irrseq::abelian::{
    davenport_constant, max_minimal_zero_sum, relative_davenport_group, savchev_chen_witness, subsums,
};
use irrseq::arith::gcd;
use irrseq::families::{build_s1, build_s2, build_zn, corpus, zmod_mult, CorpusEntry};
use irrseq::rings::{zmod_product_element, zmod_product_formula_value, FiniteRing};
use irrseq::search::{
    analyze_with, element_bounds, global_davenport_with, is_irreducible, relative_davenport_with,
    shortest_equal_sum, verify_small_davenport, Epsilon, RecordStatus, SearchConfig, SearchStats,
};
use irrseq::{AbelianGroup, Execution, GreenStructure, Semigroup, Sequence};

type Outcome = Result<String, String>;

fn audited() -> SearchConfig {
    SearchConfig {
        audit_hereditary: true,
        execution: Execution::Sequential,
        ..SearchConfig::default()
    }
}

fn plain() -> SearchConfig {
    SearchConfig {
        execution: Execution::Sequential,
        ..SearchConfig::default()
    }
}

/// Hereditary-audit totals gathered while criteria 1–5 run.
#[derive(Default)]
struct Audit {
    stats: SearchStats,
}

impl Audit {
    fn relative(&mut self, s: &Semigroup, a: usize) -> Result<usize, String> {
        let (e, stats) = relative_davenport_with(s, a, &audited()).map_err(|e| e.to_string())?;
        self.absorb(&stats);
        Ok(e.value)
    }

    fn absorb(&mut self, stats: &SearchStats) {
        self.stats.nodes += stats.nodes;
        self.stats.hereditary_checks += stats.hereditary_checks;
        self.stats.hereditary_violations += stats.hereditary_violations;
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cyclic_half_values(audit: &mut Audit) -> Outcome {
    for n in [2, 4, 6, 8, 10] {
        let d = audit.relative(&build_zn(n), n / 2)?;
        ensure(d == n / 2, || format!("Z{n}: D_{} = {d}, expected {}", n / 2, n / 2))?;
    }
    Ok("D_{n/2}(Z_n) = n/2 for n = 2,4,6,8,10".into())
}

fn s1_sharpness(audit: &mut Audit) -> Outcome {
    let mut checked = 0;
    for n in [2, 4, 6] {
        for r in [1, 2] {
            let inst = build_s1(n, r).map_err(|e| e.to_string())?;
            let s = &inst.semigroup;
            let bounds = element_bounds(s).map_err(|e| e.to_string())?;
            for &a in &inst.designated {
                let d = audit.relative(s, a)?;
                let b = &bounds[a];
                ensure(d == n / 2 && 2 * d == b.d_gamma && b.epsilon == Epsilon::Half, || {
                    format!(
                        "{}: {} has D_a = {d}, D(Γ) = {}, ε = {}",
                        inst.name,
                        s.label(a),
                        b.d_gamma,
                        b.epsilon
                    )
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} designated elements with D_a = n/2 = D(Γ)/2, ε = 1/2"))
}

fn s2_sharpness(audit: &mut Audit) -> Outcome {
    for m in [3, 4, 5] {
        let inst = build_s2(m).map_err(|e| e.to_string())?;
        let s = &inst.semigroup;
        let a = inst.designated[0];
        let d = audit.relative(s, a)?;
        let b = &element_bounds(s).map_err(|e| e.to_string())?[a];
        let g = GreenStructure::new(s);
        let double = s.op(a, a);
        let strictly_below = g.leq(double, a) && !g.h_related(double, a);
        ensure(d == m && b.d_gamma == m && b.epsilon == Epsilon::One && strictly_below, || {
            format!("S2_{m}: D_a = {d}, D(Γ) = {}, ε = {}, (a+a) below a: {strictly_below}", b.d_gamma, b.epsilon)
        })?;
    }
    Ok("D_{x_m}(S2) = m = D(Γ) with ε = 1 and (a+a) strictly below a, m = 3,4,5".into())
}

fn sandwich(audit: &mut Audit, entries: &[CorpusEntry]) -> Outcome {
    let mut records = 0;
    for entry in entries {
        let report = analyze_with(&entry.semigroup, &audited()).map_err(|e| format!("{}: {e}", entry.name))?;
        audit.absorb(&report.stats);
        for r in &report.records {
            ensure(
                r.status == RecordStatus::Ok && r.bounds.lower <= r.exact && r.exact <= r.bounds.upper,
                || {
                    format!(
                        "{} {}: {} <= {} <= {} ({})",
                        entry.name,
                        entry.semigroup.label(r.element()),
                        r.bounds.lower,
                        r.exact,
                        r.bounds.upper,
                        r.status
                    )
                },
            )?;
            records += 1;
        }
        for e in &entry.expected {
            let got = report.record(e.element).map_or(0, |r| r.exact);
            ensure(got == e.value, || {
                format!("{}: expected D_{} = {}, found {got}", entry.name, entry.semigroup.label(e.element), e.value)
            })?;
        }
    }
    Ok(format!("{records} elements over {} semigroups, zero violations", entries.len()))
}

fn pir_rings(entries: &[CorpusEntry]) -> Vec<(&str, &FiniteRing)> {
    entries
        .iter()
        .filter_map(|e| e.ring.as_ref().map(|r| (e.name.as_str(), r)))
        .filter(|(_, r)| r.is_pir())
        .collect()
}

fn ring_equality(audit: &mut Audit, entries: &[CorpusEntry]) -> Outcome {
    let mut checked = 0;
    let rings = pir_rings(entries);
    for (name, ring) in &rings {
        let s = ring.mult_semigroup();
        for a in ring.elements().filter(|&a| !ring.is_unit(a)) {
            let formula = ring.davenport_formula_value(a).map_err(|e| format!("{name}: {e}"))?;
            let exact = audit.relative(&s, a)?;
            let t = ring
                .extremal_sequence_pir(a)
                .map_err(|e| format!("{name} {}: {e}", ring.label(a)))?;
            let valid = s.sigma(&t).map_err(|e| e.to_string())? == a
                && is_irreducible(&s, &t).map_err(|e| e.to_string())?;
            ensure(formula == exact && t.len() == exact && valid, || {
                format!(
                    "{name} {}: formula {formula}, search {exact}, constructed {} ({})",
                    ring.label(a),
                    t.len(),
                    s.format_sequence(&t)
                )
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} non-units over {} principal ideal rings", rings.len()))
}

fn gamma_iso(entries: &[CorpusEntry]) -> Outcome {
    let mut checked = 0;
    for entry in entries {
        let Some(ring) = &entry.ring else { continue };
        for a in ring.elements() {
            let check = ring.gamma_unit_iso_check(a).map_err(|e| e.to_string())?;
            ensure(check.holds(), || format!("{} {}: {check:?}", entry.name, ring.label(a)))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} elements, Γ(H_a) ≅ U(R/Ann(a)) throughout"))
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

fn product_formula() -> Outcome {
    let mut checked = 0;
    for moduli in [&[12usize][..], &[2, 4], &[3, 3], &[6]] {
        let ring = FiniteRing::zmod_product(moduli).map_err(|e| e.to_string())?;
        let s = ring.mult_semigroup();
        for a in ring.elements().filter(|&a| !ring.is_unit(a)) {
            let parts = components(moduli, a);
            let encoded = zmod_product_element(moduli, &parts).map_err(|e| e.to_string())?;
            ensure(encoded == a, || format!("{moduli:?}: element {a} encodes as {encoded}"))?;
            let closed = zmod_product_formula_value(moduli, &parts).map_err(|e| e.to_string())?;
            let ring_value = ring.davenport_formula_value(a).map_err(|e| e.to_string())?;
            let exact = relative_davenport_with(&s, a, &plain()).map_err(|e| e.to_string())?.0.value;
            ensure(closed == ring_value && ring_value == exact, || {
                format!("{moduli:?} {}: {closed} / {ring_value} / {exact}", ring.label(a))
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} non-units agree on all three routes"))
}

fn propositions(entries: &[CorpusEntry]) -> Outcome {
    for (idx, entry) in entries.iter().enumerate() {
        let s = &entry.semigroup;
        let global = global_davenport_with(s, &plain()).map_err(|e| format!("{}: {e}", entry.name))?;
        let d_small = global.value - 1;
        // Direct shrinking: the witness needs all its terms, random multisets never need more.
        let shrink = shortest_equal_sum(s, &global.witness).map_err(|e| e.to_string())?;
        ensure(shrink == d_small, || format!("{}: witness shrinks to {shrink}, d = {d_small}", entry.name))?;
        verify_small_davenport(s, d_small, 100, global.value + 3, 0x5eed + idx as u64)
            .map_err(|e| format!("{}: {e}", entry.name))?;

        let mut max_relative = 0;
        for a in s.elements() {
            let d = relative_davenport_with(s, a, &plain()).map_err(|e| e.to_string())?.0.value;
            max_relative = max_relative.max(d);
        }
        ensure(global.value == max_relative + 1, || {
            format!("{}: D = {}, max D_a = {max_relative}", entry.name, global.value)
        })?;

        if let Ok(units) = s.units() {
            let group = AbelianGroup::from_semigroup(s.restrict(&units).expect("units are closed"))
                .map_err(|e| e.to_string())?;
            for (i, &u) in units.iter().enumerate() {
                let in_s = relative_davenport_with(s, u, &plain()).map_err(|e| e.to_string())?.0.value;
                let in_u = relative_davenport_group(&group, i).map_err(|e| e.to_string())?.value;
                ensure(in_s == in_u, || format!("{} unit {}: {in_s} vs {in_u}", entry.name, s.label(u)))?;
            }
        }
    }
    Ok(format!("D = d + 1, D = max D_a + 1 and unit reduction hold on {} semigroups", entries.len()))
}

fn full_subsums() -> Outcome {
    let mut groups: Vec<AbelianGroup> = (2..=8).map(AbelianGroup::cyclic).collect();
    groups.push(AbelianGroup::direct_sum(&[2, 2]));
    groups.push(AbelianGroup::direct_sum(&[2, 4]));
    let mut sequences = 0;
    for g in &groups {
        let d = davenport_constant(g).map_err(|e| e.to_string())?;
        for t in max_minimal_zero_sum(g).map_err(|e| e.to_string())? {
            ensure(t.len() == d && subsums(g, &t).count_ones(..) == g.order(), || {
                format!("{:?}: {} does not reach every element", g.invariant_factors(), g.table().format_sequence(&t))
            })?;
            sequences += 1;
        }
    }
    Ok(format!("{sequences} minimal zero-sum sequences of maximal length reach the whole group"))
}

/// All zero-sum-free multisets over `Z_n`, by non-decreasing extension.
fn zero_sum_free_cyclic(n: u64) -> Vec<Vec<u64>> {
    fn walk(n: u64, terms: &mut Vec<u64>, sums: &BTreeSet<u64>, out: &mut Vec<Vec<u64>>) {
        let start = terms.last().copied().unwrap_or(1);
        for x in start..n {
            let mut next = sums.clone();
            next.insert(x);
            for s in sums {
                next.insert((s + x) % n);
            }
            if next.contains(&0) {
                continue;
            }
            terms.push(x);
            out.push(terms.clone());
            walk(n, terms, &next, out);
            terms.pop();
        }
    }
    let mut out = Vec::new();
    walk(n, &mut Vec::new(), &BTreeSet::new(), &mut out);
    out
}

fn residue_sums() -> Outcome {
    let mut checked = 0;
    for n in 3..=10u64 {
        for t in zero_sum_free_cyclic(n).into_iter().filter(|t| 2 * t.len() as u64 > n) {
            let b = savchev_chen_witness(n, &t).map_err(|e| format!("Z{n} {t:?}: {e}"))?;
            let total: u64 = t.iter().map(|c| b * c % n).sum();
            ensure(gcd(b, n) == 1 && total < n, || format!("Z{n} {t:?}: b = {b} gives {total}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} long zero-sum-free sequences over Z_3..Z_10 each have a multiplier"))
}

fn group_sandwich(entries: &[CorpusEntry]) -> Outcome {
    let mut checked = 0;
    for entry in entries.iter().filter(|e| e.is_group()) {
        let g = AbelianGroup::from_semigroup(entry.semigroup.clone()).map_err(|e| e.to_string())?;
        let d = davenport_constant(&g).map_err(|e| e.to_string())?;
        for x in g.table().elements().filter(|&x| x != g.identity()) {
            let dg = relative_davenport_group(&g, x).map_err(|e| e.to_string())?.value;
            ensure(d.div_ceil(2) <= dg && dg < d, || {
                format!("{} {}: D_g = {dg}, D = {d}", entry.name, entry.semigroup.label(x))
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} non-identity elements with ⌈D/2⌉ <= D_g <= D - 1"))
}

fn naive_irreducible(s: &Semigroup, t: &Sequence) -> bool {
    let sigma = s.sigma(t).expect("nonempty");
    t.sub_multisets().into_iter().filter(|v| v != t).all(|v| {
        if v.is_empty() {
            s.identity() != Some(sigma)
        } else {
            s.sigma(&v).expect("nonempty") != sigma
        }
    })
}

fn oracle_equivalence() -> Outcome {
    let semigroups = [
        zmod_mult(8),
        build_s2(3).expect("m > 2").semigroup,
        build_s1(4, 2).expect("n even").semigroup,
    ];
    let mut exhaustive = 0;
    for s in &semigroups {
        let n = s.order();
        let mut stack: Vec<Vec<usize>> = (0..n).map(|x| vec![x]).collect();
        while let Some(t) = stack.pop() {
            let seq = Sequence::from_terms(t.iter().copied());
            let fast = is_irreducible(s, &seq).map_err(|e| e.to_string())?;
            ensure(fast == naive_irreducible(s, &seq), || format!("mismatch on {seq}"))?;
            exhaustive += 1;
            if t.len() < 4 {
                for y in *t.last().expect("nonempty")..n {
                    let mut u = t.clone();
                    u.push(y);
                    stack.push(u);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10_000 {
        let s = &semigroups[rng.random_range(0..semigroups.len())];
        let len = rng.random_range(5..=10);
        let seq: Sequence = (0..len).map(|_| rng.random_range(0..s.order())).collect();
        let fast = is_irreducible(s, &seq).map_err(|e| e.to_string())?;
        ensure(fast == naive_irreducible(s, &seq), || format!("mismatch on {seq}"))?;
    }
    Ok(format!("{exhaustive} short multisets and 10000 random longer ones agree"))
}

fn hereditary(audit: &Audit) -> Outcome {
    let s = &audit.stats;
    ensure(s.hereditary_violations == 0 && s.hereditary_checks > 0, || {
        format!("{} violations in {} checks", s.hereditary_violations, s.hereditary_checks)
    })?;
    Ok(format!(
        "{} sub-multisets of {} enumerated irreducible multisets re-checked, zero violations",
        s.hereditary_checks, s.nodes
    ))
}

fn main() -> ExitCode {
    let entries = corpus();
    let mut audit = Audit::default();
    let mut failures = 0;
    let total = Instant::now();

    let mut run = |id: u32, title: &str, limit: Option<Duration>, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {id:>2} {title} [{elapsed:.2?}]: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {id:>2} {title} [{elapsed:.2?}]: {detail}");
            }
        }
    };

    let secs = Duration::from_secs;
    run(1, "relative constant of the involution in Z_n", Some(secs(10)), &mut || cyclic_half_values(&mut audit));
    run(2, "S1 lower-bound sharpness", Some(secs(30)), &mut || s1_sharpness(&mut audit));
    run(3, "S2 lower-bound sharpness", Some(secs(30)), &mut || s2_sharpness(&mut audit));
    run(4, "structural bounds on every corpus element", Some(secs(180)), &mut || sandwich(&mut audit, &entries));
    run(5, "exact value on principal ideal rings", Some(secs(120)), &mut || ring_equality(&mut audit, &entries));
    run(6, "Schützenberger group vs residue units", None, &mut || gamma_iso(&entries));
    run(7, "product-ring closed form", None, &mut product_formula);
    run(8, "global, small and unit-group constants", None, &mut || propositions(&entries));
    run(9, "subsums of maximal minimal zero-sum sequences", None, &mut full_subsums);
    run(10, "multiplier for long zero-sum-free cyclic sequences", None, &mut residue_sums);
    run(11, "group relative constants between D/2 and D-1", None, &mut || group_sandwich(&entries));
    run(12, "incremental irreducibility vs naive oracle", None, &mut oracle_equivalence);
    run(13, "hereditary audit", None, &mut || hereditary(&audit));

    let elapsed = total.elapsed();
    if elapsed > secs(300) {
        failures += 1;
        println!("FAIL full suite took {elapsed:.2?}, limit 300s");
    } else {
        println!("PASS full suite [{elapsed:.2?}]");
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
