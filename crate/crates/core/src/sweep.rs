//! Exhaustive consistency sweep over small monomial ideals.
//!
//! For every `(x, y)`-primary monomial ideal whose minimal generators have
//! degree at most `D`, and every monomial `f` of degree at most `D + 2`, the
//! sweep cross-checks the slope-formula route against the staircase oracle
//! and the Hilbert-Kunz membership test against direct divisibility.
//! Independent ideals may run on several threads; tallies are plain counts,
//! so the report does not depend on scheduling.

use rayon::prelude::*;

use crate::extension::interleave_check;
use crate::graded_p1::{
    ehk, ehk_oracle, membership_direct, membership_via_hk, syzygy_hn, Monomial, MonomialIdeal,
};

/// All minimal `(x, y)`-primary monomial ideals with every generator of
/// degree `≤ max_degree`, in lexicographic order of generator lists.
pub fn enumerate_ideals(max_degree: u32) -> Vec<MonomialIdeal> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for b in 1..=max_degree {
        stack.push(Monomial::new(0, b));
        extend_staircase(max_degree, &mut stack, &mut out);
        stack.pop();
    }
    out
}

fn extend_staircase(max_degree: u32, stack: &mut Vec<Monomial>, out: &mut Vec<MonomialIdeal>) {
    let last = *stack.last().expect("staircase starts with a pure y power");
    for b in (0..last.b).rev() {
        for a in last.a + 1..=max_degree - b {
            stack.push(Monomial::new(a, b));
            if b == 0 {
                out.push(
                    MonomialIdeal::minimalize(stack.iter().copied())
                        .expect("staircase is minimal and primary"),
                );
            } else {
                extend_staircase(max_degree, stack, out);
            }
            stack.pop();
        }
    }
}

/// All monomials of degree `≤ max_degree`.
pub fn monomials_up_to(max_degree: u32) -> Vec<Monomial> {
    (0..=max_degree)
        .flat_map(|d| (0..=d).map(move |a| Monomial::new(a, d - a)))
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub max_degree: u32,
    pub ideals: u64,
    /// `ehk` and `ehk_oracle` differ, or the oracle is inconsistent.
    pub oracle_mismatches: u64,
    /// `e_HK(I) ≤ 0` for a proper ideal.
    pub nonpositive_ehk: u64,
    pub pairs: u64,
    pub members: u64,
    pub membership_mismatches: u64,
    /// `f ∈ I` but `(I, f) ≠ I`.
    pub ideal_changes: u64,
    /// Pairs with `f ∉ I` whose minimal generator count grows by exactly one.
    pub growth_pairs: u64,
    pub drop_violations: u64,
    pub interleave_violations: u64,
    /// `e_HK((I, f)) > e_HK(I)`.
    pub monotonicity_violations: u64,
}

impl SweepReport {
    pub fn violations(&self) -> u64 {
        self.oracle_mismatches
            + self.nonpositive_ehk
            + self.membership_mismatches
            + self.ideal_changes
            + self.drop_violations
            + self.interleave_violations
            + self.monotonicity_violations
    }

    fn merge(mut self, other: SweepReport) -> SweepReport {
        self.ideals += other.ideals;
        self.oracle_mismatches += other.oracle_mismatches;
        self.nonpositive_ehk += other.nonpositive_ehk;
        self.pairs += other.pairs;
        self.members += other.members;
        self.membership_mismatches += other.membership_mismatches;
        self.ideal_changes += other.ideal_changes;
        self.growth_pairs += other.growth_pairs;
        self.drop_violations += other.drop_violations;
        self.interleave_violations += other.interleave_violations;
        self.monotonicity_violations += other.monotonicity_violations;
        self
    }
}

/// Runs every ideal-level and pair-level check for one ideal.
pub fn check_ideal(ideal: &MonomialIdeal, elements: &[Monomial]) -> SweepReport {
    let mut report = SweepReport {
        ideals: 1,
        ..SweepReport::default()
    };
    let value = ehk(ideal);
    if ehk_oracle(ideal).map_or(true, |o| o != value) {
        report.oracle_mismatches += 1;
    }
    if !value.is_positive() {
        report.nonpositive_ehk += 1;
    }
    for f in elements {
        let pair = check_pair(ideal, f);
        report = report.merge(pair);
    }
    report
}

/// Pair-level checks for `(I, f)`; the returned report has `ideals = 0`.
pub fn check_pair(ideal: &MonomialIdeal, f: &Monomial) -> SweepReport {
    let mut report = SweepReport {
        pairs: 1,
        ..SweepReport::default()
    };
    let direct = membership_direct(ideal, f);
    if direct {
        report.members += 1;
    }
    if membership_via_hk(ideal, f) != direct {
        report.membership_mismatches += 1;
    }
    let Ok(extended) = ideal.with_element(*f) else {
        // f = 1: the unit ideal
        return report;
    };
    if direct {
        if &extended != ideal {
            report.ideal_changes += 1;
        }
        return report;
    }
    if ehk(&extended) > ehk(ideal) {
        report.monotonicity_violations += 1;
    }
    if extended.len() == ideal.len() + 1 {
        report.growth_pairs += 1;
        let m = i64::try_from(f.degree()).expect("small degree");
        let small = syzygy_hn(ideal, m);
        let large = syzygy_hn(&extended, m);
        if large.mu_hk() >= small.mu_hk() {
            report.drop_violations += 1;
        }
        let holds = interleave_check(&small.expand_slopes(), &large.expand_slopes(), false)
            .unwrap_or(false);
        if !holds {
            report.interleave_violations += 1;
        }
    }
    report
}

/// Sweeps all ideals with generator degree `≤ max_degree` against all
/// monomials of degree `≤ max_degree + 2`, on at most `jobs` threads
/// (`None` lets rayon decide).
pub fn run_sweep(max_degree: u32, jobs: Option<usize>) -> SweepReport {
    let ideals = enumerate_ideals(max_degree);
    let elements = monomials_up_to(max_degree + 2);
    let work = || {
        ideals
            .par_iter()
            .map(|i| check_ideal(i, &elements))
            .reduce(SweepReport::default, SweepReport::merge)
    };
    let mut report = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map(|pool| pool.install(work))
            .unwrap_or_else(|_| work()),
        None => work(),
    };
    report.max_degree = max_degree;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Brute force: every subset of monomials in the degree box that forms a
    /// minimal primary staircase.
    fn brute_force_count(max_degree: u32) -> usize {
        let monos: Vec<Monomial> = monomials_up_to(max_degree)
            .into_iter()
            .filter(|m| !m.is_one())
            .collect();
        let mut seen = HashSet::new();
        for mask in 1u64..(1u64 << monos.len()) {
            let chosen: Vec<Monomial> = (0..monos.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| monos[i])
                .collect();
            if let Ok(ideal) = MonomialIdeal::minimalize(chosen) {
                if ideal
                    .gens()
                    .iter()
                    .all(|g| g.degree() <= u64::from(max_degree))
                {
                    seen.insert(ideal);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for d in 1..=3 {
            let ideals = enumerate_ideals(d);
            let unique: HashSet<_> = ideals.iter().cloned().collect();
            assert_eq!(unique.len(), ideals.len());
            assert_eq!(ideals.len(), brute_force_count(d), "degree {d}");
        }
        assert_eq!(enumerate_ideals(1).len(), 1);
    }

    #[test]
    fn monomial_count() {
        assert_eq!(monomials_up_to(0), vec![Monomial::new(0, 0)]);
        assert_eq!(monomials_up_to(10).len(), 66);
    }

    #[test]
    fn small_sweep_is_clean_and_thread_independent() {
        let single = run_sweep(4, Some(1));
        let multi = run_sweep(4, Some(4));
        assert_eq!(single, multi);
        assert_eq!(single.violations(), 0);
        assert_eq!(single.ideals as usize, enumerate_ideals(4).len());
        assert!(single.growth_pairs > 0);
    }
}
