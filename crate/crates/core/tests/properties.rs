use omv_core::harness::{forced_hit, full_cycle_chains, gen_instance, run_trial, InstanceSpec};
use omv_core::oracle::product;
use omv_core::{
    validate, validate_query, Chain, MonotonicityCase, Param, ProblemKind, ReductionConfig, Value,
};
use proptest::prelude::*;

fn kinds() -> Vec<ProblemKind> {
    let mut kinds = vec![
        ProblemKind::Boolean,
        ProblemKind::ExistsEquality,
        ProblemKind::ExistsDominance,
        ProblemKind::MinWitness,
        ProblemKind::MinMax,
    ];
    kinds.extend(
        MonotonicityCase::ALL
            .into_iter()
            .map(ProblemKind::BoundedMonotoneMinPlus),
    );
    kinds
}

fn kind_strategy() -> impl Strategy<Value = ProblemKind> {
    proptest::sample::select(kinds())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_instances_are_valid(
        kind in kind_strategy(),
        n in 1usize..12,
        seed in any::<u64>(),
        inf_rate in 0.0f64..0.5,
    ) {
        let spec = InstanceSpec::new(kind, n, seed).with_queries(n + 2).with_inf_rate(inf_rate);
        let inst = gen_instance(&spec).unwrap();
        prop_assert!(validate(&inst.matrix, kind).is_ok());
        let mut prev: Option<&[Value]> = None;
        for q in &inst.queries {
            prop_assert!(validate_query(q, kind, n, spec.bound_c, prev).is_ok());
            prev = Some(q);
        }
        prop_assert_eq!(inst.hash(), gen_instance(&spec).unwrap().hash());
    }

    #[test]
    fn permuting_rows_permutes_outputs(
        kind in kind_strategy(),
        n in 1usize..10,
        seed in any::<u64>(),
        perm_seed in any::<u64>(),
    ) {
        // Row monotonicity and min-witness indices are preserved by a row
        // permutation; column monotonicity is not, so that case is skipped.
        prop_assume!(kind != ProblemKind::BoundedMonotoneMinPlus(MonotonicityCase::Columns));
        let inst = gen_instance(&InstanceSpec::new(kind, n, seed).with_queries(3)).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = perm_seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let permuted = inst.matrix.permute_rows(&perm);
        for q in &inst.queries {
            let base = product(kind, &inst.matrix, q).unwrap();
            let moved = product(kind, &permuted, q).unwrap();
            for i in 0..n {
                prop_assert_eq!(moved[i], base[perm[i]]);
            }
        }
    }

    #[test]
    fn full_cycles_match_oracle(
        kind in kind_strategy(),
        n in 1usize..10,
        seed in any::<u64>(),
        t in 0usize..6,
    ) {
        let inst = gen_instance(
            &InstanceSpec::new(kind, n, seed).with_queries(4).with_inf_rate(0.15),
        )
        .unwrap();
        let mut cfg = forced_hit(&ReductionConfig::with_seed(seed));
        if t > 0 {
            cfg.t = Param::Fixed(t.min(n));
        }
        for chain in full_cycle_chains(kind.family()) {
            let report = run_trial(&chain, &inst, &cfg);
            prop_assert!(report.success, "{}: {}", chain, report);
        }
    }

    #[test]
    fn single_links_match_oracle(kind in kind_strategy(), n in 1usize..10, seed in any::<u64>()) {
        let inst = gen_instance(&InstanceSpec::new(kind, n, seed).with_queries(4)).unwrap();
        let cfg = forced_hit(&ReductionConfig::with_seed(seed));
        let chains = full_cycle_chains(kind.family());
        for chain in chains {
            let one = Chain::new(vec![chain.head().unwrap()]).unwrap();
            let report = run_trial(&one, &inst, &cfg);
            prop_assert!(report.success, "{}: {}", one, report);
        }
    }

    #[test]
    fn equality_is_shift_invariant(n in 1usize..10, seed in any::<u64>(), c in -50i64..50) {
        let kind = ProblemKind::ExistsEquality;
        let inst = gen_instance(&InstanceSpec::new(kind, n, seed).with_queries(3)).unwrap();
        let shifted = inst.matrix.map(inst.matrix.domain(), |_, _, x| x.saturating_add(Value::Fin(c)));
        for q in &inst.queries {
            let moved: Vec<Value> = q.iter().map(|x| x.saturating_add(Value::Fin(c))).collect();
            prop_assert_eq!(product(kind, &shifted, &moved).unwrap(), product(kind, &inst.matrix, q).unwrap());
        }
    }

    #[test]
    fn minmax_is_monotone_in_the_query(n in 1usize..10, seed in any::<u64>(), bump in 0i64..5) {
        let kind = ProblemKind::MinMax;
        let inst = gen_instance(&InstanceSpec::new(kind, n, seed).with_queries(3).with_inf_rate(0.2)).unwrap();
        for q in &inst.queries {
            let raised: Vec<Value> = q.iter().map(|x| x.saturating_add(Value::Fin(bump))).collect();
            let lo = product(kind, &inst.matrix, q).unwrap();
            let hi = product(kind, &inst.matrix, &raised).unwrap();
            for i in 0..n {
                prop_assert!(lo[i] <= hi[i]);
            }
        }
    }
}
