//! Intervals, tagged partitions, gauges, and symbolic closed subsets of a
//! compact interval, with derived-set and measure computations.
//!
//! All values are immutable after construction and every operation is a
//! pure function; sequence generators are stateless (index to point).

mod cantor;
mod error;
mod gauge;
mod interval;
mod measure;
mod partition;
mod sexpr;
mod symbolic;

pub use cantor::{stage_additivity_defect, CantorLike, EpsilonSeq};
pub use error::SetError;
pub use gauge::Gauge;
pub use interval::Interval;
pub use measure::{
    measure_open_enumeration, set_measure, MeasureEstimate, MEASURE_DEFAULT_MAX_TERMS,
    MEASURE_DEFAULT_TOL,
};
pub use partition::{cousin_partition, TaggedPartition, COUSIN_DEFAULT_DEPTH};
pub use sexpr::{from_sexpr, parse_rational, to_sexpr};
pub use symbolic::{
    DerivedIndex, OmegaSeq, OrdinalRank, RankTag, RankTower, SeqGen, SymbolicClosedSet,
    TowerDepth, OMEGA_PLUS_CAP, SEQ_VALIDATION_TERMS,
};

/// Default step budget for derived-set iteration.
pub const RANK_DEFAULT_STEPS: u32 = 64;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn unit() -> Interval<f64> {
        Interval::closed(0.0, 1.0).unwrap()
    }

    /// `{1, 1/2, 1/3, ..., 0}`.
    fn s1() -> SymbolicClosedSet<f64> {
        SymbolicClosedSet::OmegaSeq(OmegaSeq::new(0.0, SeqGen::reciprocal(1.0)).unwrap())
    }

    fn ternary() -> SymbolicClosedSet<f64> {
        SymbolicClosedSet::cantor_like(&unit(), EpsilonSeq::Const(ratio(1, 3))).unwrap()
    }

    fn tower() -> SymbolicClosedSet<f64> {
        SymbolicClosedSet::RankTower(RankTower::new(unit(), TowerDepth::Omega).unwrap())
    }

    #[test]
    fn derived_of_reciprocal_sequence_is_its_limit() {
        let d = s1().derived_set().unwrap();
        assert_eq!(d, SymbolicClosedSet::FinitePoints(vec![0.0]));
        assert_eq!(d.derived_set().unwrap(), SymbolicClosedSet::Empty);
    }

    #[test]
    fn derived_of_interval_union_sequence() {
        let s = SymbolicClosedSet::union([
            SymbolicClosedSet::ClosedInterval(Interval::closed(1.0, 2.0).unwrap()),
            s1(),
        ]);
        let d = s.derived_set().unwrap();
        assert_eq!(to_sexpr(&d), "(union (finite 0) (interval 1 2))");
        assert_eq!(to_sexpr(&d.derived_set().unwrap()), "(interval 1 2)");
    }

    #[test]
    fn cantor_set_is_perfect_under_derivation() {
        let k = ternary();
        assert_eq!(k.derived_set().unwrap(), k);
    }

    #[test]
    fn rank_of_reciprocal_sequence() {
        let rank = s1().cb_rank(RANK_DEFAULT_STEPS).unwrap();
        assert_eq!(rank.tag, RankTag::Finite(2));
        assert_eq!(rank.witness, DerivedIndex::Finite(2));
    }

    #[test]
    fn rank_of_interval_union_sequence_is_irreducible() {
        let s = SymbolicClosedSet::union([
            SymbolicClosedSet::ClosedInterval(Interval::closed(1.0, 2.0).unwrap()),
            s1(),
        ]);
        let (rank, kernel) = s.rank_and_kernel(RANK_DEFAULT_STEPS).unwrap();
        assert_eq!(rank.tag, RankTag::Irreducible);
        assert_eq!(to_sexpr(&kernel), "(interval 1 2)");
    }

    #[test]
    fn rank_of_full_tower_is_omega_plus_one() {
        let rank = tower().cb_rank(RANK_DEFAULT_STEPS).unwrap();
        assert_eq!(rank.tag, RankTag::OmegaPlus(1));
        assert_eq!(rank.witness, DerivedIndex::OmegaPlus(1));
    }

    #[test]
    fn tower_union_interval_stabilizes_at_interval() {
        let s = SymbolicClosedSet::union([
            tower(),
            SymbolicClosedSet::ClosedInterval(Interval::closed(1.0, 2.0).unwrap()),
        ]);
        let (rank, kernel) = s.rank_and_kernel(RANK_DEFAULT_STEPS).unwrap();
        assert_eq!(rank.tag, RankTag::Irreducible);
        assert_eq!(to_sexpr(&kernel), "(interval 1 2)");
    }

    #[test]
    fn finite_tower_rank_counts_depth() {
        for d in 1..=4u32 {
            let t = SymbolicClosedSet::RankTower(
                RankTower::new(unit(), TowerDepth::Finite(d)).unwrap(),
            );
            let rank = t.cb_rank(RANK_DEFAULT_STEPS).unwrap();
            assert_eq!(rank.tag, RankTag::Finite(d + 1), "depth {d}");
        }
    }

    #[test]
    fn kernel_of_reducible_set_is_empty() {
        assert_eq!(
            s1().perfect_kernel(RANK_DEFAULT_STEPS).unwrap(),
            SymbolicClosedSet::Empty
        );
    }

    #[test]
    fn kernel_of_cantor_set_is_itself() {
        let k = ternary();
        assert_eq!(k.perfect_kernel(RANK_DEFAULT_STEPS).unwrap(), k);
    }

    #[test]
    fn singleton_rank_is_finite_one() {
        let s = SymbolicClosedSet::finite_points([0.5f64]);
        assert_eq!(
            s.cb_rank(RANK_DEFAULT_STEPS).unwrap().tag,
            RankTag::Finite(1)
        );
        assert_eq!(
            SymbolicClosedSet::<f64>::Empty
                .cb_rank(RANK_DEFAULT_STEPS)
                .unwrap()
                .tag,
            RankTag::Finite(0)
        );
    }

    #[test]
    fn contiguous_of_reciprocal_sequence() {
        let gaps = s1().contiguous_intervals(&unit(), 6).unwrap();
        // [1/(n+1), 1/n] for n = 1..5, ordered by left endpoint.
        assert_eq!(gaps.len(), 5);
        for (idx, gap) in gaps.iter().rev().enumerate() {
            let n = (idx + 1) as f64;
            assert!((gap.lo() - 1.0 / (n + 1.0)).abs() < 1e-15);
            assert!((gap.hi() - 1.0 / n).abs() < 1e-15);
        }
    }

    #[test]
    fn contiguous_of_interior_point() {
        let s = SymbolicClosedSet::finite_points([0.5f64]);
        let gaps = s.contiguous_intervals(&unit(), 1).unwrap();
        assert_eq!(gaps.len(), 2);
        assert_eq!((gaps[0].lo(), gaps[0].hi()), (0.0, 0.5));
        assert_eq!((gaps[1].lo(), gaps[1].hi()), (0.5, 1.0));
    }

    #[test]
    fn contiguous_of_ternary_depth_two() {
        let gaps = ternary().contiguous_intervals(&unit(), 2).unwrap();
        let expect = [
            (1.0 / 9.0, 2.0 / 9.0),
            (1.0 / 3.0, 2.0 / 3.0),
            (7.0 / 9.0, 8.0 / 9.0),
        ];
        assert_eq!(gaps.len(), 3);
        for (gap, (lo, hi)) in gaps.iter().zip(expect) {
            assert!((gap.lo() - lo).abs() < 1e-15);
            assert!((gap.hi() - hi).abs() < 1e-15);
        }
    }

    #[test]
    fn derived_monotonicity_by_sampling() {
        let sets = [
            s1(),
            ternary(),
            SymbolicClosedSet::union([
                SymbolicClosedSet::ClosedInterval(Interval::closed(1.0, 2.0).unwrap()),
                s1(),
            ]),
            SymbolicClosedSet::RankTower(
                RankTower::new(unit(), TowerDepth::Finite(3)).unwrap(),
            ),
        ];
        for s in sets {
            let d = s.derived_set().unwrap();
            let samples = d.sample_points(1000);
            assert!(!samples.is_empty() || d.is_empty_set());
            for x in samples {
                assert!(
                    s.contains_approx(x, 1e-12, 12),
                    "derived point {x} escaped {}",
                    to_sexpr(&s)
                );
            }
        }
    }

    #[test]
    fn stationarity_within_budget() {
        let sets = [
            s1(),
            ternary(),
            tower(),
            SymbolicClosedSet::union([tower(), ternary()]),
            SymbolicClosedSet::finite_points([0.25f64, 0.5, 0.75]),
        ];
        for s in sets {
            assert!(s.cb_rank(RANK_DEFAULT_STEPS).is_ok(), "{}", to_sexpr(&s));
        }
    }

    #[test]
    fn restrict_sequence_away_from_limit_is_finite() {
        let r = s1()
            .restrict(&Interval::closed(0.26, 1.0).unwrap())
            .unwrap();
        assert_eq!(
            r,
            SymbolicClosedSet::FinitePoints(vec![1.0 / 3.0, 0.5, 1.0])
        );
    }

    #[test]
    fn restrict_sequence_with_limit_keeps_tail() {
        let r = s1()
            .restrict(&Interval::closed(0.0, 0.3).unwrap())
            .unwrap();
        match &r {
            SymbolicClosedSet::OmegaSeq(seq) => {
                assert_eq!(seq.limit(), 0.0);
                assert_eq!(seq.first_index(), 4);
            }
            other => panic!("expected a sequence tail, got {other:?}"),
        }
    }

    #[test]
    fn restrict_cantor_inside_removed_interval() {
        let r = ternary()
            .restrict(&Interval::closed(1.0 / 3.0, 0.5).unwrap())
            .unwrap();
        assert_eq!(r, SymbolicClosedSet::FinitePoints(vec![1.0 / 3.0]));
    }

    #[test]
    fn restrict_tower_above_anchor_is_finite_rank() {
        let t = tower();
        let r = t.restrict(&Interval::closed(0.3, 1.0).unwrap()).unwrap();
        let rank = r.cb_rank(RANK_DEFAULT_STEPS).unwrap();
        match rank.tag {
            RankTag::Finite(_) => {}
            other => panic!("restriction should have finite rank, got {other:?}"),
        }
        for x in r.sample_points(200) {
            assert!(t.contains_approx(x, 1e-12, 12));
            assert!(x >= 0.3 - 1e-12);
        }
    }
}
