#include <gtest/gtest.h>

#include <random>
#include <set>
#include <vector>

#include "regret/env.hpp"

using namespace regret;

namespace {

Money eur(double v) { return Money::from_units(v); }

// One risky lottery (0 or 10 at p) against a safe 5.
ChoiceSet one_risky(double p = 0.5) {
    return ChoiceSet({Lottery::risky("r", eur(0), eur(10), p),
                      Lottery::safe("s", eur(5))});
}

// Two risky lotteries with highs 10 > 8, lows 1 > 0, safe 5.
ChoiceSet two_risky(double p1 = 0.5, double p2 = 0.5) {
    return ChoiceSet({Lottery::risky("r1", eur(1), eur(10), p1),
                      Lottery::risky("r2", eur(0), eur(8), p2),
                      Lottery::safe("s", eur(5))});
}

ChoiceSet random_choice_set(std::mt19937_64& gen, int n) {
    std::uniform_real_distribution<double> prob(0.1, 0.9);
    std::vector<Lottery> ls;
    for (int i = 0; i < n; ++i) {
        // distinct lows below 5, distinct highs above 5
        ls.push_back(Lottery::risky("r" + std::to_string(i), Money::from_cents(100 + i),
                                    Money::from_cents(1000 + 100 * i), prob(gen)));
    }
    ls.push_back(Lottery::safe("s", eur(5)));
    return ChoiceSet(std::move(ls));
}

// Random observation map honoring chosen-in-set and safe-in-set.
ObservationMap random_obs(std::mt19937_64& gen, const ChoiceSet& cs) {
    std::bernoulli_distribution coin(0.5);
    std::vector<std::uint32_t> masks(cs.size());
    for (int k = 0; k < cs.size(); ++k) {
        std::uint32_t m = (1u << k) | (1u << cs.safe_index());
        for (int j = 0; j < cs.size(); ++j) {
            if (coin(gen)) m |= 1u << j;
        }
        masks[k] = m;
    }
    return ObservationMap(cs, masks);
}

Partition make_partition(int n_states, const std::vector<std::vector<std::uint32_t>>& blocks) {
    Partition p;
    p.state_count = n_states;
    int label = 0;
    for (const auto& b : blocks) p.blocks.push_back({label++, b});
    return p;
}

}  // namespace

TEST(ChoiceSet, RejectsTiesAndBadStructure) {
    // tied highs
    EXPECT_THROW(ChoiceSet({Lottery::risky("a", eur(0), eur(10), 0.5),
                            Lottery::risky("b", eur(1), eur(10), 0.5),
                            Lottery::safe("s", eur(5))}),
                 InvalidArgument);
    // safe above a high
    EXPECT_THROW(ChoiceSet({Lottery::risky("a", eur(0), eur(4), 0.5),
                            Lottery::safe("s", eur(5))}),
                 InvalidArgument);
    // two safes
    EXPECT_THROW(ChoiceSet({Lottery::risky("a", eur(0), eur(10), 0.5),
                            Lottery::safe("s", eur(5)), Lottery::safe("t", eur(6))}),
                 InvalidArgument);
    // no risky
    EXPECT_THROW(ChoiceSet({Lottery::safe("s", eur(5))}), InvalidArgument);
    EXPECT_THROW(Lottery::risky("a", eur(10), eur(0), 0.5), InvalidArgument);
    EXPECT_THROW(Lottery::risky("a", eur(0), eur(10), 1.0), InvalidArgument);
}

TEST(StateSpace, SingleBernoulli) {
    const auto space = build_state_space(one_risky());
    ASSERT_EQ(space.size(), 2);
    EXPECT_DOUBLE_EQ(space.states[0].prob, 0.5);
    EXPECT_DOUBLE_EQ(space.states[1].prob, 0.5);
    EXPECT_FALSE(space.states[0].success(0));
    EXPECT_TRUE(space.states[1].success(0));
}

TEST(StateSpace, TwoIndependentBernoullis) {
    const auto space = build_state_space(two_risky());
    ASSERT_EQ(space.size(), 4);
    for (const State& s : space.states) EXPECT_DOUBLE_EQ(s.prob, 0.25);
}

TEST(StateSpace, ProbabilitiesSumToOne) {
    std::mt19937_64 gen(7);
    for (int rep = 0; rep < 50; ++rep) {
        const auto cs = random_choice_set(gen, 1 + static_cast<int>(gen() % 4));
        const auto space = build_state_space(cs);
        double total = 0;
        for (const State& s : space.states) total += s.prob;
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(StateSpace, SafeBestProbabilityMatchesProductFormula) {
    // Enumeration oracle: the safe lottery is best exactly when every
    // risky one fails, so the probability is the product of (1 - p_i).
    const auto cs = two_risky();
    const auto space = build_state_space(cs);
    double prob_safe_best = 0;
    for (const State& s : space.states) {
        Money best = lottery_outcome(cs, 0, s, space.risky_count);
        int arg = 0;
        for (int j = 1; j < cs.size(); ++j) {
            const Money out = lottery_outcome(cs, j, s, space.risky_count);
            if (out > best) {
                best = out;
                arg = j;
            }
        }
        if (arg == cs.safe_index()) prob_safe_best += s.prob;
    }
    EXPECT_NEAR(prob_safe_best, 0.25, 1e-12);
    EXPECT_NEAR(prob_safe_best, (1 - 0.5) * (1 - 0.5), 1e-12);
}

TEST(StateSpace, EnumerationGuard) {
    std::vector<Lottery> ls;
    for (int i = 0; i < 21; ++i) {
        ls.push_back(Lottery::risky("r" + std::to_string(i), Money::from_cents(i),
                                    Money::from_cents(1000 + i), 0.5));
    }
    ls.push_back(Lottery::safe("s", eur(5)));
    const ChoiceSet cs(std::move(ls));
    EXPECT_THROW(build_state_space(cs), TooLarge);
}

TEST(LotteryOutcome, SafeAndRisky) {
    const auto cs = one_risky();
    const auto space = build_state_space(cs);
    EXPECT_EQ(lottery_outcome(cs, 1, space.states[0], 1), eur(5));
    EXPECT_EQ(lottery_outcome(cs, 1, space.states[1], 1), eur(5));
    EXPECT_EQ(lottery_outcome(cs, 0, space.states[1], 1), eur(10));
    EXPECT_EQ(lottery_outcome(cs, 0, space.states[0], 1), eur(0));
    EXPECT_THROW(lottery_outcome(cs, 0, space.states[0], 2), DomainMismatch);
}

TEST(DerivePartition, FullObservationTwoStates) {
    const auto cs = one_risky();
    const auto full = ObservationMap::full(cs);
    for (int chosen = 0; chosen < cs.size(); ++chosen) {
        const Partition p = derive_partition(cs, full, chosen);
        ASSERT_EQ(p.blocks.size(), 2u);
        EXPECT_EQ(p.blocks[0].states, (std::vector<std::uint32_t>{1}));  // risky wins
        EXPECT_EQ(p.blocks[1].states, (std::vector<std::uint32_t>{0}));  // safe wins
    }
}

TEST(DerivePartition, SafeOnlyObservationIsTrivial) {
    const auto cs = one_risky();
    const auto minimal = ObservationMap::minimal(cs);
    const Partition p = derive_partition(cs, minimal, cs.safe_index());
    ASSERT_EQ(p.blocks.size(), 1u);
    EXPECT_EQ(p.blocks[0].label, cs.safe_index());
    EXPECT_EQ(p.blocks[0].states, (std::vector<std::uint32_t>{0, 1}));
}

TEST(DerivePartition, TwoRiskyFundamentalBlocks) {
    // Enumerate the 4 states by hand: r1 wins whenever it succeeds, r2
    // wins when it succeeds alone, safe wins when both fail.
    const auto cs = two_risky();
    const Partition p = derive_partition(cs, ObservationMap::full(cs), 0);
    ASSERT_EQ(p.blocks.size(), 3u);
    EXPECT_EQ(p.blocks[0].label, 0);
    EXPECT_EQ(p.blocks[0].states, (std::vector<std::uint32_t>{1, 3}));
    EXPECT_EQ(p.blocks[1].label, 1);
    EXPECT_EQ(p.blocks[1].states, (std::vector<std::uint32_t>{2}));
    EXPECT_EQ(p.blocks[2].label, 2);
    EXPECT_EQ(p.blocks[2].states, (std::vector<std::uint32_t>{0}));
}

TEST(DerivePartition, UnknownChoice) {
    const auto cs = one_risky();
    EXPECT_THROW(derive_partition(cs, ObservationMap::full(cs), 5), UnknownLottery);
}

TEST(DerivePartition, BlocksPartitionTheStateSpace) {
    std::mt19937_64 gen(11);
    for (int rep = 0; rep < 100; ++rep) {
        const auto cs = random_choice_set(gen, 1 + static_cast<int>(gen() % 3));
        const auto obs = random_obs(gen, cs);
        for (int chosen = 0; chosen < cs.size(); ++chosen) {
            const Partition p = derive_partition(cs, obs, chosen);
            std::set<std::uint32_t> seen;
            for (const auto& b : p.blocks) {
                EXPECT_FALSE(b.states.empty());
                for (std::uint32_t s : b.states) {
                    EXPECT_TRUE(seen.insert(s).second) << "state in two blocks";
                }
            }
            EXPECT_EQ(seen.size(), std::size_t{1} << cs.risky_count());
        }
    }
}

TEST(DerivePartition, FullObservationHasAllBlocks) {
    for (int n = 1; n <= 4; ++n) {
        for (double p : {0.25, 0.5, 0.75}) {
            std::vector<Lottery> ls;
            for (int i = 0; i < n; ++i) {
                ls.push_back(Lottery::risky("r" + std::to_string(i), Money::from_cents(i),
                                            Money::from_cents(1000 + i), p));
            }
            ls.push_back(Lottery::safe("s", eur(5)));
            const ChoiceSet cs(std::move(ls));
            const Partition part = derive_partition(cs, ObservationMap::full(cs), 0);
            EXPECT_EQ(part.blocks.size(), static_cast<std::size_t>(n + 1));
        }
    }
}

TEST(ComparePartitions, WorkedExamples) {
    const auto discrete = make_partition(2, {{0}, {1}});
    const auto trivial = make_partition(2, {{0, 1}});
    EXPECT_EQ(compare_partitions(discrete, trivial), PartitionOrder::Finer);
    EXPECT_EQ(compare_partitions(trivial, discrete), PartitionOrder::Coarser);
    EXPECT_EQ(compare_partitions(discrete, discrete), PartitionOrder::Equal);

    const auto a = make_partition(3, {{0, 1}, {2}});
    const auto b = make_partition(3, {{0}, {1, 2}});
    EXPECT_EQ(compare_partitions(a, b), PartitionOrder::Incomparable);

    EXPECT_THROW(compare_partitions(discrete, make_partition(3, {{0, 1, 2}})), DomainMismatch);
}

TEST(ComparePartitions, PartialOrderOnRandomPartitions) {
    std::mt19937_64 gen(13);
    auto random_partition = [&gen](int n_states, int max_blocks) {
        std::vector<std::vector<std::uint32_t>> blocks(max_blocks);
        for (int s = 0; s < n_states; ++s) {
            blocks[gen() % max_blocks].push_back(s);
        }
        std::vector<std::vector<std::uint32_t>> nonempty;
        for (auto& b : blocks) {
            if (!b.empty()) nonempty.push_back(std::move(b));
        }
        return make_partition(n_states, nonempty);
    };
    for (int rep = 0; rep < 300; ++rep) {
        const int n = 2 + static_cast<int>(gen() % 7);
        const auto a = random_partition(n, 3);
        const auto b = random_partition(n, 3);
        const auto c = random_partition(n, 3);
        // antisymmetry
        if (compare_partitions(a, b) == PartitionOrder::Finer) {
            EXPECT_EQ(compare_partitions(b, a), PartitionOrder::Coarser);
        }
        // transitivity
        if (compare_partitions(a, b) == PartitionOrder::Finer &&
            compare_partitions(b, c) == PartitionOrder::Finer) {
            EXPECT_EQ(compare_partitions(a, c), PartitionOrder::Finer);
        }
    }
}

TEST(CompareEnvironments, WorkedExample) {
    // Full observation versus risky-only-if-chosen.
    const auto cs = one_risky();
    const InfoEnvironment full_env(cs, ObservationMap::full(cs));
    const InfoEnvironment hidden_env(cs, ObservationMap::minimal(cs));
    EXPECT_EQ(compare_environments(full_env, hidden_env), EnvOrder::MoreInformative);
    EXPECT_EQ(compare_environments(hidden_env, full_env), EnvOrder::LessInformative);
    EXPECT_EQ(compare_environments(full_env, full_env), EnvOrder::Equal);
}

TEST(CompareEnvironments, CrossingObservationSetsAreIncomparable) {
    const auto cs = two_risky();
    // Variant a: when safe is chosen only r1 is seen; variant b: only r2.
    auto masks_for = [&cs](int extra) {
        std::vector<std::uint32_t> masks;
        const std::uint32_t all = (1u << cs.size()) - 1u;
        for (int k = 0; k < cs.size(); ++k) {
            if (k == cs.safe_index()) {
                masks.push_back((1u << cs.safe_index()) | (1u << extra));
            } else {
                masks.push_back(all);
            }
        }
        return masks;
    };
    const InfoEnvironment env_a(cs, ObservationMap(cs, masks_for(0)));
    const InfoEnvironment env_b(cs, ObservationMap(cs, masks_for(1)));
    EXPECT_EQ(compare_environments(env_a, env_b), EnvOrder::Incomparable);
}

TEST(CompareEnvironments, RefiningAdditionsAreMonotone) {
    // Adding an observed lottery refines a per-choice partition exactly
    // when its high sits below every observed risky high: its winning
    // region then carves states out of the safe block only. Nesting built
    // from such additions keeps environments comparable.
    std::mt19937_64 gen(17);
    std::bernoulli_distribution coin(0.4);
    for (int rep = 0; rep < 200; ++rep) {
        const auto cs = random_choice_set(gen, 1 + static_cast<int>(gen() % 3));
        const auto narrow = random_obs(gen, cs);
        std::vector<std::uint32_t> wide_masks;
        for (int k = 0; k < cs.size(); ++k) {
            std::uint32_t m = narrow.mask(k);
            // repeatedly add the unobserved risky lottery with the largest
            // high below the current observed minimum
            for (;;) {
                std::optional<Money> min_high;
                for (int j = 0; j < cs.size(); ++j) {
                    if (((m >> j) & 1u) && cs.lottery(j).kind == LotteryKind::Risky) {
                        if (!min_high || cs.lottery(j).high < *min_high) {
                            min_high = cs.lottery(j).high;
                        }
                    }
                }
                int candidate = -1;
                for (int j = 0; j < cs.size(); ++j) {
                    if ((m >> j) & 1u) continue;
                    if (min_high && !(cs.lottery(j).high < *min_high)) continue;
                    if (candidate < 0 || cs.lottery(j).high > cs.lottery(candidate).high) {
                        candidate = j;
                    }
                }
                if (candidate < 0 || !coin(gen)) break;
                m |= 1u << candidate;
            }
            wide_masks.push_back(m);
        }
        const InfoEnvironment wide_env(cs, ObservationMap(cs, wide_masks));
        const InfoEnvironment narrow_env(cs, narrow);
        const EnvOrder order = compare_environments(wide_env, narrow_env);
        EXPECT_TRUE(order == EnvOrder::MoreInformative || order == EnvOrder::Equal);
    }
}

TEST(CompareEnvironments, NestingAloneCanBeIncomparable) {
    // Observing one extra lottery whose high dominates an already-observed
    // one regroups states across old block boundaries: with highs
    // 10 > 8 > safe, adding r1 to {safe, r2} makes r1's winning region
    // straddle the old {r2 wins} / {safe wins} split.
    const auto cs = two_risky();
    const std::uint32_t all = (1u << cs.size()) - 1u;
    std::vector<std::uint32_t> narrow_masks{all, all, (1u << 2) | (1u << 1)};
    std::vector<std::uint32_t> wide_masks{all, all, all};
    const InfoEnvironment narrow_env(cs, ObservationMap(cs, narrow_masks));
    const InfoEnvironment wide_env(cs, ObservationMap(cs, wide_masks));
    EXPECT_EQ(compare_partitions(wide_env.partition(2), narrow_env.partition(2)),
              PartitionOrder::Incomparable);
    EXPECT_EQ(compare_environments(wide_env, narrow_env), EnvOrder::Incomparable);
}

TEST(InfoEnvironment, PartitionsRoundTripFromSource) {
    std::mt19937_64 gen(19);
    const auto cs = random_choice_set(gen, 2);
    const auto obs = random_obs(gen, cs);
    const InfoEnvironment env(cs, obs);
    for (int k = 0; k < cs.size(); ++k) {
        EXPECT_EQ(env.partition(k), derive_partition(cs, obs, k));
    }
}
