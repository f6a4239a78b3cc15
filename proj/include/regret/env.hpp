// Lottery environments: choice sets of Bernoulli lotteries plus a safe
// option, the induced product state space, per-choice observation sets,
// and the partitions of the state space generated by "best performing
// option that is learned about". Everything here is an immutable value;
// operations are pure.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "regret/errors.hpp"
#include "regret/money.hpp"

namespace regret {

enum class LotteryKind { Risky, Safe };

struct Lottery {
    std::string id;
    LotteryKind kind = LotteryKind::Safe;
    Money low;        // risky only: payoff on failure
    Money high;       // risky only: payoff on success
    double p = 0;     // risky only: success probability in (0,1)
    Money safe_value; // safe only

    static Lottery risky(std::string id, Money low, Money high, double p) {
        if (!(low < high)) {
            throw InvalidArgument("risky lottery needs low < high (" + id + ")");
        }
        if (!(p > 0.0 && p < 1.0)) {
            throw InvalidArgument("risky lottery needs p in (0,1) (" + id + ")");
        }
        Lottery l;
        l.id = std::move(id);
        l.kind = LotteryKind::Risky;
        l.low = low;
        l.high = high;
        l.p = p;
        return l;
    }

    static Lottery safe(std::string id, Money value) {
        Lottery l;
        l.id = std::move(id);
        l.kind = LotteryKind::Safe;
        l.safe_value = value;
        return l;
    }
};

/// One coordinate assignment of the product space: bit i set means risky
/// lottery i succeeded. States carry their product probability.
struct State {
    std::uint32_t successes = 0;
    double prob = 1.0;

    bool success(int risky_index) const { return (successes >> risky_index) & 1u; }
};

inline constexpr int kMaxRiskyLotteries = 20;

/// n risky lotteries plus exactly one safe one. Construction validates the
/// outcome structure: no payoff ties anywhere, and
/// max(lows) < safe < min(highs), which makes every best-performer argmax
/// unique and every lottery the best performer somewhere.
class ChoiceSet {
public:
    explicit ChoiceSet(std::vector<Lottery> lotteries) : lotteries_(std::move(lotteries)) {
        safe_index_ = -1;
        for (int i = 0; i < static_cast<int>(lotteries_.size()); ++i) {
            if (lotteries_[i].kind == LotteryKind::Safe) {
                if (safe_index_ >= 0) throw InvalidArgument("choice set has more than one safe lottery");
                safe_index_ = i;
            } else {
                risky_indices_.push_back(i);
            }
        }
        if (safe_index_ < 0) throw InvalidArgument("choice set has no safe lottery");
        if (risky_indices_.empty()) throw InvalidArgument("choice set has no risky lottery");

        std::set<std::int64_t> outcomes;
        auto add = [&](Money m) {
            if (!outcomes.insert(m.cents()).second) {
                throw InvalidArgument("choice set has tied payoffs at " + m.str());
            }
        };
        Money max_low = lotteries_[risky_indices_[0]].low;
        Money min_high = lotteries_[risky_indices_[0]].high;
        for (int i : risky_indices_) {
            add(lotteries_[i].low);
            add(lotteries_[i].high);
            max_low = std::max(max_low, lotteries_[i].low);
            min_high = std::min(min_high, lotteries_[i].high);
        }
        add(safe_value());
        if (!(max_low < safe_value() && safe_value() < min_high)) {
            throw InvalidArgument("outcome structure requires max(lows) < safe < min(highs)");
        }
        for (std::size_t i = 0; i < lotteries_.size(); ++i) {
            if (!index_by_id_.emplace(lotteries_[i].id, static_cast<int>(i)).second) {
                throw InvalidArgument("duplicate lottery id: " + lotteries_[i].id);
            }
        }
    }

    int size() const { return static_cast<int>(lotteries_.size()); }
    int risky_count() const { return static_cast<int>(risky_indices_.size()); }
    int safe_index() const { return safe_index_; }
    const Lottery& lottery(int i) const { return lotteries_.at(i); }
    const std::vector<Lottery>& lotteries() const { return lotteries_; }

    int index_of(const std::string& id) const {
        auto it = index_by_id_.find(id);
        if (it == index_by_id_.end()) throw UnknownLottery("unknown lottery id: " + id);
        return it->second;
    }

    /// Position of lottery `i` among the risky ones (its bit in a State).
    int risky_position(int i) const {
        for (int k = 0; k < static_cast<int>(risky_indices_.size()); ++k) {
            if (risky_indices_[k] == i) return k;
        }
        throw UnknownLottery("lottery index " + std::to_string(i) + " is not risky");
    }

    Money safe_value() const { return lotteries_[safe_index_].safe_value; }

private:
    std::vector<Lottery> lotteries_;
    std::vector<int> risky_indices_;
    std::map<std::string, int> index_by_id_;
    int safe_index_ = -1;
};

struct StateSpace {
    int risky_count = 0;
    std::vector<State> states;  // ascending bit-vector order

    int size() const { return static_cast<int>(states.size()); }
};

/// All 2^n states with product probabilities, in ascending bit order.
inline StateSpace build_state_space(const ChoiceSet& cs) {
    const int n = cs.risky_count();
    if (n > kMaxRiskyLotteries) {
        throw TooLarge("state space enumeration supports at most " +
                       std::to_string(kMaxRiskyLotteries) + " risky lotteries");
    }
    std::vector<double> ps;
    for (int i = 0; i < cs.size(); ++i) {
        if (cs.lottery(i).kind == LotteryKind::Risky) ps.push_back(cs.lottery(i).p);
    }
    StateSpace space;
    space.risky_count = n;
    space.states.resize(std::size_t{1} << n);
    for (std::uint32_t bits = 0; bits < space.states.size(); ++bits) {
        double prob = 1.0;
        for (int k = 0; k < n; ++k) {
            prob *= ((bits >> k) & 1u) ? ps[k] : (1.0 - ps[k]);
        }
        space.states[bits] = State{bits, prob};
    }
    return space;
}

/// Realized outcome of one lottery in one state.
inline Money lottery_outcome(const ChoiceSet& cs, int lottery_index, const State& state,
                             int space_risky_count) {
    if (space_risky_count != cs.risky_count()) {
        throw DomainMismatch("state has " + std::to_string(space_risky_count) +
                             " risky coordinates, choice set has " +
                             std::to_string(cs.risky_count()));
    }
    const Lottery& l = cs.lottery(lottery_index);
    if (l.kind == LotteryKind::Safe) return l.safe_value;
    return state.success(cs.risky_position(lottery_index)) ? l.high : l.low;
}

/// Lotteries whose outcomes are learned for each possible choice, as
/// bitmasks over choice-set indices. The chosen lottery and the safe
/// lottery are always observed.
class ObservationMap {
public:
    ObservationMap(const ChoiceSet& cs, std::vector<std::uint32_t> masks)
        : masks_(std::move(masks)) {
        if (static_cast<int>(masks_.size()) != cs.size()) {
            throw InvalidArgument("observation map needs one entry per lottery");
        }
        const std::uint32_t all = (cs.size() == 32) ? ~0u : ((1u << cs.size()) - 1u);
        for (int k = 0; k < cs.size(); ++k) {
            if (masks_[k] & ~all) throw InvalidArgument("observation set references unknown lottery");
            if (!((masks_[k] >> k) & 1u)) {
                throw InvalidArgument("chosen lottery must be observed (choice " + cs.lottery(k).id + ")");
            }
            if (!((masks_[k] >> cs.safe_index()) & 1u)) {
                throw InvalidArgument("safe lottery is always known (choice " + cs.lottery(k).id + ")");
            }
        }
    }

    static ObservationMap full(const ChoiceSet& cs) {
        const std::uint32_t all = (cs.size() == 32) ? ~0u : ((1u << cs.size()) - 1u);
        return ObservationMap(cs, std::vector<std::uint32_t>(cs.size(), all));
    }

    /// Map observing only {chosen, safe} for every choice.
    static ObservationMap minimal(const ChoiceSet& cs) {
        std::vector<std::uint32_t> masks(cs.size());
        for (int k = 0; k < cs.size(); ++k) {
            masks[k] = (1u << k) | (1u << cs.safe_index());
        }
        return ObservationMap(cs, masks);
    }

    std::uint32_t mask(int choice) const { return masks_.at(choice); }
    int size() const { return static_cast<int>(masks_.size()); }

    bool observes(int choice, int lottery) const { return (masks_.at(choice) >> lottery) & 1u; }

    friend bool operator==(const ObservationMap&, const ObservationMap&) = default;

private:
    std::vector<std::uint32_t> masks_;
};

/// Disjoint blocks covering the state space; each block is labelled by the
/// lottery that is the best observed performer on it. Empty blocks are
/// omitted so partitions compare canonically.
struct Partition {
    struct Block {
        int label = -1;                     // lottery index within the choice set
        std::vector<std::uint32_t> states;  // ascending state indices
        friend bool operator==(const Block&, const Block&) = default;
    };

    std::uint32_t state_count = 0;
    std::vector<Block> blocks;  // in choice-set lottery order

    friend bool operator==(const Partition&, const Partition&) = default;
};

/// Groups states by the best performing lottery among those observed when
/// `chosen` is picked.
inline Partition derive_partition(const ChoiceSet& cs, const ObservationMap& obs, int chosen) {
    if (chosen < 0 || chosen >= cs.size()) {
        throw UnknownLottery("chosen index " + std::to_string(chosen) + " out of range");
    }
    if (obs.size() != cs.size()) throw DomainMismatch("observation map size mismatch");
    const StateSpace space = build_state_space(cs);
    Partition part;
    part.state_count = static_cast<std::uint32_t>(space.size());
    std::vector<std::vector<std::uint32_t>> members(cs.size());
    for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(space.size()); ++s) {
        int best = -1;
        Money best_outcome;
        for (int j = 0; j < cs.size(); ++j) {
            if (!obs.observes(chosen, j)) continue;
            const Money out = lottery_outcome(cs, j, space.states[s], space.risky_count);
            if (best < 0 || out > best_outcome) {
                best = j;
                best_outcome = out;
            }
        }
        members[best].push_back(s);
    }
    for (int j = 0; j < cs.size(); ++j) {
        if (!members[j].empty()) {
            part.blocks.push_back({j, std::move(members[j])});
        }
    }
    return part;
}

enum class PartitionOrder { Finer, Coarser, Equal, Incomparable };

namespace detail {

/// True when every block of `a` sits inside some block of `b`.
inline bool as_fine_as(const Partition& a, const Partition& b) {
    std::vector<int> block_of(b.state_count, -1);
    for (int bi = 0; bi < static_cast<int>(b.blocks.size()); ++bi) {
        for (std::uint32_t s : b.blocks[bi].states) block_of[s] = bi;
    }
    for (const auto& block : a.blocks) {
        const int target = block_of[block.states.front()];
        for (std::uint32_t s : block.states) {
            if (block_of[s] != target) return false;
        }
    }
    return true;
}

inline bool same_blocks(const Partition& a, const Partition& b) {
    auto key = [](const Partition& p) {
        std::vector<std::vector<std::uint32_t>> blocks;
        blocks.reserve(p.blocks.size());
        for (const auto& blk : p.blocks) blocks.push_back(blk.states);
        std::sort(blocks.begin(), blocks.end());
        return blocks;
    };
    return key(a) == key(b);
}

}  // namespace detail

inline PartitionOrder compare_partitions(const Partition& a, const Partition& b) {
    if (a.state_count != b.state_count) {
        throw DomainMismatch("partitions cover different state spaces");
    }
    if (detail::same_blocks(a, b)) return PartitionOrder::Equal;
    if (detail::as_fine_as(a, b)) return PartitionOrder::Finer;
    if (detail::as_fine_as(b, a)) return PartitionOrder::Coarser;
    return PartitionOrder::Incomparable;
}

/// The collection of per-choice partitions induced by an observation map.
class InfoEnvironment {
public:
    InfoEnvironment(ChoiceSet cs, ObservationMap obs)
        : choice_set_(std::move(cs)), observation_(std::move(obs)) {
        for (int k = 0; k < choice_set_.size(); ++k) {
            partitions_.push_back(derive_partition(choice_set_, observation_, k));
        }
    }

    const ChoiceSet& choice_set() const { return choice_set_; }
    const ObservationMap& observation() const { return observation_; }
    const Partition& partition(int choice) const { return partitions_.at(choice); }
    int size() const { return static_cast<int>(partitions_.size()); }

private:
    ChoiceSet choice_set_;
    ObservationMap observation_;
    std::vector<Partition> partitions_;
};

enum class EnvOrder { MoreInformative, LessInformative, Equal, Incomparable };

/// Blockwise comparison of two environments over the same choice set:
/// more informative means every per-choice partition is as fine, with at
/// least one strictly finer.
inline EnvOrder compare_environments(const InfoEnvironment& a, const InfoEnvironment& b) {
    if (a.size() != b.size()) throw DomainMismatch("environments have different choice sets");
    bool a_fine = true, b_fine = true, all_equal = true;
    for (int k = 0; k < a.size(); ++k) {
        switch (compare_partitions(a.partition(k), b.partition(k))) {
            case PartitionOrder::Equal:
                break;
            case PartitionOrder::Finer:
                all_equal = false;
                b_fine = false;
                break;
            case PartitionOrder::Coarser:
                all_equal = false;
                a_fine = false;
                break;
            case PartitionOrder::Incomparable:
                return EnvOrder::Incomparable;
        }
        if (!a_fine && !b_fine) return EnvOrder::Incomparable;
    }
    if (all_equal) return EnvOrder::Equal;
    if (a_fine) return EnvOrder::MoreInformative;
    if (b_fine) return EnvOrder::LessInformative;
    return EnvOrder::Incomparable;
}

}  // namespace regret
