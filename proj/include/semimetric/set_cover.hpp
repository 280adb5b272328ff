#ifndef SEMIMETRIC_SET_COVER_HPP
#define SEMIMETRIC_SET_COVER_HPP

#include <algorithm>
#include <cstddef>
#include <vector>

#include <boost/dynamic_bitset.hpp>

/**
 * @file set_cover.hpp
 *
 * @brief Unweighted set cover on small universes: greedy upper bound,
 * packing lower bound and an exact branch-and-bound.
 */

namespace semimetric::cover {

using Bitset = boost::dynamic_bitset<>;

/// Drop empty sets, duplicates and sets contained in another candidate.
inline std::vector<Bitset> prune_dominated(std::vector<Bitset> sets) {
    std::erase_if(sets, [](const Bitset& s) { return s.none(); });
    std::sort(sets.begin(), sets.end(), [](const Bitset& a, const Bitset& b) {
        const auto ca = a.count();
        const auto cb = b.count();
        return ca != cb ? ca > cb : a < b;
    });
    std::vector<Bitset> kept;
    for (auto& s : sets) {
        const bool dominated =
            std::any_of(kept.begin(), kept.end(), [&](const Bitset& k) { return s.is_subset_of(k); });
        if (!dominated) {
            kept.push_back(std::move(s));
        }
    }
    return kept;
}

/// Greedy cover: repeatedly take the set covering the most uncovered elements
/// (first such set on ties). Returns the chosen set indices.
inline std::vector<std::size_t> greedy_cover(const Bitset& universe, const std::vector<Bitset>& sets) {
    Bitset uncovered = universe;
    std::vector<std::size_t> chosen;
    while (uncovered.any()) {
        std::size_t best = sets.size();
        std::size_t best_gain = 0;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            const auto gain = (sets[i] & uncovered).count();
            if (gain > best_gain) {
                best_gain = gain;
                best = i;
            }
        }
        if (best == sets.size()) {
            break;
        }
        chosen.push_back(best);
        uncovered -= sets[best];
    }
    return chosen;
}

/// Lower bound from a greedy packing: elements no two of which share a set
/// each need their own set.
inline std::size_t packing_lower_bound(const Bitset& universe, const std::vector<Bitset>& sets) {
    Bitset blocked(universe.size());
    std::size_t count = 0;
    for (auto e = universe.find_first(); e != Bitset::npos; e = universe.find_next(e)) {
        if (blocked.test(e)) {
            continue;
        }
        ++count;
        for (const auto& s : sets) {
            if (s.test(e)) {
                blocked |= s;
            }
        }
    }
    return count;
}

struct CoverResult {
    std::size_t lower = 0;
    std::size_t upper = 0;
    std::vector<std::size_t> chosen;
    bool exact() const { return lower == upper; }
};

namespace detail {

class BranchAndBound {
public:
    BranchAndBound(const std::vector<Bitset>& sets, std::size_t elements, std::vector<std::size_t> incumbent)
        : sets_(sets), best_(std::move(incumbent)), containing_(elements) {
        for (std::size_t i = 0; i < sets_.size(); ++i) {
            for (auto e = sets_[i].find_first(); e != Bitset::npos; e = sets_[i].find_next(e)) {
                containing_[e].push_back(i);
            }
        }
    }

    void run(const Bitset& universe) { search(universe); }

    const std::vector<std::size_t>& best() const { return best_; }

private:
    std::size_t bound(const Bitset& uncovered) const {
        std::size_t largest = 0;
        for (const auto& s : sets_) {
            largest = std::max(largest, (s & uncovered).count());
        }
        const auto remaining = uncovered.count();
        return largest == 0 ? remaining : (remaining + largest - 1) / largest;
    }

    void search(const Bitset& uncovered) {
        if (uncovered.none()) {
            if (current_.size() < best_.size()) {
                best_ = current_;
            }
            return;
        }
        if (current_.size() + bound(uncovered) >= best_.size()) {
            return;
        }
        // Branch on the uncovered element with the fewest covering sets.
        std::size_t pivot = Bitset::npos;
        std::size_t fewest = sets_.size() + 1;
        for (auto e = uncovered.find_first(); e != Bitset::npos; e = uncovered.find_next(e)) {
            if (containing_[e].size() < fewest) {
                fewest = containing_[e].size();
                pivot = e;
            }
        }
        std::vector<std::size_t> options = containing_[pivot];
        std::stable_sort(options.begin(), options.end(), [&](std::size_t a, std::size_t b) {
            return (sets_[a] & uncovered).count() > (sets_[b] & uncovered).count();
        });
        for (std::size_t option : options) {
            current_.push_back(option);
            search(uncovered - sets_[option]);
            current_.pop_back();
        }
    }

    const std::vector<Bitset>& sets_;
    std::vector<std::size_t> best_;
    std::vector<std::size_t> current_;
    std::vector<std::vector<std::size_t>> containing_;
};

} // namespace detail

/**
 * Minimum number of `sets` covering `universe`. Every element of the universe
 * must lie in some set. With `exact` the greedy incumbent is refined by
 * branch-and-bound; otherwise the result is the [packing, greedy] bracket.
 */
inline CoverResult min_cover(const Bitset& universe, const std::vector<Bitset>& sets, bool exact) {
    CoverResult result;
    result.chosen = greedy_cover(universe, sets);
    result.upper = result.chosen.size();
    std::size_t largest = 0;
    for (const auto& s : sets) {
        largest = std::max(largest, (s & universe).count());
    }
    const auto elements = universe.count();
    const std::size_t by_size = largest == 0 ? 0 : (elements + largest - 1) / largest;
    result.lower = std::min(result.upper, std::max(by_size, packing_lower_bound(universe, sets)));
    if (result.exact() || !exact) {
        return result;
    }
    detail::BranchAndBound solver(sets, universe.size(), result.chosen);
    solver.run(universe);
    result.chosen = solver.best();
    result.upper = result.chosen.size();
    result.lower = result.upper;
    return result;
}

} // namespace semimetric::cover

#endif
