#pragma once

#include "gale/demand.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gale {

/// One observed choice: bundle x bought at prices p with income m.
template <class T> struct Observation {
    Observation(PriceSystem<T> p, T m, Bundle<T> x);

    PriceSystem<T> p;
    T m;
    Bundle<T> x;
};

template <class T> struct Dataset {
    std::vector<Observation<T>> rows;
    std::optional<std::string> provenance;

    std::size_t size() const { return rows.size(); }
    bool empty() const { return rows.empty(); }
};

/// Exact in rational mode; absolute tolerance 1e-9 per component in floating point.
template <class T> bool same_bundle(const Bundle<T>& a, const Bundle<T>& b);

/// Directed graph over observation indices (0-based).
class RevealedRelation {
public:
    RevealedRelation() = default;
    explicit RevealedRelation(std::size_t n, std::vector<int> bundle_class = {});

    std::size_t size() const { return n_; }
    bool has_edge(std::size_t i, std::size_t j) const { return adj_[i * n_ + j]; }
    void set_edge(std::size_t i, std::size_t j, bool on = true) { adj_[i * n_ + j] = on; }

    std::vector<std::pair<int, int>> edges() const;
    std::vector<int> successors(std::size_t i) const;

    /// Observations carrying equal bundles share a class id.
    const std::vector<int>& bundle_class() const { return class_; }

    friend bool operator==(const RevealedRelation& a, const RevealedRelation& b) {
        return a.n_ == b.n_ && a.adj_ == b.adj_;
    }

private:
    std::size_t n_ = 0;
    std::vector<bool> adj_;
    std::vector<int> class_;
};

/// Edge i -> j iff p^i . x^j <= m^i and x^i != x^j.
template <class T> RevealedRelation direct_revealed(const Dataset<T>& data);

struct WarpVerdict {
    bool pass = true;
    std::optional<std::pair<int, int>> violation; // first (i, j), i < j, with both edges
};

template <class T> WarpVerdict check_warp(const Dataset<T>& data);
WarpVerdict check_warp(const RevealedRelation& rel);

/// Warshall closure: edge i -> j iff a directed path of length >= 1 exists.
RevealedRelation transitive_closure(const RevealedRelation& rel);

/// A cycle is reported as a closed walk [i0, ..., ik] of observation indices
/// whose last entry carries the same bundle as i0.
struct SarpVerdict {
    bool pass = true;
    std::vector<int> cycle;
};

/// Depth-first search visiting successors in ascending index order.
template <class T> SarpVerdict check_sarp(const Dataset<T>& data);
SarpVerdict check_sarp(const RevealedRelation& rel);

/// Breadth-first search for a cycle with the fewest edges, lowest start index first.
SarpVerdict shortest_sarp_cycle(const RevealedRelation& rel);

class CycleError : public std::runtime_error {
public:
    CycleError(std::vector<int> cycle);
    const std::vector<int>& cycle() const { return cycle_; }

private:
    std::vector<int> cycle_;
};

/// Topological order of the observations, lowest index first among ready
/// vertices. Throws CycleError when the relation is cyclic.
template <class T> std::vector<int> extend_to_total_order(const Dataset<T>& data);
std::vector<int> extend_to_total_order(const RevealedRelation& rel);

} // namespace gale
