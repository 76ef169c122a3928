#include "gale/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace gale {

namespace {

std::string format_cycle(const std::vector<int>& cycle) {
    std::string s = "revealed preference cycle:";
    for (int i : cycle) s += " " + std::to_string(i + 1);
    return s;
}

template <class T> std::vector<int> classes(const Dataset<T>& data) {
    std::vector<int> cls(data.size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (cls[i] >= 0) continue;
        cls[i] = next;
        for (std::size_t j = i + 1; j < data.size(); ++j)
            if (cls[j] < 0 && same_bundle(data.rows[i].x, data.rows[j].x)) cls[j] = next;
        ++next;
    }
    return cls;
}

// Highest-index successor of u that shares a bundle with s. Edges only depend
// on the target bundle, so s itself always qualifies.
int closing_vertex(const RevealedRelation& rel, int u, int s) {
    const auto& cls = rel.bundle_class();
    int best = s;
    for (int w : rel.successors(u))
        if (cls[w] == cls[s]) best = std::max(best, w);
    return best;
}

} // namespace

template <class T> Observation<T>::Observation(PriceSystem<T> p_, T m_, Bundle<T> x_)
    : p(std::move(p_)), m(std::move(m_)), x(std::move(x_)) {
    if (!(m > 0)) throw DomainError("income must be positive");
    T cost = p.vec().dot(x.vec());
    if constexpr (std::is_same_v<T, double>) {
        if (cost > m * (1 + 1e-9)) throw DomainError("bundle is not affordable: p.x > m");
    } else {
        if (cost > m) throw DomainError("bundle is not affordable: p.x > m");
    }
}

template <class T> bool same_bundle(const Bundle<T>& a, const Bundle<T>& b) {
    if constexpr (std::is_same_v<T, double>)
        return ((a.vec() - b.vec()).cwiseAbs().array() <= 1e-9).all();
    else
        return a.vec() == b.vec();
}

RevealedRelation::RevealedRelation(std::size_t n, std::vector<int> bundle_class)
    : n_(n), adj_(n * n, false), class_(std::move(bundle_class)) {
    if (class_.empty())
        for (std::size_t i = 0; i < n; ++i) class_.push_back(static_cast<int>(i));
}

std::vector<std::pair<int, int>> RevealedRelation::edges() const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            if (has_edge(i, j)) out.emplace_back(int(i), int(j));
    return out;
}

std::vector<int> RevealedRelation::successors(std::size_t i) const {
    std::vector<int> out;
    for (std::size_t j = 0; j < n_; ++j)
        if (has_edge(i, j)) out.push_back(int(j));
    return out;
}

template <class T> RevealedRelation direct_revealed(const Dataset<T>& data) {
    std::vector<int> cls = classes(data);
    RevealedRelation rel(data.size(), cls);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& obs = data.rows[i];
        for (std::size_t j = 0; j < data.size(); ++j) {
            if (cls[i] == cls[j]) continue;
            if (obs.p.vec().dot(data.rows[j].x.vec()) <= obs.m) rel.set_edge(i, j);
        }
    }
    return rel;
}

WarpVerdict check_warp(const RevealedRelation& rel) {
    for (std::size_t i = 0; i < rel.size(); ++i)
        for (std::size_t j = i + 1; j < rel.size(); ++j)
            if (rel.has_edge(i, j) && rel.has_edge(j, i)) return {false, std::pair{int(i), int(j)}};
    return {};
}

template <class T> WarpVerdict check_warp(const Dataset<T>& data) { return check_warp(direct_revealed(data)); }

RevealedRelation transitive_closure(const RevealedRelation& rel) {
    RevealedRelation out = rel;
    const std::size_t n = rel.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (out.has_edge(i, k))
                for (std::size_t j = 0; j < n; ++j)
                    if (out.has_edge(k, j)) out.set_edge(i, j);
    return out;
}

SarpVerdict check_sarp(const RevealedRelation& rel) {
    const int n = int(rel.size());
    enum : char { White, Gray, Black };
    std::vector<char> color(n, White);
    std::vector<int> stack;
    std::vector<std::size_t> cursor;

    for (int root = 0; root < n; ++root) {
        if (color[root] != White) continue;
        stack = {root};
        cursor = {0};
        color[root] = Gray;
        while (!stack.empty()) {
            int u = stack.back();
            auto succ = rel.successors(u);
            if (cursor.back() == succ.size()) {
                color[u] = Black;
                stack.pop_back();
                cursor.pop_back();
                continue;
            }
            int w = succ[cursor.back()++];
            if (color[w] == Gray) {
                auto at = std::find(stack.begin(), stack.end(), w);
                std::vector<int> cycle(at, stack.end());
                cycle.push_back(closing_vertex(rel, u, w));
                return {false, cycle};
            }
            if (color[w] == White) {
                color[w] = Gray;
                stack.push_back(w);
                cursor.push_back(0);
            }
        }
    }
    return {};
}

template <class T> SarpVerdict check_sarp(const Dataset<T>& data) { return check_sarp(direct_revealed(data)); }

SarpVerdict shortest_sarp_cycle(const RevealedRelation& rel) {
    const int n = int(rel.size());
    std::vector<int> best;
    for (int s = 0; s < n; ++s) {
        std::vector<int> parent(n, -2);
        std::deque<int> queue{s};
        parent[s] = -1;
        int last = -1;
        while (!queue.empty() && last < 0) {
            int u = queue.front();
            queue.pop_front();
            for (int w : rel.successors(u)) {
                if (w == s) {
                    last = u;
                    break;
                }
                if (parent[w] == -2) {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if (last < 0) continue;
        std::vector<int> cycle;
        for (int v = last; v != -1; v = parent[v]) cycle.push_back(v);
        std::reverse(cycle.begin(), cycle.end());
        cycle.push_back(closing_vertex(rel, last, s));
        if (best.empty() || cycle.size() < best.size()) best = std::move(cycle);
    }
    if (best.empty()) return {};
    return {false, best};
}

CycleError::CycleError(std::vector<int> cycle) : std::runtime_error(format_cycle(cycle)), cycle_(std::move(cycle)) {}

std::vector<int> extend_to_total_order(const RevealedRelation& rel) {
    const std::size_t n = rel.size();
    std::vector<int> indegree(n, 0);
    for (auto [i, j] : rel.edges()) ++indegree[j];
    std::vector<int> order;
    std::vector<bool> done(n, false);
    while (order.size() < n) {
        std::size_t next = n;
        for (std::size_t v = 0; v < n; ++v)
            if (!done[v] && indegree[v] == 0) {
                next = v;
                break;
            }
        if (next == n) throw CycleError(check_sarp(rel).cycle);
        done[next] = true;
        order.push_back(int(next));
        for (int w : rel.successors(next)) --indegree[w];
    }
    return order;
}

template <class T> std::vector<int> extend_to_total_order(const Dataset<T>& data) {
    return extend_to_total_order(direct_revealed(data));
}

#define GALE_INSTANTIATE(T)                                                                            \
    template struct Observation<T>;                                                                    \
    template bool same_bundle(const Bundle<T>&, const Bundle<T>&);                                     \
    template RevealedRelation direct_revealed(const Dataset<T>&);                                      \
    template WarpVerdict check_warp(const Dataset<T>&);                                                \
    template SarpVerdict check_sarp(const Dataset<T>&);                                                \
    template std::vector<int> extend_to_total_order(const Dataset<T>&);

GALE_INSTANTIATE(double)
GALE_INSTANTIATE(Rational)

#undef GALE_INSTANTIATE

} // namespace gale
