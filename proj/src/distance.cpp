#include "infx/distance.hpp"

#include <array>
#include <functional>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

namespace infx {

namespace {

constexpr std::array<std::pair<int, int>, 8> neighbours{
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

}  // namespace

double edge_length(const FrameField& frame, NodeIndex p, NodeIndex q) {
    const Grid2D& g = frame.grid;
    const Eigen::Matrix2d mid = (frame[g.index(p)] + frame[g.index(q)]) / 2.0;
    const Eigen::Vector2d step((q.i - p.i) * g.hx(), (q.j - p.j) * g.hy());
    return (mid.transpose().inverse() * step).norm();
}

ScalarField riemannian_distance(const FrameField& frame, NodeIndex source) {
    const Grid2D& g = frame.grid;
    if (source.i < 0 || source.j < 0 || source.i >= g.nx() || source.j >= g.ny())
        throw std::out_of_range("distance source outside the grid");

    ScalarField dist = ScalarField::Constant(g.size(), unreachable_distance);
    std::vector<char> done(std::size_t(g.size()), 0);
    using Entry = std::pair<double, Eigen::Index>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;

    const Eigen::Index s = g.index(source);
    dist[s] = 0.0;
    queue.emplace(0.0, s);
    while (!queue.empty()) {
        const auto [d, k] = queue.top();
        queue.pop();
        if (done[std::size_t(k)]) continue;
        done[std::size_t(k)] = 1;
        const NodeIndex p = g.node(k);
        for (const auto& [di, dj] : neighbours) {
            const NodeIndex q{p.i + di, p.j + dj};
            if (q.i < 0 || q.j < 0 || q.i >= g.nx() || q.j >= g.ny()) continue;
            const Eigen::Index kq = g.index(q);
            if (done[std::size_t(kq)]) continue;
            const double cand = d + edge_length(frame, p, q);
            if (cand < dist[kq]) {
                dist[kq] = cand;
                queue.emplace(cand, kq);
            }
        }
    }
    return dist;
}

}  // namespace infx
