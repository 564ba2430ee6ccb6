#include "infx/weak_form.hpp"

namespace infx {

namespace {

using Triplet = Eigen::Triplet<double>;

}  // namespace

WeakForm::WeakForm(const FrameField& frame, const ScalarField& p) : grid_(frame.grid) {
    const Grid2D& g = grid_;
    const double ix = 1.0 / g.hx(), iy = 1.0 / g.hy();
    const double area = g.hx() * g.hy() / 4.0;

    slot_.assign(std::size_t(g.size()), -1);
    for (Eigen::Index k = 0; k < g.size(); ++k) {
        if (g.is_boundary(k)) continue;
        slot_[std::size_t(k)] = Eigen::Index(interior_.size());
        interior_.push_back(k);
    }

    tris_.reserve(std::size_t(4 * (g.nx() - 1) * (g.ny() - 1)));
    for (int j = 0; j + 1 < g.ny(); ++j) {
        for (int i = 0; i + 1 < g.nx(); ++i) {
            const Eigen::Index c00 = g.index(i, j), c10 = g.index(i + 1, j);
            const Eigen::Index c11 = g.index(i + 1, j + 1), c01 = g.index(i, j + 1);
            const Eigen::Matrix2d a = (frame[c00] + frame[c10] + frame[c11] + frame[c01]) / 4.0;
            const double pc = (p[c00] + p[c10] + p[c11] + p[c01]) / 4.0;
            auto add = [&](std::array<Eigen::Index, 3> nodes, std::array<Eigen::Vector2d, 3> e) {
                Triangle t{nodes, {}, area, pc};
                for (int v = 0; v < 3; ++v) t.d[std::size_t(v)] = a * e[std::size_t(v)];
                tris_.push_back(t);
            };
            using V = Eigen::Vector2d;
            add({c00, c10, c11}, {V(-ix, 0), V(ix, -iy), V(0, iy)});
            add({c00, c11, c01}, {V(0, -iy), V(ix, 0), V(-ix, iy)});
            add({c00, c10, c01}, {V(-ix, -iy), V(ix, 0), V(0, iy)});
            add({c10, c11, c01}, {V(0, -iy), V(ix, iy), V(-ix, 0)});
        }
    }
}

double WeakForm::mass(Eigen::Index node) const {
    const auto n = grid_.node(node);
    double m = grid_.hx() * grid_.hy();
    if (n.i == 0 || n.i == grid_.nx() - 1) m *= 0.5;
    if (n.j == 0 || n.j == grid_.ny() - 1) m *= 0.5;
    return m;
}

Eigen::SparseMatrix<double, Eigen::RowMajor> WeakForm::assemble(const std::vector<Eigen::Matrix2d>& tensors) const {
    std::vector<Triplet> trips;
    trips.reserve(tris_.size() * 9);
    for (std::size_t t = 0; t < tris_.size(); ++t) {
        const Triangle& tr = tris_[t];
        for (int a = 0; a < 3; ++a) {
            const Eigen::Index ra = slot_[std::size_t(tr.nodes[std::size_t(a)])];
            if (ra < 0) continue;
            const Eigen::Vector2d kd = tensors[t] * tr.d[std::size_t(a)];
            for (int b = 0; b < 3; ++b) {
                const Eigen::Index cb = slot_[std::size_t(tr.nodes[std::size_t(b)])];
                if (cb < 0) continue;
                trips.emplace_back(ra, cb, tr.area * kd.dot(tr.d[std::size_t(b)]));
            }
        }
    }
    Eigen::SparseMatrix<double, Eigen::RowMajor> m(unknowns(), unknowns());
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

Eigen::SparseMatrix<double, Eigen::RowMajor> WeakForm::assemble(const Eigen::VectorXd& weights) const {
    std::vector<Eigen::Matrix2d> k(tris_.size());
    for (std::size_t t = 0; t < tris_.size(); ++t) k[t] = weights[Eigen::Index(t)] * Eigen::Matrix2d::Identity();
    return assemble(k);
}

Eigen::SparseMatrix<double, Eigen::RowMajor> WeakForm::assemble_full(const Eigen::VectorXd& weights) const {
    std::vector<Triplet> trips;
    trips.reserve(tris_.size() * 9);
    for (std::size_t t = 0; t < tris_.size(); ++t) {
        const Triangle& tr = tris_[t];
        const double w = weights[Eigen::Index(t)] * tr.area;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                trips.emplace_back(tr.nodes[std::size_t(a)], tr.nodes[std::size_t(b)],
                                   w * tr.d[std::size_t(a)].dot(tr.d[std::size_t(b)]));
    }
    Eigen::SparseMatrix<double, Eigen::RowMajor> m(grid_.size(), grid_.size());
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

Eigen::VectorXd WeakForm::restrict(const ScalarField& u) const {
    Eigen::VectorXd out(unknowns());
    for (std::size_t s = 0; s < interior_.size(); ++s) out[Eigen::Index(s)] = u[interior_[s]];
    return out;
}

void WeakForm::prolong(const Eigen::VectorXd& interior, ScalarField& u) const {
    for (std::size_t s = 0; s < interior_.size(); ++s) u[interior_[s]] = interior[Eigen::Index(s)];
}

}  // namespace infx
