#include "ellbill/oracle2d.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ellbill/error.hpp"

namespace ellbill {

bool EllipseDomain::inside(double x, double y) const { return (x / a_) * (x / a_) + (y / b_) * (y / b_) < 1.0; }

double EllipseDomain::boundary_distance(double x, double y, int dx, int dy) const {
    if (dx != 0) {
        const double xb = a_ * std::sqrt(std::max(0.0, 1 - (y / b_) * (y / b_)));
        return dx > 0 ? xb - x : x + xb;
    }
    const double yb = b_ * std::sqrt(std::max(0.0, 1 - (x / a_) * (x / a_)));
    return dy > 0 ? yb - y : y + yb;
}

void EllipseDomain::lattice(double h, int& i0, int& i1, int& j0, int& j1, double& ox, double& oy) const {
    i1 = static_cast<int>(std::ceil(a_ / h));
    j1 = static_cast<int>(std::ceil(b_ / h));
    i0 = -i1;
    j0 = -j1;
    ox = oy = 0;
}

bool RectangleDomain::inside(double x, double y) const {
    const double ex = 1e-12 * w_, ey = 1e-12 * h_;
    return x > ex && x < w_ - ex && y > ey && y < h_ - ey;
}

double RectangleDomain::boundary_distance(double x, double y, int dx, int dy) const {
    if (dx != 0) return dx > 0 ? w_ - x : x;
    return dy > 0 ? h_ - y : y;
}

void RectangleDomain::lattice(double h, int& i0, int& i1, int& j0, int& j1, double& ox, double& oy) const {
    i0 = 0;
    j0 = 0;
    i1 = static_cast<int>(std::ceil(w_ / h));
    j1 = static_cast<int>(std::ceil(h_ / h));
    ox = oy = 0;
}

int GridOperator::lookup(int i, int j) const {
    if (i < min_i || i > max_i || j < min_j || j > max_j) return -1;
    return index_of[static_cast<std::size_t>((j - min_j) * (max_i - min_i + 1) + (i - min_i))];
}

GridOperator shortley_weller(const Domain& domain, double h) {
    if (!(h > 0)) fail(ErrorCode::InvalidArgument, "grid spacing must be positive");
    GridOperator op;
    op.h = h;
    domain.lattice(h, op.min_i, op.max_i, op.min_j, op.max_j, op.origin_x, op.origin_y);
    const int nx = op.max_i - op.min_i + 1, ny = op.max_j - op.min_j + 1;
    op.index_of.assign(static_cast<std::size_t>(nx) * ny, -1);
    for (int j = op.min_j; j <= op.max_j; ++j)
        for (int i = op.min_i; i <= op.max_i; ++i)
            if (domain.inside(op.origin_x + i * h, op.origin_y + j * h)) {
                op.index_of[static_cast<std::size_t>((j - op.min_j) * nx + (i - op.min_i))] =
                    static_cast<int>(op.node_i.size());
                op.node_i.push_back(i);
                op.node_j.push_back(j);
            }
    const int n = static_cast<int>(op.node_i.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(n) * 5);
    for (int k = 0; k < n; ++k) {
        const int i = op.node_i[k], j = op.node_j[k];
        const double x = op.origin_x + i * h, y = op.origin_y + j * h;
        double diag = 0;
        for (int axis = 0; axis < 2; ++axis) {
            const int dx = axis == 0 ? 1 : 0, dy = axis == 0 ? 0 : 1;
            const int plus = op.lookup(i + dx, j + dy), minus = op.lookup(i - dx, j - dy);
            const double hp = plus >= 0 ? h : std::clamp(domain.boundary_distance(x, y, dx, dy), 1e-12 * h, h);
            const double hm = minus >= 0 ? h : std::clamp(domain.boundary_distance(x, y, -dx, -dy), 1e-12 * h, h);
            diag += 2.0 / (hp * hm);
            if (plus >= 0) trip.emplace_back(k, plus, -2.0 / (hp * (hp + hm)));
            if (minus >= 0) trip.emplace_back(k, minus, -2.0 / (hm * (hp + hm)));
        }
        trip.emplace_back(k, k, diag);
    }
    op.A.resize(n, n);
    op.A.setFromTriplets(trip.begin(), trip.end());
    op.A.makeCompressed();
    return op;
}

namespace {

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& z) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
    return qr.householderQ() * Eigen::MatrixXd::Identity(z.rows(), z.cols());
}

int reflection_parity(const GridOperator& op, const Eigen::VectorXd& v, bool flip_x) {
    double num = 0, den = 0;
    for (int k = 0; k < static_cast<int>(op.node_i.size()); ++k) {
        const int other = flip_x ? op.lookup(-op.node_i[k], op.node_j[k]) : op.lookup(op.node_i[k], -op.node_j[k]);
        if (other < 0) return 0;
        num += v[k] * v[other];
        den += v[k] * v[k];
    }
    const double r = num / den;
    if (r > 0.9) return 1;
    if (r < -0.9) return -1;
    return 0;
}

}  // namespace

FdResult fd_eigenvalues(const Domain& domain, double h, int k, const FdOptions& opt) {
    if (k < 1 || k > 20) fail(ErrorCode::InvalidArgument, "k must lie in [1, 20]");
    const GridOperator op = shortley_weller(domain, h);
    const int n = static_cast<int>(op.node_i.size());
    const int p = std::min(n, k + opt.extra);
    if (p < k) fail(ErrorCode::GridTooCoarse, "fewer unknowns than requested eigenvalues");

    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(op.A);
    lu.factorize(op.A);
    if (lu.info() != Eigen::Success) fail(ErrorCode::SolverStagnated, "sparse LU factorization failed");

    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Eigen::MatrixXd Q(n, p);
    for (int c = 0; c < p; ++c)
        for (int r = 0; r < n; ++r) Q(r, c) = unif(rng);
    Q = orthonormalize(Q);

    FdResult res;
    res.h = h;
    res.unknowns = n;
    for (int it = 1; it <= opt.max_iter; ++it) {
        Q = orthonormalize(lu.solve(Q));
        const Eigen::MatrixXd AQ = op.A * Q;
        const Eigen::MatrixXd H = Q.transpose() * AQ;
        Eigen::EigenSolver<Eigen::MatrixXd> es(H);
        const Eigen::VectorXcd ev = es.eigenvalues();
        std::vector<int> order(p);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return ev[a].real() < ev[b].real(); });
        bool converged = true;
        std::vector<FdEigenpair> pairs;
        for (int c = 0; c < k; ++c) {
            const int idx = order[c];
            Eigen::VectorXd y = es.eigenvectors().col(idx).real();
            Eigen::VectorXd x = Q * y;
            x /= x.norm();
            const double lam = ev[idx].real();
            const double r = (op.A * x - lam * x).norm() / std::abs(lam);
            if (!(r <= opt.residual_tol) || std::abs(ev[idx].imag()) > 1e-8 * std::abs(lam)) converged = false;
            FdEigenpair pair{lam, r, 0, 0};
            if (domain.symmetric_lattice()) {
                pair.parity_x = reflection_parity(op, x, true);
                pair.parity_y = reflection_parity(op, x, false);
            }
            pairs.push_back(pair);
        }
        res.iterations = it;
        res.pairs = std::move(pairs);
        if (converged) return res;
    }
    fail(ErrorCode::SolverStagnated, "subspace iteration did not reach the residual tolerance");
}

FdResult fd_eigenvalues(const EllipseGeometry& g, double h, int k, const FdOptions& opt) {
    if (h > g.b() / 50 * (1 + 1e-12)) fail(ErrorCode::GridTooCoarse, "ellipse oracle requires h <= b/50");
    return fd_eigenvalues(EllipseDomain(g), h, k, opt);
}

Extrapolated richardson(const FdResult& coarse, const FdResult& fine) {
    Extrapolated out;
    const std::size_t k = std::min(coarse.pairs.size(), fine.pairs.size());
    for (std::size_t i = 0; i < k; ++i) {
        const double lc = coarse.pairs[i].lambda2, lf = fine.pairs[i].lambda2;
        const double ratio = (coarse.h / fine.h) * (coarse.h / fine.h);
        const double ex = (ratio * lf - lc) / (ratio - 1);
        out.lambda2.push_back(ex);
        out.error_estimate.push_back(std::abs(ex - lf));
    }
    return out;
}

double convergence_order(double coarse, double mid, double fine) {
    return std::log2(std::abs((coarse - mid) / (mid - fine)));
}

}  // namespace ellbill
