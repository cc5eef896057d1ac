#include "circumnav/model.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace circumnav {

LaplacianMatrix ring_laplacian(const RingTopology& topology) {
    if (topology.n < 2)
        throw ConfigError("ring_laplacian: need at least two agents");
    LaplacianMatrix laplacian(topology.n);
    for (int i = 0; i < topology.n; ++i) {
        laplacian.at(i, i) = 1.0;
        laplacian.at(i, topology.neighbor(i)) = -1.0;
    }
    return laplacian;
}

double algebraic_connectivity(const LaplacianMatrix& laplacian) {
    const int n = laplacian.size();
    for (int j = 0; j < n; ++j) {
        double col = 0.0;
        for (int i = 0; i < n; ++i) col += laplacian.at(i, j);
        if (std::abs(col) > 1e-9)
            throw NotBalanced("algebraic_connectivity: column sums are not zero");
    }

    Eigen::MatrixXd sym(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            sym(i, j) = 0.5 * (laplacian.at(i, j) + laplacian.at(j, i));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    // Eigenvalues come back ascending; index 0 is the trivial zero mode
    // (all-ones direction), index 1 is the connectivity.
    return solver.eigenvalues()(1);
}

Angle true_separation(const WorldState& world, int i, int j, double eps) {
    const UnitVec2 dir_i = unit_bearing(world.target, world.agents[i].position, eps);
    const UnitVec2 dir_j = unit_bearing(world.target, world.agents[j].position, eps);
    return ccw_angle(dir_i, dir_j);
}

Angle measured_psi(const WorldState& world, int i, int j, double eps) {
    const UnitVec2 phi_target = unit_bearing(world.agents[i].position, world.target, eps);
    const UnitVec2 phi_neighbor = unit_bearing(world.agents[i].position, world.agents[j].position, eps);
    return ccw_angle(phi_target, phi_neighbor);
}

double separation_sum(const WorldState& world, double eps) {
    const RingTopology ring{world.agent_count()};
    double sum = 0.0;
    for (int i = 0; i < ring.n; ++i)
        sum += true_separation(world, i, ring.neighbor(i), eps).radians();
    return sum;
}

bool angularly_ordered(const WorldState& world, double eps) {
    // The ring-edge separations always sum to a positive multiple of 2*pi;
    // exactly one winding means the agents are in order.
    return std::abs(separation_sum(world, eps) - kTwoPi) < kPi;
}

} // namespace circumnav
