#pragma once
/**
 * @file model.hpp
 * @brief World state, ring interaction topology, Laplacian/connectivity, and
 *        ground-truth angular geometry around the target.
 *
 * Agent indices are 0-based in the C++ API; file formats and logs print them
 * 1-based. The interaction graph is the fixed directed ring i -> i+1 (mod n).
 */

#include "circumnav/geom.hpp"

#include <vector>

namespace circumnav {

struct AgentState {
    Vec2 position; ///< p_i (meters)
    Vec2 estimate; ///< target-position estimate of this agent (meters)
};

struct WorldState {
    double time = 0.0;
    Vec2 target;                    ///< stationary target (meters)
    std::vector<AgentState> agents; ///< index = agent id (0-based)

    int agent_count() const { return static_cast<int>(agents.size()); }
};

/// Directed ring: each agent senses exactly one neighbor, i -> i+1, wrapping.
struct RingTopology {
    int n = 0;
    int neighbor(int i) const { return (i + 1 == n) ? 0 : i + 1; }
};

/// Dense n-by-n Laplacian, row-major.
class LaplacianMatrix {
public:
    explicit LaplacianMatrix(int n) : n_(n), entries_(static_cast<std::size_t>(n) * n, 0.0) {}

    int size() const { return n_; }
    double& at(int i, int j) { return entries_[static_cast<std::size_t>(i) * n_ + j]; }
    double at(int i, int j) const { return entries_[static_cast<std::size_t>(i) * n_ + j]; }
    const std::vector<double>& entries() const { return entries_; }

private:
    int n_;
    std::vector<double> entries_;
};

/// Laplacian of the directed ring: 1 on the diagonal, -1 toward the neighbor.
/// Balanced (zero row and column sums) since in- and out-degrees are all 1.
LaplacianMatrix ring_laplacian(const RingTopology& topology);

/// Algebraic connectivity: minimum Rayleigh quotient of (L + L^T)/2 over
/// vectors orthogonal to the all-ones vector, i.e. the second-smallest
/// eigenvalue of the symmetrized Laplacian.
/// Throws NotBalanced when column sums exceed 1e-9 in magnitude.
double algebraic_connectivity(const LaplacianMatrix& laplacian);

/// Actual angular separation between agents i and j: the counterclockwise
/// angle at the target from the direction of agent i to that of agent j,
/// in [0, 2*pi). Collinear same-side agents give 0.
Angle true_separation(const WorldState& world, int i, int j, double eps = kMinSeparation);

/// Locally measurable spacing: counterclockwise angle from agent i's bearing
/// to the target to its bearing to agent j, in [0, 2*pi).
Angle measured_psi(const WorldState& world, int i, int j, double eps = kMinSeparation);

/// Sum of true separations over the ring edges. Equals 2*pi*w where w >= 1
/// is the winding number of the agent ordering around the target; exactly
/// 2*pi when the agents sit in ring order (counterclockwise).
double separation_sum(const WorldState& world, double eps = kMinSeparation);

/// True when the agents are in counterclockwise ring order around the target.
bool angularly_ordered(const WorldState& world, double eps = kMinSeparation);

} // namespace circumnav
