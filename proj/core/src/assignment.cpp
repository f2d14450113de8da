#include "maxkin/assignment.hpp"

#include <limits>
#include <stdexcept>

namespace maxkin {

// Jonker-Volgenant via successive shortest augmenting paths with dual updates
// (the classic e-maxflow formulation used by lap solvers).
std::vector<int> solve_assignment(const std::vector<double>& cost, std::size_t n) {
    if (cost.size() != n * n) throw std::invalid_argument("solve_assignment: cost must be n*n");
    const double INF = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, -1);   // p[col] = row matched to col (cols 1..n, 0 is virtual)
    std::vector<int> way(n + 1, 0);

    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = static_cast<int>(i);
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, INF);
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = static_cast<std::size_t>(p[j0]);
            double delta = INF;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = static_cast<int>(j0);
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[static_cast<std::size_t>(p[j])] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != -1);
        do {
            const std::size_t j1 = static_cast<std::size_t>(way[j0]);
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(n, -1);
    for (std::size_t j = 1; j <= n; ++j)
        if (p[j] > 0) row_to_col[static_cast<std::size_t>(p[j] - 1)] = static_cast<int>(j - 1);
    return row_to_col;
}

} // namespace maxkin
