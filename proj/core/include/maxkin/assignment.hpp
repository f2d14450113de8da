#ifndef MAXKIN_ASSIGNMENT_HPP
#define MAXKIN_ASSIGNMENT_HPP

#include <cstddef>
#include <vector>

namespace maxkin {

// Dense square linear assignment (Jonker-Volgenant shortest augmenting path).
// cost is row-major n x n. Returns the column assigned to each row.
// O(n^3); used as the exact optimal-coupling oracle for W2 at small n.
std::vector<int> solve_assignment(const std::vector<double>& cost, std::size_t n);

} // namespace maxkin

#endif
