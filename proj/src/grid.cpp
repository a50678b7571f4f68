#include "shearflow/grid.hpp"

#include <stdexcept>
#include <string>

namespace shearflow {

namespace {
bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }
}

TorusGrid make_grid(int n1, int n2, int m) {
    if (m < 1)
        throw std::invalid_argument("make_grid: m must be >= 1, got " + std::to_string(m));
    if (n1 < 8 || n1 % 2 != 0)
        throw std::invalid_argument("make_grid: n1 must be even and >= 8, got " + std::to_string(n1));
    if (n2 < 8 || n2 % 2 != 0)
        throw std::invalid_argument("make_grid: n2 must be even and >= 8, got " + std::to_string(n2));
    if (!power_of_two(n1))
        throw std::invalid_argument("make_grid: n1 must be a power of two, got " + std::to_string(n1));
    if (n2 % m != 0)
        throw std::invalid_argument("make_grid: n2 must be divisible by m, got n2=" + std::to_string(n2) +
                                    " m=" + std::to_string(m));
    int per = n2 / m;
    if (per < 8 || !power_of_two(per))
        throw std::invalid_argument("make_grid: n2/m must be a power of two >= 8, got n2/m=" +
                                    std::to_string(per));
    return TorusGrid{n1, n2, m};
}

}  // namespace shearflow
