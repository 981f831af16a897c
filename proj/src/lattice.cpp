#include "ddpinn/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ddpinn {

int grid_side(std::size_t m, int dim)
{
    if (dim < 1)
        throw std::invalid_argument("grid_side: dimension must be positive");
    auto n = static_cast<int>(std::floor(std::pow(static_cast<double>(m), 1.0 / dim)));
    n = std::max(n, 1);
    auto covers = [&](int side) {
        double total = 1;
        for (int i = 0; i < dim; ++i)
            total *= side;
        return total >= static_cast<double>(m);
    };
    while (!covers(n))
        ++n;
    while (n > 1 && covers(n - 1))
        --n;
    return n;
}

std::vector<std::size_t> even_subset(std::size_t total, std::size_t m)
{
    if (m > total)
        throw std::invalid_argument("even_subset: more indices than available");
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i)
        idx[i] = static_cast<std::size_t>(
            (static_cast<long double>(i) + 0.5L) * total / m);
    return idx;
}

Mat cell_centered_tensor_grid(const Vec& lower, const Vec& upper, int n_per_axis)
{
    const auto dim = static_cast<int>(lower.size());
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i)
        total *= static_cast<std::size_t>(n_per_axis);
    Mat pts(dim, static_cast<Eigen::Index>(total));
    std::vector<int> counter(dim, 0);
    for (std::size_t k = 0; k < total; ++k) {
        for (int i = 0; i < dim; ++i) {
            double h = (upper[i] - lower[i]) / n_per_axis;
            pts(i, static_cast<Eigen::Index>(k)) = lower[i] + (counter[i] + 0.5) * h;
        }
        // first axis varies slowest
        for (int i = dim - 1; i >= 0; --i) {
            if (++counter[i] < n_per_axis)
                break;
            counter[i] = 0;
        }
    }
    return pts;
}

Mat cell_centered_grid(const Vec& lower, const Vec& upper, std::size_t m)
{
    if (lower.size() != upper.size())
        throw std::invalid_argument("cell_centered_grid: bound size mismatch");
    const int n = grid_side(m, static_cast<int>(lower.size()));
    Mat full = cell_centered_tensor_grid(lower, upper, n);
    if (static_cast<std::size_t>(full.cols()) == m)
        return full;
    auto idx = even_subset(static_cast<std::size_t>(full.cols()), m);
    Mat out(full.rows(), static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k)
        out.col(static_cast<Eigen::Index>(k)) = full.col(static_cast<Eigen::Index>(idx[k]));
    return out;
}

Mat latin_hypercube(const Vec& lower, const Vec& upper, std::size_t m,
                    std::mt19937_64& rng)
{
    if (lower.size() != upper.size())
        throw std::invalid_argument("latin_hypercube: bound size mismatch");
    const auto dim = lower.size();
    Mat pts(dim, static_cast<Eigen::Index>(m));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::size_t> perm(m);
    for (Eigen::Index i = 0; i < dim; ++i) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        const double width = upper[i] - lower[i];
        for (std::size_t k = 0; k < m; ++k) {
            double u = (static_cast<double>(perm[k]) + unit(rng)) / static_cast<double>(m);
            pts(i, static_cast<Eigen::Index>(k)) = lower[i] + width * u;
        }
    }
    return pts;
}

}  // namespace ddpinn
