#pragma once

#include "ddpinn/common.hpp"

#include <cstddef>
#include <random>
#include <vector>

namespace ddpinn {

// Point-set primitives on axis-aligned boxes. All functions return points
// as columns of a (dim x count) matrix.

//! Full tensor grid of cell centers with n cells per axis.
Mat cell_centered_tensor_grid(const Vec& lower, const Vec& upper, int n_per_axis);

//! m cell-centered grid points. Uses the smallest n with n^dim >= m and
//! keeps an evenly strided subset when n^dim > m.
Mat cell_centered_grid(const Vec& lower, const Vec& upper, std::size_t m);

//! Latin hypercube sample: each coordinate has exactly one point in each
//! of the m equal strata.
Mat latin_hypercube(const Vec& lower, const Vec& upper, std::size_t m,
                    std::mt19937_64& rng);

//! m indices spread evenly over [0, total).
std::vector<std::size_t> even_subset(std::size_t total, std::size_t m);

//! Smallest n with n^dim >= m.
int grid_side(std::size_t m, int dim);

}  // namespace ddpinn
