#ifndef HAMCHECK_KERNELS_HPP
#define HAMCHECK_KERNELS_HPP

// Data-parallel kernels. Every kernel has a serial reference version kept for
// testing and benchmarking; the dispatching entry point picks the OpenMP
// version when the work is large enough and more than one thread is allowed.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "hamcheck/diffpoly.hpp"

namespace hamcheck::kernels {

DiffPoly multiply_serial(const DiffPoly& a, const DiffPoly& b);
DiffPoly multiply_parallel(const DiffPoly& a, const DiffPoly& b);
DiffPoly multiply(const DiffPoly& a, const DiffPoly& b);

using PolyMap = std::function<DiffPoly(const DiffPoly&)>;

std::vector<DiffPoly> map_serial(std::span<const DiffPoly> in, const PolyMap& f);
std::vector<DiffPoly> map_parallel(std::span<const DiffPoly> in, const PolyMap& f);
std::vector<DiffPoly> map(std::span<const DiffPoly> in, const PolyMap& f);

// Runs body(i) for i in [0, n); body must only touch slot i of its output.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

// Caps kernel parallelism; 0 restores the runtime default.
void set_max_threads(int n);
int max_threads();

// Term-pair count above which multiply() goes parallel.
inline constexpr std::size_t kParallelMultiplyThreshold = 1u << 14;

}  // namespace hamcheck::kernels

#endif  // HAMCHECK_KERNELS_HPP
