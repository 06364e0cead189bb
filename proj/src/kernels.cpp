#include "hamcheck/kernels.hpp"

#include <atomic>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hamcheck::kernels {

namespace {

std::atomic<int> g_max_threads{0};

int effective_threads() {
#ifdef _OPENMP
  int cap = g_max_threads.load();
  int avail = omp_get_max_threads();
  return cap > 0 ? std::min(cap, avail) : avail;
#else
  return 1;
#endif
}

bool in_parallel_region() {
#ifdef _OPENMP
  return omp_in_parallel() != 0;
#else
  return false;
#endif
}

}  // namespace

void set_max_threads(int n) { g_max_threads.store(n < 0 ? 0 : n); }

int max_threads() { return effective_threads(); }

DiffPoly multiply_serial(const DiffPoly& a, const DiffPoly& b) {
  DiffPoly out;
  if (a.is_zero() || b.is_zero()) return out;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) out.add_term(ma * mb, ca * cb);
  return out;
}

DiffPoly multiply_parallel(const DiffPoly& a, const DiffPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<const DiffPoly::Terms::value_type*> lhs;
  lhs.reserve(a.size());
  for (const auto& t : a.terms()) lhs.push_back(&t);
  const int nthreads = effective_threads();
  std::vector<DiffPoly> partial(static_cast<std::size_t>(nthreads));
  const auto n = static_cast<std::ptrdiff_t>(lhs.size());
#pragma omp parallel for num_threads(nthreads) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
#ifdef _OPENMP
    auto& acc = partial[static_cast<std::size_t>(omp_get_thread_num())];
#else
    auto& acc = partial[0];
#endif
    const auto& [ma, ca] = *lhs[static_cast<std::size_t>(i)];
    for (const auto& [mb, cb] : b.terms()) acc.add_term(ma * mb, ca * cb);
  }
  DiffPoly out;
  for (const auto& p : partial) out += p;
  return out;
}

DiffPoly multiply(const DiffPoly& a, const DiffPoly& b) {
  if (a.size() * b.size() >= kParallelMultiplyThreshold && effective_threads() > 1 &&
      !in_parallel_region())
    return multiply_parallel(a, b);
  return multiply_serial(a, b);
}

std::vector<DiffPoly> map_serial(std::span<const DiffPoly> in, const PolyMap& f) {
  std::vector<DiffPoly> out;
  out.reserve(in.size());
  for (const auto& p : in) out.push_back(f(p));
  return out;
}

std::vector<DiffPoly> map_parallel(std::span<const DiffPoly> in, const PolyMap& f) {
  std::vector<DiffPoly> out(in.size());
  for_each_index(in.size(), [&](std::size_t i) { out[i] = f(in[i]); });
  return out;
}

std::vector<DiffPoly> map(std::span<const DiffPoly> in, const PolyMap& f) {
  if (in.size() < 2 || effective_threads() <= 1 || in_parallel_region()) return map_serial(in, f);
  return map_parallel(in, f);
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body) {
  if (n < 2 || effective_threads() <= 1 || in_parallel_region()) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  // Exceptions must not escape an OpenMP region; the first one is rethrown.
  std::exception_ptr failure;
  std::mutex m;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for num_threads(effective_threads()) schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(m);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace hamcheck::kernels
