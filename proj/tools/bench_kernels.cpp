// Times the reduction kernels against their serial references on synthetic
// workloads shaped like the library's hot loops: many cheap terms (pairwise
// distance sums) and fewer expensive terms (candidate scans that each walk a
// block of data). Run with an optional scale factor: bench_kernels [scale].
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#include "netsheaf/exec.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class Fn>
double time_best_of(int reps, Fn&& fn, double& sink) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = Clock::now();
    sink += fn();
    best = std::min(best, seconds_since(t0));
  }
  return best;
}

void report_row(const char* name, std::size_t n, double serial, double par1,
                double par4) {
  std::printf("%-18s n=%-9zu serial %9.3f ms   threads=1 %9.3f ms   "
              "threads=4 %9.3f ms   speedup x%.2f\n",
              name, n, serial * 1e3, par1 * 1e3, par4 * 1e3,
              par4 > 0 ? serial / par4 : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
  double scale = 1.0;
  if (argc > 1) scale = std::strtod(argv[1], nullptr);
  if (!(scale > 0)) scale = 1.0;

  const std::size_t cheap_n = static_cast<std::size_t>(4.0e6 * scale);
  const std::size_t heavy_n = static_cast<std::size_t>(2.0e4 * scale);
  const std::size_t block = 512;
  const int reps = 5;

  std::mt19937_64 rng(0x5ca1eULL);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> data(std::max(cheap_n, heavy_n * block));
  for (double& x : data) x = uni(rng);

  const netsheaf::ExecPolicy one{1, true};
  const netsheaf::ExecPolicy four{4, true};
  double sink = 0.0;

  {
    auto cheap = [&](std::size_t i) { return data[i] * data[i]; };
    double s = time_best_of(
        reps, [&] { return netsheaf::reference::sum_terms(cheap_n, cheap); },
        sink);
    double p1 = time_best_of(
        reps, [&] { return netsheaf::sum_terms(cheap_n, cheap, one); }, sink);
    double p4 = time_best_of(
        reps, [&] { return netsheaf::sum_terms(cheap_n, cheap, four); }, sink);
    report_row("sum, cheap terms", cheap_n, s, p1, p4);
  }
  {
    auto heavy = [&](std::size_t i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < block; ++j) {
        const double d = data[i * block + j] - data[j];
        acc += d * d;
      }
      return std::sqrt(acc);
    };
    double s = time_best_of(
        reps, [&] { return netsheaf::reference::sum_terms(heavy_n, heavy); },
        sink);
    double p1 = time_best_of(
        reps, [&] { return netsheaf::sum_terms(heavy_n, heavy, one); }, sink);
    double p4 = time_best_of(
        reps, [&] { return netsheaf::sum_terms(heavy_n, heavy, four); }, sink);
    report_row("sum, heavy terms", heavy_n, s, p1, p4);
  }
  {
    auto term = [&](std::size_t i) { return std::abs(data[i]); };
    double s = time_best_of(
        reps, [&] { return netsheaf::reference::max_terms(cheap_n, term); },
        sink);
    double p1 = time_best_of(
        reps, [&] { return netsheaf::max_terms(cheap_n, term, one); }, sink);
    double p4 = time_best_of(
        reps, [&] { return netsheaf::max_terms(cheap_n, term, four); }, sink);
    report_row("max, cheap terms", cheap_n, s, p1, p4);
  }
  {
    auto heavy = [&](std::size_t i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < block; ++j)
        acc += std::abs(data[i * block + j] - 0.25);
      return acc;
    };
    double s = time_best_of(
        reps,
        [&] {
          return netsheaf::reference::argmin_terms(heavy_n, heavy).second;
        },
        sink);
    double p1 = time_best_of(
        reps,
        [&] { return netsheaf::argmin_terms(heavy_n, heavy, one).second; },
        sink);
    double p4 = time_best_of(
        reps,
        [&] { return netsheaf::argmin_terms(heavy_n, heavy, four).second; },
        sink);
    report_row("argmin, heavy", heavy_n, s, p1, p4);
  }

  std::printf("(checksum %.6f)\n", sink);
  return 0;
}
