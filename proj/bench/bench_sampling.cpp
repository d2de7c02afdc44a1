// Serial reference vs OpenMP sampling kernels. Prints one line per case:
// vertices, best-of-N seconds for each kernel, speedup and max abs
// difference between the two fields.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "novikov/embedding.hpp"
#include "novikov/potential.hpp"
#include "novikov/sampling.hpp"

using namespace novikov;

namespace {

template <class F>
double best_of(int reps, F&& body) {
  double best = HUGE_VAL;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 3;
  const double phi = std::numbers::phi;
  const PeriodicFunction F(3, {{{1, 0, 0}, 1.0, 0.0}, {{0, 1, 0}, 1.0, 0.3}, {{0, 0, 1}, 1.0, 1.1},
                               {{1, 1, 0}, 0.5, 0.0}, {{0, 1, 1}, 0.5, 2.0}});
  const auto plane = restrict_to(F, make_frame({{1.0, 0.0, 1 / phi}, {0.0, 1.0, 1 / phi}}, {0.1, 0.2, 0.3}));
  const auto space = restrict_to(F, make_frame({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {0.0, 0.0, 0.0}));

  std::printf("threads %d\n", omp_get_max_threads());
  std::printf("%-8s %12s %12s %12s %8s %10s\n", "case", "vertices", "serial_s", "omp_s", "speedup", "max_diff");
  for (double half : {4.0, 8.0, 16.0}) {
    const Window w(0.0, 0.0, half, 0.01);
    ScalarField a, b;
    const double ts = best_of(reps, [&] { a = sample_grid_reference(plane, w); });
    const double tp = best_of(reps, [&] { b = sample_grid(plane, w); });
    std::printf("2d/%-5g %12zu %12.4f %12.4f %8.2f %10.2e\n", half, a.values.size(), ts, tp, ts / tp,
                max_diff(a.values, b.values));
  }
  for (double half : {1.0, 1.5, 2.0}) {
    const BoxWindow bw({0.0, 0.0, 0.0}, half, 0.02);
    VoxelField a, b;
    const double ts = best_of(reps, [&] { a = sample_box_reference(space, bw); });
    const double tp = best_of(reps, [&] { b = sample_box(space, bw); });
    std::printf("3d/%-5g %12zu %12.4f %12.4f %8.2f %10.2e\n", half, a.values.size(), ts, tp, ts / tp,
                max_diff(a.values, b.values));
  }
  return 0;
}
