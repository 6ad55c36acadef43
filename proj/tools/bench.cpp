// Serial-reference vs OpenMP kernel timings. `--smoke` runs one tiny size so
// the target stays exercised by ctest.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>

#include "pks/field.hpp"
#include "pks/helmholtz.hpp"
#include "pks/parallel.hpp"
#include "pks/reference.hpp"

using namespace pks;
namespace chrono = std::chrono;

namespace {

double time_ms(int reps, const std::function<void()>& fn) {
  fn();  // warm up
  const auto t0 = chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto t1 = chrono::steady_clock::now();
  return chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void bench_size(int n, int reps) {
  auto g = Grid::make_2d(n, n, 1.0, 1.0);
  Field f = Field::from_function(g, [](double x, double y) {
    return 0.3 + 0.2 * std::cos(3 * x) * std::cos(2 * y) + 0.1 * x * y;
  });
  HelmholtzSolver solver(g, 1.0);

  struct Row {
    const char* name;
    double serial, parallel;
  };
  volatile double sink = 0.0;
  Row rows[] = {
      {"integrate", time_ms(reps, [&] { sink = ref::integrate(f); }),
       time_ms(reps, [&] { sink = integrate(f); })},
      {"gradient", time_ms(reps, [&] { sink = ref::gradient(f).comp[0][1]; }),
       time_ms(reps, [&] { sink = gradient(f).comp[0][1]; })},
      {"tv_isotropic", time_ms(reps, [&] { sink = ref::tv_isotropic(f); }),
       time_ms(reps, [&] { sink = tv_isotropic(f); })},
      {"helmholtz", 0.0, time_ms(reps, [&] { sink = solver.solve(f, 0.02)[0]; })},
  };
  (void)sink;
  std::printf("%d x %d grid, %d threads (PKS_THREADS caps)\n", n, n,
              par::thread_count());
  std::printf("%-14s %12s %12s %9s\n", "kernel", "serial ms", "openmp ms",
              "speedup");
  for (const Row& r : rows) {
    if (r.serial > 0.0)
      std::printf("%-14s %12.3f %12.3f %8.2fx\n", r.name, r.serial, r.parallel,
                  r.serial / r.parallel);
    else
      std::printf("%-14s %12s %12.3f\n", r.name, "-", r.parallel);
  }
}

}  // namespace

int main(int argc, char** argv) {
  const bool smoke = argc > 1 && std::strcmp(argv[1], "--smoke") == 0;
  if (smoke) {
    bench_size(128, 3);
    return 0;
  }
  bench_size(512, 10);
  std::printf("\n");
  bench_size(1024, 5);
  return 0;
}
