// Benchmark comparing the serial reference kernels against the OpenMP ones
// on synthetic workloads; both must produce identical results (exact
// arithmetic), which is asserted before timings are reported.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>

#include "qtate/kernels.hpp"

using namespace qtate;

namespace {

struct Rand {
  std::mt19937_64 eng{42};
  long range(long lo, long hi) {
    return lo + static_cast<long>(eng() % static_cast<uint64_t>(hi - lo + 1));
  }
};

TwistedElement random_element(Rand& rng, const TwistForm& twist, const Scalar& q, int terms,
                              int spread) {
  TwistedBuilder b(TwistedElement(twist, q, Domain::torus));
  for (int i = 0; i < terms; ++i) {
    Exponent e{static_cast<int>(rng.range(-spread, spread)),
               static_cast<int>(rng.range(-spread, spread))};
    std::vector<Scalar::Term> coeff;
    const long val = rng.range(0, 3);
    coeff.emplace_back(val, mpq_class(rng.range(1, 9), rng.range(1, 9)));
    coeff.emplace_back(val + rng.range(1, 4), mpq_class(rng.range(-9, -1), 1));
    for (auto& [ex, c] : coeff) c.canonicalize();
    b.add(std::move(e), Scalar::from_terms(std::move(coeff)));
  }
  return std::move(b).build();
}

template <typename F>
double time_ms(F&& fn, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
  Rand rng;
  const Scalar q = Scalar::from_terms({{0, 1}, {1, 1}});
  const TwistForm twist = TwistForm::ordered(2);

  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-28s %10s %10s %8s\n", "workload", "serial ms", "omp ms", "speedup");

  for (int terms : {100, 300, 800}) {
    const auto f = random_element(rng, twist, q, terms, 24);
    const auto g = random_element(rng, twist, q, terms, 24);
    const auto serial = kernels::multiply_serial(f.terms(), g.terms(), twist, q);
    const auto parallel = kernels::multiply_parallel(f.terms(), g.terms(), twist, q);
    if (serial != parallel) {
      std::printf("kernel mismatch at %d terms!\n", terms);
      return 1;
    }
    const int reps = terms <= 300 ? 5 : 2;
    const double ts = time_ms(
        [&] { kernels::multiply_serial(f.terms(), g.terms(), twist, q); }, reps);
    const double tp = time_ms(
        [&] { kernels::multiply_parallel(f.terms(), g.terms(), twist, q); }, reps);
    std::printf("mul %5d x %-5d terms     %10.2f %10.2f %7.2fx\n", terms, terms, ts, tp,
                ts / tp);
  }

  {
    const auto f = random_element(rng, twist, q, 20000, 64);
    const std::vector<mpq_class> rho{mpq_class(1, 3), mpq_class(-1, 2)};
    const auto ns = kernels::max_norm_serial(f.terms(), rho);
    const auto np = kernels::max_norm_parallel(f.terms(), rho);
    if (ns != np) {
      std::printf("norm kernel mismatch!\n");
      return 1;
    }
    const double ts = time_ms([&] { kernels::max_norm_serial(f.terms(), rho); }, 20);
    const double tp = time_ms([&] { kernels::max_norm_parallel(f.terms(), rho); }, 20);
    std::printf("gauss norm %6zu terms      %10.2f %10.2f %7.2fx\n", f.support_size(), ts, tp,
                ts / tp);
  }
  return 0;
}
