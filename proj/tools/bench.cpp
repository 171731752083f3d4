// Serial vs OpenMP timings for the data-parallel kernels: interval node
// tables, eps-grid grand norms, Birkhoff orbit sums and the modular
// contraction sweep. Results must agree bitwise between modes; the harness
// checks that while timing.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "grandlux/dynamics.hpp"
#include "grandlux/ergodic.hpp"
#include "grandlux/exec.hpp"
#include "grandlux/experiment.hpp"
#include "grandlux/norms.hpp"

using namespace grandlux;

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

template <class F>
double timed(F&& fn, double* result) {
  double t0 = now_seconds();
  *result = fn();
  return now_seconds() - t0;
}

void report(const std::string& name, double serial_s, double parallel_s, double vs, double vp) {
  const bool match = vs == vp;
  std::printf("%-34s %10.3fs %10.3fs %7.2fx   %s\n", name.c_str(), serial_s, parallel_s,
              serial_s / parallel_s, match ? "bitwise equal" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("grandlux kernel benchmark (%d OpenMP threads available)\n", exec::max_threads());
  std::printf("%-34s %11s %11s %8s\n", "kernel", "serial", "parallel", "speedup");

  const double golden = 0.6180339887498949;
  auto interval = ProbabilitySpace::interval(QuadratureSpec{128, 8, 0.5, {}});
  auto p2 = Exponent::constant(2.0);
  auto rot = dynamics::Transformation::rotation(golden);
  auto cos1 = FunctionRep::cosine(1);

  {
    auto work = [&]() {
      auto avg = dynamics::birkhoff_average(interval, cos1, rot, 20000);
      norms::ModularEvaluator ev(interval, avg, p2);
      return ev.at_scale(1.0, 0.5).value();
    };
    double vs = 0.0, vp = 0.0;
    exec::ModeGuard serial(exec::Mode::Serial);
    double ts = timed(work, &vs);
    exec::set_mode(exec::Mode::Parallel);
    double tp = timed(work, &vp);
    report("orbit node table (n=2e4)", ts, tp, vs, vp);
  }

  {
    auto avg = dynamics::birkhoff_average(interval, cos1, rot, 2000);
    auto work = [&]() {
      return norms::grand_norm(interval, avg, p2, 1.0).value.value();
    };
    double vs = 0.0, vp = 0.0;
    exec::ModeGuard serial(exec::Mode::Serial);
    double ts = timed(work, &vs);
    exec::set_mode(exec::Mode::Parallel);
    double tp = timed(work, &vp);
    report("grand norm eps sweep (interval)", ts, tp, vs, vp);
  }

  {
    auto sys = experiment::make_random_system(7, 32);
    auto space = ProbabilitySpace::finite(sys.weights);
    auto p = Exponent::sampled(sys.exponent_values);
    auto f = FunctionRep::sampled(sys.f_values);
    auto work = [&]() {
      double acc = 0.0;
      for (int rep = 0; rep < 50; ++rep) {
        acc += norms::grand_norm(space, f, p, 1.0).value.value();
      }
      return acc;
    };
    double vs = 0.0, vp = 0.0;
    exec::ModeGuard serial(exec::Mode::Serial);
    double ts = timed(work, &vs);
    exec::set_mode(exec::Mode::Parallel);
    double tp = timed(work, &vp);
    report("grand norm eps sweep (finite x50)", ts, tp, vs, vp);
  }

  {
    auto sys = experiment::make_random_system(11, 32);
    auto space = ProbabilitySpace::finite(sys.weights);
    auto p = Exponent::sampled(sys.exponent_values);
    auto f = FunctionRep::sampled(sys.f_values);
    auto T = dynamics::Transformation::finite_map(sys.permutation);
    auto work = [&]() {
      std::vector<double> grid;
      for (int k = 1; k <= 2000; ++k) grid.push_back((p.pminus() - 1.0) * k / 2001.0);
      double acc = 0.0;
      for (int rep = 0; rep < 40; ++rep) {
        auto rows = ergodic::verify_modular_contraction(space, f, T, p, grid);
        acc += rows.back().modular_f;
      }
      return acc;
    };
    double vs = 0.0, vp = 0.0;
    exec::ModeGuard serial(exec::Mode::Serial);
    double ts = timed(work, &vs);
    exec::set_mode(exec::Mode::Parallel);
    double tp = timed(work, &vp);
    report("modular contraction sweep (2000x40)", ts, tp, vs, vp);
  }

  return 0;
}
