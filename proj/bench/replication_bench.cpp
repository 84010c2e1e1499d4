// Times the replication engine with the serial reference loop against the
// OpenMP path at increasing thread counts, verifying on the way that the
// summaries are bit-identical.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "mmdpath/parallel.hpp"
#include "mmdpath/serialize.hpp"
#include "mmdpath/sim.hpp"

using namespace mmdpath;

namespace {

std::string summary_key(const sim::SimSummary& s) {
  return serialize::summary_to_json(s).dump();
}

}  // namespace

int main(int argc, char** argv) {
  const int n_reps = argc > 1 ? std::atoi(argv[1]) : 24;
  const int max_threads = parallel::hardware_parallelism();

  sim::Scenario scenario;
  scenario.p = 100;
  scenario.n = 200;
  scenario.N = 300;
  scenario.theta_star = 0.2;
  scenario.rho = 0.25;

  std::printf("replication benchmark: %d replications, p=%d n=%d N=%d, hardware threads %d\n",
              n_reps, scenario.p, scenario.n, scenario.N, max_threads);

  std::string reference;
  double serial_seconds = 0.0;
  for (int threads = 1; threads <= max_threads; threads *= 2) {
    const auto start = std::chrono::steady_clock::now();
    const auto summary = sim::run_replications(scenario, n_reps, 4711, threads);
    const double seconds =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                              start)
            .count() /
        1000.0;
    const std::string key = summary_key(summary);
    if (threads == 1) {
      reference = key;
      serial_seconds = seconds;
      std::printf("  serial reference      %7.2fs\n", seconds);
    } else {
      std::printf("  openmp %2d threads     %7.2fs  speedup %.2fx  %s\n", threads, seconds,
                  serial_seconds / seconds,
                  key == reference ? "bit-identical" : "RESULT MISMATCH");
      if (key != reference) return 1;
    }
  }
  return 0;
}
