#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chcross/assembly.hpp"
#include "chcross/mesh.hpp"
#include "chcross/norms.hpp"
#include "chcross/reference.hpp"
#include "chcross/stepper.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(int reps, const std::function<void()>& fn) {
  fn();  // warm up
  const auto start = Clock::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto stop = Clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() /
         reps;
}

void report(const char* name, double naive_ms, double serial_ms,
            double parallel_ms) {
  std::printf("%-22s naive %9.3f ms   serial %9.3f ms   openmp %9.3f ms   "
              "speedup %.2fx\n",
              name, naive_ms, serial_ms, parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chcross kernel benchmark: naive vs serial vs OpenMP"};
  int n = 256;
  int reps = 5;
  app.add_option("--n", n, "mesh resolution (n x n)");
  app.add_option("--reps", reps, "repetitions per timing");
  CLI11_PARSE(app, argc, argv);

  const double two_pi = 6.283185307179586476925286766559;
  const chcross::Mesh mesh =
      chcross::build_rect_mesh(0.0, two_pi, 0.0, two_pi, n, n);
  const chcross::Exec serial = chcross::Exec::serial();
  const chcross::Exec openmp = chcross::Exec::openmp();
  std::printf("mesh %d x %d (%d nodes), %d thread(s)\n", n, n,
              mesh.node_count(), chcross::resolved_threads(openmp));

  const chcross::NodalFunction w = chcross::interpolate_nodal(
      mesh, [](double x, double y) { return std::cos(x) * std::cos(y) + 2.0; });
  chcross::Assembler assembler(mesh);

  report("assemble mass",
         time_ms(reps, [&] { chcross::naive_assemble_mass(mesh); }),
         time_ms(reps, [&] { assembler.mass(serial); }),
         time_ms(reps, [&] { assembler.mass(openmp); }));
  report("assemble weighted K",
         time_ms(reps,
                 [&] { chcross::naive_assemble_weighted_stiffness(mesh, w, 2); }),
         time_ms(reps, [&] { assembler.weighted_stiffness(w, 2, serial); }),
         time_ms(reps, [&] { assembler.weighted_stiffness(w, 2, openmp); }));

  const chcross::SparseMatrix M = assembler.mass(serial);
  report("matvec",
         time_ms(reps * 10, [&] { chcross::naive_matvec(M, w.values); }),
         time_ms(reps * 10, [&] { chcross::matvec(M, w.values, serial); }),
         time_ms(reps * 10, [&] { chcross::matvec(M, w.values, openmp); }));

  report("lp norm (p=4)",
         time_ms(reps, [&] { chcross::naive_lp_norm(w, 4.0); }),
         time_ms(reps, [&] { chcross::lp_norm(w, 4.0, serial); }),
         time_ms(reps, [&] { chcross::lp_norm(w, 4.0, openmp); }));

  chcross::SchemeParams params;
  params.mesh = &mesh;
  params.tau = 1e-3;
  params.eps = 0.3;
  params.S = 1.0;
  params.T = 1.0;
  chcross::State state;
  state.phi = chcross::interpolate_nodal(mesh, [](double x, double y) {
    return 0.05 * std::cos(x) * std::cos(y) + 0.3;
  });
  state.c = chcross::interpolate_nodal(mesh, [](double x, double y) {
    return 0.05 * std::cos(2.0 * x) * std::cos(2.0 * y) + 0.5;
  });
  state.mu = chcross::NodalFunction(mesh);

  chcross::Stepper stepper_serial(params, serial);
  chcross::Stepper stepper_openmp(params, openmp);
  const double step_serial =
      time_ms(reps, [&] { stepper_serial.advance(state); });
  const double step_openmp =
      time_ms(reps, [&] { stepper_openmp.advance(state); });
  std::printf("%-22s %31s serial %9.3f ms   openmp %9.3f ms   speedup %.2fx\n",
              "full step", "", step_serial, step_openmp,
              step_serial / step_openmp);
  return 0;
}
