// coilopt: mutual-inductance shape optimization of B-spline wire coils.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "coilopt/coaxial.h"
#include "coilopt/em.h"
#include "coilopt/errors.h"
#include "coilopt/objective.h"
#include "coilopt/oracle.h"
#include "coilopt/problem.h"
#include "coilopt/scene_io.h"
#include "coilopt/solver.h"

namespace {

using namespace coilopt;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr double kGradCheckTolerance = 1e-5;
// Relative to the largest coil bounding-box diagonal.
constexpr double kGradCheckStep = 2.5e-4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int resolve_coil(const Scene& scene, const std::string& ref) {
  if (auto idx = scene.find_coil(ref)) {
    return *idx;
  }
  try {
    std::size_t used = 0;
    const int idx = std::stoi(ref, &used);
    if (used == ref.size() && idx >= 0 && idx < static_cast<int>(scene.coils.size())) {
      return idx;
    }
  } catch (const std::exception&) {
  }
  throw UsageError("unknown coil '" + ref + "'");
}

double scene_size(const Scene& scene) {
  double size = 0.0;
  for (const SceneCoil& c : scene.coils) {
    size = std::max(size, c.curve.bounding_box_diagonal());
  }
  return size > 0.0 ? size : 1.0;
}

void echo_settings(const Scene& scene) {
  std::cout << "quadrature: Gauss-Legendre Q=" << scene.quadrature_order
            << " per knot interval, mu=" << scene.mu << "\n";
}

int run_mi(const std::string& path, const std::vector<std::string>& pair) {
  const Scene scene = load_scene(path);
  echo_settings(scene);
  std::cout << std::setprecision(10);
  if (!pair.empty()) {
    const int a = resolve_coil(scene, pair[0]);
    const int b = resolve_coil(scene, pair[1]);
    std::cout << scene.coils[a].label() << " " << scene.coils[b].label() << " M="
              << mutual_inductance(scene.coils[a].curve, scene.coils[b].curve, scene.rule,
                                   scene.mu)
              << "\n";
    return kExitOk;
  }
  if (scene.pairs.empty()) {
    throw UsageError("scene has no pairs; use --pair");
  }
  const std::vector<double> mi = pair_mutual_inductances(scene, pack(scene));
  for (std::size_t k = 0; k < mi.size(); ++k) {
    const PairSpec& p = scene.pairs[k];
    std::cout << scene.coils[p.alpha].label() << " " << scene.coils[p.beta].label()
              << " M=" << mi[k] << " target=" << p.target << "\n";
  }
  return kExitOk;
}

int run_grad_check(const std::string& path, double step) {
  const Scene scene = load_scene(path);
  if (design_size(scene) == 0) {
    throw UsageError("design vector is empty: no designable coil in the scene");
  }
  validate_for_optimization(scene);
  const std::vector<double> x = pack(scene);
  const double h = step > 0.0 ? step : kGradCheckStep * scene_size(scene);
  const std::vector<double> analytic = objective_gradient(scene, x);
  const std::vector<double> fd = oracle::finite_difference_gradient4(
      [&](const std::vector<double>& v) { return objective(scene, v); }, x, h);

  echo_settings(scene);
  std::cout << "finite-difference step h=" << h << "\n" << std::setprecision(3);
  double worst = 0.0;
  for (int c = 0; c < static_cast<int>(scene.coils.size()); ++c) {
    const int offset = design_offset(scene, c);
    if (offset < 0) {
      continue;
    }
    int end = static_cast<int>(x.size());
    for (int n = c + 1; n < static_cast<int>(scene.coils.size()); ++n) {
      const int o = design_offset(scene, n);
      if (o >= 0) {
        end = o;
        break;
      }
    }
    const std::span<const double> a(analytic.data() + offset, end - offset);
    const std::span<const double> f(fd.data() + offset, end - offset);
    const double err = oracle::max_relative_error(a, f);
    worst = std::max(worst, err);
    std::cout << scene.coils[c].label() << " max_rel_error=" << err << "\n";
  }
  const bool pass = worst <= kGradCheckTolerance;
  std::cout << (pass ? "PASS" : "FAIL") << " (tolerance " << kGradCheckTolerance << ")\n";
  return pass ? kExitOk : kExitNumerical;
}

int run_optimize(const std::string& path, const std::string& out_dir, bool maximize) {
  const Scene scene = load_scene(path);
  const NlpProblem problem = make_problem(scene, maximize);
  const std::vector<double> x0 = pack(scene);
  const SolverResult result = minimize(problem, x0, scene.solver);
  const double sign = maximize ? -1.0 : 1.0;
  export_results(scene, result.x, result.trace, out_dir, sign);

  const TraceRecord& last = result.trace.records.back();
  std::cout << std::setprecision(10) << "status=" << to_string(result.trace.status)
            << " iterations=" << last.iteration << " J=" << sign * last.objective
            << " max_violation=" << last.max_violation << "\n";
  for (const std::string& note : result.trace.notes) {
    std::cout << "note: " << note << "\n";
  }
  std::cout << "results written to " << out_dir << "\n";
  return result.trace.status == SolverStatus::kSolverFailure ? kExitNumerical : kExitOk;
}

FieldPlane parse_plane(const std::string& plane, const std::vector<double>& range,
                       const std::vector<int>& samples) {
  FieldPlane p;
  const auto eq = plane.find('=');
  if (eq != 1 || plane[0] < 'x' || plane[0] > 'z') {
    throw UsageError("--plane must look like y=0");
  }
  p.axis = plane[0] - 'x';
  try {
    p.value = std::stod(plane.substr(2));
  } catch (const std::exception&) {
    throw UsageError("--plane value is not a number");
  }
  if (range.size() != 4 || samples.size() != 2) {
    throw UsageError("--range needs lo1,hi1,lo2,hi2 and --samples needs n1,n2");
  }
  p.lo[0] = range[0];
  p.hi[0] = range[1];
  p.lo[1] = range[2];
  p.hi[1] = range[3];
  p.samples[0] = samples[0];
  p.samples[1] = samples[1];
  return p;
}

int run_field(const std::string& path, const FieldPlane& plane, double cap,
              const std::string& out_path) {
  const Scene scene = load_scene(path);
  std::ostringstream csv;
  write_field_csv(csv, scene, plane, cap);
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    write_file_atomically(out_path, csv.str());
  }
  return kExitOk;
}

int run_verify(double a, double d, double bmin, double bmax, int steps, int count, int order,
               bool convergence, double b_conv) {
  const QuadratureRule rule = gauss_legendre(order);
  std::cout << std::setprecision(8);
  if (convergence) {
    std::vector<double> ns;
    std::vector<double> errors;
    std::cout << "N,dMdb_num,dMdb_exact,rel_error\n";
    for (int n : {8, 16, 32, 64, 128}) {
      const CoaxialSample s = coaxial_sample(a, b_conv, d, n, 2, rule);
      ns.push_back(n);
      errors.push_back(s.dmdb_error());
      std::cout << n << ',' << s.dmdb << ',' << s.dmdb_exact << ',' << s.dmdb_error() << "\n";
    }
    std::cout << "slope=" << loglog_slope(ns, errors) << "\n";
    return kExitOk;
  }
  if (steps < 1 || !(bmin > 0.0) || bmax < bmin) {
    throw UsageError("need steps >= 1 and 0 < bmin <= bmax");
  }
  std::cout << "b,M_num,M_exact,M_rel_error,dMdb_num,dMdb_exact,dMdb_rel_error\n";
  double worst = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double b = bmin + (bmax - bmin) * i / steps;
    const CoaxialSample s = coaxial_sample(a, b, d, count, 2, rule);
    worst = std::max(worst, s.dmdb_error());
    std::cout << b << ',' << s.mi << ',' << s.mi_exact << ',' << s.mi_error() << ',' << s.dmdb
              << ',' << s.dmdb_exact << ',' << s.dmdb_error() << "\n";
  }
  std::cout << "max_dMdb_rel_error=" << worst << "\n";
  return kExitOk;
}

int run_fixture(const std::string& name, double b0, int count, const std::string& out_path) {
  Scene scene;
  if (name == "example1") {
    scene = fixtures::example1(b0, count);
  } else if (name == "example2") {
    scene = fixtures::example2();
  } else if (name == "example3-I") {
    scene = fixtures::example3(fixtures::ToroidalCase::kI);
  } else if (name == "example3-II") {
    scene = fixtures::example3(fixtures::ToroidalCase::kII);
  } else if (name == "example3-III") {
    scene = fixtures::example3(fixtures::ToroidalCase::kIII);
  } else {
    throw UsageError("unknown fixture '" + name + "'");
  }
  const std::string text = serialize(scene);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file_atomically(out_path, text);
  }
  return kExitOk;
}

void apply_thread_env() {
  if (const char* env = std::getenv("COILOPT_NUM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) {
      set_threads(n);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shape optimization of wire coils for prescribed mutual inductances"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Kernel threads (overrides COILOPT_NUM_THREADS)");

  std::string scene_path;
  std::vector<std::string> pair;
  auto* mi = app.add_subcommand("mi", "Print the mutual inductance of every pair");
  mi->add_option("scene", scene_path, "Scene JSON file")->required();
  mi->add_option("--pair", pair, "Two coil labels or indices")->expected(2);

  double step = 0.0;
  auto* grad = app.add_subcommand("grad-check", "Compare the gradient with finite differences");
  grad->add_option("scene", scene_path, "Scene JSON file")->required();
  grad->add_option("--step", step, "Difference step (default 2.5e-4 x scene size)");

  std::string out_dir;
  bool maximize = false;
  auto* opt = app.add_subcommand("optimize", "Run the optimizer and export results");
  opt->add_option("scene", scene_path, "Scene JSON file")->required();
  opt->add_option("--out", out_dir, "Output directory")->required();
  opt->add_flag("--maximize", maximize, "Maximize J instead of minimizing");

  std::string plane;
  std::vector<double> range;
  std::vector<int> samples;
  double cap = 0.0;
  std::string out_file;
  auto* field = app.add_subcommand("field", "Sample B on an axis-aligned plane (CSV)");
  field->add_option("scene", scene_path, "Scene JSON file")->required();
  field->add_option("--plane", plane, "Fixed coordinate, e.g. y=0")->required();
  field->add_option("--range", range, "lo1,hi1,lo2,hi2 of the two free coordinates")
      ->required()
      ->delimiter(',');
  field->add_option("--samples", samples, "n1,n2")->required()->delimiter(',');
  field->add_option("--cap", cap, "Truncate |B| at this value");
  field->add_option("--out", out_file, "Output CSV (default stdout)");

  double a = 1.0, d = 1.0, bmin = 0.1, bmax = 4.0, b_conv = 1.0;
  int steps = 39, count = 32, order = kDefaultQuadratureOrder;
  bool convergence = false;
  auto* verify = app.add_subcommand("verify-coaxial", "Compare with the coaxial closed form");
  verify->add_option("--a", a, "Transmitter radius");
  verify->add_option("--d", d, "Axial distance");
  verify->add_option("--bmin", bmin, "Smallest receiver radius");
  verify->add_option("--bmax", bmax, "Largest receiver radius");
  verify->add_option("--steps", steps, "Number of b intervals");
  verify->add_option("--N", count, "Control points per coil");
  verify->add_option("--Q", order, "Quadrature order");
  verify->add_option("--b", b_conv, "Receiver radius for --convergence");
  verify->add_flag("--convergence", convergence, "Sweep N and fit the error slope");

  std::string fixture_name;
  double b0 = 1.0;
  auto* fixture = app.add_subcommand("fixture", "Write a built-in example scene");
  fixture->add_option("name", fixture_name, "example1|example2|example3-I|example3-II|example3-III")
      ->required();
  fixture->add_option("--b0", b0, "Initial radius (example1)");
  fixture->add_option("--N", count, "Control points per coil (example1)");
  fixture->add_option("--out", out_file, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  apply_thread_env();
  if (threads > 0) {
    set_threads(threads);
  }

  try {
    if (*mi) return run_mi(scene_path, pair);
    if (*grad) return run_grad_check(scene_path, step);
    if (*opt) return run_optimize(scene_path, out_dir, maximize);
    if (*field) return run_field(scene_path, parse_plane(plane, range, samples), cap, out_file);
    if (*verify) {
      return run_verify(a, d, bmin, bmax, steps, count, order, convergence, b_conv);
    }
    if (*fixture) return run_fixture(fixture_name, b0, count, out_file);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
