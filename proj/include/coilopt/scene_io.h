#ifndef COILOPT_SCENE_IO_H_
#define COILOPT_SCENE_IO_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coilopt/scene.h"
#include "coilopt/solver.h"

namespace coilopt {

// JSON scene files. Top-level keys: mu, quadrature, coils, pairs, bounds,
// length_constraints, solver. See README for the full schema. Errors carry the
// JSON path of the offending field.
Scene parse_scene(std::string_view text);
Scene load_scene(const std::filesystem::path& path);

// Explicit control points (and initial points when they differ) so that
// parse_scene(serialize(s)) reproduces every numeric field exactly.
std::string serialize(const Scene& scene);

namespace fixtures {

// Coaxial pair: frozen transmitter radius 1 at z = -1 (current 1) and a
// radially coupled receiver radius b0 at z = 0, target 0 (run with --maximize).
Scene example1(double b0, int count = 32);

// Receiver radius 2 at (1, 0, 1), transmitter radius 1 at the origin, target
// M = 0.1, z offsets within +-0.5, length within 1%.
Scene example2();

enum class ToroidalCase { kI, kII, kIII };
// Torus winding (a = 2, b = 1, 16 turns, 64 CPs) between two frozen circles
// of radius 3 at z = -1 and z = 1, targets 0 for both pairs.
Scene example3(ToroidalCase which);

}  // namespace fixtures

// Replaces `path` with `content` through a temporary file and rename.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

// Optimized scene.json, control_points_<label>.csv, polyline_<label>.csv,
// trace.csv and summary.json under `dir`. `objective_sign` is -1 for runs that
// maximized J (the trace then holds -J and is flipped back on export).
void export_results(const Scene& initial, std::span<const double> x,
                    const OptimizationTrace& trace, const std::filesystem::path& dir,
                    double objective_sign = 1.0, int polyline_samples = 512);

// Axis-aligned sampling plane: the `axis` coordinate is fixed at `value`, the
// other two (in x, y, z order) span [lo, hi] with `samples` points each.
struct FieldPlane {
  int axis = 1;
  double value = 0.0;
  double lo[2] = {0.0, 0.0};
  double hi[2] = {0.0, 0.0};
  int samples[2] = {2, 2};
};

// Total field of every coil with nonzero current. Rows `x,y,z,Bx,By,Bz,|B|`;
// points too close to a coil emit `x,y,z,singular,singular,singular,singular`.
// A positive `cap` truncates |B|.
void write_field_csv(std::ostream& out, const Scene& scene, const FieldPlane& plane,
                     double cap = 0.0);

}  // namespace coilopt

#endif  // COILOPT_SCENE_IO_H_
