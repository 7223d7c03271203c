#include "coilopt/scene_io.h"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>
#include <system_error>

#include "coilopt/constraints.h"
#include "coilopt/em.h"
#include "coilopt/errors.h"
#include "coilopt/objective.h"

namespace coilopt {

using nlohmann::json;

namespace {

constexpr int kPrecision = 17;

// Typed accessors that report the JSON path on failure.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  const json& node() const { return node_; }
  const std::string& path() const { return path_; }
  bool has(const char* key) const { return node_.is_object() && node_.contains(key); }

  Reader at(const char* key) const {
    if (!has(key)) {
      fail(std::string("missing required field '") + key + "'");
    }
    return Reader(node_.at(key), path_ + "." + key);
  }
  Reader item(std::size_t i) const { return Reader(node_.at(i), path_ + "[" + std::to_string(i) + "]"); }

  [[noreturn]] void fail(const std::string& message) const {
    throw SceneError(path_ + ": " + message);
  }

  double number() const {
    if (!node_.is_number()) {
      fail("expected a number");
    }
    const double v = node_.get<double>();
    if (!std::isfinite(v)) {
      fail("expected a finite number");
    }
    return v;
  }
  // Number, or "inf"/"-inf"/null mapped to the unbounded sentinel.
  double bound(double unbounded) const {
    if (node_.is_null()) {
      return unbounded;
    }
    if (node_.is_string()) {
      const std::string s = node_.get<std::string>();
      if (s == "inf" || s == "+inf") {
        return kUnbounded;
      }
      if (s == "-inf") {
        return -kUnbounded;
      }
      fail("expected a number, \"inf\", \"-inf\" or null");
    }
    const double v = number();
    return std::clamp(v, -kUnbounded, kUnbounded);
  }
  int integer() const {
    if (!node_.is_number_integer()) {
      fail("expected an integer");
    }
    return node_.get<int>();
  }
  bool boolean() const {
    if (!node_.is_boolean()) {
      fail("expected true or false");
    }
    return node_.get<bool>();
  }
  std::string string() const {
    if (!node_.is_string()) {
      fail("expected a string");
    }
    return node_.get<std::string>();
  }
  std::size_t array_size() const {
    if (!node_.is_array()) {
      fail("expected an array");
    }
    return node_.size();
  }
  Vec3 vec3() const {
    if (array_size() != 3) {
      fail("expected [x, y, z]");
    }
    return {item(0).number(), item(1).number(), item(2).number()};
  }
  std::vector<Vec3> vec3_list() const {
    std::vector<Vec3> out(array_size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = item(i).vec3();
    }
    return out;
  }

  double number_or(const char* key, double fallback) const {
    return has(key) ? at(key).number() : fallback;
  }
  int integer_or(const char* key, int fallback) const {
    return has(key) ? at(key).integer() : fallback;
  }
  bool boolean_or(const char* key, bool fallback) const {
    return has(key) ? at(key).boolean() : fallback;
  }

 private:
  const json& node_;
  std::string path_;
};

SceneCoil parse_coil(const Reader& r) {
  if (!r.node().is_object()) {
    r.fail("expected an object");
  }
  const std::string label = r.at("label").string();
  const int degree = r.integer_or("degree", 2);
  const Reader gen = r.at("generator");
  const std::string type = gen.at("type").string();

  double circle_radius = 0.0;
  std::vector<Vec3> initial;
  std::optional<CoilCurve> curve;
  try {
    if (type == "circle") {
      const Vec3 center = gen.has("center") ? gen.at("center").vec3() : Vec3{};
      const Vec3 axis = gen.has("axis") ? gen.at("axis").vec3() : Vec3{0.0, 0.0, 1.0};
      circle_radius = gen.at("radius").number();
      curve.emplace(circle_coil(center, circle_radius, axis, gen.at("count").integer(), degree, label));
    } else if (type == "torus") {
      curve.emplace(torus_coil(gen.at("a").number(), gen.at("b").number(),
                               gen.at("turns").integer(), gen.at("count").integer(), degree,
                               label));
    } else if (type == "explicit") {
      std::vector<Vec3> cps = gen.at("control_points").vec3_list();
      if (gen.has("initial_control_points")) {
        initial = gen.at("initial_control_points").vec3_list();
      }
      const int count = static_cast<int>(cps.size());
      curve.emplace(PeriodicBasis(degree, count), std::move(cps), label);
    } else {
      gen.at("type").fail("unknown generator '" + type + "' (circle, torus or explicit)");
    }
  } catch (const SceneError&) {
    throw;
  } catch (const InvalidArgument& e) {
    gen.fail(e.what());
  }

  SceneCoil coil = make_scene_coil(std::move(*curve), r.boolean_or("designable", false),
                                   r.number_or("current", 0.0));
  if (!initial.empty()) {
    if (initial.size() != coil.curve.control_points().size()) {
      gen.at("initial_control_points").fail("count differs from control_points");
    }
    coil.initial_control_points = std::move(initial);
  }

  if (r.has("coupling")) {
    const Reader cp = r.at("coupling");
    const std::string ctype = cp.at("type").string();
    if (ctype == "radial") {
      coil.coupling = Coupling::kRadial;
      coil.radial_center = cp.has("center") ? cp.at("center").vec3() : Vec3{};
      if (cp.has("initial_radius")) {
        coil.initial_radius = cp.at("initial_radius").number();
      } else if (circle_radius > 0.0) {
        coil.initial_radius = circle_radius;
      } else {
        cp.fail("radial coupling of a non-circle generator needs 'initial_radius'");
      }
      coil.radius = cp.number_or("radius", coil.initial_radius);
      if (!(coil.initial_radius > 0.0 && coil.radius > 0.0)) {
        cp.fail("radii must be positive");
      }
    } else if (ctype != "free") {
      cp.at("type").fail("unknown coupling '" + ctype + "' (free or radial)");
    }
  }
  return coil;
}

int coil_reference(const Scene& scene, const Reader& r) {
  if (r.node().is_string()) {
    const auto idx = scene.find_coil(r.string());
    if (!idx) {
      r.fail("no coil labelled '" + r.string() + "'");
    }
    return *idx;
  }
  const int idx = r.integer();
  if (idx < 0 || idx >= static_cast<int>(scene.coils.size())) {
    r.fail("coil index " + std::to_string(idx) + " out of range");
  }
  return idx;
}

std::vector<Vec3> parse_offsets(const Reader& r, int count, double unbounded) {
  const std::size_t n = r.array_size();
  const bool uniform = n == 3 && !r.node()[0].is_array();
  if (uniform) {
    const Vec3 v{r.item(0).bound(unbounded), r.item(1).bound(unbounded), r.item(2).bound(unbounded)};
    return std::vector<Vec3>(count, v);
  }
  if (static_cast<int>(n) != count) {
    r.fail("expected one [x, y, z] offset or " + std::to_string(count) + " of them");
  }
  std::vector<Vec3> out(count);
  for (int m = 0; m < count; ++m) {
    const Reader e = r.item(m);
    if (e.array_size() != 3) {
      e.fail("expected [x, y, z]");
    }
    out[m] = {e.item(0).bound(unbounded), e.item(1).bound(unbounded), e.item(2).bound(unbounded)};
  }
  return out;
}

BoundSpec parse_bounds(const Scene& scene, const Reader& r) {
  BoundSpec spec;
  spec.coil = coil_reference(scene, r.at("coil"));
  const SceneCoil& coil = scene.coils[spec.coil];
  const int count = coil.curve.count();
  if (r.has("radius")) {
    const Reader rad = r.at("radius");
    if (rad.array_size() != 2) {
      rad.fail("expected [lower, upper]");
    }
    spec.radius_lower = rad.item(0).bound(-kUnbounded);
    spec.radius_upper = rad.item(1).bound(kUnbounded);
  }
  spec.lower = r.has("lower") ? parse_offsets(r.at("lower"), count, -kUnbounded)
                              : std::vector<Vec3>(count, Vec3{-kUnbounded, -kUnbounded, -kUnbounded});
  spec.upper = r.has("upper") ? parse_offsets(r.at("upper"), count, kUnbounded)
                              : std::vector<Vec3>(count, Vec3{kUnbounded, kUnbounded, kUnbounded});
  if (r.has("freeze")) {
    const Reader fr = r.at("freeze");
    for (std::size_t i = 0; i < fr.array_size(); ++i) {
      const std::string axis = fr.item(i).string();
      if (axis.size() != 1 || axis[0] < 'x' || axis[0] > 'z') {
        fr.item(i).fail("expected \"x\", \"y\" or \"z\"");
      }
      const int k = axis[0] - 'x';
      for (int m = 0; m < count; ++m) {
        spec.lower[m][k] = 0.0;
        spec.upper[m][k] = 0.0;
      }
    }
  }
  return spec;
}

json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json bound_json(double v) {
  if (v <= -kUnbounded) {
    return "-inf";
  }
  if (v >= kUnbounded) {
    return "inf";
  }
  return v;
}

json vec3_list_json(const std::vector<Vec3>& list) {
  json out = json::array();
  for (const Vec3& v : list) {
    out.push_back(vec3_json(v));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw SceneError("cannot open scene file '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scene base_scene() {
  Scene scene;
  scene.mu = kDefaultPermeability;
  scene.quadrature_order = kDefaultQuadratureOrder;
  return scene;
}

BoundSpec offset_box(int coil, int count, Vec3 lower, Vec3 upper) {
  BoundSpec b;
  b.coil = coil;
  b.lower.assign(count, lower);
  b.upper.assign(count, upper);
  return b;
}

}  // namespace

Scene parse_scene(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SceneError(std::string("malformed JSON: ") + e.what());
  }
  const Reader root(doc, "$");
  if (!doc.is_object()) {
    root.fail("expected an object");
  }
  Scene scene = base_scene();
  scene.mu = root.number_or("mu", kDefaultPermeability);
  scene.quadrature_order = root.integer_or("quadrature", kDefaultQuadratureOrder);

  const Reader coils = root.at("coils");
  for (std::size_t i = 0; i < coils.array_size(); ++i) {
    scene.coils.push_back(parse_coil(coils.item(i)));
  }
  // Duplicate labels would make label references ambiguous.
  for (std::size_t i = 0; i < scene.coils.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (scene.coils[i].label() == scene.coils[j].label()) {
        coils.item(i).at("label").fail("duplicate coil label '" + scene.coils[i].label() + "'");
      }
    }
  }

  if (root.has("pairs")) {
    const Reader pairs = root.at("pairs");
    for (std::size_t k = 0; k < pairs.array_size(); ++k) {
      const Reader p = pairs.item(k);
      PairSpec spec;
      spec.alpha = coil_reference(scene, p.at("alpha"));
      spec.beta = coil_reference(scene, p.at("beta"));
      spec.target = p.number_or("target", 0.0);
      if (spec.alpha == spec.beta) {
        p.fail("alpha and beta must be different coils");
      }
      scene.pairs.push_back(spec);
    }
  }
  if (root.has("bounds")) {
    const Reader bounds = root.at("bounds");
    for (std::size_t k = 0; k < bounds.array_size(); ++k) {
      scene.bounds.push_back(parse_bounds(scene, bounds.item(k)));
    }
  }
  if (root.has("length_constraints")) {
    const Reader lcs = root.at("length_constraints");
    for (std::size_t k = 0; k < lcs.array_size(); ++k) {
      const Reader l = lcs.item(k);
      LengthSpec spec;
      spec.coil = coil_reference(scene, l.at("coil"));
      spec.f_lower = l.at("f_lower").number();
      spec.f_upper = l.at("f_upper").number();
      spec.initial_length = l.number_or("initial_length", 0.0);
      scene.length_constraints.push_back(spec);
    }
  }
  if (root.has("solver")) {
    const Reader s = root.at("solver");
    scene.solver.rel_tol_J = s.number_or("rel_tol", scene.solver.rel_tol_J);
    scene.solver.max_iters = s.integer_or("max_iters", scene.solver.max_iters);
    scene.solver.constraint_tol = s.number_or("constraint_tol", scene.solver.constraint_tol);
  }

  finalize(scene);
  for (SceneCoil& coil : scene.coils) {
    if (coil.coupling == Coupling::kRadial && coil.radius != coil.initial_radius) {
      const double scale = coil.radius / coil.initial_radius;
      std::vector<Vec3> cps(coil.initial_control_points.size());
      for (std::size_t m = 0; m < cps.size(); ++m) {
        cps[m] = coil.radial_center + scale * (coil.initial_control_points[m] - coil.radial_center);
      }
      coil.curve.set_control_points(std::move(cps));
    }
  }
  return scene;
}

Scene load_scene(const std::filesystem::path& path) {
  try {
    return parse_scene(read_file(path));
  } catch (const SceneError& e) {
    throw SceneError(path.string() + ": " + e.what());
  }
}

std::string serialize(const Scene& scene) {
  json doc;
  doc["mu"] = scene.mu;
  doc["quadrature"] = scene.quadrature_order;
  json coils = json::array();
  for (const SceneCoil& coil : scene.coils) {
    json c;
    c["label"] = coil.label();
    c["degree"] = coil.curve.degree();
    c["designable"] = coil.designable;
    c["current"] = coil.current;
    json gen;
    gen["type"] = "explicit";
    gen["control_points"] = vec3_list_json(coil.curve.control_points());
    if (coil.initial_control_points != coil.curve.control_points()) {
      gen["initial_control_points"] = vec3_list_json(coil.initial_control_points);
    }
    c["generator"] = std::move(gen);
    if (coil.coupling == Coupling::kRadial) {
      c["coupling"] = {{"type", "radial"},
                       {"center", vec3_json(coil.radial_center)},
                       {"initial_radius", coil.initial_radius},
                       {"radius", coil.radius}};
    }
    coils.push_back(std::move(c));
  }
  doc["coils"] = std::move(coils);

  json pairs = json::array();
  for (const PairSpec& p : scene.pairs) {
    pairs.push_back({{"alpha", scene.coils[p.alpha].label()},
                     {"beta", scene.coils[p.beta].label()},
                     {"target", p.target}});
  }
  doc["pairs"] = std::move(pairs);

  json bounds = json::array();
  for (const BoundSpec& b : scene.bounds) {
    json entry;
    entry["coil"] = scene.coils[b.coil].label();
    if (scene.coils[b.coil].coupling == Coupling::kRadial) {
      entry["radius"] = json::array({bound_json(b.radius_lower), bound_json(b.radius_upper)});
    } else {
      json lower = json::array();
      json upper = json::array();
      for (std::size_t m = 0; m < b.lower.size(); ++m) {
        lower.push_back(json::array(
            {bound_json(b.lower[m].x), bound_json(b.lower[m].y), bound_json(b.lower[m].z)}));
        upper.push_back(json::array(
            {bound_json(b.upper[m].x), bound_json(b.upper[m].y), bound_json(b.upper[m].z)}));
      }
      entry["lower"] = std::move(lower);
      entry["upper"] = std::move(upper);
    }
    bounds.push_back(std::move(entry));
  }
  doc["bounds"] = std::move(bounds);

  json lengths = json::array();
  for (const LengthSpec& l : scene.length_constraints) {
    lengths.push_back({{"coil", scene.coils[l.coil].label()},
                       {"f_lower", l.f_lower},
                       {"f_upper", l.f_upper},
                       {"initial_length", l.initial_length}});
  }
  doc["length_constraints"] = std::move(lengths);
  doc["solver"] = {{"rel_tol", scene.solver.rel_tol_J},
                   {"max_iters", scene.solver.max_iters},
                   {"constraint_tol", scene.solver.constraint_tol}};
  return doc.dump(2) + "\n";
}

namespace fixtures {

Scene example1(double b0, int count) {
  Scene scene = base_scene();
  scene.coils.push_back(make_scene_coil(
      circle_coil({0.0, 0.0, 0.0}, b0, {0.0, 0.0, 1.0}, count, 2, "C"), true, 0.0));
  SceneCoil& c = scene.coils.back();
  c.coupling = Coupling::kRadial;
  c.initial_radius = b0;
  c.radius = b0;
  scene.coils.push_back(make_scene_coil(
      circle_coil({0.0, 0.0, -1.0}, 1.0, {0.0, 0.0, 1.0}, count, 2, "Cprime"), false, 1.0));
  scene.pairs.push_back({0, 1, 0.0});
  finalize(scene);
  return scene;
}

Scene example2() {
  Scene scene = base_scene();
  scene.coils.push_back(
      make_scene_coil(circle_coil({1.0, 0.0, 1.0}, 2.0, {0.0, 0.0, 1.0}, 32, 2, "C"), true, 0.0));
  scene.coils.push_back(make_scene_coil(
      circle_coil({0.0, 0.0, 0.0}, 1.0, {0.0, 0.0, 1.0}, 32, 2, "Cprime"), false, 1.0));
  scene.pairs.push_back({0, 1, 0.1});
  scene.bounds.push_back(offset_box(0, 32, {-kUnbounded, -kUnbounded, -0.5},
                                    {kUnbounded, kUnbounded, 0.5}));
  scene.length_constraints.push_back({0, 0.99, 1.01, 0.0});
  finalize(scene);
  return scene;
}

Scene example3(ToroidalCase which) {
  Scene scene = base_scene();
  scene.coils.push_back(make_scene_coil(torus_coil(2.0, 1.0, 16, 64, 2, "C1"), true, 1.0));
  scene.coils.push_back(make_scene_coil(
      circle_coil({0.0, 0.0, -1.0}, 3.0, {0.0, 0.0, 1.0}, 32, 2, "C2"), false, 0.0));
  scene.coils.push_back(make_scene_coil(
      circle_coil({0.0, 0.0, 1.0}, 3.0, {0.0, 0.0, 1.0}, 32, 2, "C3"), false, 0.0));
  scene.pairs.push_back({0, 1, 0.0});
  scene.pairs.push_back({0, 2, 0.0});
  switch (which) {
    case ToroidalCase::kI:
      scene.bounds.push_back(offset_box(0, 64, {-0.2, -0.2, 0.0}, {0.2, 0.2, 0.0}));
      break;
    case ToroidalCase::kII:
      scene.bounds.push_back(offset_box(0, 64, {-0.3, -0.3, 0.0}, {0.3, 0.3, 0.0}));
      break;
    case ToroidalCase::kIII:
      scene.bounds.push_back(
          offset_box(0, 64, {-kUnbounded, -kUnbounded, 0.0}, {kUnbounded, kUnbounded, 0.0}));
      scene.length_constraints.push_back({0, 0.999, 1.001, 0.0});
      break;
  }
  finalize(scene);
  return scene;
}

}  // namespace fixtures

void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write '" + tmp.string() + "'");
    }
    out << content;
    out.flush();
    if (!out) {
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename onto '" + path.string() + "': " + ec.message());
  }
}

void export_results(const Scene& initial, std::span<const double> x,
                    const OptimizationTrace& trace, const std::filesystem::path& dir,
                    double objective_sign, int polyline_samples) {
  std::filesystem::create_directories(dir);
  Scene final_scene = initial;
  unpack(final_scene, x);
  const std::vector<double> x0 = pack(initial);

  write_file_atomically(dir / "scene.json", serialize(final_scene));

  for (const SceneCoil& coil : final_scene.coils) {
    std::ostringstream cps;
    cps.precision(kPrecision);
    cps << "m,x,y,z\n";
    const auto& pts = coil.curve.control_points();
    for (std::size_t m = 0; m < pts.size(); ++m) {
      cps << m << ',' << pts[m].x << ',' << pts[m].y << ',' << pts[m].z << '\n';
    }
    write_file_atomically(dir / ("control_points_" + coil.label() + ".csv"), cps.str());
    std::ostringstream poly;
    write_polyline_csv(poly, coil.curve, polyline_samples);
    write_file_atomically(dir / ("polyline_" + coil.label() + ".csv"), poly.str());
  }

  OptimizationTrace reported = trace;
  for (TraceRecord& r : reported.records) {
    r.objective *= objective_sign;
  }
  std::ostringstream tr;
  reported.write_csv(tr);
  write_file_atomically(dir / "trace.csv", tr.str());

  const std::vector<double> mi0 = pair_mutual_inductances(initial, x0);
  const std::vector<double> mi = pair_mutual_inductances(final_scene, x);
  const std::vector<double> len0 = coil_lengths(initial, x0);
  const std::vector<double> len = coil_lengths(final_scene, x);

  json summary;
  summary["status"] = to_string(trace.status);
  summary["iterations"] = trace.records.empty() ? 0 : trace.records.back().iteration;
  summary["J_initial"] = objective(initial, x0);
  summary["J"] = objective(final_scene, x);
  json pairs = json::array();
  for (std::size_t k = 0; k < initial.pairs.size(); ++k) {
    const PairSpec& p = initial.pairs[k];
    pairs.push_back({{"alpha", initial.coils[p.alpha].label()},
                     {"beta", initial.coils[p.beta].label()},
                     {"target", p.target},
                     {"M_initial", mi0[k]},
                     {"M", mi[k]}});
  }
  summary["pairs"] = std::move(pairs);
  json coils = json::array();
  for (std::size_t c = 0; c < final_scene.coils.size(); ++c) {
    const SceneCoil& coil = final_scene.coils[c];
    json entry{{"label", coil.label()},
               {"designable", coil.designable},
               {"length_initial", len0[c]},
               {"length", len[c]},
               {"length_change_percent", 100.0 * (len[c] - len0[c]) / len0[c]}};
    if (coil.coupling == Coupling::kRadial) {
      entry["radius"] = coil.radius;
    }
    for (const LengthSpec& l : final_scene.length_constraints) {
      if (l.coil == static_cast<int>(c)) {
        entry["length_window"] = json::array({l.f_lower * l.initial_length,
                                              l.f_upper * l.initial_length});
        entry["length_within_window"] = len[c] >= l.f_lower * l.initial_length - 1e-8 &&
                                        len[c] <= l.f_upper * l.initial_length + 1e-8;
      }
    }
    coils.push_back(std::move(entry));
  }
  summary["coils"] = std::move(coils);
  summary["notes"] = trace.notes;
  write_file_atomically(dir / "summary.json", summary.dump(2) + "\n");
}

void write_field_csv(std::ostream& out, const Scene& scene, const FieldPlane& plane, double cap) {
  if (plane.axis < 0 || plane.axis > 2) {
    throw InvalidArgument("field plane axis must be x, y or z");
  }
  if (plane.samples[0] < 1 || plane.samples[1] < 1) {
    throw InvalidArgument("field plane needs at least one sample per direction");
  }
  std::vector<DiscreteCoil> sources;
  std::vector<double> currents;
  for (const SceneCoil& coil : scene.coils) {
    if (coil.current != 0.0) {
      sources.push_back(discretize(coil.curve, scene.rule));
      currents.push_back(coil.current);
    }
  }
  int free_axes[2];
  for (int k = 0, i = 0; k < 3; ++k) {
    if (k != plane.axis) {
      free_axes[i++] = k;
    }
  }
  const auto precision = out.precision(kPrecision);
  out << "x,y,z,Bx,By,Bz,|B|\n";
  const auto coord = [&](int dir, int idx) {
    if (plane.samples[dir] == 1) {
      return plane.lo[dir];
    }
    return plane.lo[dir] + (plane.hi[dir] - plane.lo[dir]) * idx / (plane.samples[dir] - 1);
  };
  for (int i = 0; i < plane.samples[0]; ++i) {
    for (int j = 0; j < plane.samples[1]; ++j) {
      Vec3 p;
      p[plane.axis] = plane.value;
      p[free_axes[0]] = coord(0, i);
      p[free_axes[1]] = coord(1, j);
      out << p.x << ',' << p.y << ',' << p.z << ',';
      try {
        Vec3 b;
        for (std::size_t s = 0; s < sources.size(); ++s) {
          b += magnetic_field(sources[s], currents[s], p, scene.mu);
        }
        double mag = norm(b);
        if (cap > 0.0) {
          mag = std::min(mag, cap);
        }
        out << b.x << ',' << b.y << ',' << b.z << ',' << mag << '\n';
      } catch (const NearSingular&) {
        out << "singular,singular,singular,singular\n";
      }
    }
  }
  out.precision(precision);
}

}  // namespace coilopt
