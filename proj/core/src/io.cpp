#include "curvetrace/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"

namespace curvetrace {

using nlohmann::json;

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  return fmt::format("{:.17g}", v);
}

std::string point_json(const Point& p) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += num(p[i]);
  }
  return s + "]";
}

std::string quote(std::string_view s) { return json(std::string(s)).dump(); }

template <class T, class F>
std::string array_json(const std::vector<T>& items, F&& render) {
  std::string s = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += ",";
    s += render(items[i]);
  }
  return s + "]";
}

StepMode parse_mode(const std::string& s) {
  if (s == "practical") return StepMode::practical;
  if (s == "robust") return StepMode::robust;
  throw InputError("mode must be practical or robust, got '" + s + "'");
}

CoefficientMode parse_coeffs(const std::string& s) {
  if (s == "exact") return CoefficientMode::exact;
  if (s == "perturbed") return CoefficientMode::perturbed;
  throw InputError("coeffs must be exact or perturbed, got '" + s + "'");
}

DropRule parse_drop(const std::string& s) {
  if (s == "hysteresis") return DropRule::hysteresis;
  if (s == "literal") return DropRule::literal;
  throw InputError("drop_rule must be hysteresis or literal, got '" + s + "'");
}

void read_config(const json& c, RunConfig& cfg) {
  if (!c.is_object()) throw InputError("config must be an object");
  for (const auto& [key, val] : c.items()) {
    if (key == "eps") cfg.eps = val.get<double>();
    else if (key == "rho") cfg.rho = val.get<double>();
    else if (key == "mode") cfg.mode = parse_mode(val.get<std::string>());
    else if (key == "coeffs" || key == "coefficient_mode") cfg.coefficients = parse_coeffs(val.get<std::string>());
    else if (key == "seed") cfg.seed = val.get<std::uint64_t>();
    else if (key == "corrector_tol") cfg.corrector_tol = val.get<double>();
    else if (key == "imag_tol") cfg.imag_tol = val.get<double>();
    else if (key == "dedup_radius") cfg.dedup_radius = val.get<double>();
    else if (key == "h_min") cfg.h_min = val.get<double>();
    else if (key == "pseudo_eps") cfg.pseudo_eps = val.get<double>();
    else if (key == "drop_rule") cfg.drop_rule = parse_drop(val.get<std::string>());
    else if (key == "degree_cap") cfg.degree_cap = val.get<std::size_t>();
    else throw InputError("unknown config field '" + key + "'");
  }
}

}  // namespace

void JobSpec::validate() const {
  if (variables.size() < 2) throw InputError("at least two variables are required");
  if (system.size() + 1 != variables.size()) {
    throw InputError(fmt::format("{} variables need {} polynomials, got {}", variables.size(), variables.size() - 1,
                                 system.size()));
  }
  if (box.size() != variables.size()) throw InputError("box needs one [lo, hi] pair per variable");
  for (const auto& [lo, hi] : box) {
    if (!(lo < hi)) throw InputError(fmt::format("box interval [{}, {}] is empty", lo, hi));
  }
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  (void)build_system();
}

CurveSystem JobSpec::build_system() const {
  std::vector<RationalPolynomial> polys;
  for (const auto& text : system) {
    try {
      polys.push_back(parse_polynomial(text, variables));
    } catch (const ParseError& e) {
      throw InputError(fmt::format("in '{}': {} (at {})", text, e.what(), e.position()));
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  if (config.coefficients == CoefficientMode::perturbed) {
    std::vector<Polynomial> floats;
    for (const auto& p : polys) floats.push_back(to_float(p));
    return CurveSystem(std::move(floats));
  }
  return CurveSystem(std::move(polys));
}

Box JobSpec::build_box() const { return Box::from_bounds(box); }

JobSpec parse_job(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("job file is not valid JSON: ") + e.what());
  }
  JobSpec spec;
  try {
    spec.variables = j.at("variables").get<std::vector<std::string>>();
    spec.system = j.at("system").get<std::vector<std::string>>();
    for (const auto& b : j.at("box")) {
      if (!b.is_array() || b.size() != 2) throw InputError("box entries must be [lo, hi]");
      spec.box.emplace_back(b[0].get<double>(), b[1].get<double>());
    }
    if (j.contains("config")) read_config(j.at("config"), spec.config);
  } catch (const json::exception& e) {
    throw InputError(std::string("job file: ") + e.what());
  }
  spec.validate();
  return spec;
}

JobSpec load_job(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_job(ss.str());
}

void apply_config_json(std::string_view text, RunConfig& cfg) {
  try {
    read_config(json::parse(text), cfg);
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
}

std::string export_json(const ApproxCurve& c) {
  std::string s = "{";
  s += "\"nvars\":" + std::to_string(c.nvars);
  s += ",\"box\":[";
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(c.nvars); ++k) {
    if (k) s += ",";
    s += "[" + num(c.box.lower()[k]) + "," + num(c.box.upper()[k]) + "]";
  }
  s += "]";
  s += ",\"delta\":" + num(c.delta);
  s += ",\"chains\":" + array_json(c.chains, [](const Chain& ch) {
         return std::string("{\"closed\":") + (ch.closed ? "true" : "false") + ",\"start_kind\":" +
                quote(to_string(ch.start_kind)) + ",\"end_kind\":" + quote(to_string(ch.end_kind)) +
                ",\"vertices\":" + array_json(ch.vertices, point_json) + "}";
       });
  s += ",\"singular_points\":" + array_json(c.singular_points, point_json);
  s += ",\"pseudo_singular_points\":" + array_json(c.pseudo_singular_points, point_json);
  s += ",\"clusters\":" + array_json(c.clusters, [](const Cluster& cl) {
         return "{\"center\":" + point_json(cl.center) + ",\"radius\":" + num(cl.radius) +
                ",\"members\":" + array_json(cl.members, point_json) + "}";
       });
  s += ",\"jump_reports\":" + array_json(c.jump_reports, [](const JumpReport& j) {
         return quote(j.description + " at " + point_json(j.location));
       });
  s += ",\"unused_witness\":" + array_json(c.unused_witness, point_json);
  s += ",\"notes\":" + array_json(c.notes, [](const std::string& n) { return quote(n); });

  const auto& st = c.stats;
  s += fmt::format(
      ",\"stats\":{{\"paths_tracked\":{},\"paths_converged\":{},\"paths_singular\":{},\"paths_diverged\":{},"
      "\"paths_failed\":{},\"paths_retracked\":{},\"trace_steps\":{},\"rejected_steps\":{},\"jump_checks\":{},"
      "\"front_created\":{},\"cluster_rounds\":{},\"gradient_bound\":{},\"unit_radius\":{},"
      "\"fencing_points\":{},\"boundary_points\":{},\"witness_points\":{},\"pass_chains\":[{}]}}",
      st.paths.tracked, st.paths.converged, st.paths.singular, st.paths.diverged, st.paths.failed,
      st.paths.retracked, st.trace_steps, st.rejected_steps, st.jump_checks, st.front_created, st.cluster_rounds,
      num(st.gradient_bound), num(st.unit_radius), c.fencing.size(), c.boundary.size(), c.witness.size(),
      fmt::join(c.pass_chain_counts, ","));

  const auto& cfg = c.config;
  s += fmt::format(
      ",\"config_echo\":{{\"eps\":{},\"rho\":{},\"mode\":{},\"coeffs\":{},\"seed\":{},\"corrector_tol\":{},"
      "\"imag_tol\":{},\"dedup_radius\":{},\"h_min\":{},\"pseudo_eps\":{},\"drop_rule\":{},\"degree_cap\":{}}}",
      num(cfg.eps), num(cfg.rho), quote(to_string(cfg.mode)),
      quote(cfg.coefficients == CoefficientMode::exact ? "exact" : "perturbed"), cfg.seed, num(cfg.corrector_tol),
      num(cfg.imag_tol), num(cfg.dedup_radius), num(cfg.h_min), num(cfg.pseudo_eps.value_or(cfg.eps)),
      quote(to_string(cfg.drop_rule)), cfg.degree_cap);
  s += "}\n";
  return s;
}

std::string export_svg(const ApproxCurve& c, int width_px, int height_px) {
  if (c.nvars != 2) throw std::invalid_argument("SVG export needs a plane curve (nvars = 2)");
  if (width_px <= 0 || height_px <= 0) throw std::invalid_argument("SVG size must be positive");
  const Point lo = c.box.lower();
  const Point hi = c.box.upper();
  auto px = [&](const Point& p) {
    const double x = (p[0] - lo[0]) / (hi[0] - lo[0]) * width_px;
    const double y = (hi[1] - p[1]) / (hi[1] - lo[1]) * height_px;
    return std::make_pair(x, y);
  };
  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"white\" stroke=\"#999\"/>\n",
      width_px, height_px);
  for (const auto& ch : c.chains) {
    std::string d;
    for (std::size_t i = 0; i < ch.vertices.size(); ++i) {
      const auto [x, y] = px(ch.vertices[i]);
      d += fmt::format("{}{:.3f} {:.3f}", i == 0 ? "M" : " L", x, y);
    }
    if (ch.closed) d += " Z";
    s += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n", d);
  }
  for (const auto& p : c.singular_points) {
    const auto [x, y] = px(p);
    s += fmt::format("<circle cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"3\" fill=\"red\"/>\n", x, y);
  }
  s += "</svg>\n";
  return s;
}

std::string export_obj(const ApproxCurve& c, std::optional<std::array<int, 3>> projection) {
  std::array<int, 3> proj{0, 1, 2};
  if (projection) {
    proj = *projection;
  } else if (c.nvars < 3) {
    throw std::invalid_argument("OBJ export of a plane curve needs an explicit projection");
  }
  for (int k : proj) {
    if (k >= static_cast<int>(c.nvars)) throw std::invalid_argument("OBJ projection index out of range");
  }
  std::string s = fmt::format("# curvetrace polylines, {} chains\n", c.chains.size());
  std::string lines;
  std::size_t next = 1;
  for (const auto& ch : c.chains) {
    std::size_t count = ch.vertices.size();
    const bool repeat_first = ch.closed && count > 1 && ch.vertices.front() == ch.vertices.back();
    if (repeat_first) --count;
    if (count < 2 && !ch.closed) continue;
    const std::size_t first = next;
    for (std::size_t i = 0; i < count; ++i) {
      s += "v";
      for (int k : proj) s += " " + (k < 0 ? std::string("0") : num(ch.vertices[i][k]));
      s += "\n";
    }
    lines += "l";
    for (std::size_t i = 0; i < count; ++i) lines += " " + std::to_string(first + i);
    if (ch.closed) lines += " " + std::to_string(first);
    lines += "\n";
    next += count;
  }
  return s + lines;
}

}  // namespace curvetrace
