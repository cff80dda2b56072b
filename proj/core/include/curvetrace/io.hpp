#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "curvetrace/curve_system.hpp"
#include "curvetrace/driver.hpp"

namespace curvetrace {

/// Malformed job description or command line.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct JobSpec {
  std::vector<std::string> variables;
  std::vector<std::string> system;
  std::vector<std::pair<double, double>> box;
  RunConfig config;

  /// Shapes, config and polynomial syntax; throws InputError.
  void validate() const;
  /// Exact coefficients unless config.coefficients is perturbed.
  CurveSystem build_system() const;
  Box build_box() const;
};

/// {"variables": [...], "system": [...], "box": [[lo, hi], ...], "config": {...}}, validated.
JobSpec parse_job(std::string_view json_text);
JobSpec load_job(const std::filesystem::path& path);

/// Reads config fields present in a JSON object text into cfg.
void apply_config_json(std::string_view json_object, RunConfig& cfg);

std::string export_json(const ApproxCurve& curve);
std::string export_svg(const ApproxCurve& curve, int width_px = 800, int height_px = 800);
/// projection picks the variable shown as x, y, z; a negative entry puts a
/// zero coordinate there. Without a projection nvars must be at least 3 and
/// the first three variables are used.
std::string export_obj(const ApproxCurve& curve, std::optional<std::array<int, 3>> projection = std::nullopt);

}  // namespace curvetrace
