#include "curvetrace/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "curvetrace/io.hpp"

namespace curvetrace {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(trim(s), &used);
    if (used != trim(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(fmt::format("{}: '{}' is not a number", what, s));
  }
}

std::vector<std::pair<double, double>> parse_box(const std::string& text) {
  std::vector<std::pair<double, double>> box;
  for (const auto& part : split(text, ';')) {
    const auto ends = split(part, ',');
    if (ends.size() != 2) throw InputError("--box expects \"lo,hi;lo,hi;...\"");
    box.emplace_back(to_double(ends[0], "--box"), to_double(ends[1], "--box"));
  }
  return box;
}

std::array<int, 3> parse_projection(const std::string& text, const std::vector<std::string>& vars) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw InputError("--project expects three entries, e.g. x,y,z or 0,1,-");
  std::array<int, 3> proj{};
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string p = trim(parts[i]);
    if (p == "-" || p == "0.0") {
      proj[i] = -1;
      continue;
    }
    const auto it = std::find(vars.begin(), vars.end(), p);
    if (it != vars.end()) {
      proj[i] = static_cast<int>(it - vars.begin());
    } else {
      proj[i] = static_cast<int>(to_double(p, "--project"));
    }
  }
  return proj;
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << data;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"curvetrace: polygonal approximation of real algebraic curves in a box"};
  app.name("curvetrace");
  std::string input;
  std::vector<std::string> exprs;
  std::string vars = "x,y";
  std::string box_text;
  double eps = 0.0;
  std::string mode;
  std::string coeffs;
  std::uint64_t seed = 0;
  double rho = 0.0;
  std::vector<std::string> formats;
  std::string output;
  bool verify = false;
  std::string project;

  auto* in_opt = app.add_option("--input", input, "JSON job file");
  auto* expr_opt = app.add_option("--expr", exprs, "polynomial (repeatable)");
  in_opt->excludes(expr_opt);
  app.add_option("--vars", vars, "variable names, comma separated")->default_str("x,y");
  app.add_option("--box", box_text, "\"lo,hi;lo,hi;...\"");
  app.add_option("--eps", eps, "approximation tolerance")->required();
  auto* mode_opt = app.add_option("--mode", mode, "practical|robust")->check(CLI::IsMember({"practical", "robust"}));
  auto* coeff_opt = app.add_option("--coeffs", coeffs, "exact|perturbed")->check(CLI::IsMember({"exact", "perturbed"}));
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  auto* rho_opt = app.add_option("--rho", rho, "step parameter (>= 1.6)");
  app.add_option("--format", formats, "json|svg|obj (repeatable)")->check(CLI::IsMember({"json", "svg", "obj"}));
  app.add_option("-o,--output", output, "output file (or stem when several formats are given)");
  app.add_flag("--verify", verify, "measure distances between output and curve");
  app.add_option("--project", project, "OBJ projection, e.g. x,y,z or 0,1,-");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    JobSpec job;
    if (!input.empty()) {
      job = load_job(input);
    } else {
      if (exprs.empty()) throw InputError("give --input or at least one --expr");
      job.system = exprs;
      for (const auto& v : split(vars, ',')) job.variables.push_back(trim(v));
      if (box_text.empty()) throw InputError("--box is required with --expr");
    }
    if (!box_text.empty()) job.box = parse_box(box_text);
    job.config.eps = eps;
    if (*mode_opt) job.config.mode = mode == "robust" ? StepMode::robust : StepMode::practical;
    if (*coeff_opt) job.config.coefficients = coeffs == "perturbed" ? CoefficientMode::perturbed : CoefficientMode::exact;
    if (*seed_opt) job.config.seed = seed;
    if (*rho_opt) job.config.rho = rho;
    job.validate();
    if (formats.empty()) formats.push_back("json");

    const CurveSystem sys = job.build_system();
    const Box box = job.build_box();
    std::optional<std::array<int, 3>> proj;
    if (!project.empty()) proj = parse_projection(project, job.variables);
    for (const auto& f : formats) {
      if (f == "svg" && job.variables.size() != 2) throw InputError("svg output needs exactly two variables");
      if (f == "obj" && job.variables.size() < 3 && !proj) throw InputError("obj output of a plane curve needs --project");
    }

    const ApproxCurve curve = approx_plot(sys, box, job.config);
    for (const auto& j : curve.jump_reports) err << "curve jump: " << j.description << "\n";
    for (const auto& n : curve.notes) err << "note: " << n << "\n";

    if (verify) {
      const VerifyResult vr = verify_epsilon(curve, sys, box);
      err << fmt::format("verify: curve->chains {} chains->curve {:.6g} (eps {})\n",
                         vr.curve_to_chain ? fmt::format("{:.6g}", *vr.curve_to_chain) : std::string("n/a"),
                         vr.chain_to_curve, job.config.eps);
    }

    for (const auto& f : formats) {
      std::string data;
      if (f == "json") data = export_json(curve);
      if (f == "svg") data = export_svg(curve);
      if (f == "obj") data = export_obj(curve, proj);
      if (output.empty()) {
        out << data;
      } else if (formats.size() == 1) {
        write_file(output, data);
      } else {
        write_file(output + "." + f, data);
      }
    }
    return 0;
  } catch (const DegreeCapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace curvetrace
