#include "curvetrace/curve_system.hpp"

#include <cmath>
#include <stdexcept>

namespace curvetrace {

CurveSystem::CurveSystem(std::vector<Polynomial> polys) : polys_(std::move(polys)) { init(); }

CurveSystem::CurveSystem(std::vector<RationalPolynomial> polys) : exact_(std::move(polys)) {
  for (const auto& p : *exact_) polys_.push_back(to_float(p));
  init();
}

void CurveSystem::init() {
  if (polys_.empty()) throw std::invalid_argument("curve system needs at least one polynomial");
  nvars_ = polys_.front().nvars();
  if (nvars_ < 2) throw std::invalid_argument("curve system needs at least two variables");
  if (polys_.size() != nvars_ - 1) {
    throw std::invalid_argument("curve system needs exactly nvars-1 polynomials (got " +
                                std::to_string(polys_.size()) + " for " + std::to_string(nvars_) + " variables)");
  }
  for (const auto& p : polys_) {
    if (p.nvars() != nvars_) throw std::invalid_argument("curve system polynomials have different nvars");
  }
  jac_.assign(polys_.size(), {});
  for (std::size_t i = 0; i < polys_.size(); ++i) {
    for (std::size_t j = 0; j < nvars_; ++j) jac_[i].push_back(differentiate(polys_[i], j));
  }
  compiled_ = exact_ ? PolySystem(std::span<const RationalPolynomial>(*exact_))
                     : PolySystem(std::span<const Polynomial>(polys_));
}

namespace {

template <class C>
std::vector<BasicPolynomial<C>> minors_of(const std::vector<BasicPolynomial<C>>& polys, std::size_t n) {
  std::vector<std::vector<BasicPolynomial<C>>> jac(polys.size());
  for (std::size_t i = 0; i < polys.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) jac[i].push_back(differentiate(polys[i], j));
  }
  const auto one = BasicPolynomial<C>::constant(n, C(1));
  std::vector<BasicPolynomial<C>> out;
  for (std::size_t drop = 0; drop < n; ++drop) {
    std::vector<std::vector<BasicPolynomial<C>>> m(polys.size());
    for (std::size_t i = 0; i < polys.size(); ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j != drop) m[i].push_back(jac[i][j]);
      }
    }
    out.push_back(cofactor_determinant(m, one));
  }
  return out;
}

}  // namespace

std::vector<RationalPolynomial> exact_minor_determinants(const CurveSystem& sys) {
  if (!sys.exact()) throw std::logic_error("exact_minor_determinants: system has no exact coefficients");
  return minors_of(*sys.exact(), sys.nvars());
}

std::vector<Polynomial> minor_determinants(const CurveSystem& sys) {
  if (sys.exact()) {
    std::vector<Polynomial> out;
    for (const auto& d : exact_minor_determinants(sys)) out.push_back(to_float(d));
    return out;
  }
  return minors_of(sys.polys(), sys.nvars());
}

double estimate_gradient_bound(const CurveSystem& sys) {
  const std::size_t n = sys.nvars();
  // Second derivatives of each polynomial: grad J_ij = row j of the Hessian of f_i.
  std::vector<Polynomial> second;
  for (const auto& row : sys.jac()) {
    for (const auto& jij : row) {
      for (std::size_t k = 0; k < n; ++k) second.push_back(differentiate(jij, k));
    }
  }
  const PolySystem hess{std::span<const Polynomial>(second)};
  const std::size_t m = sys.size();

  const double target = std::pow(10.0, static_cast<double>(n));
  for (std::size_t per_axis = 11;; per_axis += 4) {
    std::vector<std::size_t> idx(n, 0);
    std::size_t inside = 0;
    double best = 0.0;
    Point z(static_cast<Eigen::Index>(n));
    Eigen::VectorXd vals;
    for (;;) {
      for (std::size_t k = 0; k < n; ++k) {
        z[static_cast<Eigen::Index>(k)] = -1.0 + 2.0 * static_cast<double>(idx[k]) / static_cast<double>(per_axis - 1);
      }
      if (z.norm() <= 1.0) {
        ++inside;
        vals = hess.values(z);
        for (std::size_t ij = 0; ij < m * n; ++ij) {
          best = std::max(best, vals.segment(static_cast<Eigen::Index>(ij * n), static_cast<Eigen::Index>(n)).norm());
        }
      }
      std::size_t k = 0;
      while (k < n && ++idx[k] == per_axis) idx[k++] = 0;
      if (k == n) break;
    }
    if (static_cast<double>(inside) >= target) return best;
  }
}

RescaledSystem rescale_system(const CurveSystem& sys, const Box& box) {
  if (box.dim() != sys.nvars()) throw std::invalid_argument("rescale_system: box dimension differs from nvars");
  AffineMap map;
  map.center = box.center();
  map.radius = box.half_diagonal();
  if (!(map.radius > 0.0)) throw std::invalid_argument("rescale_system: degenerate box");

  std::vector<Polynomial> moved;
  const std::span<const double> c(map.center.data(), static_cast<std::size_t>(map.center.size()));
  for (const auto& p : sys.polys()) moved.push_back(affine_substitute(p, c, map.radius));

  CurveSystem unscaled(moved);
  const double k = estimate_gradient_bound(unscaled);
  map.value_scale = k > 0.0 ? k : 1.0;
  if (k > 0.0) {
    for (auto& p : moved) p *= 1.0 / k;
  }
  Box unit_box(map.to_unit(box.lower()), map.to_unit(box.upper()));
  return RescaledSystem{CurveSystem(std::move(moved)), std::move(unit_box), map, k};
}

}  // namespace curvetrace
