#include <benchmark/benchmark.h>

#include "curvetrace/keypoints.hpp"
#include "curvetrace/solver.hpp"

using namespace curvetrace;

namespace {

const std::vector<std::string> kXY{"x", "y"};

Polynomial F(const char* s) { return to_float(parse_polynomial(s, kXY)); }

void BM_DenseSquare(benchmark::State& state) {
  const ZeroDimSystem sys{{F("x^3-2*x*y+y^2-0.5"), F("y^3+x^2-x*y-0.3")}, std::nullopt};
  SolverOptions o;
  o.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_zero_dim(sys, 1, o).points.size());
}
BENCHMARK(BM_DenseSquare)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_SingularSextic(benchmark::State& state) {
  const CurveSystem sys(std::vector<RationalPolynomial>{
      parse_polynomial("6*x*y^7+85*x^4*y^3-60*x^2*y^5-32*x^2*y^3+14*x^4-35*y^4", kXY)});
  const Box box(Point{{-3.0, -4.0}}, Point{{3.0, 2.0}});
  for (auto _ : state) benchmark::DoNotOptimize(singular_points(sys, box, 1).size());
}
BENCHMARK(BM_SingularSextic)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
