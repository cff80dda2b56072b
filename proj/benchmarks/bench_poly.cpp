#include <benchmark/benchmark.h>

#include "curvetrace/curve_system.hpp"

using namespace curvetrace;

namespace {

const std::vector<std::string> kXY{"x", "y"};
const char* kSextic = "6*x*y^7+85*x^4*y^3-60*x^2*y^5-32*x^2*y^3+14*x^4-35*y^4";

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse_polynomial(kSextic, kXY));
}
BENCHMARK(BM_Parse);

void BM_EvaluateJacobian(benchmark::State& state) {
  const CurveSystem sys(std::vector<RationalPolynomial>{parse_polynomial(kSextic, kXY)});
  Eigen::VectorXd f;
  Eigen::MatrixXd j;
  const Point x{{0.3, -0.7}};
  for (auto _ : state) {
    sys.evaluate(x, f, j);
    benchmark::DoNotOptimize(j.data());
  }
}
BENCHMARK(BM_EvaluateJacobian);

void BM_Power(benchmark::State& state) {
  const auto p = parse_polynomial("x+y-1", kXY);
  for (auto _ : state) benchmark::DoNotOptimize(pow(p, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_Power)->Arg(4)->Arg(8)->Arg(16);

void BM_Rescale(benchmark::State& state) {
  const CurveSystem sys(std::vector<RationalPolynomial>{parse_polynomial(kSextic, kXY)});
  const Box box(Point{{-3.0, -4.0}}, Point{{3.0, 2.0}});
  for (auto _ : state) benchmark::DoNotOptimize(rescale_system(sys, box).gradient_bound);
}
BENCHMARK(BM_Rescale)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
