#include <benchmark/benchmark.h>

#include "curvetrace/driver.hpp"

using namespace curvetrace;

namespace {

const std::vector<std::string> kXY{"x", "y"};

CurveSystem S(const char* p) { return CurveSystem(std::vector<RationalPolynomial>{parse_polynomial(p, kXY)}); }

void BM_PlotOvalCircle(benchmark::State& state) {
  const CurveSystem sys = S("x^2+y^2-1");
  const Box box(Point::Constant(2, -2), Point::Constant(2, 2));
  TraceOptions o;
  o.mode = state.range(0) ? StepMode::robust : StepMode::practical;
  for (auto _ : state) {
    std::vector<Point> rwp{Point{{1.0, 0.0}}};
    std::vector<TracePoint> wp;
    benchmark::DoNotOptimize(plot_oval(sys, box, rwp, wp, 0.02, o).size());
  }
}
BENCHMARK(BM_PlotOvalCircle)->Arg(0)->Arg(1);

void BM_ApproxPlot(benchmark::State& state, const char* poly, double lo, double hi, double eps) {
  const CurveSystem sys = S(poly);
  const Box box(Point::Constant(2, lo), Point::Constant(2, hi));
  RunConfig cfg;
  cfg.eps = eps;
  for (auto _ : state) benchmark::DoNotOptimize(approx_plot(sys, box, cfg).chains.size());
}
BENCHMARK_CAPTURE(BM_ApproxPlot, circle, "x^2+y^2-1", -2.0, 2.0, 0.1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ApproxPlot, cusp, "y^2-(-x^2+x)^3", -1.0, 2.0, 0.2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ApproxPlot, sextic, "6*x*y^7+85*x^4*y^3-60*x^2*y^5-32*x^2*y^3+14*x^4-35*y^4", -4.0, 3.0, 0.4)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
