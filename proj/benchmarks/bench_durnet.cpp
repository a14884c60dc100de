#include <benchmark/benchmark.h>

#include "durnet/compiler.hpp"
#include "durnet/reachability.hpp"
#include "durnet/solver.hpp"
#include "durnet/textio.hpp"

using namespace durnet;

namespace {

const char* kTransfer =
    "1: inc c0 goto 2\n2: inc c0 goto 3\n3: inc c0 goto 4\n4: jzdec c0 zero 6 else 5\n"
    "5: inc c1 goto 4\n6: halt\n";

const Semantics kSems[] = {Semantics::global_patient(), Semantics::global_impatient(),
                           Semantics::local_patient(), Semantics::local_impatient()};

// A marking with `n` tokens spread over three places and four stamps.
DurationalMarking spread(std::int64_t n) {
  std::string text;
  for (std::int64_t i = 0; i < n; ++i) {
    text += std::to_string(i % 4) + "@p" + std::to_string(i % 3) + " ";
  }
  return parse_marking(text);
}

void BM_Enabled(benchmark::State& state) {
  auto net = parse_net("rule a dur=1 : p0 p1 -> p2\nrule b dur=2 : p1*2 -> p0 p2\nrule c dur=3 : p2 p0 -> p1\n");
  auto m = spread(state.range(1));
  const Semantics sem = kSems[state.range(0)];
  std::size_t count = 0;
  for (auto _ : state) {
    auto e = enabled(net, sem, m);
    count = e.size();
    benchmark::DoNotOptimize(e);
  }
  state.SetLabel(semantics_code(sem) + " instances=" + std::to_string(count));
}
BENCHMARK(BM_Enabled)->ArgsProduct({{0, 1, 2, 3}, {6, 12, 24}});

void BM_Compile(benchmark::State& state) {
  auto m = parse_machine(kTransfer);
  for (auto _ : state) benchmark::DoNotOptimize(compile(m));
}
BENCHMARK(BM_Compile);

void BM_SolveHalting(benchmark::State& state) {
  auto c = compile(parse_machine(kTransfer));
  GamePosition start{c.left_init, c.right_init};
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_bounded(c.net, Semantics::global_impatient(), start, 40, {.certify = false}));
  }
}
BENCHMARK(BM_SolveHalting)->Unit(benchmark::kMillisecond);

void BM_SolveNonHalting(benchmark::State& state) {
  auto c = compile(parse_machine("1: inc c0 goto 2\n2: inc c0 goto 3\n3: jzdec c0 zero 1 else 4\n"
                                 "4: inc c1 goto 3\n5: halt\n"));
  GamePosition start{c.left_init, c.right_init};
  const auto depth = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_bounded(c.net, Semantics::global_impatient(), start, depth, {.certify = false}));
  }
}
BENCHMARK(BM_SolveNonHalting)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_SolvePatient(benchmark::State& state) {
  auto net = parse_net("rule b dur=1 : p0 pace -> p0*2 pace\nrule b dur=1 : p0*2 pace -> pace\n"
                       "rule a dur=2 : p0*2 pace -> p0 pace\nrule a dur=2 : p0*2 pace -> p0*2 pace\n");
  GamePosition pos{parse_marking("0@p0*5 0@pace"), parse_marking("0@p0*4 0@pace")};
  const auto depth = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_bounded(net, Semantics::local_patient(), pos, depth, {.certify = false}));
  }
}
BENCHMARK(BM_SolvePatient)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_ReachDurational(benchmark::State& state) {
  auto net = parse_net("rule a dur=1 : p -> q r\nrule b dur=2 : q r -> p\nrule c dur=1 : r -> s\n");
  auto target = parse_marking(std::to_string(state.range(0)) + "@s");
  for (auto _ : state) {
    benchmark::DoNotOptimize(reach_durational(net, Semantics::local_patient(), parse_marking("0@p*2"), target));
  }
}
BENCHMARK(BM_ReachDurational)->Arg(4)->Arg(8)->Arg(12);

// The machine drains its counters before halting, so the empty marking is found.
void BM_ReachUntimedCompiled(benchmark::State& state) {
  auto c = compile(parse_machine("1: inc c0 goto 2\n2: inc c0 goto 3\n3: jzdec c0 zero 4 else 3\n4: halt\n"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        reach_untimed_bounded(c.net, Semantics::global_impatient(), c.left_init, PlaceMultiset{}, 1'000'000));
  }
}
BENCHMARK(BM_ReachUntimedCompiled)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
