#include <random>

#include <benchmark/benchmark.h>

#include "speccode/code_zoo.hpp"
#include "speccode/geometry.hpp"
#include "speccode/operator_core.hpp"
#include "speccode/toeplitz.hpp"

using namespace speccode;

namespace {

Matrix random_hermitian(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
    return a + a.adjoint();
}

void BM_Eigh(benchmark::State& state) {
    const HermitianOperator h(random_hermitian(state.range(0), 1));
    for (auto _ : state) benchmark::DoNotOptimize(eigh(h));
}
BENCHMARK(BM_Eigh)->RangeMultiplier(2)->Range(8, 256);

void BM_StabilizerWSet(benchmark::State& state) {
    const std::vector<std::string> five{"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"};
    const std::vector<std::string> steane{"IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"};
    const auto& gens = state.range(0) == 5 ? five : steane;
    for (auto _ : state) benchmark::DoNotOptimize(stabilizer_code(gens));
}
BENCHMARK(BM_StabilizerWSet)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_ToeplitzMatrix(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    const ToeplitzQuantizer q = build_quantizer(p, p + 8);
    const SphereFunction f = SphereFunction::parse("x*y");
    for (auto _ : state) benchmark::DoNotOptimize(toeplitz_matrix(q, f));
}
BENCHMARK(BM_ToeplitzMatrix)->RangeMultiplier(2)->Range(8, 128)->Unit(benchmark::kMicrosecond);

void BM_ConnesClosed(benchmark::State& state) {
    const AbelianGroup g = AbelianGroup::bit_vectors(static_cast<int>(state.range(0)));
    const DiscreteMetricTriple t = DiscreteMetricTriple::from_group(WeightFunction::hamming(g));
    for (auto _ : state) benchmark::DoNotOptimize(connes_distance_matrix(t));
}
BENCHMARK(BM_ConnesClosed)->DenseRange(3, 6)->Unit(benchmark::kMicrosecond);

void BM_ConnesGeneral(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.5, 3.0);
    Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(n, n);
    std::vector<std::string> labels;
    for (Eigen::Index i = 0; i < n; ++i) {
        labels.push_back(std::to_string(i));
        for (Eigen::Index j = i + 1; j < n; ++j) weights(i, j) = weights(j, i) = u(rng);
    }
    const DiscreteMetricTriple t(labels, weights);
    const FiniteSpectralTriple triple = t.triple();
    ConnesOptions opt;
    opt.restarts = 1;
    opt.iterations = 500;
    for (auto _ : state) benchmark::DoNotOptimize(connes_distance_general(triple, t.point_state(0), t.point_state(1), opt));
}
BENCHMARK(BM_ConnesGeneral)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
