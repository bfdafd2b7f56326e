#include <benchmark/benchmark.h>

#include "larmor/precession.hpp"
#include "larmor/scattering.hpp"
#include "larmor/units.hpp"
#include "larmor/wavepacket.hpp"

namespace {

const larmor::ParticleSpec kNeutron = larmor::neutron();

void BM_scatter_channel(benchmark::State& state) {
  const larmor::Beam beam = larmor::beam_from_velocity(kNeutron, 10.0);
  const larmor::FieldRegion field{2.0, larmor::default_rotator_width};
  for (auto _ : state) {
    auto amp = larmor::scatter_channel(beam, kNeutron, field,
                                       larmor::ChannelKind::Barrier);
    benchmark::DoNotOptimize(amp);
  }
}
BENCHMARK(BM_scatter_channel);

void BM_modified_spinor(benchmark::State& state) {
  const larmor::Beam beam = larmor::beam_from_velocity(kNeutron, 10.0);
  const larmor::FieldRegion field{2.0, larmor::default_rotator_width};
  for (auto _ : state) {
    auto spinor = larmor::modified_spinor(kNeutron, field, beam);
    benchmark::DoNotOptimize(spinor);
  }
}
BENCHMARK(BM_modified_spinor);

void BM_detection_probability(benchmark::State& state) {
  const larmor::Beam beam = larmor::beam_from_velocity(kNeutron, 10.0);
  const larmor::FieldRegion field{2.0, larmor::default_rotator_width};
  const auto spinor = larmor::modified_spinor(kNeutron, field, beam);
  for (auto _ : state) {
    double p = larmor::detection_probability_modified(spinor, 0.3);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_detection_probability);

void BM_calibrate_width(benchmark::State& state) {
  for (auto _ : state) {
    double a = larmor::calibrate_width(kNeutron, 2.0, 2000.0, 0.0, 0.40725, 3);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_calibrate_width);

void BM_density_table(benchmark::State& state) {
  const larmor::Beam beam = larmor::beam_from_velocity(kNeutron, 10.0);
  const larmor::GaussianPacket packet =
      larmor::packet_from_relative_width(beam.k, 0.05);
  const larmor::KGrid grid =
      larmor::default_grid(packet, static_cast<int>(state.range(0)));
  const larmor::FieldRegion field{0.15, larmor::default_rotator_width};
  for (auto _ : state) {
    auto table = larmor::build_density_table(packet, kNeutron, field, grid);
    benchmark::DoNotOptimize(table);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_density_table)->Arg(201)->Arg(2001);

}  // namespace

BENCHMARK_MAIN();
