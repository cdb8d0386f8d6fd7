// Copyright 2026 The TableReader Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference vs. OpenMP kernels. Arg 0 selects serial, 1 parallel;
// compare the two rows of each pair. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "tablereader/decode.hpp"
#include "tablereader/dictionary.hpp"
#include "tablereader/gabor.hpp"
#include "tablereader/synthetic.hpp"
#include "tablereader/training.hpp"

using namespace tablereader;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) ? Execution::kParallel : Execution::kSerial;
}

Raster noise_page(int w, int h) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pix(0, 255);
  Raster r(w, h);
  for (auto& p : r.pixels()) p = static_cast<std::uint8_t>(pix(rng));
  return r;
}

void BM_GaborFrontEnd(benchmark::State& state) {
  const Raster img = noise_page(1200, 128);
  const GaborBank bank{{0.0, 45.0, 90.0, 135.0}, 4.0, 2.0, 7};
  for (auto _ : state) benchmark::DoNotOptimize(gabor_forward(img, bank, mode(state)));
  state.SetItemsProcessed(state.iterations() * img.width() * img.height());
}
BENCHMARK(BM_GaborFrontEnd)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DecodeNegLogProbs(benchmark::State& state) {
  const auto task = synthetic::make_toy_task();
  const NetworkSpec spec = synthetic::toy_network_spec();
  const Network net(spec);
  decode::Committee committee;
  for (int m = 0; m < 3; ++m) {
    NetworkSpec s = spec;
    s.seed = 100 + m;
    const Network member(s);
    committee.push_back(member.forward(member.initialize(), task.validation[0].image));
  }
  // A larger dictionary than the toy one: every 1-3 digit string.
  std::vector<std::pair<std::string, double>> words;
  for (int i = 0; i < 1000; ++i) words.emplace_back(std::to_string(i), 1.0 + i % 7);
  const Dictionary dict(words, synthetic::toy_alphabet());
  for (auto _ : state)
    benchmark::DoNotOptimize(decode::neg_log_probs(committee, dict, mode(state)));
  state.SetItemsProcessed(state.iterations() * dict.size() * committee.size());
}
BENCHMARK(BM_DecodeNegLogProbs)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BatchGradient(benchmark::State& state) {
  const auto task = synthetic::make_toy_task();
  const Network net(synthetic::toy_network_spec());
  const WeightStore weights = net.initialize();
  std::vector<const training::Sample*> batch;
  for (int i = 0; i < 16; ++i) batch.push_back(&task.train[static_cast<std::size_t>(i)]);
  for (auto _ : state)
    benchmark::DoNotOptimize(training::batch_gradient(net, weights, batch, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(batch.size()));
}
BENCHMARK(BM_BatchGradient)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
