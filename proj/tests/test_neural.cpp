// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <fstream>

#include "pcup/coarse.hpp"
#include "pcup/nn/checkpoint.hpp"
#include "pcup/nn/gradcheck.hpp"
#include "pcup/nn/layers.hpp"
#include "pcup/nn/networks.hpp"
#include "pcup/nn/optim.hpp"
#include "pcup/nn/train.hpp"
#include "pcup/synthetic.hpp"
#include "support.hpp"

using namespace pcup;
using namespace pcup::nn;
using testing::error_code_of;

namespace {

NetworkConfig toy_config() {
  NetworkConfig cfg;
  cfg.k1 = 2;
  cfg.k2 = 4;
  cfg.feature_width = 8;
  cfg.dlai_channels = {8, 8, 8, 8};
  cfg.rdb_layers = 2;
  cfg.rdb_growth = 4;
  cfg.patch_size = 8;
  cfg.rate = 2;
  return cfg;
}

TrainingPair toy_pair(std::uint64_t seed, const NetworkConfig& cfg) {
  Rng rng(RngSeed{seed});
  const ColoredPointCloud gt = synthetic::wavy_sheet(400, rng, synthetic::texture(1));
  PartitionConfig pc;
  pc.patch_size = cfg.patch_size;
  pc.rate = cfg.rate;
  return extract_training_pair(gt, rng.below(gt.size()), pc, rng);
}

TensorT<double> random_tensor(std::vector<std::size_t> shape, Rng& rng) {
  TensorT<double> t(std::move(shape));
  for (std::size_t i = 0; i < t.numel(); ++i) t[i] = rng.uniform(-1.0, 1.0);
  return t;
}

// Smooth scalar: mean(out * W + 100) through a far-away MAE target.
VarT<double> smooth_loss(GraphT<double>& g, VarT<double> out, std::uint64_t seed) {
  Rng rng(RngSeed{seed});
  const TensorT<double> w = random_tensor(out.value().shape(), rng);
  const TensorT<double> target(out.value().shape(), -100.0);
  return mae(mul(out, g.constant(w)), target);
}

std::shared_ptr<const std::vector<std::uint32_t>> indices(std::vector<std::uint32_t> v) {
  return std::make_shared<const std::vector<std::uint32_t>>(std::move(v));
}

}  // namespace

TEST_CASE("tensor basics") {
  Tensor t({2, 3}, 1.5f);
  CHECK(t.numel() == 6);
  CHECK(t.rows() == 2);
  CHECK(t.cols() == 3);
  t.at(1, 2) = 4.0f;
  CHECK(t[5] == 4.0f);
  CHECK(t.all_finite());
  const auto d = t.cast<double>();
  CHECK(d[5] == 4.0);
  CHECK_THROWS_AS(Tensor({2, 2}, std::vector<float>{1, 2, 3}), Error);
}

TEST_CASE("parameter store") {
  ParameterStore s;
  s.add("a", Tensor({2}, 1.0f));
  CHECK(error_code_of([&] { s.add("a", Tensor({1})); }) == Errc::InvalidArgument);
  CHECK(error_code_of([&] { (void)s.get("b"); }) == Errc::InvalidArgument);
  CHECK(s.parameter_count() == 2);
}

TEST_CASE("linear forward matches a hand computation") {
  Graph g;
  const Var x = g.constant(Tensor({2, 2}, std::vector<float>{1, 2, 3, 4}));
  const Var w = g.parameter("w", Tensor({2, 1}, std::vector<float>{0.5f, -1.0f}));
  const Var b = g.parameter("b", Tensor({1}, std::vector<float>{0.25f}));
  const Var y = linear(x, w, b);
  CHECK(y.value()[0] == doctest::Approx(1 * 0.5 - 2 + 0.25));
  CHECK(y.value()[1] == doctest::Approx(3 * 0.5 - 4 + 0.25));
  const Var bad = g.constant(Tensor({2, 3}));
  CHECK(error_code_of([&] { linear(bad, w, b); }) == Errc::ShapeMismatch);
}

TEST_CASE("group operations forward") {
  Graph g;
  const Var x = g.constant(Tensor({4, 1}, std::vector<float>{1, 5, -2, 3}));
  CHECK(group_max(x, 2).value() == Tensor({2, 1}, std::vector<float>{5, 3}));
  CHECK(group_mean(x, 2).value() == Tensor({2, 1}, std::vector<float>{3, 0.5f}));
  auto w = std::make_shared<const std::vector<float>>(std::vector<float>{0.25f, 0.75f, 1.0f, 0.0f});
  CHECK(group_weighted_sum(x, w, 2).value() == Tensor({2, 1}, std::vector<float>{4, -2}));
  const Var gathered = gather_rows(x, indices({3, 3, 0}));
  CHECK(gathered.value() == Tensor({3, 1}, std::vector<float>{3, 3, 1}));
  CHECK(error_code_of([&] { group_max(x, 3); }) == Errc::ShapeMismatch);
}

TEST_CASE("property: every operation's gradient matches finite differences") {
  Rng rng(RngSeed{77});
  ParameterStoreT<double> p;
  p.add("x", random_tensor({6, 4}, rng));
  p.add("y", random_tensor({6, 4}, rng));
  p.add("w", random_tensor({4, 3}, rng));
  p.add("b", random_tensor({3}, rng));
  const auto idx = indices({5, 0, 2, 2, 1, 4, 3, 0});
  auto wts = std::make_shared<const std::vector<double>>(std::vector<double>{0.2, 0.8, 0.5, 0.5, 1.0, 0.0});

  const std::vector<std::pair<const char*, LossBuilder>> cases = {
      {"linear", [](GraphT<double>& g, const ParameterStoreT<double>& s) {
         return smooth_loss(g, linear(s.bind(g, "x"), s.bind(g, "w"), s.bind(g, "b")), 1);
       }},
      {"relu", [](GraphT<double>& g, const ParameterStoreT<double>& s) {
         return smooth_loss(g, relu(s.bind(g, "x")), 2);
       }},
      {"add/sub/mul", [](GraphT<double>& g, const ParameterStoreT<double>& s) {
         const auto x = s.bind(g, "x"), y = s.bind(g, "y");
         return smooth_loss(g, mul(add(x, y), sub(x, y)), 3);
       }},
      {"concat", [](GraphT<double>& g, const ParameterStoreT<double>& s) {
         return smooth_loss(g, concat_cols({s.bind(g, "x"), s.bind(g, "y"), s.bind(g, "x")}), 4);
       }},
      {"gather", [idx](GraphT<double>& g, const ParameterStoreT<double>& s) {
         return smooth_loss(g, gather_rows(s.bind(g, "x"), idx), 5);
       }},
      {"group_max", [](GraphT<double>& g, const ParameterStoreT<double>& s) {
         return smooth_loss(g, group_max(s.bind(g, "x"), 3), 6);
       }},
      {"group_mean", [](GraphT<double>& g, const ParameterStoreT<double>& s) {
         return smooth_loss(g, group_mean(s.bind(g, "y"), 2), 7);
       }},
      {"group_weighted_sum", [wts](GraphT<double>& g, const ParameterStoreT<double>& s) {
         return smooth_loss(g, group_weighted_sum(s.bind(g, "x"), wts, 2), 8);
       }},
      {"mae", [](GraphT<double>& g, const ParameterStoreT<double>& s) {
         TensorT<double> target(s.get("x").shape(), 0.1);
         return mae(s.bind(g, "x"), target);
       }},
  };
  for (const auto& [name, build] : cases) {
    CAPTURE(name);
    const GradCheckResult r = gradient_check(build, p, 1e-5);
    CHECK(r.max_relative_error < 1e-6);
    CHECK(r.checked > 0);
  }
}

TEST_CASE("mlp and rdb shapes") {
  Rng rng(RngSeed{1});
  ParameterStore s;
  const std::size_t widths[] = {3, 16, 5};
  init_mlp(s, "m", widths, rng);
  CHECK(mlp_depth(s, "m") == 2);
  CHECK(s.get("m.0.weight").shape() == std::vector<std::size_t>{3, 16});
  const Tensor out = mlp_forward(s, "m", Tensor({7, 3}, 0.5f));
  CHECK(out.shape() == std::vector<std::size_t>{7, 5});
  init_rdb(s, "r", 6, 3, 4, rng);
  CHECK(rdb_forward(s, "r", Tensor({5, 6}, 0.1f)).shape() == std::vector<std::size_t>{5, 6});
  CHECK(error_code_of([&] { rdb_forward(s, "r", Tensor({5, 4}, 0.1f)); }) == Errc::ShapeMismatch);
}

TEST_CASE("network config validation") {
  NetworkConfig cfg = toy_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.k2 = 17;
  CHECK(error_code_of([&] { cfg.validate(); }) == Errc::KTooLarge);
}

TEST_CASE("model gradients match finite differences") {
  const NetworkConfig cfg = toy_config();
  for (int variant = 0; variant < 3; ++variant) {
    ModelSpec spec;
    spec.dlai = variant != 1;
    spec.aem = variant != 0;
    spec.net = cfg;
    Rng rng(RngSeed{100 + std::uint64_t(variant)});
    const ParameterStore params = init_model(spec, rng, false);
    const TrainingPair pair = toy_pair(10 + std::uint64_t(variant), cfg);
    const GradCheckResult r = gradient_check(spec, params, pair);
    CAPTURE(variant);
    CAPTURE(r.worst_parameter);
    CHECK(r.max_relative_error < 1e-3);
    CHECK(r.checked > r.skipped);
  }
}

TEST_CASE("gradient check rejects large inputs") {
  NetworkConfig cfg = toy_config();
  cfg.patch_size = 16;
  ModelSpec spec;
  spec.net = cfg;
  Rng rng(RngSeed{1});
  const ParameterStore params = init_model(spec, rng);
  const TrainingPair pair = toy_pair(3, cfg);
  CHECK(error_code_of([&] { gradient_check(spec, params, pair); }) == Errc::InvalidArgument);
}

TEST_CASE("zero-initialized enhancement is the identity") {
  NetworkConfig cfg;
  cfg.patch_size = 64;
  cfg.rate = 4;
  cfg.k2 = 16;
  Rng rng(RngSeed{4});
  ParameterStore store;
  init_aem(store, cfg, rng);
  const ColoredPointCloud cloud = synthetic::wavy_sheet(256, rng, synthetic::texture(2));
  const auto out = aem_forward(store, cloud.attributes, cloud.positions, cfg);
  CHECK(out == cloud.attributes);
}

TEST_CASE("interpolation-only model reproduces gdwai") {
  NetworkConfig cfg = toy_config();
  cfg.patch_size = 32;
  cfg.rate = 4;
  ModelSpec spec;
  spec.net = cfg;
  Rng rng(RngSeed{5});
  const ParameterStore store = init_model(spec, rng);
  const TrainingPair pair = toy_pair(6, cfg);
  const auto ours = predict_attributes(store, spec, pair.sparse.cloud, pair.dense.positions);
  GdwaiConfig g;
  g.k1 = cfg.k1;
  const auto ref = gdwai(pair.dense.positions, pair.sparse.cloud, g);
  REQUIRE(ours.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK((ours[i] - ref[i]).cwiseAbs().maxCoeff() < 1e-6f);
}

TEST_CASE("dlai output is clamped and finite") {
  NetworkConfig cfg = toy_config();
  Rng rng(RngSeed{8});
  ParameterStore store;
  init_dlai(store, cfg, rng, false);
  const TrainingPair pair = toy_pair(9, cfg);
  const auto out = dlai_forward(store, pair.sparse.cloud, pair.dense.positions, cfg);
  CHECK(out.size() == pair.dense.size());
  for (const Vec3& a : out) {
    CHECK(a.allFinite());
    CHECK(a.minCoeff() >= 0.0f);
    CHECK(a.maxCoeff() <= 1.0f);
  }
}

TEST_CASE("adam first step") {
  ParameterStore s;
  s.add("p", Tensor({3}, std::vector<float>{1.0f, -2.0f, 0.5f}));
  Gradients g;
  g["p"] = Tensor({3}, std::vector<float>{0.3f, -4.0f, 0.0f});
  AdamConfig cfg;
  cfg.lr = 0.01;
  adam_step(s, g, cfg);
  // After one step the bias-corrected update is lr * g / (|g| + eps).
  const double expect[] = {1.0 - 0.01 * 0.3 / (0.3 + 1e-8), -2.0 + 0.01 * 4.0 / (4.0 + 1e-8), 0.5};
  for (int i = 0; i < 3; ++i) CHECK(double(s.get("p")[i]) == doctest::Approx(expect[i]).epsilon(1e-7));
  Gradients bad;
  bad["p"] = Tensor({2});
  CHECK(error_code_of([&] { adam_step(s, bad, cfg); }) == Errc::ShapeMismatch);
}

TEST_CASE("mae and chamfer losses") {
  const std::vector<Vec3> a{Vec3{0, 0, 0}, Vec3{1, 1, 1}};
  const std::vector<Vec3> b{Vec3{0.5f, 0, 0}, Vec3{1, 1, 0}};
  CHECK(mae_loss(a, b) == doctest::Approx((0.5 + 1.0) / 6.0));
  CHECK(chamfer_loss(a, a) == 0.0);
  CHECK(chamfer_loss(a, b) == doctest::Approx(0.25 + 1.0).epsilon(1e-6));
}

TEST_CASE("augmentation keeps sparse points on dense points") {
  const NetworkConfig cfg = toy_config();
  const TrainingPair pair = toy_pair(12, cfg);
  Rng rng(RngSeed{3});
  const TrainingPair t = augment(pair, rng);
  for (std::size_t j = 0; j < t.sparse.cloud.size(); ++j) {
    CHECK(t.sparse.cloud.positions[j] == t.dense.positions[t.sparse.source_indices[j]]);
  }
  CHECK(t.dense.attributes == pair.dense.attributes);
  const TrainingPair s = transform_pair(pair, 2.0, 0.0, rng);
  for (std::size_t i = 0; i < s.dense.size(); ++i) CHECK(s.dense.positions[i] == pair.dense.positions[i] * 2.0f);
}

TEST_CASE("training is deterministic and reduces the loss") {
  NetworkConfig cfg = toy_config();
  cfg.patch_size = 16;
  cfg.rate = 4;
  cfg.k2 = 8;
  std::vector<TrainingPair> pairs;
  for (std::uint64_t i = 0; i < 4; ++i) pairs.push_back(toy_pair(40 + i, cfg));
  TrainOptions opts;
  opts.spec.net = cfg;
  opts.epochs = 15;
  opts.batch = 2;
  opts.seed = RngSeed{5};
  opts.adam.lr = 3e-3;
  const TrainResult a = train(pairs, opts);
  const TrainResult b = train(pairs, opts);
  CHECK(a.params.same_values(b.params));
  CHECK(a.epoch_loss == b.epoch_loss);
  CHECK(a.epoch_loss.size() == 15);
  CHECK(a.final_loss < a.initial_loss);
  CHECK_FALSE(a.geometry_stage_run);

  opts.epochs = 0;
  const TrainResult none = train(pairs, opts);
  Rng init(Rng::derive(opts.seed, 0));
  CHECK(none.params.same_values(init_model(opts.spec, init)));

  CHECK(error_code_of([&] { train(std::span<const TrainingPair>{}, opts); }) == Errc::EmptyDataset);
  opts.spec.aem = false;
  CHECK(error_code_of([&] { train(pairs, opts); }) == Errc::InvalidArgument);
  CHECK(default_batch(4) == 40);
  CHECK(default_batch(12) == 40);
  CHECK(default_batch(16) == 28);
}

TEST_CASE("checkpoint round trip and errors") {
  testing::TempDir dir;
  ModelSpec spec;
  spec.dlai = true;
  spec.net = toy_config();
  Rng rng(RngSeed{2});
  const ParameterStore params = init_model(spec, rng, false);
  save_checkpoint(dir / "m.ckpt", spec, params);
  const Checkpoint ck = load_checkpoint(dir / "m.ckpt");
  CHECK(ck.spec == spec);
  CHECK(ck.params.same_values(params));
  CHECK(encode_checkpoint(ck.spec, ck.params) == encode_checkpoint(spec, params));

  ModelSpec other = spec;
  other.net.k2 = 8;
  CHECK(error_code_of([&] { load_checkpoint(dir / "m.ckpt", other); }) == Errc::IncompatibleCheckpoint);
  CHECK(error_code_of([&] { load_checkpoint(dir / "absent.ckpt"); }) == Errc::MissingCheckpoint);

  auto bytes = encode_checkpoint(spec, params);
  bytes.resize(bytes.size() / 2);
  CHECK(error_code_of([&] { decode_checkpoint(bytes); }) == Errc::ParseError);
  std::ofstream(dir / "junk.ckpt") << "definitely not a checkpoint";
  CHECK(error_code_of([&] { load_checkpoint(dir / "junk.ckpt"); }) == Errc::IncompatibleCheckpoint);
}
