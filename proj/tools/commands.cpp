// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "pcup/coarse.hpp"
#include "pcup/error.hpp"
#include "pcup/io/manifest.hpp"
#include "pcup/io/ply.hpp"
#include "pcup/metrics.hpp"
#include "pcup/nn/checkpoint.hpp"
#include "pcup/nn/train.hpp"
#include "pcup/pipeline.hpp"
#include "pcup/sampling.hpp"
#include "pcup/synthetic.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pcup::cli {
namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

io::PlyFormat format_of(bool ascii) {
  return ascii ? io::PlyFormat::Ascii : io::PlyFormat::BinaryLittleEndian;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(Errc::IoError, "cannot write " + path);
  f << text;
  if (!f) fail(Errc::IoError, "failed writing " + path);
}

// ---------------------------------------------------------------------------

struct DownsampleArgs {
  std::string input, output;
  int rate = 4;
  std::uint64_t seed = 0;
  bool ascii = false;
};

void cmd_downsample(const DownsampleArgs& a, std::ostream& out) {
  const ColoredPointCloud cloud = io::read_ply(a.input);
  Rng rng(RngSeed{a.seed});
  const ColoredPointCloud sparse = random_downsample(cloud, double(a.rate), rng);
  io::write_ply(sparse, a.output, format_of(a.ascii));
  out << "downsample: " << cloud.size() << " -> " << sparse.size() << " points\n";
}

// ---------------------------------------------------------------------------

struct UpsampleArgs {
  std::string input, output, report, gt, checkpoint;
  std::string method = "gdwai";
  std::string aem = "off";
  std::string geometry = "baseline";
  int rate = 4;
  std::size_t k1 = 2, k2 = 32, patch = 256;
  double overlap = 3.0;
  std::uint64_t seed = 0;
  bool ascii = false;
  // Which optional flags were given explicitly.
  bool has_k1 = false, has_k2 = false, has_patch = false;
};

constexpr std::string_view kGroundTruthPrefix = "ground-truth:";

std::unique_ptr<GeometryUpsampler> make_geometry(const std::string& spec) {
  if (spec == "baseline") return std::make_unique<MidpointUpsampler>();
  if (spec.starts_with(kGroundTruthPrefix)) {
    const std::string path = spec.substr(kGroundTruthPrefix.size());
    return std::make_unique<ReferenceGeometry>(io::read_ply(path).positions);
  }
  fail(Errc::InvalidArgument, "--geometry must be 'baseline' or 'ground-truth:<path>'");
}

void check_matches(bool given, std::size_t flag, std::size_t stored, const char* name) {
  if (given && flag != stored) {
    fail(Errc::IncompatibleCheckpoint, std::string("--") + name + " " + std::to_string(flag) +
                                           " does not match checkpoint value " +
                                           std::to_string(stored));
  }
}

void cmd_upsample(const UpsampleArgs& a, std::ostream& out, std::ostream& err) {
  const bool dlai = a.method == "dlai";
  const bool aem = a.aem == "on";
  UpsampleOptions opts;
  opts.seed = RngSeed{a.seed};
  opts.partition.overlap = a.overlap;
  opts.partition.rate = a.rate;
  opts.partition.patch_size = a.patch;
  opts.k1 = a.k1;

  std::optional<nn::Checkpoint> ck;
  if (dlai || aem) {
    if (a.checkpoint.empty()) {
      fail(Errc::MissingCheckpoint, "--checkpoint is required with --method dlai or --aem on");
    }
    ck = nn::load_checkpoint(a.checkpoint);
    if (ck->spec.dlai != dlai || ck->spec.aem != aem) {
      fail(Errc::IncompatibleCheckpoint, "checkpoint networks do not match --method/--aem");
    }
    const nn::NetworkConfig& net = ck->spec.net;
    if (std::size_t(a.rate) != std::size_t(net.rate)) {
      fail(Errc::IncompatibleCheckpoint, "--rate " + std::to_string(a.rate) +
                                             " does not match checkpoint rate " +
                                             std::to_string(net.rate));
    }
    check_matches(a.has_k1, a.k1, net.k1, "k1");
    check_matches(a.has_k2, a.k2, net.k2, "k2");
    check_matches(a.has_patch, a.patch, net.patch_size, "patch");
    opts.partition.patch_size = net.patch_size;
    opts.k1 = net.k1;
    opts.spec = ck->spec;
    opts.params = &ck->params;
  } else if (!a.checkpoint.empty()) {
    err << "note: --checkpoint ignored for gdwai without AEM\n";
  }

  const ColoredPointCloud input = io::read_ply(a.input);
  const auto geometry = make_geometry(a.geometry);
  const UpsampleResult r = upsample_cloud(input, *geometry, opts);
  io::write_ply(r.cloud, a.output, format_of(a.ascii));
  out << "upsample: " << input.size() << " -> " << r.cloud.size() << " points (" << r.patches
      << " patches, " << r.candidates << " candidates)\n";

  if (!a.report.empty()) {
    std::string gt_path = a.gt;
    if (gt_path.empty() && a.geometry.starts_with(kGroundTruthPrefix)) {
      gt_path = a.geometry.substr(kGroundTruthPrefix.size());
    }
    if (gt_path.empty()) fail(Errc::InvalidArgument, "--report needs --gt or ground-truth geometry");
    const MetricReport m = evaluate(r.cloud, io::read_ply(gt_path));
    write_text(a.report, m.to_json());
    out << m.to_text();
  }
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string manifest, out, log;
  std::string method = "gdwai";
  std::string aem = "on";
  int rate = 4;
  std::size_t epochs = 400, batch = 0, k1 = 2, k2 = 32, patch = 256, pairs = 0;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  bool no_augment = false;
};

void cmd_train(const TrainArgs& a, std::ostream& out) {
  nn::ModelSpec spec;
  spec.dlai = a.method == "dlai";
  spec.aem = a.aem == "on";
  spec.net.k1 = a.k1;
  spec.net.k2 = a.k2;
  spec.net.patch_size = a.patch;
  spec.net.rate = a.rate;
  if (!spec.learnable()) fail(Errc::InvalidArgument, "gdwai without AEM has nothing to train");
  spec.net.validate();

  const io::DatasetManifest manifest = io::load_manifest(a.manifest);
  if (manifest.entries.empty()) fail(Errc::EmptyDataset, "manifest has no entries");
  PartitionConfig pcfg;
  pcfg.patch_size = a.patch;
  pcfg.rate = a.rate;
  pcfg.overlap = 1.0;
  std::vector<TrainingPair> pairs;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const ColoredPointCloud cloud = io::read_ply(manifest.resolve(manifest.entries[i].path));
    Rng rng = Rng::derive(RngSeed{a.seed}, 2 + i);
    auto more = sample_training_pairs(cloud, pcfg, a.pairs, rng);
    for (auto& p : more) pairs.push_back(std::move(p));
  }

  nn::TrainOptions opts;
  opts.spec = spec;
  opts.epochs = a.epochs;
  opts.batch = a.batch;
  opts.adam.lr = a.lr;
  opts.seed = RngSeed{a.seed};
  opts.augment = !a.no_augment;
  const nn::TrainResult r = nn::train(pairs, opts);
  nn::save_checkpoint(a.out, spec, r.params);

  std::string log = "initial " + num(r.initial_loss) + "\n";
  for (std::size_t e = 0; e < r.epoch_loss.size(); ++e) {
    log += "epoch " + std::to_string(e + 1) + " " + num(r.epoch_loss[e]) + "\n";
  }
  log += "final " + num(r.final_loss) + "\n";
  write_text(a.log.empty() ? a.out + ".log" : a.log, log);
  out << "train: " << pairs.size() << " pairs, " << a.epochs << " epochs, MAE "
      << fixed(r.initial_loss) << " -> " << fixed(r.final_loss) << "\n";
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string pred, gt, out, text;
  bool complexity = false;
};

void cmd_eval(const EvalArgs& a, std::ostream& out) {
  const ColoredPointCloud pred = io::read_ply(a.pred);
  const ColoredPointCloud gt = io::read_ply(a.gt);
  const MetricReport m = evaluate(pred, gt, a.complexity);
  if (!a.out.empty()) write_text(a.out, m.to_json());
  if (!a.text.empty()) write_text(a.text, m.to_text());
  out << m.to_text();
}

// ---------------------------------------------------------------------------

struct StatsArgs {
  std::string manifest, out;
};

void cmd_stats(const StatsArgs& a, std::ostream& out) {
  const io::DatasetManifest manifest = io::load_manifest(a.manifest);
  std::string csv = "id,category,point_count,g_c,a_c\n";
  for (const auto& e : manifest.entries) {
    const ColoredPointCloud cloud = io::read_ply(manifest.resolve(e.path));
    const Complexity c = content_complexity(cloud);
    csv += e.id + "," + e.category + "," + std::to_string(cloud.size()) + "," + num(c.g_c) + "," +
           num(c.a_c) + "\n";
  }
  if (!a.out.empty()) write_text(a.out, csv);
  out << csv;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string input, out, checkpoint;
  int rate = 4;
  std::size_t patch = 256, k1 = 2, epochs = 0, batch = 0, pairs = 0;
  double overlap = 3.0;
  std::vector<std::size_t> k1_values{1, 2, 3, 4};
  std::vector<std::size_t> k2_values{4, 8, 16, 24, 32, 40};
  std::uint64_t seed = 0;
};

void cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const ColoredPointCloud gt = io::read_ply(a.input);
  Rng down_rng = Rng::derive(RngSeed{a.seed}, 0);
  const ColoredPointCloud sparse = random_downsample(gt, double(a.rate), down_rng);
  const ReferenceGeometry geometry(gt.positions);

  UpsampleOptions base;
  base.seed = RngSeed{a.seed};
  base.partition.patch_size = a.patch;
  base.partition.overlap = a.overlap;
  base.partition.rate = a.rate;

  std::optional<nn::Checkpoint> ck;
  if (!a.checkpoint.empty()) {
    ck = nn::load_checkpoint(a.checkpoint);
    if (!ck->spec.aem) fail(Errc::IncompatibleCheckpoint, "the k2 sweep needs an AEM checkpoint");
    if (ck->spec.net.rate != a.rate || ck->spec.net.patch_size != a.patch) {
      fail(Errc::IncompatibleCheckpoint, "checkpoint rate/patch differ from --rate/--patch");
    }
  }

  std::string table = "param,value,psnr_y,psnr_r,psnr_g,psnr_b\n";
  const auto row = [&](const char* param, std::size_t value, const ColoredPointCloud& pred) {
    const PsnrResult p = attribute_psnr(pred, gt);
    table += std::string(param) + "," + std::to_string(value) + "," + fixed(p.y) + "," +
             fixed(p.rgb[0]) + "," + fixed(p.rgb[1]) + "," + fixed(p.rgb[2]) + "\n";
  };

  for (std::size_t k1 : a.k1_values) {
    UpsampleOptions o = base;
    o.k1 = k1;
    row("k1", k1, upsample_cloud(sparse, geometry, o).cloud);
  }

  std::vector<TrainingPair> pairs;
  if (!ck && a.epochs > 0) {
    PartitionConfig pcfg = base.partition;
    pcfg.overlap = 1.0;
    Rng pair_rng = Rng::derive(RngSeed{a.seed}, 1);
    pairs = sample_training_pairs(gt, pcfg, a.pairs, pair_rng);
  }
  for (std::size_t k2 : a.k2_values) {
    nn::ModelSpec spec;
    nn::ParameterStore params;
    if (ck) {
      spec = ck->spec;
      params = ck->params;
    } else {
      spec.dlai = false;
      spec.aem = true;
      spec.net.k1 = a.k1;
      spec.net.patch_size = a.patch;
      spec.net.rate = a.rate;
    }
    spec.net.k2 = k2;
    spec.net.validate();
    if (!ck) {
      nn::TrainOptions t;
      t.spec = spec;
      t.epochs = a.epochs;
      t.batch = a.batch;
      t.seed = RngSeed{a.seed};
      if (a.epochs > 0) {
        params = nn::train(pairs, t).params;
      } else {
        Rng init = Rng::derive(t.seed, 0);
        params = nn::init_model(spec, init);
      }
    }
    UpsampleOptions o = base;
    o.k1 = spec.net.k1;
    o.spec = spec;
    o.params = &params;
    row("k2", k2, upsample_cloud(sparse, geometry, o).cloud);
  }
  if (!a.out.empty()) write_text(a.out, table);
  out << table;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string shape = "sphere", output, color;
  std::size_t points = 4096;
  int texture = 0;
  std::uint64_t seed = 0;
  bool ascii = false;
};

Vec3 parse_color(const std::string& s) {
  Vec3 c;
  char extra = 0;
  if (std::sscanf(s.c_str(), "%f,%f,%f%c", &c[0], &c[1], &c[2], &extra) != 3) {
    fail(Errc::InvalidArgument, "--color expects r,g,b in [0,1]");
  }
  if ((c.array() < 0.0f).any() || (c.array() > 1.0f).any()) {
    fail(Errc::InvalidArgument, "--color channels must lie in [0,1]");
  }
  return c;
}

void cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const synthetic::ColorField field =
      a.color.empty() ? synthetic::texture(a.texture) : synthetic::constant_color(parse_color(a.color));
  Rng rng(RngSeed{a.seed});
  ColoredPointCloud cloud;
  if (a.shape == "grid") {
    std::size_t side = 2;
    while ((side + 1) * (side + 1) <= a.points) ++side;
    cloud = synthetic::flat_grid(side, field);
  } else {
    cloud = synthetic::make(a.shape, a.points, rng, field);
  }
  io::write_ply(cloud, a.output, format_of(a.ascii));
  out << "generate: " << cloud.size() << " points\n";
}

// ---------------------------------------------------------------------------

void require_positive(CLI::Option* opt) { opt->check(CLI::PositiveNumber); }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Colored point-cloud up-sampling: partition, interpolate, enhance, evaluate."};
  app.name("pcup");
  app.require_subcommand(1, 1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0: all available cores)")
      ->check(CLI::NonNegativeNumber);

  DownsampleArgs ds;
  auto* c_ds = app.add_subcommand("downsample", "Uniform random down-sampling by a rate");
  c_ds->add_option("--input", ds.input, "Input PLY")->required();
  c_ds->add_option("--output", ds.output, "Output PLY")->required();
  require_positive(c_ds->add_option("--rate", ds.rate, "Down-sampling rate R")->required());
  c_ds->add_option("--seed", ds.seed, "Random seed");
  c_ds->add_flag("--ascii", ds.ascii, "Write ascii PLY");

  UpsampleArgs us;
  auto* c_us = app.add_subcommand("upsample", "Up-sample a colored cloud by rate R");
  c_us->add_option("--input", us.input, "Sparse input PLY")->required();
  c_us->add_option("--output", us.output, "Dense output PLY")->required();
  require_positive(c_us->add_option("--rate", us.rate, "Up-sampling rate R")->required());
  c_us->add_option("--method", us.method, "Coarse attribute stage")
      ->check(CLI::IsMember({"gdwai", "dlai"}))
      ->capture_default_str();
  c_us->add_option("--aem", us.aem, "Attribute enhancement")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  c_us->add_option("--checkpoint", us.checkpoint, "Checkpoint (required for dlai or aem on)");
  auto* o_k1 = c_us->add_option("--k1", us.k1, "Interpolation neighbors")->capture_default_str();
  auto* o_k2 = c_us->add_option("--k2", us.k2, "AEM neighbors (must match the checkpoint)");
  auto* o_patch = c_us->add_option("--patch", us.patch, "Points per patch m")->capture_default_str();
  require_positive(o_k1);
  require_positive(o_k2);
  require_positive(o_patch);
  c_us->add_option("--overlap", us.overlap, "Overlap ratio c >= 1")->capture_default_str();
  c_us->add_option("--geometry", us.geometry, "baseline | ground-truth:<ply>")->capture_default_str();
  c_us->add_option("--report", us.report, "Write a JSON metric report (needs a ground truth)");
  c_us->add_option("--gt", us.gt, "Ground-truth PLY for --report");
  c_us->add_option("--seed", us.seed, "Random seed");
  c_us->add_flag("--ascii", us.ascii, "Write ascii PLY");

  TrainArgs tr;
  auto* c_tr = app.add_subcommand("train", "Train the attribute networks on a manifest");
  c_tr->add_option("--manifest", tr.manifest, "Dataset manifest (JSON)")->required();
  c_tr->add_option("--out", tr.out, "Output checkpoint")->required();
  require_positive(c_tr->add_option("--rate", tr.rate, "Up-sampling rate R")->required());
  c_tr->add_option("--method", tr.method, "Coarse attribute stage")
      ->check(CLI::IsMember({"gdwai", "dlai"}))
      ->capture_default_str();
  c_tr->add_option("--aem", tr.aem, "Train the enhancement module")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  c_tr->add_option("--epochs", tr.epochs, "Epochs")->capture_default_str();
  c_tr->add_option("--batch", tr.batch, "Batch size (0: 40 for R <= 12, else 28)")->capture_default_str();
  c_tr->add_option("--lr", tr.lr, "Adam learning rate")->capture_default_str();
  require_positive(c_tr->add_option("--k1", tr.k1, "Interpolation neighbors")->capture_default_str());
  require_positive(c_tr->add_option("--k2", tr.k2, "AEM neighbors")->capture_default_str());
  require_positive(c_tr->add_option("--patch", tr.patch, "Points per patch m")->capture_default_str());
  c_tr->add_option("--pairs", tr.pairs, "Training pairs per cloud (0: n/(m*R))")->capture_default_str();
  c_tr->add_option("--log", tr.log, "Per-epoch loss log (default: <out>.log)");
  c_tr->add_flag("--no-augment", tr.no_augment, "Disable scale and jitter augmentation");
  c_tr->add_option("--seed", tr.seed, "Random seed");

  EvalArgs ev;
  auto* c_ev = app.add_subcommand("eval", "Geometry and attribute metrics of a prediction");
  c_ev->add_option("--pred", ev.pred, "Predicted PLY")->required();
  c_ev->add_option("--gt", ev.gt, "Ground-truth PLY")->required();
  c_ev->add_option("--out", ev.out, "JSON report");
  c_ev->add_option("--text", ev.text, "Plain-text report");
  c_ev->add_flag("--complexity", ev.complexity, "Also report g_c and a_c of the prediction");

  StatsArgs st;
  auto* c_st = app.add_subcommand("stats", "Point counts and content complexity per entry");
  c_st->add_option("--manifest", st.manifest, "Dataset manifest (JSON)")->required();
  c_st->add_option("--out", st.out, "CSV output");

  SweepArgs sw;
  auto* c_sw = app.add_subcommand("sweep", "PSNR table over k1 and k2");
  c_sw->add_option("--input", sw.input, "Dense ground-truth PLY")->required();
  c_sw->add_option("--out", sw.out, "CSV output");
  require_positive(c_sw->add_option("--rate", sw.rate, "Up-sampling rate R")->capture_default_str());
  require_positive(c_sw->add_option("--patch", sw.patch, "Points per patch m")->capture_default_str());
  c_sw->add_option("--overlap", sw.overlap, "Overlap ratio c")->capture_default_str();
  require_positive(c_sw->add_option("--k1", sw.k1, "k1 used by the k2 sweep")->capture_default_str());
  c_sw->add_option("--k1-values", sw.k1_values, "k1 values")->delimiter(',')->capture_default_str();
  c_sw->add_option("--k2-values", sw.k2_values, "k2 values")->delimiter(',')->capture_default_str();
  c_sw->add_option("--checkpoint", sw.checkpoint, "AEM checkpoint (k2 is overridden per row)");
  c_sw->add_option("--epochs", sw.epochs, "Without checkpoint: AEM epochs per k2")->capture_default_str();
  c_sw->add_option("--batch", sw.batch, "Batch size for --epochs")->capture_default_str();
  c_sw->add_option("--pairs", sw.pairs, "Training pairs for --epochs")->capture_default_str();
  c_sw->add_option("--seed", sw.seed, "Random seed");

  GenerateArgs gen;
  auto* c_gen = app.add_subcommand("generate", "Write a synthetic colored cloud");
  c_gen->add_option("--output", gen.output, "Output PLY")->required();
  c_gen->add_option("--shape", gen.shape, "sphere | sheet | cube | grid")
      ->check(CLI::IsMember({"sphere", "sheet", "cube", "grid"}))
      ->capture_default_str();
  require_positive(c_gen->add_option("--points", gen.points, "Point count")->capture_default_str());
  c_gen->add_option("--texture", gen.texture, "Texture variant")->capture_default_str();
  c_gen->add_option("--color", gen.color, "Constant color r,g,b instead of a texture");
  c_gen->add_option("--seed", gen.seed, "Random seed");
  c_gen->add_flag("--ascii", gen.ascii, "Write ascii PLY");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("pcup");
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    if (c_ds->parsed()) cmd_downsample(ds, out);
    else if (c_us->parsed()) {
      us.has_k1 = o_k1->count() > 0;
      us.has_k2 = o_k2->count() > 0;
      us.has_patch = o_patch->count() > 0;
      cmd_upsample(us, out, err);
    } else if (c_tr->parsed()) cmd_train(tr, out);
    else if (c_ev->parsed()) cmd_eval(ev, out);
    else if (c_st->parsed()) cmd_stats(st, out);
    else if (c_sw->parsed()) cmd_sweep(sw, out);
    else if (c_gen->parsed()) cmd_generate(gen, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace pcup::cli
