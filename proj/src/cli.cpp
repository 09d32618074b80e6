/*
 * Copyright 2026 The Parallax Blur Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "parallax/cli.hpp"

#include <CLI11.hpp>
#include <spdlog/logger.h>
#include <spdlog/sinks/ostream_sink.h>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>

#include "parallax/ablation.hpp"
#include "parallax/config.hpp"
#include "parallax/errors.hpp"
#include "parallax/fig3.hpp"
#include "parallax/fit.hpp"
#include "parallax/io.hpp"
#include "parallax/metrics.hpp"
#include "parallax/parallel.hpp"
#include "parallax/pipeline.hpp"
#include "parallax/scene.hpp"
#include "parallax/siren.hpp"

namespace parallax {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  bool verbose = false;
};

class ThreadCountGuard {
 public:
  explicit ThreadCountGuard(int threads) : saved_(thread_count()) {
    if (threads > 0) set_thread_count(threads);
  }
  ~ThreadCountGuard() { set_thread_count(saved_); }

 private:
  int saved_;
};

// Scene settings for an input of the given size. Without --config the
// generated-scene optics are assumed.
SceneConfig scene_for(const Globals& g, int width, int height) {
  if (g.config.empty()) return SceneConfig{scene_intrinsics(width, height), BlurConfig{}};
  SceneConfig scene = load_scene_config(g.config);
  if (scene.intrinsics.width() != width || scene.intrinsics.height() != height) {
    throw DomainError("config is for " + std::to_string(scene.intrinsics.width()) + "x" +
                      std::to_string(scene.intrinsics.height()) + " but input is " +
                      std::to_string(width) + "x" + std::to_string(height));
  }
  return scene;
}

void require_same_shape(const Image& image, const DepthMap& depth) {
  if (image.width() != depth.width() || image.height() != depth.height()) {
    throw DomainError("image and depth map sizes differ");
  }
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

Image gray(const FloatRaster& raster) {
  Image image(raster.width(), raster.height(), 1);
  std::copy(raster.values().begin(), raster.values().end(), image.plane(0).values().begin());
  return image;
}

std::string numbered(const char* stem, int index, const char* ext) {
  char name[64];
  std::snprintf(name, sizeof name, "%s_%02d%s", stem, index, ext);
  return name;
}

void dump_layers(const fs::path& dir, const IcbModel& model, const BlurConfig& blur) {
  fs::create_directories(dir);
  const LayerDecomposition& layers = model.layers;
  const int count = layers.layer_count();
  FloatRaster labels(layers.labels.width(), layers.labels.height());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    labels.values()[i] =
        count > 1 ? static_cast<float>(layers.labels.values()[i]) / (count - 1) : 0.0f;
  }
  save_image(dir / "labels.png", gray(labels));

  json entries = json::array();
  for (int l = 0; l < count; ++l) {
    save_image(dir / numbered("matte", l, ".png"), gray(layers.mattes[l]), 16);
    save_image(dir / numbered("zbuffer", l, ".png"), gray(layers.zbuffers[l]), 16);
    save_image(dir / numbered("extended", l, ".png"), gray(layers.extended_masks[l]), 16);
    std::size_t pixels = 0;
    for (int v : layers.labels.values()) pixels += v == l;
    const BlurKernel& k = model.kernels[l];
    entries.push_back({{"index", l},
                       {"depth_edge_m", layers.sequence.values[l]},
                       {"optimal_depth_m", layers.optimal_depths[l]},
                       {"pixels", pixels},
                       {"kernel_width", k.width()},
                       {"kernel_height", k.height()},
                       {"kernel_anchor", {k.anchor_x(), k.anchor_y()}}});
  }
  json j = {{"schema_version", kSchemaVersion},
            {"n", blur.n},
            {"sigma", blur.sigma},
            {"kappa_x", layers.sequence.kappa_x},
            {"kappa_y", layers.sequence.kappa_y},
            {"layers", entries}};
  write_json(dir / "layers.json", j);
}

struct BlurArgs {
  std::string image, depth, trajectory, out, model = "icb", dump_layers;
  int bit_depth = 8;
  bool materialize = false;
};

void run_blur(const BlurArgs& a, const Globals& g, std::ostream& out, spdlog::logger& log) {
  const Image image = load_image(a.image);
  const DepthMap depth = load_depth(a.depth);
  require_same_shape(image, depth);
  const Trajectory traj = load_trajectory(a.trajectory);
  const SceneConfig scene = scene_for(g, image.width(), image.height());
  scene.blur.validate();

  json summary = {{"schema_version", kSchemaVersion}, {"model", a.model}};
  std::optional<IcbModel> model;
  if (a.model == "icb" || !a.dump_layers.empty()) {
    model = build_icb_model(depth, traj, scene.intrinsics, scene.blur);
    log.info("{} layers", model->layers.layer_count());
  }
  Image blurred;
  if (a.model == "icb") {
    blurred = blur_icb(image, *model);
    summary["layers"] = model->layers.layer_count();
    summary["kernel_weights"] = kernel_storage_weights(model->kernels);
  } else if (a.model == "pwb") {
    const PixelwiseKernelField field =
        build_pwb_field(depth, traj, scene.intrinsics, scene.blur);
    blurred = pwb_forward(image, field);
    if (a.materialize) {
      const std::vector<BlurKernel> kernels = field.materialize();
      summary["kernel_weights"] = kernel_storage_weights(kernels);
    }
  } else {
    throw DomainError("unknown blur model '" + a.model + "'");
  }
  save_image(a.out, blurred, a.bit_depth);
  if (!a.dump_layers.empty()) dump_layers(a.dump_layers, *model, scene.blur);
  emit(out, summary);
}

struct DeblurArgs {
  std::string blurred, depth, trajectory, out, fit_config, trace, checkpoint;
  std::optional<int> iterations;
  int bit_depth = 8;
};

void run_deblur(const DeblurArgs& a, const Globals& g, std::ostream& out,
                spdlog::logger& log) {
  const Image observed = load_image(a.blurred);
  const DepthMap depth = load_depth(a.depth);
  require_same_shape(observed, depth);
  const Trajectory traj = load_trajectory(a.trajectory);
  const SceneConfig scene = scene_for(g, observed.width(), observed.height());
  scene.blur.validate();

  FitConfig fit_config = a.fit_config.empty() ? FitConfig{} : load_fit_config(a.fit_config);
  if (a.iterations) fit_config.iterations = *a.iterations;
  if (g.seed) fit_config.seed = *g.seed;
  fit_config.validate();

  const IcbModel model = build_icb_model(depth, traj, scene.intrinsics, scene.blur);
  log.info("{} layers, {} iterations", model.layers.layer_count(), fit_config.iterations);
  const FitResult result = fit(observed, model, fit_config, [&](int it, double loss) {
    if (it % 25 == 0) log.info("iteration {} loss {:.6g}", it, loss);
  });

  const ImageD sharp =
      render(result.network, observed.width(), observed.height(), fit_config.precision);
  save_image(a.out, sharp.cast<float>(), a.bit_depth);
  if (!a.trace.empty()) {
    std::string csv = "schema_version,iteration,loss,learning_rate\n";
    char line[128];
    for (std::size_t i = 0; i < result.loss_trace.size(); ++i) {
      std::snprintf(line, sizeof line, "%d,%zu,%.17g,%.17g\n", kSchemaVersion, i,
                    result.loss_trace[i],
                    cosine_learning_rate(fit_config, static_cast<int>(i)));
      csv += line;
    }
    write_text_atomically(a.trace, csv);
  }
  if (!a.checkpoint.empty()) save_checkpoint(a.checkpoint, result.network);
  emit(out, {{"schema_version", kSchemaVersion},
             {"layers", model.layers.layer_count()},
             {"iterations", fit_config.iterations},
             {"seed", fit_config.seed},
             {"initial_loss", result.loss_trace.empty() ? result.final_loss
                                                        : result.loss_trace.front()},
             {"final_loss", result.final_loss}});
}

struct EvalArgs {
  std::string reference, test, out;
  std::vector<std::string> metrics = {"psnr", "ssim"};
};

void run_eval(const EvalArgs& a, std::ostream& out) {
  const Image reference = load_image(a.reference);
  const Image test = load_image(a.test);
  if (!reference.same_shape(test)) throw DomainError("images differ in shape");
  json report = {{"schema_version", kSchemaVersion}};
  for (const std::string& m : a.metrics) {
    if (m == "psnr") {
      report["psnr"] = psnr(test, reference);
    } else if (m == "ssim") {
      report["ssim"] = ssim(test, reference);
    } else {
      throw DomainError("unknown metric '" + m + "'");
    }
  }
  if (!a.out.empty()) write_json(a.out, report);
  emit(out, report);
}

struct GenSceneArgs {
  std::string preset = "macro", out;
  int size = 128;
  bool smooth = false;
};

void run_gen_scene(const GenSceneArgs& a, const Globals& g, std::ostream& out,
                   spdlog::logger& log) {
  const ScenePreset preset = parse_preset(a.preset);
  const std::uint64_t seed = g.seed.value_or(0);
  const SceneFixture scene =
      a.smooth ? gen_smooth_scene(preset, a.size, seed) : gen_scene(preset, a.size, seed);
  const SceneConfig config{scene.intrinsics, BlurConfig{}};
  const IcbModel model =
      build_icb_model(scene.depth, scene.trajectory, scene.intrinsics, config.blur);
  log.info("{} scene, {} layers", a.preset, model.layers.layer_count());

  const fs::path dir = a.out;
  fs::create_directories(dir);
  save_image(dir / "sharp.png", scene.sharp, 16);
  save_image(dir / "blurred.png", blur_icb(scene.sharp, model), 16);
  save_depth(dir / "depth.pfm", scene.depth);
  save_trajectory(dir / "trajectory.csv", scene.trajectory);
  json j = to_json(config);
  j["schema_version"] = kSchemaVersion;
  write_json(dir / "scene.json", j);
  emit(out, {{"schema_version", kSchemaVersion},
             {"preset", a.preset},
             {"seed", seed},
             {"size", a.size},
             {"min_depth_m", scene.depth.min_depth()},
             {"max_depth_m", scene.depth.max_depth()},
             {"layers", model.layers.layer_count()}});
}

struct LayersArgs {
  std::string depth, trajectory, out;
};

void run_layers(const LayersArgs& a, const Globals& g, std::ostream& out) {
  const DepthMap depth = load_depth(a.depth);
  const Trajectory traj = load_trajectory(a.trajectory);
  const SceneConfig scene = scene_for(g, depth.width(), depth.height());
  scene.blur.validate();
  const IcbModel model = build_icb_model(depth, traj, scene.intrinsics, scene.blur);
  dump_layers(a.out, model, scene.blur);
  emit(out, read_json(fs::path(a.out) / "layers.json"));
}

struct AblateArgs {
  std::string out, summary;
  AblationConfig config;
};

void run_ablate(AblateArgs a, const Globals& g, std::ostream& out, spdlog::logger& log) {
  if (g.seed) a.config.seed = *g.seed;
  const std::vector<AblationRow> rows = run_ablation(a.config);
  log.info("{} ablation rows", rows.size());
  const std::string summary = ablation_csv(summarize_ablation(rows), true);
  write_text_atomically(a.out, ablation_csv(rows, false));
  if (!a.summary.empty()) write_text_atomically(a.summary, summary);
  out << summary;
}

struct Fig3Args {
  std::string out;
  Fig3Config config;
};

void run_fig3(const Fig3Args& a, std::ostream& out) {
  const std::vector<Fig3Point> points = fig3_data(a.config);
  write_text_atomically(a.out, fig3_csv(points));
  emit(out, {{"schema_version", kSchemaVersion}, {"points", points.size()}});
}

struct KernelDumpArgs {
  std::string trajectory, depth, out, png;
  std::optional<double> depth_m;
};

void run_kernel_dump(const KernelDumpArgs& a, const Globals& g, std::ostream& out) {
  const Trajectory traj = load_trajectory(a.trajectory);
  if (a.depth_m.has_value() == !a.depth.empty()) {
    throw DomainError("kernel-dump needs exactly one of --depth-m and --depth");
  }
  json report = {{"schema_version", kSchemaVersion}};
  if (a.depth_m) {
    SceneConfig scene = g.config.empty() ? SceneConfig{scene_intrinsics(1, 1), BlurConfig{}}
                                         : load_scene_config(g.config);
    scene.blur.validate();
    const Trajectory prepared = prepare_trajectory(traj, scene.blur);
    BlurKernel kernel =
        epdf_kernel(pixel_displacements(prepared, scene.intrinsics, *a.depth_m));
    if (prepared.has_rotation()) {
      kernel = compose_kernels(kernel, rotation_kernel(prepared, scene.intrinsics),
                               scene.blur.rotation_compose);
    }
    report["depth_m"] = *a.depth_m;
    report["kernel"] = kernel_to_json(kernel);
    if (!a.png.empty()) save_image(a.png, kernel_to_image(kernel), 16);
  } else {
    const DepthMap depth = load_depth(a.depth);
    const SceneConfig scene = scene_for(g, depth.width(), depth.height());
    scene.blur.validate();
    const IcbModel model = build_icb_model(depth, traj, scene.intrinsics, scene.blur);
    json kernels = json::array();
    for (int l = 0; l < model.layers.layer_count(); ++l) {
      kernels.push_back({{"layer", l},
                         {"optimal_depth_m", model.layers.optimal_depths[l]},
                         {"kernel", kernel_to_json(model.kernels[l])}});
    }
    report["kernels"] = kernels;
    if (!a.png.empty()) throw DomainError("--png is only available with --depth-m");
  }
  write_json(a.out, report);
  emit(out, {{"schema_version", kSchemaVersion}, {"written", a.out}});
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Depth-aware camera motion blur: synthesis, layering and deblurring"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "Scene config JSON (camera and blur settings)");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--threads", g.threads, "Worker threads (0 = hardware concurrency)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--verbose,-v", g.verbose, "Progress messages on stderr");

  BlurArgs blur;
  CLI::App* blur_cmd = app.add_subcommand("blur", "Synthesize depth-dependent motion blur");
  blur_cmd->add_option("--image", blur.image, "Sharp image")->required();
  blur_cmd->add_option("--depth", blur.depth, "Depth map (PFM, meters)")->required();
  blur_cmd->add_option("--trajectory", blur.trajectory, "Camera path CSV")->required();
  blur_cmd->add_option("--out", blur.out, "Blurred image")->required();
  blur_cmd->add_option("--model", blur.model, "icb or pwb")
      ->check(CLI::IsMember({"icb", "pwb"}));
  blur_cmd->add_option("--bit-depth", blur.bit_depth, "8 or 16")
      ->check(CLI::IsMember({8, 16}));
  blur_cmd->add_option("--dump-layers", blur.dump_layers, "Directory for layer mattes");
  blur_cmd->add_flag("--materialize", blur.materialize,
                     "Store every per-pixel kernel (pwb) and report its size");

  DeblurArgs deblur;
  CLI::App* deblur_cmd =
      app.add_subcommand("deblur", "Recover a sharp image through the blur model");
  deblur_cmd->add_option("--image", deblur.blurred, "Blurred image")->required();
  deblur_cmd->add_option("--depth", deblur.depth, "Depth map (PFM, meters)")->required();
  deblur_cmd->add_option("--trajectory", deblur.trajectory, "Camera path CSV")->required();
  deblur_cmd->add_option("--out", deblur.out, "Recovered image")->required();
  deblur_cmd->add_option("--fit-config", deblur.fit_config, "Optimizer settings JSON");
  deblur_cmd->add_option("--iterations", deblur.iterations, "Override the iteration count");
  deblur_cmd->add_option("--trace", deblur.trace, "Loss trace CSV");
  deblur_cmd->add_option("--checkpoint", deblur.checkpoint, "Network parameters");
  deblur_cmd->add_option("--bit-depth", deblur.bit_depth, "8 or 16")
      ->check(CLI::IsMember({8, 16}));

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "PSNR and SSIM of an image");
  eval_cmd->add_option("--ref", eval.reference, "Reference image")->required();
  eval_cmd->add_option("--pred", eval.test, "Image to score")->required();
  eval_cmd->add_option("--metrics", eval.metrics, "psnr,ssim")->delimiter(',');
  eval_cmd->add_option("--out", eval.out, "Report JSON");

  GenSceneArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen-scene", "Generate a synthetic scene");
  gen_cmd->add_option("--preset", gen.preset, "macro, trucking or standard")
      ->check(CLI::IsMember({"macro", "trucking", "standard"}));
  gen_cmd->add_option("--size", gen.size, "Image side in pixels");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_flag("--smooth", gen.smooth, "Slanted-plane depth instead of rectangles");

  LayersArgs layers;
  CLI::App* layers_cmd = app.add_subcommand("layers", "Depth layers and alpha mattes");
  layers_cmd->add_option("--depth", layers.depth, "Depth map (PFM, meters)")->required();
  layers_cmd->add_option("--trajectory", layers.trajectory, "Camera path CSV")->required();
  layers_cmd->add_option("--out", layers.out, "Output directory")->required();

  AblateArgs ablate;
  CLI::App* ablate_cmd = app.add_subcommand("ablate", "Sweep n and sigma against the reference");
  ablate_cmd->add_option("--out", ablate.out, "Per-fixture CSV")->required();
  ablate_cmd->add_option("--summary", ablate.summary, "Fixture-mean CSV");
  ablate_cmd->add_option("--n", ablate.config.ns, "Values of n")->delimiter(',');
  ablate_cmd->add_option("--sigma", ablate.config.sigmas, "Values of sigma")->delimiter(',');
  ablate_cmd->add_option("--fixtures", ablate.config.fixtures_per_preset,
                         "Fixtures per scene type");
  ablate_cmd->add_option("--size", ablate.config.size, "Image side in pixels");
  ablate_cmd->add_option("--repeats", ablate.config.timing_repeats, "Timing repeats");

  Fig3Args fig3;
  CLI::App* fig3_cmd = app.add_subcommand("fig3", "Blur variation curves");
  fig3_cmd->add_option("--out", fig3.out, "CSV path")->required();
  fig3_cmd->add_option("--near", fig3.config.near_depths, "Near depths, meters")
      ->delimiter(',');
  fig3_cmd->add_option("--displacement", fig3.config.displacement, "Camera travel, meters");
  fig3_cmd->add_option("--target-px", fig3.config.target_variation_px,
                       "Blur variation for the displacement curves");
  fig3_cmd->add_option("--points", fig3.config.points, "Samples per curve");
  fig3_cmd->add_option("--focal-length", fig3.config.focal_length, "Meters");
  fig3_cmd->add_option("--pixel-pitch", fig3.config.pixel_pitch, "Meters");

  KernelDumpArgs kdump;
  CLI::App* kdump_cmd = app.add_subcommand("kernel-dump", "Write blur kernels as JSON");
  kdump_cmd->add_option("--trajectory", kdump.trajectory, "Camera path CSV")->required();
  kdump_cmd->add_option("--depth-m", kdump.depth_m, "Single depth, meters");
  kdump_cmd->add_option("--depth", kdump.depth, "Depth map: dump every layer kernel");
  kdump_cmd->add_option("--out", kdump.out, "JSON path")->required();
  kdump_cmd->add_option("--png", kdump.png, "Kernel image (single depth only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  auto sink = std::make_shared<spdlog::sinks::ostream_sink_st>(err);
  spdlog::logger log("parallax", sink);
  log.set_pattern("%v");
  log.set_level(g.verbose ? spdlog::level::info : spdlog::level::warn);

  try {
    ThreadCountGuard threads(g.threads);
    if (*blur_cmd) run_blur(blur, g, out, log);
    if (*deblur_cmd) run_deblur(deblur, g, out, log);
    if (*eval_cmd) run_eval(eval, out);
    if (*gen_cmd) run_gen_scene(gen, g, out, log);
    if (*layers_cmd) run_layers(layers, g, out);
    if (*ablate_cmd) run_ablate(ablate, g, out, log);
    if (*fig3_cmd) run_fig3(fig3, out);
    if (*kdump_cmd) run_kernel_dump(kdump, g, out);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv = {"parallax"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace parallax
