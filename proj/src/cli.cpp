#include "posekit/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "posekit/annotation.hpp"
#include "posekit/config.hpp"
#include "posekit/impute.hpp"
#include "posekit/manifest_io.hpp"
#include "posekit/parallel.hpp"
#include "posekit/png_io.hpp"
#include "posekit/raster.hpp"
#include "posekit/transfer.hpp"

namespace fs = std::filesystem;

namespace posekit {

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("POSEKIT_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return n;
}

namespace {

// Flag values as parsed; unset options leave the config value in place.
struct Overrides {
  std::optional<std::size_t> k;
  std::optional<double> lambda;
  bool no_normalize = false;
  std::optional<std::string> policy;
  std::optional<double> max_distance;
  std::optional<std::size_t> interp;
  std::optional<std::string> config_path;

  PipelineConfig resolve() const {
    PipelineConfig cfg;
    if (config_path) cfg = read_config(*config_path);
    PipelineConfig flags;
    flags.k = k;
    flags.lambda = lambda;
    if (no_normalize) flags.normalize = false;
    if (policy) flags.candidate_policy = parse_candidate_policy(*policy);
    flags.max_distance = max_distance;
    flags.interpolation_factor = interp;
    cfg.merge(flags);
    return cfg;
  }
};

void add_config_option(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "Flat JSON config file; flags override it")
      ->check(CLI::ExistingFile);
}

void add_match_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--k", o.k, "Neighbours considered per frame")->check(CLI::PositiveNumber);
  cmd->add_option("--lambda", o.lambda, "Improvement required to switch frames")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--no-normalize", o.no_normalize, "Compare raw pixel coordinates");
  cmd->add_option("--policy", o.policy, "Choice among the k neighbours")
      ->check(CLI::IsMember({"min-distance", "nearest-prev"}));
  add_config_option(cmd, o);
}

struct Loaded {
  PoseSequence poses;
  std::vector<std::optional<FaceAnnotation>> faces;
};

Loaded load(const fs::path& path, std::ostream& err) {
  auto seq = load_pose_sequence(read_annotation(path));
  if (seq.clamped > 0) {
    err << "WARN: clamped " << seq.clamped << " coordinate(s) into the frame in "
        << path.string() << '\n';
  }
  return {std::move(seq.poses), std::move(seq.faces)};
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

int run_match(const fs::path& a_path, const fs::path& b_path, const fs::path& out_path,
              const Overrides& o, std::ostream& out, std::ostream& err) {
  const auto params = o.resolve().match_params();
  const auto a = impute_missing_joints(load(a_path, err).poses);
  const auto b = impute_missing_joints(load(b_path, err).poses);
  const auto mapping = match_sequence(a, b, params);
  write_frame_mapping(mapping, out_path);
  out << "matched " << mapping.size() << " frames, " << mapping.switches() << " switches\n";
  return kExitOk;
}

int run_pairs(const fs::path& a_path, const fs::path& b_path, const fs::path& out_path,
              const Overrides& o, std::ostream& out, std::ostream& err) {
  const auto cfg = o.resolve();
  const auto a = impute_missing_joints(load(a_path, err).poses);
  const auto b = impute_missing_joints(load(b_path, err).poses);
  const auto manifest =
      build_pairs_manifest(a, b, cfg.match_params(), cfg.max_distance, worker_count());
  write_pair_manifest(manifest, out_path);
  out << "wrote " << manifest.pairs.size() << " pairs\n";
  return kExitOk;
}

int run_render(const fs::path& doc_path, const fs::path& out_dir, const Overrides& o,
               std::ostream& out, std::ostream& err) {
  const auto cfg = o.resolve();
  const auto seq = load(doc_path, err);
  const auto style = cfg.style(seq.poses.dims.height);
  ensure_dir(out_dir);
  parallel_for(seq.poses.size(), worker_count(), [&](std::size_t t) {
    write_png(frame_path(out_dir, t),
              render_skeleton(seq.poses[t], seq.faces[t], seq.poses.dims, style));
  });
  out << "rendered " << seq.poses.size() << " skeleton frames\n";
  return kExitOk;
}

int run_align(const fs::path& frame_dir, const fs::path& doc_path, const fs::path& out_dir,
              std::ostream& out, std::ostream& err) {
  const auto seq = load(doc_path, err);
  if (!seq.faces.front()) {
    throw SchemaError("/frames/0/face", "the first frame needs a face to anchor alignment");
  }
  // Frames without a detected face reuse the last known face.
  std::vector<FaceAnnotation> faces;
  faces.reserve(seq.faces.size());
  for (const auto& f : seq.faces) faces.push_back(f ? *f : faces.back());

  std::vector<RasterImage> frames(faces.size());
  const std::size_t workers = worker_count();
  parallel_for(frames.size(), workers,
               [&](std::size_t t) { frames[t] = read_png(frame_path(frame_dir, t)); });
  const auto aligned = align_sequence(frames, faces, workers);

  ensure_dir(out_dir);
  parallel_for(aligned.size(), workers,
               [&](std::size_t t) { write_png(frame_path(out_dir, t), aligned[t]); });
  out << "aligned " << aligned.size() << " frames\n";
  return kExitOk;
}

int run_assemble(const fs::path& map_path, const std::optional<fs::path>& frames_dir,
                 const std::optional<fs::path>& skeleton_doc, const fs::path& out_dir,
                 const Overrides& o, std::ostream& out, std::ostream& err) {
  const auto cfg = o.resolve();
  const auto mapping = read_frame_mapping(map_path);
  const auto plan = interpolate_plan(mapping, cfg.interpolation());

  ensure_dir(out_dir);
  if (skeleton_doc) {
    // Skeleton video of B: blends interpolate in pose space.
    const auto b = load(*skeleton_doc, err);
    for (const auto& entry : mapping.entries) {
      if (entry.b_index >= b.poses.size()) {
        throw SchemaError(map_path.string(), "b=" + std::to_string(entry.b_index) +
                                                 " is outside " + skeleton_doc->string());
      }
    }
    const auto style = cfg.style(b.poses.dims.height);
    parallel_for(plan.size(), worker_count(), [&](std::size_t i) {
      const auto& step = plan[i];
      const auto pose = step.kind == RenderKind::Real
                            ? b.poses[step.b_left]
                            : interpolate_pose(b.poses[step.b_left], b.poses[step.b_right],
                                               step.alpha);
      const auto& face = step.alpha < 0.5 ? b.faces[step.b_left] : b.faces[step.b_right];
      write_png(frame_path(out_dir, i), render_skeleton(pose, face, b.poses.dims, style));
    });
  } else {
    parallel_for(plan.size(), worker_count(), [&](std::size_t i) {
      const auto& step = plan[i];
      const fs::path target = frame_path(out_dir, i);
      if (step.kind == RenderKind::Real) {
        const fs::path source = frame_path(*frames_dir, step.b_left);
        std::error_code ec;
        fs::copy_file(source, target, fs::copy_options::overwrite_existing, ec);
        if (ec) throw IoError("cannot copy " + source.string() + ": " + ec.message());
      } else {
        write_png(target, blend_frames(read_png(frame_path(*frames_dir, step.b_left)),
                                       read_png(frame_path(*frames_dir, step.b_right)),
                                       step.alpha));
      }
    });
  }
  out << "assembled " << plan.size() << " frames (" << mapping.switches() << " switches)\n";
  return kExitOk;
}

int run_validate(const fs::path& doc_path, std::ostream& out) {
  const auto doc = read_annotation(doc_path);
  out << "OK: " << doc_path.string() << " (" << doc.frames.size() << " frames, " << doc.width
      << "x" << doc.height << ")\n";
  return kExitOk;
}

}  // namespace

int cli_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"posekit: nearest-neighbour pose transfer between annotated videos", "posekit"};
  app.require_subcommand(1);

  Overrides o;
  fs::path a_path, b_path, out_path, doc_path, frame_dir, map_path;
  std::optional<fs::path> frames_b, skeleton_doc;

  auto* match = app.add_subcommand("match", "Transfer A onto B frame by frame (mapping JSONL)");
  match->add_option("a", a_path, "Annotation of the driving video A")->required();
  match->add_option("b", b_path, "Annotation of the target video B")->required();
  match->add_option("-o,--output", out_path, "Frame-mapping JSONL")->required();
  add_match_options(match, o);

  auto* pairs = app.add_subcommand("pairs", "Build the training pair manifest (JSONL)");
  pairs->add_option("a", a_path, "Annotation of video A")->required();
  pairs->add_option("b", b_path, "Annotation of video B")->required();
  pairs->add_option("-o,--output", out_path, "Pair manifest JSONL")->required();
  pairs->add_option("--max-distance", o.max_distance, "Drop pairs farther than this")
      ->check(CLI::NonNegativeNumber);
  add_match_options(pairs, o);

  auto* render = app.add_subcommand("render-skeleton", "Render pose skeletons to PNG frames");
  render->add_option("annotation", doc_path, "Annotation file")->required();
  render->add_option("-o,--output", out_path, "Output frame directory")->required();
  add_config_option(render, o);

  auto* align = app.add_subcommand("align", "Align frames on the first frame's face center");
  align->add_option("frames", frame_dir, "Input frame directory")->required();
  align->add_option("annotation", doc_path, "Annotation with face boxes")->required();
  align->add_option("-o,--output", out_path, "Output frame directory")->required();

  auto* assemble = app.add_subcommand("assemble", "Build the transferred frame sequence");
  assemble->add_option("mapping", map_path, "Frame-mapping JSONL")->required();
  assemble->add_option("frames", frames_b, "Frame directory of video B");
  assemble->add_option("--skeleton", skeleton_doc,
                       "Render B's skeletons from this annotation instead of copying frames");
  assemble->add_option("-o,--output", out_path, "Output frame directory")->required();
  assemble->add_option("--interp", o.interp, "Output frames per switch (1 = no blending)")
      ->check(CLI::PositiveNumber);
  add_config_option(assemble, o);

  auto* validate = app.add_subcommand("validate", "Check an annotation file against the schema");
  validate->add_option("annotation", doc_path, "Annotation file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ERROR:Usage: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (match->parsed()) return run_match(a_path, b_path, out_path, o, out, err);
    if (pairs->parsed()) return run_pairs(a_path, b_path, out_path, o, out, err);
    if (render->parsed()) return run_render(doc_path, out_path, o, out, err);
    if (align->parsed()) return run_align(frame_dir, doc_path, out_path, out, err);
    if (assemble->parsed()) {
      if (!frames_b && !skeleton_doc) {
        err << "ERROR:Usage: assemble needs a frame directory or --skeleton\n";
        return kExitUsage;
      }
      return run_assemble(map_path, frames_b, skeleton_doc, out_path, o, out, err);
    }
    if (validate->parsed()) return run_validate(doc_path, out);
  } catch (const Error& e) {
    err << "ERROR:" << e.kind() << ": " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "ERROR:IoError: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "ERROR:Internal: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace posekit
