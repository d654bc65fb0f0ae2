#include "posekit/config.hpp"

#include <fstream>

#include "posekit/manifest_io.hpp"

namespace posekit {

void PipelineConfig::merge(const PipelineConfig& o) {
  if (o.k) k = o.k;
  if (o.lambda) lambda = o.lambda;
  if (o.normalize) normalize = o.normalize;
  if (o.candidate_policy) candidate_policy = o.candidate_policy;
  if (o.max_distance) max_distance = o.max_distance;
  if (o.interpolation_factor) interpolation_factor = o.interpolation_factor;
  if (o.joint_radius) joint_radius = o.joint_radius;
  if (o.line_thickness) line_thickness = o.line_thickness;
  if (o.face_thickness) face_thickness = o.face_thickness;
}

MatchParams PipelineConfig::match_params() const {
  MatchParams p;
  if (k) p.k = *k;
  if (lambda) p.lambda = *lambda;
  if (normalize) p.normalize = *normalize;
  if (candidate_policy) p.candidate_policy = *candidate_policy;
  p.validate();
  return p;
}

SkeletonStyle PipelineConfig::style(int frame_height) const {
  SkeletonStyle s = SkeletonStyle::for_height(frame_height);
  if (joint_radius) s.joint_radius = *joint_radius;
  if (line_thickness) s.line_thickness = *line_thickness;
  if (face_thickness) s.face_thickness = *face_thickness;
  s.validate();
  return s;
}

namespace {

std::size_t positive_count(const Json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
    throw SchemaError(path, "expected a positive integer");
  }
  return v.get<std::size_t>();
}

double non_negative(const Json& v, const std::string& path) {
  if (!v.is_number() || !(v.get<double>() >= 0.0)) {
    throw SchemaError(path, "expected a non-negative number");
  }
  return v.get<double>();
}

}  // namespace

PipelineConfig parse_config(const Json& j) {
  if (!j.is_object()) throw SchemaError("/", "config must be a flat JSON object");
  PipelineConfig c;
  for (const auto& [key, v] : j.items()) {
    const std::string path = "/" + key;
    if (key == "k") {
      c.k = positive_count(v, path);
    } else if (key == "lambda") {
      c.lambda = non_negative(v, path);
    } else if (key == "normalize") {
      if (!v.is_boolean()) throw SchemaError(path, "expected a boolean");
      c.normalize = v.get<bool>();
    } else if (key == "candidate_policy") {
      if (!v.is_string()) throw SchemaError(path, "expected a string");
      try {
        c.candidate_policy = parse_candidate_policy(v.get<std::string>());
      } catch (const InvalidArgument& e) {
        throw SchemaError(path, e.what());
      }
    } else if (key == "max_distance") {
      c.max_distance = non_negative(v, path);
    } else if (key == "interpolation_factor") {
      c.interpolation_factor = positive_count(v, path);
    } else if (key == "joint_radius") {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        throw SchemaError(path, "expected a non-negative integer");
      }
      c.joint_radius = v.get<int>();
    } else if (key == "line_thickness") {
      c.line_thickness = static_cast<int>(positive_count(v, path));
    } else if (key == "face_thickness") {
      c.face_thickness = static_cast<int>(positive_count(v, path));
    } else {
      throw SchemaError(path, "unknown config key");
    }
  }
  return c;
}

PipelineConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return parse_config(Json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("/", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace posekit
