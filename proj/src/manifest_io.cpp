#include "posekit/manifest_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <set>
#include <algorithm>
#include <ostream>

namespace posekit {

namespace {

// nlohmann prints doubles in shortest round-trip form, so values read back
// bit-identical.
void write_line(std::ostream& out, const Json& record) {
  out << record.dump() << '\n';
  if (!out) throw IoError("write failed");
}

template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string path = "line " + std::to_string(lineno);
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError(path, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    fn(j, path);
  }
}

void check_keys(const Json& j, const std::string& path,
                std::initializer_list<std::string_view> keys) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw SchemaError(path + "/" + key, "unknown key");
    }
  }
  for (const auto key : keys) {
    if (!j.contains(std::string(key))) {
      throw SchemaError(path + "/" + std::string(key), "missing required field");
    }
  }
}

std::size_t index_field(const Json& j, const std::string& path, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw SchemaError(path + "/" + key, "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

double distance_field(const Json& j, const std::string& path) {
  const Json& v = j.at("d");
  if (!v.is_number() || !(v.get<double>() >= 0.0)) {
    throw SchemaError(path + "/d", "expected a non-negative number");
  }
  return v.get<double>();
}

Json lambda_json(double lambda) {
  if (std::isinf(lambda)) return "inf";
  return lambda;
}

}  // namespace

std::string to_string(CandidatePolicy policy) {
  switch (policy) {
    case CandidatePolicy::MinDistance:
      return "min_distance";
    case CandidatePolicy::NearestPrevIndex:
      return "nearest_prev_index";
  }
  return "unknown";
}

CandidatePolicy parse_candidate_policy(const std::string& name) {
  if (name == "min_distance" || name == "min-distance") return CandidatePolicy::MinDistance;
  if (name == "nearest_prev_index" || name == "nearest-prev") {
    return CandidatePolicy::NearestPrevIndex;
  }
  throw InvalidArgument("unknown candidate policy '" + name + "'");
}

Json params_to_json(const MatchParams& params) {
  return {{"k", params.k},
          {"lambda", lambda_json(params.lambda)},
          {"normalize", params.normalize},
          {"candidate_policy", to_string(params.candidate_policy)}};
}

MatchParams params_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  check_keys(j, path, {"k", "lambda", "normalize", "candidate_policy"});
  MatchParams p;
  if (!j["k"].is_number_integer() || j["k"].get<std::int64_t>() < 1) {
    throw SchemaError(path + "/k", "expected a positive integer");
  }
  p.k = j["k"].get<std::size_t>();
  if (j["lambda"] == "inf") {
    p.lambda = std::numeric_limits<double>::infinity();
  } else if (j["lambda"].is_number() && j["lambda"].get<double>() >= 0.0) {
    p.lambda = j["lambda"].get<double>();
  } else {
    throw SchemaError(path + "/lambda", "expected a non-negative number or \"inf\"");
  }
  if (!j["normalize"].is_boolean()) throw SchemaError(path + "/normalize", "expected a boolean");
  p.normalize = j["normalize"].get<bool>();
  if (!j["candidate_policy"].is_string()) {
    throw SchemaError(path + "/candidate_policy", "expected a string");
  }
  try {
    p.candidate_policy = parse_candidate_policy(j["candidate_policy"].get<std::string>());
  } catch (const InvalidArgument& e) {
    throw SchemaError(path + "/candidate_policy", e.what());
  }
  return p;
}

void write_frame_mapping(const FrameMapping& mapping, std::ostream& out) {
  for (const auto& e : mapping.entries) {
    write_line(out, {{"a", e.a_index}, {"b", e.b_index}, {"d", e.distance}, {"switched", e.switched}});
  }
  out.flush();
}

FrameMapping read_frame_mapping(std::istream& in) {
  FrameMapping mapping;
  for_each_record(in, [&](const Json& j, const std::string& path) {
    check_keys(j, path, {"a", "b", "d", "switched"});
    MappingEntry e;
    e.a_index = index_field(j, path, "a");
    if (e.a_index != mapping.entries.size()) {
      throw SchemaError(path + "/a", "expected a=" + std::to_string(mapping.entries.size()));
    }
    e.b_index = index_field(j, path, "b");
    e.distance = distance_field(j, path);
    if (!j["switched"].is_boolean()) throw SchemaError(path + "/switched", "expected a boolean");
    e.switched = j["switched"].get<bool>();
    mapping.entries.push_back(e);
  });
  return mapping;
}

void write_pair_manifest(const PairManifest& manifest, std::ostream& out) {
  Json header = {{"type", "header"},
                 {"version", kSchemaVersion},
                 {"params", params_to_json(manifest.params)},
                 {"max_distance", nullptr}};
  if (manifest.max_distance) header["max_distance"] = *manifest.max_distance;
  write_line(out, header);
  for (const auto& p : manifest.pairs) {
    write_line(out, {{"a", p.a_index}, {"b", p.b_index}, {"d", p.distance}});
  }
  out.flush();
}

PairManifest read_pair_manifest(std::istream& in) {
  PairManifest manifest;
  bool have_header = false;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for_each_record(in, [&](const Json& j, const std::string& path) {
    if (!have_header) {
      check_keys(j, path, {"type", "version", "params", "max_distance"});
      if (j["type"] != "header") throw SchemaError(path + "/type", "expected \"header\"");
      if (j["version"] != kSchemaVersion) throw SchemaError(path + "/version", "unsupported version");
      manifest.params = params_from_json(j["params"], path + "/params");
      const Json& md = j["max_distance"];
      if (md.is_number() && md.get<double>() >= 0.0) {
        manifest.max_distance = md.get<double>();
      } else if (!md.is_null()) {
        throw SchemaError(path + "/max_distance", "expected null or a non-negative number");
      }
      have_header = true;
      return;
    }
    check_keys(j, path, {"a", "b", "d"});
    Pair p{index_field(j, path, "a"), index_field(j, path, "b"), distance_field(j, path)};
    if (manifest.max_distance && p.distance > *manifest.max_distance) {
      throw SchemaError(path + "/d", "distance exceeds max_distance");
    }
    if (!seen.emplace(p.a_index, p.b_index).second) {
      throw SchemaError(path, "duplicate (a, b) pair");
    }
    manifest.pairs.push_back(p);
  });
  if (!have_header) throw SchemaError("line 1", "missing header record");
  return manifest;
}

void write_frame_mapping(const FrameMapping& mapping, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path.string());
  write_frame_mapping(mapping, out);
  if (!out) throw IoError("write failed for " + path.string());
}

FrameMapping read_frame_mapping(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_frame_mapping(in);
}

void write_pair_manifest(const PairManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path.string());
  write_pair_manifest(manifest, out);
  if (!out) throw IoError("write failed for " + path.string());
}

PairManifest read_pair_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_pair_manifest(in);
}

}  // namespace posekit
