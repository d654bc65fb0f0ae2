#include "posekit/annotation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace posekit {

namespace {

std::string at(const std::string& path, std::string_view key) {
  return path + "/" + std::string(key);
}
std::string at(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

void require_object(const Json& j, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw SchemaError(path.empty() ? "/" : path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw SchemaError(at(path, key), "unknown key");
    }
  }
}

const Json& field(const Json& j, const std::string& path, std::string_view key) {
  const auto it = j.find(std::string(key));
  if (it == j.end()) throw SchemaError(at(path, key), "missing required field");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(path, "expected a finite number");
  return v;
}

std::int64_t integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<std::int64_t>();
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  return j;
}

Point parse_point(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw SchemaError(path, "expected an [x, y] pair");
  return {number(j[0], at(path, 0)), number(j[1], at(path, 1))};
}

FaceAnnotation parse_face(const Json& j, const std::string& path) {
  require_object(j, path, {"bbox", "contours"});
  FaceAnnotation face;

  const std::string bbox_path = at(path, "bbox");
  const Json& bbox = field(j, path, "bbox");
  if (!bbox.is_array() || bbox.size() != 4) {
    throw SchemaError(bbox_path, "expected [left, top, right, bottom]");
  }
  face.bbox = {number(bbox[0], at(bbox_path, 0)), number(bbox[1], at(bbox_path, 1)),
               number(bbox[2], at(bbox_path, 2)), number(bbox[3], at(bbox_path, 3))};
  if (!(face.bbox.left < face.bbox.right)) throw SchemaError(bbox_path, "left must be < right");
  if (!(face.bbox.top < face.bbox.bottom)) throw SchemaError(bbox_path, "top must be < bottom");

  if (const auto it = j.find("contours"); it != j.end()) {
    const std::string cpath = at(path, "contours");
    const Json& contours = array(*it, cpath);
    for (std::size_t c = 0; c < contours.size(); ++c) {
      const std::string p = at(cpath, c);
      require_object(contours[c], p, {"name", "points"});
      const Json& name = field(contours[c], p, "name");
      if (!name.is_string()) throw SchemaError(at(p, "name"), "expected a string");
      Contour contour{name.get<std::string>(), {}};
      const std::string ppath = at(p, "points");
      const Json& points = array(field(contours[c], p, "points"), ppath);
      for (std::size_t i = 0; i < points.size(); ++i) {
        contour.points.push_back(parse_point(points[i], at(ppath, i)));
      }
      face.contours.push_back(std::move(contour));
    }
  }
  return face;
}

AnnotationFrame parse_frame(const Json& j, const std::string& path) {
  require_object(j, path, {"frame_index", "keypoints", "face"});
  AnnotationFrame frame;
  frame.frame_index = integer(field(j, path, "frame_index"), at(path, "frame_index"));

  const std::string kpath = at(path, "keypoints");
  const Json& kps = array(field(j, path, "keypoints"), kpath);
  if (kps.size() != kNumJoints) {
    throw SchemaError(kpath, "expected " + std::to_string(kNumJoints) + " keypoints, got " +
                                 std::to_string(kps.size()));
  }
  for (std::size_t i = 0; i < kps.size(); ++i) {
    const std::string p = at(kpath, i);
    if (!kps[i].is_array() || kps[i].size() != 3) {
      throw SchemaError(p, "expected an [x, y, confidence] triple");
    }
    Keypoint k{number(kps[i][0], at(p, 0)), number(kps[i][1], at(p, 1)),
               number(kps[i][2], at(p, 2))};
    if (k[2] < 0.0 || k[2] > 1.0) throw SchemaError(at(p, 2), "confidence outside [0,1]");
    frame.keypoints[i] = k;
  }

  if (const auto it = j.find("face"); it != j.end() && !it->is_null()) {
    frame.face = parse_face(*it, at(path, "face"));
  }
  return frame;
}

Json point_json(const Point& p) { return Json::array({p.x(), p.y()}); }

}  // namespace

AnnotationDocument parse_annotation(const Json& j) {
  require_object(j, "", {"version", "source_id", "width", "height", "frames"});
  AnnotationDocument doc;

  const Json& version = field(j, "", "version");
  if (!version.is_string()) throw SchemaError("/version", "expected a string");
  doc.version = version.get<std::string>();
  if (doc.version != kSchemaVersion) {
    throw SchemaError("/version", "unsupported version '" + doc.version + "', expected '" +
                                      std::string(kSchemaVersion) + "'");
  }

  const Json& source = field(j, "", "source_id");
  if (!source.is_string()) throw SchemaError("/source_id", "expected a string");
  doc.source_id = source.get<std::string>();

  const auto dim = [&](std::string_view key) {
    const std::int64_t v = integer(field(j, "", key), at("", key));
    if (v <= 0 || v > (1 << 20)) throw SchemaError(at("", key), "must be a positive pixel count");
    return static_cast<int>(v);
  };
  doc.width = dim("width");
  doc.height = dim("height");

  const Json& frames = array(field(j, "", "frames"), "/frames");
  if (frames.empty()) throw SchemaError("/frames", "at least one frame is required");
  doc.frames.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    auto frame = parse_frame(frames[i], at("/frames", i));
    if (!doc.frames.empty() && frame.frame_index <= doc.frames.back().frame_index) {
      throw SchemaError(at(at("/frames", i), "frame_index"),
                        "frame_index must be strictly increasing");
    }
    doc.frames.push_back(std::move(frame));
  }
  return doc;
}

Json to_json(const AnnotationDocument& doc) {
  Json frames = Json::array();
  for (const auto& f : doc.frames) {
    Json kps = Json::array();
    for (const auto& k : f.keypoints) kps.push_back(Json::array({k[0], k[1], k[2]}));
    Json frame = {{"frame_index", f.frame_index}, {"keypoints", std::move(kps)}};
    if (f.face) {
      Json contours = Json::array();
      for (const auto& c : f.face->contours) {
        Json pts = Json::array();
        for (const auto& p : c.points) pts.push_back(point_json(p));
        contours.push_back({{"name", c.name}, {"points", std::move(pts)}});
      }
      const auto& b = f.face->bbox;
      frame["face"] = {{"bbox", Json::array({b.left, b.top, b.right, b.bottom})},
                       {"contours", std::move(contours)}};
    }
    frames.push_back(std::move(frame));
  }
  return {{"version", doc.version},
          {"source_id", doc.source_id},
          {"width", doc.width},
          {"height", doc.height},
          {"frames", std::move(frames)}};
}

AnnotationDocument read_annotation(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("/", std::string("malformed JSON: ") + e.what());
  }
  return parse_annotation(j);
}

void write_annotation(const std::filesystem::path& path, const AnnotationDocument& doc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path.string());
  out << to_json(doc).dump(1) << '\n';
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

LoadedSequence load_pose_sequence(const AnnotationDocument& doc) {
  LoadedSequence loaded;
  loaded.poses.dims = {doc.width, doc.height};
  loaded.poses.source_id = doc.source_id;
  loaded.poses.frames.reserve(doc.frames.size());
  loaded.faces.reserve(doc.frames.size());

  const double w = doc.width, h = doc.height;
  const auto clamp = [&loaded](double v, double hi) {
    const double c = std::clamp(v, 0.0, hi);
    if (c != v) ++loaded.clamped;
    return c;
  };

  for (const auto& f : doc.frames) {
    PoseFrame frame;
    for (int j = 0; j < kNumJoints; ++j) {
      const auto& [x, y, conf] = f.keypoints[j];
      if (conf == 0.0 || (x == 0.0 && y == 0.0)) continue;
      frame.set(j, {clamp(x, w), clamp(y, h), conf});
    }
    loaded.poses.frames.push_back(std::move(frame));

    std::optional<FaceAnnotation> face = f.face;
    if (face) {
      for (auto& contour : face->contours) {
        for (auto& p : contour.points) p = {clamp(p.x(), w), clamp(p.y(), h)};
      }
    }
    loaded.faces.push_back(std::move(face));
  }
  return loaded;
}

AnnotationDocument to_document(const PoseSequence& seq,
                               const std::vector<std::optional<FaceAnnotation>>& faces) {
  if (!faces.empty() && faces.size() != seq.size()) {
    throw InvalidArgument("face list must be empty or match the frame count");
  }
  AnnotationDocument doc;
  doc.source_id = seq.source_id;
  doc.width = seq.dims.width;
  doc.height = seq.dims.height;
  doc.frames.reserve(seq.size());
  for (std::size_t t = 0; t < seq.size(); ++t) {
    AnnotationFrame frame;
    frame.frame_index = static_cast<std::int64_t>(t);
    for (int j = 0; j < kNumJoints; ++j) {
      if (const auto joint = seq.frames[t].joint(j)) {
        frame.keypoints[j] = {joint->x, joint->y, joint->confidence};
      } else {
        frame.keypoints[j] = {0.0, 0.0, 0.0};
      }
    }
    if (!faces.empty()) frame.face = faces[t];
    doc.frames.push_back(std::move(frame));
  }
  return doc;
}

}  // namespace posekit
