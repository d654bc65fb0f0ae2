#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "posekit/annotation.hpp"
#include "posekit/transfer.hpp"

namespace posekit {

// Frame mapping JSONL, one record per A frame:
//   {"a":0,"b":4,"d":0.25,"switched":true}
void write_frame_mapping(const FrameMapping& mapping, std::ostream& out);
FrameMapping read_frame_mapping(std::istream& in);

// Pair manifest JSONL: a header record, then one record per pair.
//   {"type":"header","version":"posekit/1","params":{...},"max_distance":null}
//   {"a":0,"b":1,"d":0.1}
void write_pair_manifest(const PairManifest& manifest, std::ostream& out);
PairManifest read_pair_manifest(std::istream& in);

void write_frame_mapping(const FrameMapping& mapping, const std::filesystem::path& path);
FrameMapping read_frame_mapping(const std::filesystem::path& path);
void write_pair_manifest(const PairManifest& manifest, const std::filesystem::path& path);
PairManifest read_pair_manifest(const std::filesystem::path& path);

std::string to_string(CandidatePolicy policy);
CandidatePolicy parse_candidate_policy(const std::string& name);

Json params_to_json(const MatchParams& params);
MatchParams params_from_json(const Json& j, const std::string& path);

}  // namespace posekit
