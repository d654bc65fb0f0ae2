#pragma once

#include <stdexcept>
#include <string>

namespace posekit {

// Base of every error raised by the toolkit. kind() is the stable,
// machine-readable tag used by the CLI ("ERROR:<kind>:").
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class JointNeverObserved : public Error {
 public:
  explicit JointNeverObserved(int joint)
      : Error("JointNeverObserved",
              "joint " + std::to_string(joint) + " is missing in every frame"),
        joint_(joint) {}
  int joint() const noexcept { return joint_; }

 private:
  int joint_;
};

class MissingJoint : public Error {
 public:
  explicit MissingJoint(int joint)
      : Error("MissingJoint", "joint " + std::to_string(joint) +
                                  " is absent; impute the sequence first") {}
};

class EmptyCandidates : public Error {
 public:
  EmptyCandidates() : Error("EmptyCandidates", "candidate sequence has no frames") {}
};

class EmptySequence : public Error {
 public:
  explicit EmptySequence(const std::string& which)
      : Error("EmptySequence", "sequence " + which + " has no frames") {}
};

class ShiftTooLarge : public Error {
 public:
  ShiftTooLarge(int shift, int extent)
      : Error("ShiftTooLarge", "shift " + std::to_string(shift) +
                                   " does not fit an extent of " +
                                   std::to_string(extent)) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what)
      : Error("DimensionMismatch", what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("InvalidArgument", what) {}
};

// Annotation / manifest / config document does not follow its schema.
// path() points at the offending element, e.g. "/frames/3/keypoints".
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error("SchemaError", path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("IoError", what) {}
};

}  // namespace posekit
