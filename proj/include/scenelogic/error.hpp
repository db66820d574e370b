#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace scenelogic {

// Base for every error raised by the library. Messages are meant for users:
// they name the offending key, token or position rather than internals.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A profile document failed to load; key() is the JSON key (or entry) at fault.
class ProfileError : public Error {
 public:
  ProfileError(std::string key, const std::string& what)
      : Error(what + " (" + key + ")"), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class SceneError : public Error {
 public:
  using Error::Error;
};

class CompactError : public Error {
 public:
  using Error::Error;
};

// Program text or token list could not be turned into a tree.
// position() is the token index the problem was detected at.
class ProgramError : public Error {
 public:
  ProgramError(std::size_t position, const std::string& what)
      : Error(what + " at token " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class ExecutionError : public Error {
 public:
  using Error::Error;
};

class TemplateError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

class QuestionParseError : public Error {
 public:
  QuestionParseError(const std::string& what, std::vector<std::string> candidates = {})
      : Error(what), candidates_(std::move(candidates)) {}
  // Template ids of the equally specific matches for an ambiguous question.
  const std::vector<std::string>& candidates() const noexcept { return candidates_; }

 private:
  std::vector<std::string> candidates_;
};

class DatasetError : public Error {
 public:
  using Error::Error;
};

}  // namespace scenelogic
